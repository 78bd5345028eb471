import pytest

from biascade.ingest import RefKind, TweetRecord


def make_record(
    tweet_id,
    kind=RefKind.ORIGINAL,
    ref_id=None,
    author_id="a1",
    created_at=1_000_000,
    text="hello",
    like_count=0,
    view_count=0,
    place=None,
):
    return TweetRecord(
        id=tweet_id,
        author_id=author_id,
        created_at=created_at,
        text=text,
        ref_kind=kind,
        ref_id=ref_id,
        like_count=like_count,
        view_count=view_count,
        place=place,
    )


def build_fig2_corpus():
    """200 records in the published interaction proportions:
    115 retweets (57.5%), 52 replies (26%), 3 quotes + 3 mentions (3%),
    27 originals (13.5%)."""
    records = []
    for i in range(27):
        records.append(make_record(f"o{i:03d}", RefKind.ORIGINAL, created_at=1000 + i))
    origin = "o000"
    for i in range(115):
        records.append(
            make_record(f"r{i:03d}", RefKind.RETWEET, ref_id=origin, created_at=2000 + i)
        )
    for i in range(52):
        records.append(
            make_record(f"p{i:03d}", RefKind.REPLY, ref_id=origin, created_at=3000 + i)
        )
    for i in range(3):
        records.append(
            make_record(f"q{i:03d}", RefKind.QUOTE, ref_id=origin, created_at=4000 + i)
        )
    for i in range(3):
        records.append(
            make_record(f"m{i:03d}", RefKind.MENTION, ref_id=origin, created_at=5000 + i)
        )
    assert len(records) == 200
    return records


@pytest.fixture
def fig2_corpus():
    return build_fig2_corpus()
