"""Corpus ingestion: parse and validate line-delimited tweet records,
normalize text for scoring, and summarize interaction breakdowns.

Input format is one JSON object per line with fields
    id, author_id, created_at, text, ref_kind, ref_id, like_count,
    view_count, place
where `created_at` may be UTC epoch milliseconds or an ISO-8601 timestamp
(normalized to epoch ms on ingest). Records are immutable after parsing and
safe to share across workers; stats aggregation is associative/commutative
so sharded runs give schedule-independent results.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, Union

from .errors import CorpusError, RecordError
from .stopwords import STOPWORDS


class RefKind(str, Enum):
    ORIGINAL = "original"
    RETWEET = "retweet"
    REPLY = "reply"
    QUOTE = "quote"
    MENTION = "mention"


#: Kinds that must carry a ref_id (everything except original).
_REFERENCING_KINDS = frozenset(
    {RefKind.RETWEET, RefKind.REPLY, RefKind.QUOTE, RefKind.MENTION}
)


class TweetRecord(NamedTuple):
    """One social post. Treated as immutable; `created_at` is UTC epoch ms."""

    id: str
    author_id: Optional[str]
    created_at: int
    text: str
    ref_kind: RefKind
    ref_id: Optional[str] = None
    like_count: int = 0
    view_count: int = 0
    place: Optional[str] = None


class ParseIssue(NamedTuple):
    line_no: int
    message: str


@dataclass
class ParseResult:
    """Records that passed validation plus per-line issues.

    `issues` holds skipped records (skip mode); `warnings` holds records that
    were kept after a lossy fix-up (currently: unknown ref_kind mapped to
    mention).
    """

    records: list[TweetRecord] = field(default_factory=list)
    issues: list[ParseIssue] = field(default_factory=list)
    warnings: list[ParseIssue] = field(default_factory=list)

    @property
    def skipped(self) -> int:
        return len(self.issues)


def validate_record(record: TweetRecord) -> None:
    """Raise RecordError unless the record satisfies its invariants."""
    if not record.id or not isinstance(record.id, str):
        raise RecordError("id must be a non-empty string")
    if not isinstance(record.created_at, int) or record.created_at < 0:
        raise RecordError("created_at must be a non-negative epoch-ms integer")
    if record.ref_kind is RefKind.ORIGINAL:
        if record.ref_id is not None:
            raise RecordError("original tweet must not carry a ref_id")
    else:
        if record.ref_id is None:
            raise RecordError(f"dangling reference kind: {record.ref_kind.value} without ref_id")
    if record.like_count < 0 or record.view_count < 0:
        raise RecordError("like_count/view_count must be non-negative")


def _parse_created_at(value) -> int:
    if isinstance(value, bool):
        raise RecordError("created_at must be epoch ms or ISO-8601")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not value.is_integer():
            raise RecordError("created_at float must be an integral epoch-ms value")
        return int(value)
    if isinstance(value, str):
        text = value.strip()
        if re.fullmatch(r"-?\d+", text):
            return int(text)
        try:
            dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
        except ValueError as exc:
            raise RecordError(f"unparseable created_at: {value!r}") from exc
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        return int(round(dt.timestamp() * 1000))
    raise RecordError(f"unsupported created_at type: {type(value).__name__}")


def _parse_count(raw, name: str) -> int:
    if raw is None:
        return 0
    if isinstance(raw, bool):
        raise RecordError(f"{name} must be a non-negative integer")
    if isinstance(raw, int):
        value = raw
    elif isinstance(raw, str) and re.fullmatch(r"-?\d+", raw.strip()):
        value = int(raw)
    else:
        raise RecordError(f"{name} must be a non-negative integer")
    if value < 0:
        raise RecordError(f"{name} must be a non-negative integer")
    return value


def _opt_str(raw, name: str) -> Optional[str]:
    if raw is None or raw == "":
        return None
    if not isinstance(raw, str):
        raise RecordError(f"{name} must be a string")
    return raw


def record_from_dict(data: dict, warnings: Optional[list[str]] = None) -> TweetRecord:
    """Build and validate a TweetRecord from a decoded JSON object.

    Unknown ref_kind values are mapped to mention; the mapping is appended to
    `warnings` when a list is supplied.
    """
    if not isinstance(data, dict):
        raise RecordError("record must be a JSON object")
    try:
        raw_kind = data["ref_kind"]
    except KeyError:
        raise RecordError("missing field: ref_kind") from None
    try:
        kind = RefKind(raw_kind)
    except ValueError:
        if warnings is not None:
            warnings.append(f"unknown ref_kind {raw_kind!r} mapped to mention")
        kind = RefKind.MENTION
    for required in ("id", "created_at", "text"):
        if required not in data:
            raise RecordError(f"missing field: {required}")
    text = data["text"]
    if not isinstance(text, str):
        raise RecordError("text must be a string")
    tweet_id = data["id"]
    if not isinstance(tweet_id, str) or not tweet_id:
        raise RecordError("id must be a non-empty string")
    record = TweetRecord(
        id=tweet_id,
        author_id=_opt_str(data.get("author_id"), "author_id"),
        created_at=_parse_created_at(data["created_at"]),
        text=text,
        ref_kind=kind,
        ref_id=_opt_str(data.get("ref_id"), "ref_id"),
        like_count=_parse_count(data.get("like_count"), "like_count"),
        view_count=_parse_count(data.get("view_count"), "view_count"),
        place=_opt_str(data.get("place"), "place"),
    )
    validate_record(record)
    return record


def parse_corpus(
    source: Union[str, Path, Iterable[str]],
    on_error: str = "skip",
) -> ParseResult:
    """Parse line-delimited JSON records into validated TweetRecords.

    `source` is a path or an iterable of lines. Input order is preserved.
    Malformed lines produce a per-record issue with the 1-based line number;
    on_error="skip" (default) collects them and continues, "abort" raises
    CorpusError at the first bad line. Duplicate ids are malformed records.
    """
    if on_error not in ("skip", "abort"):
        raise ValueError(f"on_error must be 'skip' or 'abort', got {on_error!r}")
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as handle:
            return parse_corpus(list(handle), on_error=on_error)

    result = ParseResult()
    seen: set[str] = set()
    for line_no, line in enumerate(source, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        kind_warnings: list[str] = []
        try:
            try:
                data = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise RecordError(f"invalid JSON: {exc.msg}") from exc
            record = record_from_dict(data, warnings=kind_warnings)
            if record.id in seen:
                raise RecordError(f"duplicate id: {record.id}")
        except RecordError as exc:
            if on_error == "abort":
                raise CorpusError(f"line {line_no}: {exc}") from exc
            result.issues.append(ParseIssue(line_no, str(exc)))
            continue
        seen.add(record.id)
        result.records.append(record)
        for message in kind_warnings:
            result.warnings.append(ParseIssue(line_no, message))
    return result


_FIELD_ORDER = (
    "id",
    "author_id",
    "created_at",
    "text",
    "ref_kind",
    "ref_id",
    "like_count",
    "view_count",
    "place",
)


def record_to_json_line(record: TweetRecord) -> str:
    """Serialize a record to one JSON line with a fixed key order."""
    data = {
        "id": record.id,
        "author_id": record.author_id,
        "created_at": record.created_at,
        "text": record.text,
        "ref_kind": record.ref_kind.value,
        "ref_id": record.ref_id,
        "like_count": record.like_count,
        "view_count": record.view_count,
        "place": record.place,
    }
    return json.dumps(data, ensure_ascii=False, separators=(",", ":"))


def write_corpus(records: Iterable[TweetRecord], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for record in records:
            handle.write(record_to_json_line(record))
            handle.write("\n")


# --------------------------------------------------------------------------
# Text preprocessing
# --------------------------------------------------------------------------

#: CleanText is an ordered list of lowercase tokens with URLs, #/@ tokens and
#: stopwords removed.
CleanText = list

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
#: Punctuation stripped from token edges. '%' and '$' are deliberately kept
#: so numeric cues survive for the lexical scorers.
_EDGE_PUNCT = ".,!?;:\"'`()[]{}<>|/\\~^*+=&‘’“”…-_"


def preprocess_text(text: str) -> list[str]:
    """Normalize raw tweet text to lowercase tokens.

    Removes URLs, whole hashtag/mention tokens and stopwords; strips edge
    punctuation but keeps internal apostrophes ("don't" stays one token).
    Idempotent: feeding the joined output back in yields the same tokens.
    """
    text = text.replace("’", "'").lower()
    text = _URL_RE.sub(" ", text)
    tokens: list[str] = []
    for raw in text.split():
        if raw[0] in "#@":
            continue
        token = raw.strip(_EDGE_PUNCT)
        if not token or token[0] in "#@":
            continue
        if token in STOPWORDS:
            continue
        tokens.append(token)
    return tokens


# --------------------------------------------------------------------------
# Corpus statistics
# --------------------------------------------------------------------------


@dataclass
class CorpusStats:
    """Interaction breakdown and basic engagement summary.

    Means are None (and `undefined_means` True) on an empty corpus; fractions
    degrade to 0.0 so they stay within [0, 1].
    """

    total: int
    counts: dict[RefKind, int]
    mean_likes: Optional[float]
    mean_views: Optional[float]
    earliest_created_at: Optional[int]
    latest_created_at: Optional[int]
    geotagged_fraction: float

    @property
    def undefined_means(self) -> bool:
        return self.total == 0

    def fraction(self, kind: RefKind) -> float:
        if self.total == 0:
            return 0.0
        return self.counts.get(kind, 0) / self.total

    def percentage(self, kind: RefKind) -> float:
        """Per-kind share in percent, exact for ratios like 115/200."""
        if self.total == 0:
            return 0.0
        return self.counts.get(kind, 0) * 100 / self.total


@dataclass
class StatsAccumulator:
    """Mergeable accumulator so stats can be aggregated across shards.

    merge() is associative and commutative: sums, min and max only.
    """

    total: int = 0
    counts: Counter = field(default_factory=Counter)
    like_sum: int = 0
    view_sum: int = 0
    earliest: Optional[int] = None
    latest: Optional[int] = None
    geotagged: int = 0

    def add(self, record: TweetRecord) -> None:
        self.total += 1
        self.counts[record.ref_kind] += 1
        self.like_sum += record.like_count
        self.view_sum += record.view_count
        if self.earliest is None or record.created_at < self.earliest:
            self.earliest = record.created_at
        if self.latest is None or record.created_at > self.latest:
            self.latest = record.created_at
        if record.place is not None:
            self.geotagged += 1

    def merge(self, other: "StatsAccumulator") -> "StatsAccumulator":
        merged = StatsAccumulator(
            total=self.total + other.total,
            counts=self.counts + other.counts,
            like_sum=self.like_sum + other.like_sum,
            view_sum=self.view_sum + other.view_sum,
            geotagged=self.geotagged + other.geotagged,
        )
        lows = [x for x in (self.earliest, other.earliest) if x is not None]
        highs = [x for x in (self.latest, other.latest) if x is not None]
        merged.earliest = min(lows) if lows else None
        merged.latest = max(highs) if highs else None
        return merged

    def finalize(self) -> CorpusStats:
        counts = {kind: self.counts.get(kind, 0) for kind in RefKind}
        if self.total == 0:
            return CorpusStats(0, counts, None, None, None, None, 0.0)
        return CorpusStats(
            total=self.total,
            counts=counts,
            mean_likes=self.like_sum / self.total,
            mean_views=self.view_sum / self.total,
            earliest_created_at=self.earliest,
            latest_created_at=self.latest,
            geotagged_fraction=self.geotagged / self.total,
        )


def corpus_stats(records: Iterable[TweetRecord]) -> CorpusStats:
    """Exact counts per ref_kind plus double-precision means."""
    acc = StatsAccumulator()
    for record in records:
        acc.add(record)
    return acc.finalize()


def write_stats(stats: CorpusStats, path: Union[str, Path]) -> None:
    """Flat key=value document; empty value means undefined."""
    def fmt(value) -> str:
        return "" if value is None else repr(value) if isinstance(value, float) else str(value)

    lines = [f"total={stats.total}"]
    for kind in RefKind:
        lines.append(f"count_{kind.value}={stats.counts.get(kind, 0)}")
    lines.extend(
        [
            f"mean_likes={fmt(stats.mean_likes)}",
            f"mean_views={fmt(stats.mean_views)}",
            f"earliest_created_at={fmt(stats.earliest_created_at)}",
            f"latest_created_at={fmt(stats.latest_created_at)}",
            f"geotagged_fraction={fmt(stats.geotagged_fraction)}",
            f"undefined_means={'true' if stats.undefined_means else 'false'}",
        ]
    )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_stats(path: Union[str, Path]) -> dict[str, str]:
    out: dict[str, str] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition("=")
        out[key] = value
    return out


def write_kind_counts_csv(stats: CorpusStats, path: Union[str, Path]) -> None:
    lines = ["ref_kind,count"]
    for kind in RefKind:
        lines.append(f"{kind.value},{stats.counts.get(kind, 0)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_kind_counts_csv(path: Union[str, Path]) -> dict[RefKind, int]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "ref_kind,count":
        raise CorpusError(f"bad per-kind counts header in {path}")
    out: dict[RefKind, int] = {}
    for line in lines[1:]:
        if not line.strip():
            continue
        kind, _, count = line.partition(",")
        out[RefKind(kind)] = int(count)
    return out
