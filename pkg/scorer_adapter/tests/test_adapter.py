import json

import pytest

from scorer_adapter.cli import main
from scorer_adapter.data import (
    read_corpus_texts,
    read_excerpts_with_split,
    read_labeled_tweets,
    write_score_file,
)
from scorer_adapter.recipe import TrainRecipe, bdm_recipe, cdm_recipe, read_manifest
from scorer_adapter.scoring import score_corpus
from scorer_adapter.training import train_bdm, train_cdm

SMOKE = dict(
    base_model="tiny:roberta",
    frozen_epochs=1,
    full_epochs=1,
    max_seq_len=32,
    batch_size=8,
    seed=0,
)

CLAIM_TEXTS = [
    ("98% of autism in men is just depression", 1),
    ("sleep deprivation causes anxiety in teenagers", 1),
    ("estrogen exposure alters anxiety phenotypes", 1),
    ("studies show gender affects therapy outcomes", 1),
    ("all women are too emotional for surgery", 1),
    ("vaccines trigger mental illness in boys", 1),
    ("depression rates doubled since 2010", 1),
    ("only men get this disorder say doctors", 1),
    ("therapy cures insomnia in most patients", 1),
    ("hormones cause mood disorders in girls", 1),
    ("what a lovely morning for a walk", 0),
    ("check out my new playlist", 0),
    ("the game last night was incredible", 0),
    ("coffee tastes better on fridays", 0),
    ("my cat knocked over the plant again", 0),
    ("traffic was terrible this morning", 0),
    ("new phone who dis", 0),
    ("weekend plans anyone", 0),
    ("that movie was way too long", 0),
    ("pizza for dinner tonight", 0),
]


@pytest.fixture(scope="module")
def labeled_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "labeled.csv"
    lines = ["text,label"] + [f'"{text}",{label}' for text, label in CLAIM_TEXTS]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture(scope="module")
def excerpt_files(tmp_path_factory):
    base = tmp_path_factory.mktemp("excerpts")
    excerpts = base / "excerpts.csv"
    split = base / "split.csv"
    rows = ["id,text,label,category"]
    splits = ["id,split"]
    for i, (text, label) in enumerate(CLAIM_TEXTS):
        category = "gender" if label else "none"
        rows.append(f'e{i:02d},"{text}",{label},{category}')
        splits.append(f"e{i:02d},{'train' if i % 5 else 'dev'}")
    excerpts.write_text("\n".join(rows) + "\n", encoding="utf-8")
    split.write_text("\n".join(splits) + "\n", encoding="utf-8")
    return excerpts, split


@pytest.fixture(scope="module")
def corpus_50(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus") / "corpus.jsonl"
    records = []
    for i in range(50):
        text, _ = CLAIM_TEXTS[i % len(CLAIM_TEXTS)]
        records.append(
            {
                "id": f"t{i:03d}",
                "author_id": f"u{i % 7}",
                "created_at": 1_672_531_200_000 + i * 60000,
                "text": f"{text} #{i}",
                "ref_kind": "original",
                "ref_id": None,
                "like_count": i % 5,
                "view_count": i * 3,
                "place": None,
            }
        )
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8")
    return path


@pytest.fixture(scope="module")
def cdm_artifact(labeled_csv, tmp_path_factory):
    out = tmp_path_factory.mktemp("artifacts") / "cdm"
    return train_cdm(labeled_csv, cdm_recipe(**SMOKE), out)


@pytest.fixture(scope="module")
def bdm_artifact(excerpt_files, tmp_path_factory):
    excerpts, split = excerpt_files
    out = tmp_path_factory.mktemp("artifacts") / "bdm"
    recipe = bdm_recipe(**{**SMOKE, "base_model": "tiny:distilbert"})
    return train_bdm(excerpts, split, recipe, out)


class TestRecipes:
    def test_defaults_match_published_procedure(self):
        recipe = cdm_recipe()
        assert recipe.frozen_epochs == 20
        assert recipe.full_epochs == 2
        assert recipe.learning_rate == 1e-5
        assert recipe.class_weight_ratio == 6.93
        assert recipe.base_model == "roberta-base"
        assert bdm_recipe().base_model == "distilbert-base-uncased"

    def test_invalid_recipes_rejected(self):
        with pytest.raises(ValueError):
            TrainRecipe(learning_rate=0.0)
        with pytest.raises(ValueError):
            TrainRecipe(frozen_epochs=-1)


class TestTrainingSmoke:
    def test_cdm_smoke_completes_with_manifest(self, cdm_artifact):
        manifest = read_manifest(cdm_artifact)
        assert manifest["task"] == "cdm"
        assert manifest["recipe"]["frozen_epochs"] == 1
        assert manifest["dataset_sizes"]["n_positive"] == 10
        assert manifest["dataset_sizes"]["n_negative"] == 10
        assert "max_seq_len" in manifest["unspecified_by_source"]

    def test_bdm_smoke_completes_with_manifest(self, bdm_artifact):
        manifest = read_manifest(bdm_artifact)
        assert manifest["task"] == "bdm"
        assert manifest["dataset_sizes"]["train"] == 16

    def test_seed_fixed_rerun_identical_manifest(self, labeled_csv, tmp_path):
        a = train_cdm(labeled_csv, cdm_recipe(**SMOKE), tmp_path / "a")
        b = train_cdm(labeled_csv, cdm_recipe(**SMOKE), tmp_path / "b")
        assert (a / "manifest.json").read_text() == (b / "manifest.json").read_text()

    def test_single_class_data_aborts(self, tmp_path):
        path = tmp_path / "one_class.csv"
        path.write_text("text,label\nfoo,1\nbar,1\n", encoding="utf-8")
        with pytest.raises(ValueError, match="both classes"):
            train_cdm(path, cdm_recipe(**SMOKE), tmp_path / "out")


class TestScoreCorpus:
    def test_scores_in_unit_interval(self, cdm_artifact, bdm_artifact, corpus_50, tmp_path):
        out = tmp_path / "scores.csv"
        n = score_corpus(cdm_artifact, bdm_artifact, corpus_50, out, tau=None)
        assert n == 50
        lines = out.read_text().splitlines()
        assert lines[0] == "tweet_id,p_claim,p_bias"
        assert len(lines) == 51
        for line in lines[1:]:
            _, p_claim, p_bias = line.split(",")
            assert 0.0 <= float(p_claim) <= 1.0
            assert p_bias == "" or 0.0 <= float(p_bias) <= 1.0

    def test_output_passes_primary_validator(self, cdm_artifact, bdm_artifact, corpus_50, tmp_path):
        biascade = pytest.importorskip(
            "biascade", reason="primary package needed for the contract check"
        )
        out = tmp_path / "scores.csv"
        score_corpus(cdm_artifact, bdm_artifact, corpus_50, out, tau=0.5)
        result = biascade.load_scores(out)
        assert len(result.records) == 50
        assert result.duplicate_count == 0

    def test_tau_limits_bias_scoring(self, cdm_artifact, bdm_artifact, corpus_50, tmp_path):
        out = tmp_path / "scores.csv"
        score_corpus(cdm_artifact, bdm_artifact, corpus_50, out, tau=0.0)
        rows = out.read_text().splitlines()[1:]
        for row in rows:
            _, p_claim, p_bias = row.split(",")
            # tau=0.0 with strict '>' means p_claim == 0.0 rows stay unscored
            if float(p_claim) > 0.0:
                assert p_bias != ""

    def test_without_bdm_bias_empty(self, cdm_artifact, corpus_50, tmp_path):
        out = tmp_path / "scores.csv"
        score_corpus(cdm_artifact, None, corpus_50, out)
        rows = out.read_text().splitlines()[1:]
        assert all(row.endswith(",") for row in rows)

    def test_empty_corpus_gives_header_only(self, cdm_artifact, tmp_path):
        corpus = tmp_path / "empty.jsonl"
        corpus.write_text("")
        out = tmp_path / "scores.csv"
        n = score_corpus(cdm_artifact, None, corpus, out)
        assert n == 0
        assert out.read_text() == "tweet_id,p_claim,p_bias\n"

    def test_out_of_range_guard(self, tmp_path):
        with pytest.raises(ValueError, match="out of range"):
            write_score_file([("t1", 1.5, None)], tmp_path / "bad.csv")


class TestDataFormats:
    def test_read_labeled_tweets_rejects_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("tweet,klass\nfoo,1\n", encoding="utf-8")
        with pytest.raises(ValueError, match="header"):
            read_labeled_tweets(path)

    def test_read_corpus_requires_id_and_text(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"id": "t1"}\n', encoding="utf-8")
        with pytest.raises(ValueError, match="id and text"):
            read_corpus_texts(path)

    def test_split_referencing_unknown_id_rejected(self, tmp_path):
        excerpts = tmp_path / "e.csv"
        excerpts.write_text('id,text,label,category\ne1,"x",0,none\n', encoding="utf-8")
        split = tmp_path / "s.csv"
        split.write_text("id,split\ne9,train\n", encoding="utf-8")
        with pytest.raises(ValueError, match="unknown id"):
            read_excerpts_with_split(excerpts, split)


class TestCli:
    def test_train_and_score_end_to_end(self, labeled_csv, corpus_50, tmp_path):
        cdm_dir = tmp_path / "cdm"
        code = main(
            [
                "train-cdm",
                "--labeled", str(labeled_csv),
                "--out", str(cdm_dir),
                "--base-model", "tiny:roberta",
                "--frozen-epochs", "1",
                "--full-epochs", "1",
                "--max-seq-len", "32",
                "--batch-size", "8",
            ]
        )
        assert code == 0
        scores = tmp_path / "scores.csv"
        code = main(
            [
                "score",
                "--cdm", str(cdm_dir),
                "--corpus", str(corpus_50),
                "--tau", "0.91",
                "--out", str(scores),
            ]
        )
        assert code == 0
        assert scores.read_text().splitlines()[0] == "tweet_id,p_claim,p_bias"

    def test_missing_file_exits_two(self, tmp_path):
        code = main(
            ["score", "--cdm", str(tmp_path / "nope"), "--corpus",
             str(tmp_path / "nope.jsonl"), "--out", str(tmp_path / "o.csv")]
        )
        assert code == 2
