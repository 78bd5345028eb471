import filecmp
import json

import pytest

from biascade.cli import main
from biascade.errors import BiascadeError, StageError
from biascade.ingest import write_corpus
from biascade.pipeline import RunConfig, build_config, parse_config_file, run_pipeline
from biascade.scoring import write_scores
from biascade.synth import CohortProfile, GenConfig, generate

from conftest import build_fig2_corpus


@pytest.fixture(scope="module")
def synth_inputs(tmp_path_factory):
    base = tmp_path_factory.mktemp("synth_inputs")
    config = GenConfig(
        biased=CohortProfile(40, 0.9, 0.5, (0.7, 0.9)),
        unbiased=CohortProfile(40, 0.9, 0.5 / 5.66, (0.1, 0.3)),
        max_depth=30,
        seed=21,
    )
    truth = generate(config)
    write_corpus(truth.records, base / "corpus.jsonl")
    write_scores(truth.scores, base / "scores.csv")
    return base, truth


def run_once(synth_inputs, out_dir, **overrides):
    base, _ = synth_inputs
    defaults = dict(
        corpus=str(base / "corpus.jsonl"),
        scores=str(base / "scores.csv"),
        tau=0.91,
        fraction=0.10,
        ks=(1, 2, 5, 10),
        out=str(out_dir),
        seed=0,
    )
    defaults.update(overrides)
    return run_pipeline(RunConfig(**defaults))


EXPECTED_ARTIFACTS = [
    "stats.txt",
    "interaction_counts.csv",
    "interaction_breakdown.txt",
    "cohorts.csv",
    "edgelist.csv",
    "cascades.jsonl",
    "report_ccdf.csv",
    "report_velocity.csv",
    "report_authorship.csv",
    "summary.txt",
    "run_manifest.txt",
]


class TestRunPipeline:
    def test_full_run_writes_all_artifacts(self, synth_inputs, tmp_path):
        result = run_once(synth_inputs, tmp_path / "out")
        assert not result.no_roots
        for name in EXPECTED_ARTIFACTS:
            assert (result.out_dir / name).exists(), name

    def test_biased_cohort_is_faster_at_shared_ks(self, synth_inputs, tmp_path):
        result = run_once(synth_inputs, tmp_path / "out")
        biased, unbiased = result.reports
        assert biased.label == "biased" and unbiased.label == "unbiased"
        shared = set(biased.velocity) & set(unbiased.velocity)
        assert shared
        for k in shared:
            assert biased.velocity[k] < unbiased.velocity[k]

    def test_cohorts_recover_generated_labels(self, synth_inputs, tmp_path):
        base, truth = synth_inputs
        result = run_once(synth_inputs, tmp_path / "out")
        from biascade.cohort import read_cohorts_csv

        assignment = read_cohorts_csv(result.out_dir / "cohorts.csv")
        for root in assignment.biased_roots:
            assert truth.root_cohorts[root] == "biased"
        for root in assignment.unbiased_roots:
            assert truth.root_cohorts[root] == "unbiased"

    def test_deterministic_artifacts_across_runs_and_threads(self, synth_inputs, tmp_path):
        first = run_once(synth_inputs, tmp_path / "a", threads=1)
        for name, threads in (("b", 1), ("c", 4), ("d", 8)):
            again = run_once(synth_inputs, tmp_path / name, threads=threads)
            for artifact in EXPECTED_ARTIFACTS:
                if artifact == "run_manifest.txt":
                    continue  # embeds the differing out path and thread count
                a = first.out_dir / artifact
                b = again.out_dir / artifact
                assert filecmp.cmp(a, b, shallow=False), (artifact, threads)

    def test_empty_corpus_gives_clean_no_roots_report(self, tmp_path):
        corpus = tmp_path / "empty.jsonl"
        corpus.write_text("")
        scores = tmp_path / "scores.csv"
        scores.write_text("tweet_id,p_claim,p_bias\n")
        config = RunConfig(
            corpus=str(corpus), scores=str(scores), tau=0.9, out=str(tmp_path / "out")
        )
        result = run_pipeline(config)
        assert result.no_roots
        assert "no roots" in (result.out_dir / "summary.txt").read_text()

    def test_calibration_path_used_when_no_tau(self, synth_inputs, tmp_path):
        base, _ = synth_inputs
        validation = tmp_path / "val.csv"
        rows = ["tweet_id,p_claim,label"]
        for i, p in enumerate((0.95, 0.9, 0.85, 0.6, 0.4, 0.2)):
            rows.append(f"v{i},{p},{1 if p >= 0.6 else 0}")
        validation.write_text("\n".join(rows) + "\n")
        result = run_once(
            synth_inputs, tmp_path / "out", tau=None, validation=str(validation)
        )
        assert result.calibration is not None
        assert (result.out_dir / "calibration.txt").exists()
        assert (result.out_dir / "pr_curve.csv").exists()

    def test_plots_written_and_deterministic(self, synth_inputs, tmp_path):
        first = run_once(synth_inputs, tmp_path / "a", plots=True)
        second = run_once(synth_inputs, tmp_path / "b", plots=True)
        for svg in ("authorship.svg", "size_ccdf.svg", "velocity.svg"):
            pa = first.out_dir / "plots" / svg
            pb = second.out_dir / "plots" / svg
            assert pa.exists()
            assert filecmp.cmp(pa, pb, shallow=False), svg

    def test_stage_error_carries_stage_name(self, tmp_path):
        config = RunConfig(
            corpus=str(tmp_path / "missing.jsonl"),
            scores=str(tmp_path / "missing.csv"),
            tau=0.5,
            out=str(tmp_path / "out"),
        )
        with pytest.raises(StageError) as err:
            run_pipeline(config)
        assert err.value.stage == "ingest"

    def test_config_validation(self):
        with pytest.raises(BiascadeError, match="corpus"):
            run_pipeline(RunConfig())
        with pytest.raises(BiascadeError, match="tau"):
            RunConfig(corpus="c", scores="s").validate()
        with pytest.raises(BiascadeError, match="fraction"):
            RunConfig(corpus="c", scores="s", tau=0.5, fraction=0.7).validate()

    def test_artifacts_reparse_roundtrip(self, synth_inputs, tmp_path):
        from biascade.cascade import read_cascades_jsonl, read_edgelist_csv
        from biascade.cohort import read_cohorts_csv
        from biascade.ingest import parse_corpus, read_kind_counts_csv, read_stats

        base, truth = synth_inputs
        result = run_once(synth_inputs, tmp_path / "out")
        out = result.out_dir
        assert parse_corpus(str(base / "corpus.jsonl")).records == truth.records
        assert read_stats(out / "stats.txt")["total"] == str(len(truth.records))
        counts = read_kind_counts_csv(out / "interaction_counts.csv")
        assert sum(counts.values()) == len(truth.records)
        edges = read_edgelist_csv(out / "edgelist.csv")
        assert len(edges) == len(truth.records) - len(truth.cascades)
        cascades = read_cascades_jsonl(out / "cascades.jsonl")
        assignment = read_cohorts_csv(out / "cohorts.csv")
        assert {c.root_id for c in cascades} == (
            assignment.biased_roots | assignment.unbiased_roots
        )
        from biascade.cascade import read_cohort_report_csvs

        parsed = read_cohort_report_csvs(out)
        for report in result.reports:
            back = parsed[report.label]
            assert back["ccdf"] == report.ccdf
            assert back["velocity"] == report.velocity
            assert back["velocity_counts"] == report.velocity_counts
            assert back["authorship"] == report.authorship_histogram


class TestConfigFile:
    def test_parse_and_precedence(self, tmp_path):
        config_file = tmp_path / "run.cfg"
        config_file.write_text(
            "# comment\n"
            "tau=0.5\n"
            "fraction=0.2\n"
            "ks=1,2,3\n"
            "plots=true\n"
            "threads=4\n"
            "out=from_file\n"
        )
        values = parse_config_file(config_file)
        assert values == {
            "tau": 0.5,
            "fraction": 0.2,
            "ks": (1, 2, 3),
            "plots": True,
            "threads": 4,
            "out": "from_file",
        }
        # CLI overrides beat the file; file beats defaults
        config = build_config(file_path=str(config_file), tau=0.91, out=None)
        assert config.tau == 0.91
        assert config.fraction == 0.2
        assert config.out == "from_file"
        assert config.recall_floor == 0.10

    def test_unknown_key_rejected(self, tmp_path):
        config_file = tmp_path / "bad.cfg"
        config_file.write_text("nonsense=1\n")
        with pytest.raises(BiascadeError, match="unknown config entry"):
            parse_config_file(config_file)


class TestCli:
    def test_synth_then_run_exit_zero(self, tmp_path, capsys):
        synth_dir = tmp_path / "synth"
        assert main(["synth", "--seed", "3", "--roots", "30", "--out", str(synth_dir)]) == 0
        code = main(
            [
                "run",
                "--corpus", str(synth_dir / "corpus.jsonl"),
                "--scores", str(synth_dir / "scores.csv"),
                "--tau", "0.91",
                "--ks", "1,2,5",
                "--out", str(tmp_path / "out"),
            ]
        )
        assert code == 0
        assert (tmp_path / "out" / "summary.txt").exists()

    def test_synth_deterministic_fixture(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        main(["synth", "--seed", "3", "--roots", "10", "--out", str(a)])
        main(["synth", "--seed", "3", "--roots", "10", "--out", str(b)])
        for name in ("corpus.jsonl", "scores.csv", "ground_truth.jsonl", "root_cohorts.csv"):
            assert filecmp.cmp(a / name, b / name, shallow=False), name

    def test_stats_command(self, tmp_path, capsys):
        corpus = tmp_path / "corpus.jsonl"
        write_corpus(build_fig2_corpus(), corpus)
        code = main(["stats", "--corpus", str(corpus), "--out", str(tmp_path / "s")])
        assert code == 0
        out = capsys.readouterr().out
        assert "retweets 57.5%" in out

    def test_calibrate_command_matches_library(self, tmp_path, capsys):
        validation = tmp_path / "val.csv"
        validation.write_text(
            "tweet_id,p_claim,label\nv1,0.9,1\nv2,0.8,1\nv3,0.7,0\nv4,0.2,0\n"
        )
        code = main(
            ["calibrate", "--validation", str(validation), "--out", str(tmp_path / "c")]
        )
        assert code == 0
        from biascade.calibration import pr_curve, read_validation, select_threshold

        expected = select_threshold(pr_curve(read_validation(validation)), 0.10)
        doc = (tmp_path / "c" / "calibration.txt").read_text()
        assert f"tau={expected.tau!r}" in doc

    def test_score_command_output_loads(self, tmp_path):
        corpus = tmp_path / "corpus.jsonl"
        records = [
            {"id": "t1", "created_at": 1, "text": "98% of men have depression",
             "ref_kind": "original"},
            {"id": "t2", "created_at": 2, "text": "nice weather", "ref_kind": "original"},
        ]
        corpus.write_text("\n".join(json.dumps(r) for r in records) + "\n")
        scores_path = tmp_path / "scores.csv"
        assert main(["score", "--corpus", str(corpus), "--out", str(scores_path)]) == 0
        from biascade.scoring import load_scores

        loaded = load_scores(scores_path)
        assert len(loaded.records) == 2
        assert all(0 <= s.p_claim <= 1 for s in loaded.records)

    def test_cohort_cascades_metrics_chain(self, tmp_path):
        synth_dir = tmp_path / "synth"
        main(["synth", "--seed", "5", "--roots", "25", "--out", str(synth_dir)])
        cohorts = tmp_path / "cohorts.csv"
        assert main(
            [
                "cohort",
                "--corpus", str(synth_dir / "corpus.jsonl"),
                "--scores", str(synth_dir / "scores.csv"),
                "--tau", "0.91",
                "--out", str(cohorts),
            ]
        ) == 0
        casc_dir = tmp_path / "casc"
        assert main(
            [
                "cascades",
                "--corpus", str(synth_dir / "corpus.jsonl"),
                "--cohorts", str(cohorts),
                "--out", str(casc_dir),
            ]
        ) == 0
        metrics_dir = tmp_path / "metrics"
        assert main(
            [
                "metrics",
                "--cascades", str(casc_dir / "cascades.jsonl"),
                "--cohorts", str(cohorts),
                "--ks", "1,2,5",
                "--out", str(metrics_dir),
            ]
        ) == 0
        assert (metrics_dir / "report_velocity.csv").exists()

    def test_report_command_renders_table(self, tmp_path, capsys):
        prf_csv = tmp_path / "prf.csv"
        prf_csv.write_text(
            "model,class,precision,recall,f1\n"
            "RoBERTa,Non-Claim,0.91,1.00,0.95\n"
            "RoBERTa,Claim,0.80,0.12,0.22\n"
        )
        assert main(["report", "--prf-csv", str(prf_csv)]) == 0
        out = capsys.readouterr().out
        assert "0.91" in out and "0.22" in out

    def test_usage_error_exit_code_one(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["stats"])  # missing required flags
        assert exc.value.code == 1
        with pytest.raises(SystemExit) as exc:
            main(["no-such-command"])
        assert exc.value.code == 1

    def test_data_error_exit_code_two(self, tmp_path, capsys):
        missing = str(tmp_path / "nope.csv")
        code = main(["calibrate", "--validation", missing, "--out", str(tmp_path)])
        assert code == 2

    def test_run_data_error_exit_code_two(self, tmp_path):
        corpus = tmp_path / "c.jsonl"
        corpus.write_text("")
        scores = tmp_path / "s.csv"
        scores.write_text("bad,header\n")
        code = main(
            [
                "run",
                "--corpus", str(corpus),
                "--scores", str(scores),
                "--tau", "0.9",
                "--out", str(tmp_path / "out"),
            ]
        )
        assert code == 2
