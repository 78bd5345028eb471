"""End-to-end batch pipeline: ingest -> score join -> calibrate (or tau
override) -> cohort split -> cascade reconstruction -> metrics/reports.

Configuration comes from defaults, overridden by a flat key=value file,
overridden by CLI flags (CLI > file > defaults). A run writes every artifact
under one output directory; given identical inputs, config and seed the
bytes are identical, and a `threads` value only caps workers without
changing any result.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional, Union

from . import cascade as cascade_mod
from . import cohort as cohort_mod
from .calibration import (
    CalibrationResult,
    pr_curve,
    read_validation,
    select_threshold,
    write_calibration,
)
from .cascade import CohortReport
from .errors import BiascadeError, StageError
from .ingest import (
    corpus_stats,
    parse_corpus,
    write_kind_counts_csv,
    write_stats,
)
from .report import (
    render_cohort_summary,
    render_interaction_breakdown,
    render_no_roots_summary,
)
from .scoring import join_scores, load_scores

DEFAULT_KS = (1, 2, 5, 10, 20, 50, 100)


@dataclass(frozen=True)
class RunConfig:
    corpus: Optional[str] = None
    scores: Optional[str] = None
    validation: Optional[str] = None
    tau: Optional[float] = None
    recall_floor: float = 0.10
    fraction: float = 0.10
    ks: tuple[int, ...] = DEFAULT_KS
    out: str = "out"
    seed: int = 0
    threads: int = 1
    plots: bool = False

    def validate(self) -> None:
        if self.corpus is None:
            raise BiascadeError("a corpus path is required")
        if self.scores is None:
            raise BiascadeError("a scores path is required")
        if self.tau is None and self.validation is None:
            raise BiascadeError("either --tau or a validation set must be supplied")
        if self.tau is not None and not (0.0 <= self.tau <= 1.0):
            raise BiascadeError(f"tau must be in [0, 1], got {self.tau}")
        if not (0.0 <= self.recall_floor <= 1.0):
            raise BiascadeError(f"recall floor must be in [0, 1], got {self.recall_floor}")
        if not (0.0 < self.fraction <= 0.5):
            raise BiascadeError(f"fraction must be in (0, 0.5], got {self.fraction}")
        if not self.ks or any(k < 1 for k in self.ks):
            raise BiascadeError(f"ks must be positive integers, got {self.ks}")
        if self.threads < 1:
            raise BiascadeError(f"threads must be >= 1, got {self.threads}")


_BOOL_KEYS = {"plots"}
_INT_KEYS = {"seed", "threads"}
_FLOAT_KEYS = {"tau", "recall_floor", "fraction"}


def parse_config_file(path: Union[str, Path]) -> dict:
    """Flat key=value file; '#' starts a comment line."""
    values: dict = {}
    known = {f.name for f in fields(RunConfig)}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if not sep or key not in known:
            raise BiascadeError(f"{path}:{line_no}: unknown config entry {stripped!r}")
        if key in _BOOL_KEYS:
            values[key] = raw.lower() in ("1", "true", "yes")
        elif key in _INT_KEYS:
            values[key] = int(raw)
        elif key in _FLOAT_KEYS:
            values[key] = float(raw)
        elif key == "ks":
            values[key] = tuple(int(x) for x in raw.split(",") if x.strip())
        else:
            values[key] = raw
    return values


def build_config(file_path: Optional[str] = None, **cli_overrides) -> RunConfig:
    """Merge defaults, config file and CLI overrides (CLI wins)."""
    config = RunConfig()
    if file_path is not None:
        config = replace(config, **parse_config_file(file_path))
    overrides = {k: v for k, v in cli_overrides.items() if v is not None}
    if overrides:
        config = replace(config, **overrides)
    return config


@dataclass
class PipelineResult:
    out_dir: Path
    tau: float
    calibration: Optional[CalibrationResult]
    reports: list[CohortReport] = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    @property
    def no_roots(self) -> bool:
        return not self.reports


def _stage(name: str):
    class _StageContext:
        def __enter__(self):
            return None

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and not isinstance(exc, StageError):
                raise StageError(name, exc) from exc
            return False

    return _StageContext()


def run_pipeline(config: RunConfig) -> PipelineResult:
    """Execute every stage and write all artifacts under config.out."""
    config.validate()
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    counts: dict = {}

    with _stage("ingest"):
        parsed = parse_corpus(config.corpus, on_error="skip")
        records = parsed.records
        counts["parse_issues"] = parsed.skipped
        counts["parse_warnings"] = len(parsed.warnings)
        counts["records"] = len(records)
        stats = corpus_stats(records)
        write_stats(stats, out / "stats.txt")
        write_kind_counts_csv(stats, out / "interaction_counts.csv")
        (out / "interaction_breakdown.txt").write_text(
            render_interaction_breakdown(stats), encoding="utf-8"
        )

    with _stage("scores"):
        loaded = load_scores(config.scores)
        counts["score_rows"] = len(loaded.records)
        counts["score_duplicates"] = loaded.duplicate_count

    calibration: Optional[CalibrationResult] = None
    with _stage("calibrate"):
        if config.tau is not None:
            tau = config.tau
        else:
            examples = read_validation(config.validation)
            calibration = select_threshold(pr_curve(examples), config.recall_floor)
            tau = calibration.tau
            write_calibration(calibration, out / "calibration.txt", out / "pr_curve.csv")
        counts["tau"] = tau

    with _stage("join"):
        joined = join_scores(records, loaded.records)
        counts["unscored"] = joined.unscored

    with _stage("cohort"):
        claims = cohort_mod.filter_claims(joined.scored, tau)
        roots = cohort_mod.select_roots(claims)
        counts["claims"] = len(claims)
        counts["roots"] = len(roots)
        usable = [r for r in roots if r.p_bias is not None]
        counts["roots_missing_bias"] = len(roots) - len(usable)
        if len(usable) < 2:
            (out / "summary.txt").write_text(
                render_no_roots_summary(len(records)), encoding="utf-8"
            )
            _write_manifest(out, config, counts)
            return PipelineResult(out, tau, calibration, [], counts)
        split = cohort_mod.decile_split(roots, config.fraction)
        cohort_mod.write_cohorts_csv(split.assignment, out / "cohorts.csv")
        counts["cohort_size"] = split.cohort_size

    with _stage("cascades"):
        edges = cascade_mod.build_edgelist(records)
        cascade_mod.write_edgelist_csv(edges, out / "edgelist.csv")
        assignment = split.assignment
        all_roots = sorted(assignment.biased_roots | assignment.unbiased_roots)
        recon = cascade_mod.reconstruct(all_roots, edges, records, threads=config.threads)
        counts["dropped_edges"] = recon.dropped_edges
        cascade_mod.write_cascades_jsonl(recon.cascades, out / "cascades.jsonl")

    with _stage("metrics"):
        by_root = {c.root_id: c for c in recon.cascades}
        by_id = {r.record.id: r.record for r in roots}
        reports = []
        for label, root_ids in (
            ("biased", assignment.biased_roots),
            ("unbiased", assignment.unbiased_roots),
        ):
            ordered = sorted(root_ids)
            reports.append(
                cascade_mod.build_cohort_report(
                    label,
                    [by_root[r] for r in ordered],
                    [by_id[r] for r in ordered],
                    config.ks,
                )
            )
        cascade_mod.write_cohort_report_csvs(reports, out)
        biased_report, unbiased_report = reports
        all_cascades = list(by_root.values())
        overall_mean_tweets = (
            sum(len(c.nodes) for c in all_cascades) / len(all_cascades)
            if all_cascades
            else None
        )
        authorship = cascade_mod.cascades_per_user([by_id[r.root_id] for r in all_cascades])
        velocity_pairs = {
            k: (biased_report.velocity.get(k), unbiased_report.velocity.get(k))
            for k in config.ks
        }
        summary = render_cohort_summary(
            overall_mean_tweets,
            authorship.share_multi,
            velocity_pairs,
            (biased_report.top_q_size_users, unbiased_report.top_q_size_users),
        )
        (out / "summary.txt").write_text(summary, encoding="utf-8")

    if config.plots:
        with _stage("plots"):
            from .plots import write_cohort_plots

            write_cohort_plots(reports, out / "plots")

    _write_manifest(out, config, counts)
    return PipelineResult(out, tau, calibration, reports, counts)


def _write_manifest(out: Path, config: RunConfig, counts: dict) -> None:
    lines = []
    for f in fields(RunConfig):
        value = getattr(config, f.name)
        if f.name == "ks":
            value = ",".join(str(k) for k in value)
        lines.append(f"config.{f.name}={value}")
    for key in sorted(counts):
        lines.append(f"count.{key}={counts[key]}")
    (out / "run_manifest.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
