"""Command-line interface.

Subcommands wrap the pipeline stages so they compose via files:

    run        full pipeline (ingest -> ... -> reports)
    stats      corpus statistics and interaction breakdown
    calibrate  threshold selection from a labeled validation CSV
    score      baseline lexical scoring of a corpus to a score file
    cohort     threshold filter + root selection + decile split
    cascades   edgelist construction + BFS reconstruction
    metrics    cohort reports from reconstructed cascades
    synth      seeded synthetic corpus with ground truth
    report     render PRF tables from a CSV of published/computed values

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from . import cascade as cascade_mod
from . import cohort as cohort_mod
from .calibration import pr_curve, read_validation, select_threshold, write_calibration
from .errors import BiascadeError
from .ingest import corpus_stats, parse_corpus, preprocess_text, write_kind_counts_csv, write_stats
from .pipeline import DEFAULT_KS, build_config, run_pipeline
from .report import render_interaction_breakdown, render_prf_table
from .scoring import (
    ScoreRecord,
    baseline_bias_score,
    baseline_claim_score,
    load_scores,
    write_scores,
)
from .synth import GroundTruth, generate, paper_profile, small_profile

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse default exits 2; we reserve 2 for data errors
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _parse_ks(raw: Optional[str]) -> Optional[tuple[int, ...]]:
    if raw is None:
        return None
    try:
        ks = tuple(int(x) for x in raw.split(",") if x.strip())
    except ValueError:
        raise BiascadeError(f"bad --ks value: {raw!r}") from None
    return ks


def _cmd_run(args) -> int:
    config = build_config(
        file_path=args.config,
        corpus=args.corpus,
        scores=args.scores,
        validation=args.validation,
        tau=args.tau,
        recall_floor=args.recall_floor,
        fraction=args.fraction,
        ks=_parse_ks(args.ks),
        out=args.out,
        seed=args.seed,
        threads=args.threads,
        plots=args.plots or None,
    )
    result = run_pipeline(config)
    if result.no_roots:
        print(f"no roots; artifacts in {result.out_dir}")
    else:
        print(f"tau={result.tau:g} cohorts of {result.counts.get('cohort_size')}; "
              f"artifacts in {result.out_dir}")
    return 0


def _cmd_stats(args) -> int:
    parsed = parse_corpus(args.corpus, on_error="skip")
    stats = corpus_stats(parsed.records)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_stats(stats, out / "stats.txt")
    write_kind_counts_csv(stats, out / "interaction_counts.csv")
    breakdown = render_interaction_breakdown(stats)
    (out / "interaction_breakdown.txt").write_text(breakdown, encoding="utf-8")
    sys.stdout.write(breakdown)
    if parsed.skipped:
        print(f"skipped {parsed.skipped} malformed record(s)")
    return 0


def _cmd_calibrate(args) -> int:
    examples = read_validation(args.validation)
    result = select_threshold(pr_curve(examples), args.recall_floor)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_calibration(result, out / "calibration.txt", out / "pr_curve.csv")
    print(f"tau={result.tau:g} (recall_floor={result.recall_floor:g}, "
          f"{len(result.curve)} curve points)")
    return 0


def _cmd_score(args) -> int:
    parsed = parse_corpus(args.corpus, on_error="skip")
    scores = []
    for record in parsed.records:
        tokens = preprocess_text(record.text)
        p_claim = baseline_claim_score(tokens)
        p_bias = None
        if args.tau is None or p_claim > args.tau:
            p_bias = baseline_bias_score(tokens)
        scores.append(ScoreRecord(record.id, p_claim, p_bias))
    write_scores(scores, args.out)
    print(f"scored {len(scores)} tweet(s) -> {args.out}")
    return 0


def _cmd_cohort(args) -> int:
    parsed = parse_corpus(args.corpus, on_error="skip")
    loaded = load_scores(args.scores)
    from .scoring import join_scores

    joined = join_scores(parsed.records, loaded.records)
    claims = cohort_mod.filter_claims(joined.scored, args.tau)
    roots = cohort_mod.select_roots(claims)
    split = cohort_mod.decile_split(roots, args.fraction)
    cohort_mod.write_cohorts_csv(split.assignment, args.out)
    print(
        f"{len(roots)} root(s); cohorts of {split.cohort_size} "
        f"({split.missing_bias} missing bias) -> {args.out}"
    )
    return 0


def _cmd_cascades(args) -> int:
    parsed = parse_corpus(args.corpus, on_error="skip")
    assignment = cohort_mod.read_cohorts_csv(args.cohorts)
    edges = cascade_mod.build_edgelist(parsed.records)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cascade_mod.write_edgelist_csv(edges, out / "edgelist.csv")
    all_roots = sorted(assignment.biased_roots | assignment.unbiased_roots)
    recon = cascade_mod.reconstruct(all_roots, edges, parsed.records, threads=args.threads)
    cascade_mod.write_cascades_jsonl(recon.cascades, out / "cascades.jsonl")
    print(
        f"{len(recon.cascades)} cascade(s), {len(edges)} edge(s), "
        f"{recon.dropped_edges} dropped -> {out}"
    )
    return 0


def _cmd_metrics(args) -> int:
    cascades = cascade_mod.read_cascades_jsonl(args.cascades)
    assignment = cohort_mod.read_cohorts_csv(args.cohorts)
    by_root = {c.root_id: c for c in cascades}
    ks = _parse_ks(args.ks) or DEFAULT_KS
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    reports = []
    for label, root_ids in (
        ("biased", assignment.biased_roots),
        ("unbiased", assignment.unbiased_roots),
    ):
        ordered = [r for r in sorted(root_ids) if r in by_root]
        cohort_cascades = [by_root[r] for r in ordered]
        root_records = [
            # cascade docs carry (id, author, ts); rebuild minimal records
            _root_record(by_root[r])
            for r in ordered
        ]
        reports.append(
            cascade_mod.build_cohort_report(label, cohort_cascades, root_records, ks)
        )
    cascade_mod.write_cohort_report_csvs(reports, out)
    print(f"reports for {', '.join(r.label for r in reports)} -> {out}")
    return 0


def _root_record(cascade):
    from .ingest import RefKind, TweetRecord

    root = cascade.nodes[0]
    return TweetRecord(root.tweet_id, root.author_id, root.created_at, "", RefKind.ORIGINAL)


def _cmd_synth(args) -> int:
    if args.profile == "paper":
        config = paper_profile(seed=args.seed, n_roots_per_cohort=args.roots)
    else:
        config = small_profile(seed=args.seed, n_roots_per_cohort=args.roots)
    truth = generate(config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_ground_truth(truth, out)
    print(
        f"{len(truth.cascades)} cascade(s), {len(truth.records)} record(s) -> {out}"
    )
    return 0


def _write_ground_truth(truth: GroundTruth, out: Path) -> None:
    from .ingest import write_corpus

    write_corpus(truth.records, out / "corpus.jsonl")
    write_scores(truth.scores, out / "scores.csv")
    cascade_mod.write_cascades_jsonl(truth.cascades, out / "ground_truth.jsonl")
    with open(out / "root_cohorts.csv", "w", encoding="utf-8", newline="\n") as handle:
        handle.write("tweet_id,cohort\n")
        for root_id in sorted(truth.root_cohorts):
            handle.write(f"{root_id},{truth.root_cohorts[root_id]}\n")


def _cmd_report(args) -> int:
    rows = []
    with open(args.prf_csv, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        expected = ("model", "class", "precision", "recall", "f1")
        if header is None or tuple(header) != expected:
            raise BiascadeError(f"bad PRF header {header!r}, expected {','.join(expected)}")
        for row in reader:
            if row:
                rows.append((row[0], row[1], float(row[2]), float(row[3]), float(row[4])))
    sys.stdout.write(render_prf_table(rows))
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="biascade", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="full pipeline")
    run.add_argument("--config", help="flat key=value config file")
    run.add_argument("--corpus")
    run.add_argument("--scores")
    run.add_argument("--validation")
    run.add_argument("--tau", type=float)
    run.add_argument("--recall-floor", dest="recall_floor", type=float)
    run.add_argument("--fraction", type=float)
    run.add_argument("--ks", help="comma-separated retweet counts, e.g. 1,2,5,10")
    run.add_argument("--out")
    run.add_argument("--seed", type=int)
    run.add_argument("--threads", type=int)
    run.add_argument("--plots", action="store_true", default=False)
    run.set_defaults(func=_cmd_run)

    stats = sub.add_parser("stats", help="corpus statistics")
    stats.add_argument("--corpus", required=True)
    stats.add_argument("--out", required=True)
    stats.set_defaults(func=_cmd_stats)

    calibrate = sub.add_parser("calibrate", help="threshold selection")
    calibrate.add_argument("--validation", required=True)
    calibrate.add_argument("--recall-floor", dest="recall_floor", type=float, default=0.10)
    calibrate.add_argument("--out", required=True)
    calibrate.set_defaults(func=_cmd_calibrate)

    score = sub.add_parser("score", help="baseline lexical scoring")
    score.add_argument("--corpus", required=True)
    score.add_argument("--tau", type=float, help="bias-score only claims above tau")
    score.add_argument("--out", required=True)
    score.set_defaults(func=_cmd_score)

    cohort = sub.add_parser("cohort", help="decile cohort split")
    cohort.add_argument("--corpus", required=True)
    cohort.add_argument("--scores", required=True)
    cohort.add_argument("--tau", type=float, required=True)
    cohort.add_argument("--fraction", type=float, default=0.10)
    cohort.add_argument("--out", required=True)
    cohort.set_defaults(func=_cmd_cohort)

    cascades = sub.add_parser("cascades", help="edgelist + reconstruction")
    cascades.add_argument("--corpus", required=True)
    cascades.add_argument("--cohorts", required=True)
    cascades.add_argument("--threads", type=int, default=1)
    cascades.add_argument("--out", required=True)
    cascades.set_defaults(func=_cmd_cascades)

    metrics = sub.add_parser("metrics", help="cohort reports from cascades")
    metrics.add_argument("--cascades", required=True)
    metrics.add_argument("--cohorts", required=True)
    metrics.add_argument("--ks")
    metrics.add_argument("--out", required=True)
    metrics.set_defaults(func=_cmd_metrics)

    synth = sub.add_parser("synth", help="seeded synthetic corpus")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--profile", choices=("paper", "small"), default="small")
    synth.add_argument("--roots", type=int, default=50, help="roots per cohort")
    synth.add_argument("--out", required=True)
    synth.set_defaults(func=_cmd_synth)

    report = sub.add_parser("report", help="render PRF table")
    report.add_argument("--prf-csv", dest="prf_csv", required=True)
    report.set_defaults(func=_cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BiascadeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
