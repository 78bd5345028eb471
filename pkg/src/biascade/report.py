"""Plain-text report rendering: PRF comparison tables, interaction
breakdowns, and the cohort cascade summary.

Rendering is separated from computation so the same templates can be fed
either pipeline results or externally published values; every number is
formatted to two decimals (percentages from fractional shares), and
per-kind interaction percentages use the shortest exact representation
(57.5%, 26%, ...).
"""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

from .calibration import EvalReport
from .ingest import CorpusStats, RefKind

PRF_COLUMNS = ("Precision", "Recall", "F-1 Score")


def render_prf_table(rows: Sequence[tuple[str, str, float, float, float]]) -> str:
    """Fixed-width table of (model, class, precision, recall, f1) rows."""
    header = ("Model", "Class") + PRF_COLUMNS
    formatted = [
        (model, label, f"{p:.2f}", f"{r:.2f}", f"{f1:.2f}")
        for model, label, p, r, f1 in rows
    ]
    widths = [
        max(len(header[i]), *(len(row[i]) for row in formatted)) if formatted else len(header[i])
        for i in range(5)
    ]
    lines = [
        "  ".join(header[i].ljust(widths[i]) for i in range(5)).rstrip(),
        "  ".join("-" * widths[i] for i in range(5)),
    ]
    for row in formatted:
        lines.append("  ".join(row[i].ljust(widths[i]) for i in range(5)).rstrip())
    return "\n".join(lines) + "\n"


def render_eval_report(report: EvalReport, model: str = "scorer") -> str:
    rows = [
        (model, row.label, row.precision, row.recall, row.f1) for row in report.rows
    ]
    return f"tau={report.tau:g}\n" + render_prf_table(rows)


def render_interaction_breakdown(stats: CorpusStats) -> str:
    """Percentages per interaction type, quotes and mentions reported as one
    bucket (they are kept distinct everywhere else)."""
    if stats.total == 0:
        return "empty corpus: no interactions to report\n"

    def pct(count: int) -> str:
        return f"{count * 100 / stats.total:g}%"

    retweets = stats.counts.get(RefKind.RETWEET, 0)
    replies = stats.counts.get(RefKind.REPLY, 0)
    merged = stats.counts.get(RefKind.QUOTE, 0) + stats.counts.get(RefKind.MENTION, 0)
    originals = stats.counts.get(RefKind.ORIGINAL, 0)
    return (
        f"retweets {pct(retweets)}, replies {pct(replies)}, "
        f"mentions/quotes {pct(merged)}, original tweets {pct(originals)}\n"
    )


def render_cohort_summary(
    mean_size_tweets: Optional[float],
    share_multi: Optional[float],
    velocity_pairs: Mapping[int, tuple[Optional[float], Optional[float]]],
    top_reach: tuple[Optional[int], Optional[int]],
    top_q: float = 0.99,
) -> str:
    """Cascade-comparison summary in the style of the published findings.

    `velocity_pairs` maps k -> (biased median minutes, unbiased median
    minutes); `top_reach` is the (biased, unbiased) size that the top
    (1 - top_q) share of cascades reaches.
    """
    lines: list[str] = []
    if mean_size_tweets is not None:
        lines.append(f"Average cascade size: {mean_size_tweets:.2f} tweets")
    if share_multi is not None:
        lines.append(
            f"Users authoring two or more cascades: {share_multi * 100:.2f}%"
        )
    top_pct = f"{(1 - top_q) * 100:g}"
    biased_reach, unbiased_reach = top_reach
    if biased_reach is not None and unbiased_reach is not None:
        lines.append(
            f"Top {top_pct}% of biased cascades reach at least {biased_reach} users; "
            f"top {top_pct}% of unbiased cascades reach at least {unbiased_reach} users"
        )
    for k in sorted(velocity_pairs):
        biased_med, unbiased_med = velocity_pairs[k]
        if biased_med is None or unbiased_med is None:
            continue
        lines.append(
            f"Median time to {k} retweets: biased {biased_med:.2f} min "
            f"vs unbiased {unbiased_med:.2f} min"
        )
    if not lines:
        return "no cohort cascades to summarize\n"
    return "\n".join(lines) + "\n"


def render_no_roots_summary(total_records: int) -> str:
    return (
        f"no roots: corpus of {total_records} record(s) yielded no original "
        "claims eligible for cohort analysis\n"
    )
