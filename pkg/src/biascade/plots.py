"""Static SVG plots mirroring the published figures: authorship, size CCDF,
and velocity. Output is byte-deterministic (fixed hash salt, no embedded
dates) so repeated runs produce identical artifacts.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence, Union

from .cascade import CohortReport

_COHORT_STYLE = {"biased": "tab:red", "unbiased": "tab:blue"}


def _savefig(fig, path: Path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})


def _setup_matplotlib():
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "biascade"
    import matplotlib.pyplot as plt

    return plt


def write_cohort_plots(reports: Sequence[CohortReport], out_dir: Union[str, Path]) -> list[Path]:
    """Write authorship.svg, size_ccdf.svg and velocity.svg into out_dir."""
    plt = _setup_matplotlib()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    fig, ax = plt.subplots(figsize=(5, 4))
    for report in reports:
        if not report.authorship_histogram:
            continue
        xs = sorted(report.authorship_histogram)
        ys = [report.authorship_histogram[x] for x in xs]
        ax.loglog(xs, ys, "o", label=report.label, color=_COHORT_STYLE.get(report.label))
    ax.set_xlabel("cascades per user")
    ax.set_ylabel("number of users")
    ax.set_title("Cascade authorship")
    ax.legend()
    path = out / "authorship.svg"
    _savefig(fig, path)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(5, 4))
    for report in reports:
        if not report.ccdf:
            continue
        xs = [s for s, _ in report.ccdf]
        ys = [p for _, p in report.ccdf]
        ax.loglog(xs, ys, drawstyle="steps-post", label=report.label,
                  color=_COHORT_STYLE.get(report.label))
    ax.set_xlabel("cascade size (unique users)")
    ax.set_ylabel("P(size >= s)")
    ax.set_title("Cascade size comparison")
    ax.legend()
    path = out / "size_ccdf.svg"
    _savefig(fig, path)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(5, 4))
    for report in reports:
        if not report.velocity:
            continue
        xs = sorted(report.velocity)
        ys = [report.velocity[k] for k in xs]
        ax.loglog(xs, ys, "o-", label=report.label, color=_COHORT_STYLE.get(report.label))
    ax.set_xlabel("retweet count k")
    ax.set_ylabel("median minutes to k retweets")
    ax.set_title("Cascade velocity comparison")
    ax.legend()
    path = out / "velocity.svg"
    _savefig(fig, path)
    plt.close(fig)
    written.append(path)
    return written
