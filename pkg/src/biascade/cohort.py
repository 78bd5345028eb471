"""Cohort selection: apply the calibrated threshold, keep original claims as
cascade roots, and split them into most/least-biased tails.

The split sorts roots once by (p_bias descending, tweet_id ascending); the
biased cohort is the head of that order and the unbiased cohort the tail, so
the two stay disjoint even when every score ties and only the id tie-break
decides membership.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from math import floor
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence, Union

from .errors import CohortError
from .ingest import RefKind
from .scoring import ScoredTweet


@dataclass(frozen=True)
class CohortSpec:
    tau: float
    fraction: float = 0.10

    def __post_init__(self) -> None:
        if not (0.0 <= self.tau <= 1.0):
            raise ValueError(f"tau must be in [0, 1], got {self.tau}")
        if not (0.0 < self.fraction <= 0.5):
            raise ValueError(f"fraction must be in (0, 0.5], got {self.fraction}")


class CohortAssignment(NamedTuple):
    biased_roots: frozenset[str]
    unbiased_roots: frozenset[str]


@dataclass
class DecileSplitResult:
    assignment: CohortAssignment
    cohort_size: int
    missing_bias: int


def filter_claims(scored: Iterable[ScoredTweet], tau: float) -> list[ScoredTweet]:
    """Tweets with p_claim strictly above tau, input order preserved."""
    if not (0.0 <= tau <= 1.0):
        raise ValueError(f"tau must be in [0, 1], got {tau}")
    return [s for s in scored if s.p_claim > tau]


def select_roots(claims: Iterable[ScoredTweet]) -> list[ScoredTweet]:
    """Only completely original claims are eligible cascade roots."""
    return [c for c in claims if c.record.ref_kind is RefKind.ORIGINAL]


def decile_split(roots: Sequence[ScoredTweet], fraction: float = 0.10) -> DecileSplitResult:
    """Split roots into the most- and least-biased tails of size
    max(1, floor(fraction * N)).

    Roots without a p_bias are excluded (counted, not an error). Fewer than
    two usable roots raise CohortError because the cohorts would overlap.
    Results are independent of input order.
    """
    if not (0.0 < fraction <= 0.5):
        raise ValueError(f"fraction must be in (0, 0.5], got {fraction}")
    usable = [r for r in roots if r.p_bias is not None]
    missing = len(roots) - len(usable)
    if len(usable) < 2:
        raise CohortError(
            f"need at least 2 roots with bias scores to form cohorts, got {len(usable)}"
        )
    ordered = sorted(usable, key=lambda r: (-r.p_bias, r.record.id))
    n = max(1, floor(fraction * len(ordered)))
    biased = frozenset(r.record.id for r in ordered[:n])
    unbiased = frozenset(r.record.id for r in ordered[-n:])
    return DecileSplitResult(
        assignment=CohortAssignment(biased_roots=biased, unbiased_roots=unbiased),
        cohort_size=n,
        missing_bias=missing,
    )


def write_cohorts_csv(assignment: CohortAssignment, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("tweet_id,cohort\n")
        for tweet_id in sorted(assignment.biased_roots):
            handle.write(f"{tweet_id},biased\n")
        for tweet_id in sorted(assignment.unbiased_roots):
            handle.write(f"{tweet_id},unbiased\n")


def read_cohorts_csv(source: Union[str, Path, Iterable[str]]) -> CohortAssignment:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return read_cohorts_csv(list(handle))
    rows = csv.reader(source)
    header = next(rows, None)
    if header is None or tuple(header) != ("tweet_id", "cohort"):
        raise CohortError(f"bad cohort header {header!r}")
    biased: set[str] = set()
    unbiased: set[str] = set()
    for line_no, row in enumerate(rows, start=2):
        if not row:
            continue
        if len(row) != 2 or row[1] not in ("biased", "unbiased"):
            raise CohortError(f"line {line_no}: bad cohort row {row!r}")
        (biased if row[1] == "biased" else unbiased).add(row[0])
    overlap = biased & unbiased
    if overlap:
        raise CohortError(f"cohorts overlap on {sorted(overlap)[:5]}")
    return CohortAssignment(frozenset(biased), frozenset(unbiased))
