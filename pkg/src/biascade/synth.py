"""Seeded synthetic corpora with exact cascade ground truth.

Each cascade is a Galton-Watson tree: every node draws Poisson(m) children
(truncated at max_depth) and each child's timestamp is its parent's plus an
exponential inter-arrival delay with the cohort's rate (events/minute),
rounded up to at least 1 ms so timestamps strictly increase along edges.

Randomness is pinned for portability: cascade i uses its own Mersenne
Twister stream seeded with splitmix64(seed * 2^20 + i). Within a cascade the
draw order is breadth-first: for each node, first its offspring count
(Knuth's multiplication method, consuming uniforms U until their product
drops to exp(-mean)), then per child one uniform U for the delay
(round(-ln(1-U) * 60000/rate) ms, floored to 1) followed by one uniform for
the author index. Root metadata (Pareto author index, claim score, bias
score, start-time jitter) is drawn before the tree, in that order. Output
ordering is canonical (cascade index, then BFS node order), so equal seeds
give byte-identical corpora.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from .cascade import Cascade, CascadeNode, Edge
from .ingest import RefKind, TweetRecord
from .scoring import ScoreRecord

BIASED = "biased"
UNBIASED = "unbiased"

#: 2023-01-01T00:00:00Z in epoch ms.
_DEFAULT_BASE_MS = 1_672_531_200_000
#: Retweeter author pool; small enough that large corpora repeat some users.
_RT_AUTHOR_POOL = 50_000
#: Pareto shape for root authorship (heavy tail: few users author many roots).
_AUTHOR_PARETO_ALPHA = 1.2

_MASK64 = 0xFFFFFFFFFFFFFFFF


def splitmix64(x: int) -> int:
    """Public-domain splitmix64 hash; derives per-cascade seeds."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class CohortProfile:
    """Generation parameters for one cohort."""

    n_roots: int
    offspring_mean: float
    rate_per_min: float
    bias_range: tuple[float, float]

    def __post_init__(self) -> None:
        if self.n_roots < 0:
            raise ValueError("n_roots must be non-negative")
        if self.offspring_mean < 0:
            raise ValueError("offspring_mean must be >= 0")
        if self.rate_per_min <= 0:
            raise ValueError("rate_per_min must be > 0")
        lo, hi = self.bias_range
        if not (0.0 <= lo < hi <= 1.0):
            raise ValueError(f"bias_range must be an ordered subrange of [0, 1]: {self.bias_range}")


@dataclass(frozen=True)
class GenConfig:
    biased: CohortProfile
    unbiased: CohortProfile
    max_depth: int = 50
    seed: int = 0
    p_claim_range: tuple[float, float] = (0.92, 1.0)
    base_time_ms: int = _DEFAULT_BASE_MS
    root_spacing_ms: int = 3_600_000

    def __post_init__(self) -> None:
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        b_lo, b_hi = self.biased.bias_range
        u_lo, u_hi = self.unbiased.bias_range
        if not (b_hi <= u_lo or u_hi <= b_lo):
            raise ValueError("cohort bias ranges must be disjoint")


@dataclass
class GroundTruth:
    records: list[TweetRecord]
    cascades: list[Cascade]
    scores: list[ScoreRecord]
    root_cohorts: dict[str, str]

    def roots(self) -> list[str]:
        return [c.root_id for c in self.cascades]


_rt_author_cache: list[str] = []


def _rt_authors() -> list[str]:
    if not _rt_author_cache:
        _rt_author_cache.extend(f"ur{i:05d}" for i in range(_RT_AUTHOR_POOL))
    return _rt_author_cache


def _generate_cascade(
    config: GenConfig,
    profile: CohortProfile,
    index: int,
) -> tuple[list[TweetRecord], Cascade, ScoreRecord]:
    rnd = random.Random(splitmix64((config.seed << 20) + index))
    uniform = rnd.random
    log = math.log
    exp_neg_mean = math.exp(-profile.offspring_mean)
    # exponential delay in ms: -log(1-U)/rate minutes, rounded, floor 1 ms
    ms_scale = 60000.0 / profile.rate_per_min
    authors = _rt_authors()
    pool = _RT_AUTHOR_POOL

    id_prefix = f"t{index:06d}x"
    root_id = id_prefix + "0"
    author = f"ua{int(rnd.paretovariate(_AUTHOR_PARETO_ALPHA)) - 1:05d}"
    p_claim = rnd.uniform(*config.p_claim_range)
    p_bias = rnd.uniform(*profile.bias_range)
    root_ts = config.base_time_ms + index * config.root_spacing_ms + int(
        uniform() * config.root_spacing_ms
    )
    root_text = f"synthetic medical claim {index}"
    rt_text = "rt " + root_text

    records = [TweetRecord(root_id, author, root_ts, root_text, RefKind.ORIGINAL)]
    nodes = [CascadeNode(root_id, author, root_ts)]
    edges: list[Edge] = []
    add_record = records.append
    add_node = nodes.append
    add_edge = edges.append
    retweet = RefKind.RETWEET

    n = 0
    queue = deque(((root_id, root_ts, 0),))
    pop = queue.popleft
    push = queue.append
    max_depth = config.max_depth
    while queue:
        parent_id, parent_ts, depth = pop()
        if depth >= max_depth:
            continue
        # Poisson via Knuth's multiplication method
        k = 0
        p = uniform()
        while p > exp_neg_mean:
            k += 1
            p *= uniform()
        child_depth = depth + 1
        for _ in range(k):
            n += 1
            child_id = id_prefix + str(n)
            delay = round(-log(1.0 - uniform()) * ms_scale)
            child_ts = parent_ts + (delay if delay > 0 else 1)
            child_author = authors[int(uniform() * pool)]
            add_record(
                TweetRecord(child_id, child_author, child_ts, rt_text, retweet, parent_id)
            )
            add_node(CascadeNode(child_id, child_author, child_ts))
            add_edge(Edge(child_id, parent_id))
            push((child_id, child_ts, child_depth))

    cascade = Cascade(root_id, nodes, edges)
    score = ScoreRecord(root_id, p_claim, p_bias)
    return records, cascade, score


def generate(config: GenConfig) -> GroundTruth:
    """Generate a corpus plus exact ground-truth forest and score file.

    Deterministic for a fixed seed. Cascade i's records appear before
    cascade i+1's; biased roots occupy indices 0..n_biased-1.
    """
    records: list[TweetRecord] = []
    cascades: list[Cascade] = []
    scores: list[ScoreRecord] = []
    root_cohorts: dict[str, str] = {}

    index = 0
    for cohort, profile in ((BIASED, config.biased), (UNBIASED, config.unbiased)):
        for _ in range(profile.n_roots):
            cascade_records, cascade, score = _generate_cascade(config, profile, index)
            records.extend(cascade_records)
            cascades.append(cascade)
            scores.append(score)
            root_cohorts[cascade.root_id] = cohort
            index += 1
    return GroundTruth(records, cascades, scores, root_cohorts)


#: Published cohort medians for 100 retweets, biased vs unbiased, minutes.
PAPER_MEDIAN_BIASED_MIN = 145.31
PAPER_MEDIAN_UNBIASED_MIN = 822.43
#: Spread-rate ratio implied by those medians (~5.66).
PAPER_RATE_RATIO = PAPER_MEDIAN_UNBIASED_MIN / PAPER_MEDIAN_BIASED_MIN


def paper_profile(seed: int = 0, n_roots_per_cohort: int = 500) -> GenConfig:
    """Preset whose cohorts mirror the published cascade contrasts.

    The biased/unbiased inter-arrival rate ratio equals the published
    822.43/145.31 medians exactly, and the biased cohort gets a slightly
    larger offspring mean so its size distribution dominates.
    """
    rate_biased = 0.5
    return GenConfig(
        biased=CohortProfile(
            n_roots=n_roots_per_cohort,
            offspring_mean=0.95,
            rate_per_min=rate_biased,
            bias_range=(0.70, 0.95),
        ),
        unbiased=CohortProfile(
            n_roots=n_roots_per_cohort,
            offspring_mean=0.85,
            rate_per_min=rate_biased / PAPER_RATE_RATIO,
            bias_range=(0.05, 0.30),
        ),
        max_depth=50,
        seed=seed,
    )


def small_profile(seed: int = 0, n_roots_per_cohort: int = 50) -> GenConfig:
    """Small, fast corpus for demos and smoke tests."""
    config = paper_profile(seed=seed, n_roots_per_cohort=n_roots_per_cohort)
    return GenConfig(
        biased=config.biased,
        unbiased=config.unbiased,
        max_depth=20,
        seed=seed,
    )
