"""Claim/bias probability scoring.

Scores normally arrive from an external score file (the transformer adapter
writes the same CSV contract); the built-in baseline scorers exist so
desk-scale runs work end to end without any model dependency. Baselines are
deterministic logistic squashes of pinned lexicon features; the weights below
are fixed constants, not trained.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, Protocol, Sequence, Union

from .errors import ScoreFileError
from .ingest import TweetRecord

SCORE_HEADER = ("tweet_id", "p_claim", "p_bias")


class ScoreRecord(NamedTuple):
    tweet_id: str
    p_claim: float
    p_bias: Optional[float] = None


class Scorer(Protocol):
    """Deterministic token scorer; implementations must be stateless."""

    def score(self, tokens: Sequence[str]) -> float: ...


@dataclass
class ScoreLoadResult:
    records: list[ScoreRecord]
    duplicate_count: int


class ScoredTweet(NamedTuple):
    record: TweetRecord
    p_claim: float
    p_bias: Optional[float] = None


@dataclass
class JoinResult:
    scored: list[ScoredTweet]
    unscored: int


def _parse_probability(raw: str, name: str, line_no: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ScoreFileError(f"{name} is not a number: {raw!r}", line_no) from None
    if not (0.0 <= value <= 1.0):
        raise ScoreFileError(f"{name} out of range [0, 1]: {raw}", line_no)
    return value


def load_scores(source: Union[str, Path, Iterable[str]]) -> ScoreLoadResult:
    """Read a `tweet_id,p_claim,p_bias` CSV (p_bias may be empty).

    Duplicate tweet_ids keep the last row (first-seen position) and bump
    `duplicate_count`; out-of-range or non-numeric probabilities raise
    ScoreFileError with the offending line number.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return load_scores(list(handle))

    rows = csv.reader(source)
    try:
        header = next(rows)
    except StopIteration:
        raise ScoreFileError("empty score file: missing header") from None
    if tuple(header) != SCORE_HEADER:
        raise ScoreFileError(f"bad header {header!r}, expected {','.join(SCORE_HEADER)}", 1)

    by_id: dict[str, ScoreRecord] = {}
    duplicates = 0
    for line_no, row in enumerate(rows, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise ScoreFileError(f"expected 3 columns, got {len(row)}", line_no)
        tweet_id, raw_claim, raw_bias = row
        if not tweet_id:
            raise ScoreFileError("empty tweet_id", line_no)
        p_claim = _parse_probability(raw_claim, "p_claim", line_no)
        p_bias = None if raw_bias == "" else _parse_probability(raw_bias, "p_bias", line_no)
        if tweet_id in by_id:
            duplicates += 1
        by_id[tweet_id] = ScoreRecord(tweet_id, p_claim, p_bias)
    return ScoreLoadResult(records=list(by_id.values()), duplicate_count=duplicates)


def write_scores(records: Iterable[ScoreRecord], path: Union[str, Path]) -> None:
    """Write the exact score-file contract consumed by load_scores."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join(SCORE_HEADER) + "\n")
        for rec in records:
            bias = "" if rec.p_bias is None else repr(rec.p_bias)
            handle.write(f"{rec.tweet_id},{rec.p_claim!r},{bias}\n")


# --------------------------------------------------------------------------
# Baseline lexical scorers
# --------------------------------------------------------------------------

CAUSAL_VERBS = frozenset(
    """
    cause causes caused causing leads lead linked links triggers trigger
    triggered prevents prevent prevented cures cure cured induces induce
    increases increase reduces reduce worsens worsen improves improve
    """.split()
)

MEDICAL_TERMS = frozenset(
    """
    depression anxiety autism adhd bipolar schizophrenia ptsd ocd disorder
    disorders disease diseases illness illnesses diagnosis diagnosed symptom
    symptoms treatment therapy medication mental psychiatric suicide insomnia
    trauma dysphoria health
    """.split()
)

GENDERED_TERMS = frozenset(
    """
    man men woman women male males female females boy boys girl girls gender
    gendered genders transgender nonbinary masculine feminine mother mothers
    father fathers mom moms dad dads
    """.split()
)

#: Generalization cue words; percentage tokens count as cues as well.
GENERALIZATION_CUES = frozenset({"all", "only", "every"})


def _sigmoid(x: float) -> float:
    # plain logistic; feature sums here stay far from overflow territory
    return 1.0 / (1.0 + math.exp(-x))


def _has_digit(token: str) -> bool:
    return any(ch.isdigit() for ch in token)


def _is_percentage(token: str) -> bool:
    return ("%" in token and _has_digit(token)) or token in ("percent", "percentage")


@dataclass(frozen=True)
class ClaimWeights:
    intercept: float = -1.5
    numeral: float = 0.9
    percentage: float = 0.7
    causal: float = 1.1
    medical: float = 0.5


@dataclass(frozen=True)
class BiasWeights:
    intercept: float = -1.5
    gendered: float = 0.8
    cue: float = 0.6
    interaction: float = 0.5


CLAIM_WEIGHTS = ClaimWeights()
BIAS_WEIGHTS = BiasWeights()


def baseline_claim_score(tokens: Sequence[str], weights: ClaimWeights = CLAIM_WEIGHTS) -> float:
    """Logistic score from numeral/percentage presence and lexicon hits.

    An empty token list scores sigmoid(weights.intercept), i.e. ~0.1824 with
    the shipped constants. All weights are positive, so adding a causal verb,
    a numeral or a medical term never lowers the score.
    """
    has_numeral = any(_has_digit(t) for t in tokens)
    has_pct = any(_is_percentage(t) for t in tokens)
    n_causal = sum(1 for t in tokens if t in CAUSAL_VERBS)
    n_medical = sum(1 for t in tokens if t in MEDICAL_TERMS)
    z = (
        weights.intercept
        + weights.numeral * has_numeral
        + weights.percentage * has_pct
        + weights.causal * n_causal
        + weights.medical * n_medical
    )
    return _sigmoid(z)


def baseline_bias_score(tokens: Sequence[str], weights: BiasWeights = BIAS_WEIGHTS) -> float:
    """Logistic score from gendered-term hits crossed with generalization cues.

    Cues are the words {all, only, every} plus percentage tokens. Positive
    weights on both counts and their product keep the score monotone in each.
    """
    n_gendered = sum(1 for t in tokens if t in GENDERED_TERMS)
    n_cues = sum(1 for t in tokens if t in GENERALIZATION_CUES or _is_percentage(t))
    z = (
        weights.intercept
        + weights.gendered * n_gendered
        + weights.cue * n_cues
        + weights.interaction * n_gendered * n_cues
    )
    return _sigmoid(z)


class BaselineClaimScorer:
    def score(self, tokens: Sequence[str]) -> float:
        return baseline_claim_score(tokens)


class BaselineBiasScorer:
    def score(self, tokens: Sequence[str]) -> float:
        return baseline_bias_score(tokens)


def join_scores(records: Sequence[TweetRecord], scores: Iterable[ScoreRecord]) -> JoinResult:
    """Inner join on tweet id, preserving record order.

    Output size is |ids(records) ∩ ids(scores)|; tweets without a score are
    only counted, never invented.
    """
    by_id = {s.tweet_id: s for s in scores}
    scored: list[ScoredTweet] = []
    unscored = 0
    for record in records:
        score = by_id.get(record.id)
        if score is None:
            unscored += 1
            continue
        scored.append(ScoredTweet(record, score.p_claim, score.p_bias))
    return JoinResult(scored=scored, unscored=unscored)
