"""Threshold selection and precision/recall reporting for the claim scorer.

A tweet is predicted positive iff its probability is strictly above the
threshold. The selection rule is: maximize precision subject to recall not
falling below a configurable floor (default 0.10), ties broken by higher
recall, then by lower threshold. Zero-denominator precision/recall are
reported as 0.0 with an "undefined" flag rather than 1.0, so a threshold
with no predicted positives is never rewarded.
"""

from __future__ import annotations

import csv
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence, Union

from .errors import InfeasibleFloorError, ScoreFileError

VALIDATION_HEADER = ("tweet_id", "p_claim", "label")


class LabeledExample(NamedTuple):
    tweet_id: str
    p: float
    y: int


class ConfusionCounts(NamedTuple):
    tp: int
    fp: int
    fn: int
    tn: int


class PRF(NamedTuple):
    precision: float
    recall: float
    f1: float
    precision_undefined: bool = False
    recall_undefined: bool = False


class PRPoint(NamedTuple):
    threshold: float
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class CalibrationResult:
    tau: float
    recall_floor: float
    curve: tuple[PRPoint, ...]


@dataclass(frozen=True)
class ClassMetrics:
    label: str
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvalReport:
    tau: float
    rows: tuple[ClassMetrics, ...]


def confusion_at(examples: Sequence[LabeledExample], tau: float) -> ConfusionCounts:
    """Confusion counts with predicted positive ⇔ p > tau (strict)."""
    if not (0.0 <= tau <= 1.0):
        raise ValueError(f"tau must be in [0, 1], got {tau}")
    tp = fp = fn = tn = 0
    for example in examples:
        predicted = example.p > tau
        if example.y == 1:
            if predicted:
                tp += 1
            else:
                fn += 1
        else:
            if predicted:
                fp += 1
            else:
                tn += 1
    return ConfusionCounts(tp, fp, fn, tn)


def prf(c: ConfusionCounts) -> PRF:
    """Precision/recall/F1 with the zero-denominator convention above."""
    precision_undefined = (c.tp + c.fp) == 0
    recall_undefined = (c.tp + c.fn) == 0
    precision = 0.0 if precision_undefined else c.tp / (c.tp + c.fp)
    recall = 0.0 if recall_undefined else c.tp / (c.tp + c.fn)
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return PRF(precision, recall, f1, precision_undefined, recall_undefined)


def pr_curve(examples: Sequence[LabeledExample]) -> list[PRPoint]:
    """One point per distinct score plus the boundaries 0 and 1, ascending.

    Counts at each threshold agree exactly with confusion_at recomputed
    independently (the sweep below only speeds up the same strict-> rule).
    """
    if not examples:
        raise ValueError("pr_curve requires at least one example")
    thresholds = sorted({e.p for e in examples} | {0.0, 1.0})
    ordered = sorted(examples, key=lambda e: e.p)
    ps = [e.p for e in ordered]
    # suffix_pos[i] = positives among ordered[i:]
    suffix_pos = [0] * (len(ordered) + 1)
    for i in range(len(ordered) - 1, -1, -1):
        suffix_pos[i] = suffix_pos[i + 1] + (1 if ordered[i].y == 1 else 0)
    total = len(ordered)
    total_pos = suffix_pos[0]

    points = []
    for t in thresholds:
        idx = bisect_right(ps, t)  # examples with p > t sit at [idx:]
        tp = suffix_pos[idx]
        fp = (total - idx) - tp
        fn = total_pos - tp
        tn = idx - fn
        metrics = prf(ConfusionCounts(tp, fp, fn, tn))
        points.append(PRPoint(t, metrics.precision, metrics.recall, metrics.f1))
    return points


def select_threshold(curve: Sequence[PRPoint], recall_floor: float) -> CalibrationResult:
    """Pick the max-precision point with recall >= recall_floor.

    Ties go to higher recall, then to the lower threshold. Raises
    InfeasibleFloorError when no point satisfies the floor.
    """
    if not curve:
        raise ValueError("empty curve")
    if not (0.0 <= recall_floor <= 1.0):
        raise ValueError(f"recall_floor must be in [0, 1], got {recall_floor}")
    feasible = [pt for pt in curve if pt.recall >= recall_floor]
    if not feasible:
        raise InfeasibleFloorError(
            f"no threshold reaches recall {recall_floor}; best recall is "
            f"{max(pt.recall for pt in curve)}"
        )
    best = max(feasible, key=lambda pt: (pt.precision, pt.recall, -pt.threshold))
    return CalibrationResult(tau=best.threshold, recall_floor=recall_floor, curve=tuple(curve))


def class_weight(n_pos: int, n_neg: int) -> float:
    """Training weight ratio positives/negatives in double precision.

    Note: one published source states 6977 positive training instances in the
    text but 6,877 in its data table; this function just divides whatever
    counts it is given.
    """
    if n_neg == 0:
        raise ZeroDivisionError("n_neg must be positive to form a weight ratio")
    return n_pos / n_neg


def eval_report(examples: Sequence[LabeledExample], tau: float) -> EvalReport:
    """Per-class PRF rows ("Non-Claim", then "Claim") at the given threshold."""
    c = confusion_at(examples, tau)
    claim = prf(c)
    # Non-Claim treats the negative class as positive: tp'=tn, fp'=fn, fn'=fp.
    non_claim = prf(ConfusionCounts(tp=c.tn, fp=c.fn, fn=c.fp, tn=c.tp))
    return EvalReport(
        tau=tau,
        rows=(
            ClassMetrics("Non-Claim", non_claim.precision, non_claim.recall, non_claim.f1),
            ClassMetrics("Claim", claim.precision, claim.recall, claim.f1),
        ),
    )


# --------------------------------------------------------------------------
# File formats
# --------------------------------------------------------------------------


def read_validation(source: Union[str, Path, Iterable[str]]) -> list[LabeledExample]:
    """Read a `tweet_id,p_claim,label` CSV of labeled examples."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return read_validation(list(handle))
    rows = csv.reader(source)
    try:
        header = next(rows)
    except StopIteration:
        raise ScoreFileError("empty validation file: missing header") from None
    if tuple(header) != VALIDATION_HEADER:
        raise ScoreFileError(
            f"bad header {header!r}, expected {','.join(VALIDATION_HEADER)}", 1
        )
    examples: list[LabeledExample] = []
    for line_no, row in enumerate(rows, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise ScoreFileError(f"expected 3 columns, got {len(row)}", line_no)
        tweet_id, raw_p, raw_y = row
        try:
            p = float(raw_p)
        except ValueError:
            raise ScoreFileError(f"p_claim is not a number: {raw_p!r}", line_no) from None
        if not (0.0 <= p <= 1.0):
            raise ScoreFileError(f"p_claim out of range [0, 1]: {raw_p}", line_no)
        if raw_y not in ("0", "1"):
            raise ScoreFileError(f"label must be 0 or 1, got {raw_y!r}", line_no)
        examples.append(LabeledExample(tweet_id, p, int(raw_y)))
    return examples


def write_calibration(
    result: CalibrationResult,
    doc_path: Union[str, Path],
    curve_path: Union[str, Path],
) -> None:
    Path(doc_path).write_text(
        f"tau={result.tau!r}\nrecall_floor={result.recall_floor!r}\n"
        f"curve_points={len(result.curve)}\n",
        encoding="utf-8",
    )
    with open(curve_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("threshold,precision,recall,f1\n")
        for pt in result.curve:
            handle.write(f"{pt.threshold!r},{pt.precision!r},{pt.recall!r},{pt.f1!r}\n")


def read_calibration(
    doc_path: Union[str, Path], curve_path: Union[str, Path]
) -> CalibrationResult:
    doc: dict[str, str] = {}
    for line in Path(doc_path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            key, _, value = line.partition("=")
            doc[key] = value
    points: list[PRPoint] = []
    with open(curve_path, "r", encoding="utf-8", newline="") as handle:
        rows = csv.reader(handle)
        header = next(rows)
        if tuple(header) != ("threshold", "precision", "recall", "f1"):
            raise ScoreFileError(f"bad curve header {header!r}", 1)
        for row in rows:
            if row:
                points.append(PRPoint(*(float(x) for x in row)))
    return CalibrationResult(
        tau=float(doc["tau"]),
        recall_floor=float(doc["recall_floor"]),
        curve=tuple(points),
    )
