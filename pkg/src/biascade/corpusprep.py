"""Bias-corpus preparation: hard-negative mining by textual similarity and a
stratified train/dev/test split.

Similarity is TF-IDF cosine over the same tokenizer the rest of the pipeline
uses, with binary term presence and smoothed IDF (ln((1+N)/(1+df)) + 1).
Binary presence makes two texts with identical token sets score exactly 1,
and the smoothing keeps every term's weight positive so that guarantee holds
even for terms present in every corpus document.
"""

from __future__ import annotations

import csv
import hashlib
import logging
import math
import random
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .errors import MiningError, ScoreFileError
from .ingest import preprocess_text

logger = logging.getLogger(__name__)

EXCERPT_HEADER = ("id", "text", "label", "category")
SPLIT_HEADER = ("id", "split")
SPLIT_NAMES = ("train", "dev", "test")


class Excerpt(NamedTuple):
    id: str
    text: str
    label: int
    category: str = "none"


def validate_excerpt(excerpt: Excerpt) -> None:
    if excerpt.label not in (0, 1):
        raise ValueError(f"label must be 0 or 1, got {excerpt.label!r}")
    if excerpt.label == 1 and excerpt.category == "none":
        raise ValueError(f"biased excerpt {excerpt.id} must name a bias category")


@dataclass
class SplitAssignment:
    """Partition of excerpt ids into train/dev/test."""

    assignment: dict[str, str]

    def ids_for(self, split: str) -> list[str]:
        return sorted(i for i, s in self.assignment.items() if s == split)

    def counts(self) -> dict[str, int]:
        out = {name: 0 for name in SPLIT_NAMES}
        for split in self.assignment.values():
            out[split] += 1
        return out


# --------------------------------------------------------------------------
# TF-IDF cosine similarity
# --------------------------------------------------------------------------


class TfidfSpace:
    """Document-frequency model over a fixed corpus of texts."""

    def __init__(self, corpus: Sequence[str]):
        if not corpus:
            raise ValueError("corpus must be non-empty to define document frequencies")
        self.n_docs = len(corpus)
        df: dict[str, int] = {}
        for text in corpus:
            for token in set(preprocess_text(text)):
                df[token] = df.get(token, 0) + 1
        self._idf = {t: math.log((1 + self.n_docs) / (1 + d)) + 1.0 for t, d in df.items()}
        self._unseen_idf = math.log(1 + self.n_docs) + 1.0

    def idf(self, token: str) -> float:
        return self._idf.get(token, self._unseen_idf)

    def vector(self, text: str) -> dict[str, float]:
        return {t: self.idf(t) for t in set(preprocess_text(text))}

    def cosine(self, a: Union[str, dict], b: Union[str, dict]) -> float:
        va = self.vector(a) if isinstance(a, str) else a
        vb = self.vector(b) if isinstance(b, str) else b
        if not va or not vb:
            return 0.0
        if len(vb) < len(va):
            va, vb = vb, va
        dot = sum(w * vb[t] for t, w in va.items() if t in vb)
        norm_a = math.sqrt(sum(w * w for w in va.values()))
        norm_b = math.sqrt(sum(w * w for w in vb.values()))
        return dot / (norm_a * norm_b)


def tfidf_cosine(a: str, b: str, corpus: Sequence[str]) -> float:
    """Cosine similarity of two texts under corpus-defined IDF weights.

    Symmetric; exactly 1.0 for identical non-empty token sets and 0.0 when
    the vocabularies are disjoint or either text has no tokens.
    """
    space = TfidfSpace(corpus)
    va, vb = space.vector(a), space.vector(b)
    if set(va) == set(vb) and va:
        return 1.0
    return space.cosine(va, vb)


# --------------------------------------------------------------------------
# Hard-negative mining
# --------------------------------------------------------------------------

_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")


def segment_sentences(text: str) -> list[str]:
    """Split prose on '.', '!' or '?' followed by whitespace."""
    return [s.strip() for s in _SENTENCE_SPLIT_RE.split(text) if s.strip()]


def mine_hard_negatives(
    positives: Sequence[Excerpt],
    pool: Sequence[str],
    corpus: Optional[Sequence[str]] = None,
) -> list[Excerpt]:
    """Greedy most-similar pool sentence for each positive, without reuse.

    Positives are processed in id order; verbatim copies of any positive are
    never selected and each pool sentence is used at most once, so the result
    has exactly one negative per positive. Similarity ties go to the earliest
    pool sentence. Raises MiningError naming unmatched positives when the
    pool runs out.
    """
    if corpus is None:
        corpus = [p.text for p in positives] + list(pool)
    space = TfidfSpace(corpus)
    positive_texts = {p.text for p in positives}
    pool_vectors = [space.vector(s) for s in pool]
    available = [i for i, s in enumerate(pool) if s not in positive_texts]

    negatives: list[Excerpt] = []
    remaining = set(available)
    ordered_positives = sorted(positives, key=lambda p: p.id)
    for idx, positive in enumerate(ordered_positives):
        if not remaining:
            unmatched = tuple(p.id for p in ordered_positives[idx:])
            raise MiningError(
                f"candidate pool exhausted; unmatched positives: {', '.join(unmatched)}",
                unmatched=unmatched,
            )
        pv = space.vector(positive.text)
        best_i = -1
        best_sim = -1.0
        for i in sorted(remaining):
            sim = space.cosine(pv, pool_vectors[i])
            if sim > best_sim:
                best_sim = sim
                best_i = i
        remaining.discard(best_i)
        negatives.append(Excerpt(id=f"hn-{positive.id}", text=pool[best_i], label=0))
    return negatives


# --------------------------------------------------------------------------
# Stratified split
# --------------------------------------------------------------------------


def _category_rng(seed: int, category: str) -> random.Random:
    digest = hashlib.sha256(f"{seed}:{category}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def largest_remainder_counts(total: int, ratios: Sequence[float]) -> list[int]:
    """Apportion `total` items to the given ratios; ties go to earlier slots."""
    quotas = [total * r for r in ratios]
    base = [math.floor(q) for q in quotas]
    leftover = total - sum(base)
    order = sorted(range(len(ratios)), key=lambda i: (-(quotas[i] - base[i]), i))
    for i in order[:leftover]:
        base[i] += 1
    return base


def stratified_split(
    excerpts: Sequence[Excerpt],
    ratios: Sequence[float] = (0.8, 0.1, 0.1),
    seed: int = 0,
) -> SplitAssignment:
    """Per-category largest-remainder split into train/dev/test.

    Within each category the order is shuffled by a generator seeded from
    (seed, category), so the assignment is deterministic given the seed.
    Categories with fewer than 3 items go entirely to train with a warning.
    """
    if len(ratios) != 3:
        raise ValueError("ratios must have three entries (train, dev, test)")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {sum(ratios)}")
    ids = [e.id for e in excerpts]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate excerpt ids")
    for excerpt in excerpts:
        validate_excerpt(excerpt)

    by_category: dict[str, list[str]] = {}
    for excerpt in excerpts:
        by_category.setdefault(excerpt.category, []).append(excerpt.id)

    assignment: dict[str, str] = {}
    for category in sorted(by_category):
        members = sorted(by_category[category])
        if len(members) < 3:
            logger.warning(
                "category %r has %d item(s) (<3); assigning all to train",
                category,
                len(members),
            )
            for member in members:
                assignment[member] = "train"
            continue
        _category_rng(seed, category).shuffle(members)
        n_train, n_dev, _ = largest_remainder_counts(len(members), ratios)
        for pos, member in enumerate(members):
            if pos < n_train:
                assignment[member] = "train"
            elif pos < n_train + n_dev:
                assignment[member] = "dev"
            else:
                assignment[member] = "test"
    return SplitAssignment(assignment)


# --------------------------------------------------------------------------
# File formats
# --------------------------------------------------------------------------


def read_excerpts_csv(source: Union[str, Path, Iterable[str]]) -> list[Excerpt]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return read_excerpts_csv(list(handle))
    rows = csv.reader(source)
    header = next(rows, None)
    if header is None or tuple(header) != EXCERPT_HEADER:
        raise ScoreFileError(f"bad excerpt header {header!r}, expected {','.join(EXCERPT_HEADER)}")
    excerpts = []
    for line_no, row in enumerate(rows, start=2):
        if not row:
            continue
        if len(row) != 4:
            raise ScoreFileError(f"expected 4 columns, got {len(row)}", line_no)
        excerpt_id, text, raw_label, category = row
        if raw_label not in ("0", "1"):
            raise ScoreFileError(f"label must be 0 or 1, got {raw_label!r}", line_no)
        excerpt = Excerpt(excerpt_id, text, int(raw_label), category)
        try:
            validate_excerpt(excerpt)
        except ValueError as exc:
            raise ScoreFileError(str(exc), line_no) from None
        excerpts.append(excerpt)
    return excerpts


def write_excerpts_csv(excerpts: Iterable[Excerpt], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(EXCERPT_HEADER)
        for excerpt in excerpts:
            writer.writerow([excerpt.id, excerpt.text, excerpt.label, excerpt.category])


def write_split_csv(split: SplitAssignment, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join(SPLIT_HEADER) + "\n")
        for excerpt_id in sorted(split.assignment):
            handle.write(f"{excerpt_id},{split.assignment[excerpt_id]}\n")


def read_split_csv(path: Union[str, Path]) -> SplitAssignment:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != ",".join(SPLIT_HEADER):
        raise ScoreFileError(f"bad split header in {path}")
    assignment: dict[str, str] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        excerpt_id, _, split_name = line.partition(",")
        if split_name not in SPLIT_NAMES:
            raise ScoreFileError(f"unknown split {split_name!r}", line_no)
        assignment[excerpt_id] = split_name
    return SplitAssignment(assignment)
