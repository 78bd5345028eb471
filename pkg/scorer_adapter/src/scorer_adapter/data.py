"""File-format adapters for the corpora this package consumes.

The adapter talks to the analytics engine only through files:

* labeled claim tweets: CSV ``text,label`` (1 = claim);
* bias excerpts: CSV ``id,text,label,category`` plus a split CSV ``id,split``
  with splits train/dev/test;
* tweet corpora: line-delimited JSON with at least ``id`` and ``text``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union


@dataclass(frozen=True)
class LabeledText:
    text: str
    label: int


def read_labeled_tweets(path: Union[str, Path]) -> list[LabeledText]:
    """CSV with header ``text,label``; label must be 0 or 1."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        rows = csv.reader(handle)
        header = next(rows, None)
        if header is None or tuple(header) != ("text", "label"):
            raise ValueError(f"bad labeled-tweets header {header!r}, expected text,label")
        examples = []
        for line_no, row in enumerate(rows, start=2):
            if not row:
                continue
            if len(row) != 2 or row[1] not in ("0", "1"):
                raise ValueError(f"line {line_no}: expected text,label with label in {{0,1}}")
            examples.append(LabeledText(row[0], int(row[1])))
    return examples


def read_excerpts_with_split(
    excerpts_path: Union[str, Path], split_path: Union[str, Path]
) -> dict[str, list[LabeledText]]:
    """Join the excerpt CSV with its split assignment; returns per-split lists."""
    with open(excerpts_path, "r", encoding="utf-8", newline="") as handle:
        rows = csv.reader(handle)
        header = next(rows, None)
        if header is None or tuple(header) != ("id", "text", "label", "category"):
            raise ValueError(f"bad excerpt header {header!r}")
        by_id: dict[str, LabeledText] = {}
        for line_no, row in enumerate(rows, start=2):
            if not row:
                continue
            if len(row) != 4 or row[2] not in ("0", "1"):
                raise ValueError(f"line {line_no}: bad excerpt row")
            by_id[row[0]] = LabeledText(row[1], int(row[2]))

    splits: dict[str, list[LabeledText]] = {"train": [], "dev": [], "test": []}
    with open(split_path, "r", encoding="utf-8", newline="") as handle:
        rows = csv.reader(handle)
        header = next(rows, None)
        if header is None or tuple(header) != ("id", "split"):
            raise ValueError(f"bad split header {header!r}")
        for line_no, row in enumerate(rows, start=2):
            if not row:
                continue
            if len(row) != 2 or row[1] not in splits:
                raise ValueError(f"line {line_no}: bad split row")
            excerpt_id, split_name = row
            if excerpt_id not in by_id:
                raise ValueError(f"line {line_no}: split references unknown id {excerpt_id!r}")
            splits[split_name].append(by_id[excerpt_id])
    return splits


def read_corpus_texts(path: Union[str, Path]) -> list[tuple[str, str]]:
    """(tweet_id, text) pairs from a line-delimited JSON corpus."""
    pairs: list[tuple[str, str]] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            try:
                data = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise ValueError(f"line {line_no}: invalid JSON: {exc.msg}") from exc
            if "id" not in data or "text" not in data:
                raise ValueError(f"line {line_no}: record needs id and text")
            pairs.append((str(data["id"]), str(data["text"])))
    return pairs


SCORE_HEADER = "tweet_id,p_claim,p_bias"


def write_score_file(
    rows: Iterable[tuple[str, float, Union[float, None]]], path: Union[str, Path]
) -> None:
    """Emit the analytics engine's exact score-file contract."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(SCORE_HEADER + "\n")
        for tweet_id, p_claim, p_bias in rows:
            if not (0.0 <= p_claim <= 1.0):
                raise ValueError(f"p_claim out of range for {tweet_id}: {p_claim}")
            if p_bias is not None and not (0.0 <= p_bias <= 1.0):
                raise ValueError(f"p_bias out of range for {tweet_id}: {p_bias}")
            bias = "" if p_bias is None else repr(float(p_bias))
            handle.write(f"{tweet_id},{float(p_claim)!r},{bias}\n")
