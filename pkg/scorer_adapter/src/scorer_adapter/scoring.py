"""Batch scoring: run the trained classifiers over a corpus and emit the
analytics engine's score-file CSV.

Every tweet gets a claim probability; bias probabilities are computed only
for tweets whose claim probability is strictly above the supplied threshold
(all tweets when no threshold is given). Probabilities are softmax scores
for the positive class, so they are in [0, 1] by construction and the file
is validated again before writing.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence, Union

from .data import read_corpus_texts, write_score_file
from .modeling import load_artifact


def _positive_probabilities(
    tokenizer, model, texts: Sequence[str], batch_size: int = 32, max_seq_len: int = 128
) -> list[float]:
    import torch

    probs: list[float] = []
    with torch.no_grad():
        for start in range(0, len(texts), batch_size):
            chunk = list(texts[start : start + batch_size])
            inputs = tokenizer(
                chunk,
                padding=True,
                truncation=True,
                max_length=max_seq_len,
                return_tensors="pt",
            )
            logits = model(**inputs).logits
            probs.extend(torch.softmax(logits, dim=-1)[:, 1].tolist())
    return probs


def score_corpus(
    cdm_dir: Union[str, Path],
    bdm_dir: Optional[Union[str, Path]],
    corpus_path: Union[str, Path],
    out_path: Union[str, Path],
    tau: Optional[float] = None,
    batch_size: int = 32,
) -> int:
    """Score a corpus; returns the number of rows written.

    Without a BDM artifact every p_bias is left empty; without a tau every
    tweet is bias-scored.
    """
    if tau is not None and not (0.0 <= tau <= 1.0):
        raise ValueError(f"tau must be in [0, 1], got {tau}")
    pairs = read_corpus_texts(corpus_path)
    ids = [tweet_id for tweet_id, _ in pairs]
    texts = [text for _, text in pairs]

    if not pairs:
        write_score_file([], out_path)
        return 0

    cdm_tokenizer, cdm_model = load_artifact(cdm_dir)
    p_claim = _positive_probabilities(cdm_tokenizer, cdm_model, texts, batch_size)

    p_bias: list[Optional[float]] = [None] * len(texts)
    if bdm_dir is not None:
        to_bias = [
            i for i, p in enumerate(p_claim) if tau is None or p > tau
        ]
        if to_bias:
            bdm_tokenizer, bdm_model = load_artifact(bdm_dir)
            bias_scores = _positive_probabilities(
                bdm_tokenizer, bdm_model, [texts[i] for i in to_bias], batch_size
            )
            for i, score in zip(to_bias, bias_scores):
                p_bias[i] = score

    write_score_file(zip(ids, p_claim, p_bias), out_path)
    return len(ids)
