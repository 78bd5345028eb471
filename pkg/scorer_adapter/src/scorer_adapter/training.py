"""Two-phase fine-tuning for the claim (CDM) and bias (BDM) classifiers.

Phase 1 freezes the pre-trained encoder and trains only the classification
head (two linear layers) for ``recipe.frozen_epochs``; phase 2 unfreezes
everything and trains ``recipe.full_epochs`` more at a constant learning
rate. The loss is cross-entropy with per-class weights
[class_weight_ratio, 1.0] for labels [0, 1]: the ratio is positives over
negatives, applied to the minority negative class to counter the imbalance
it was derived from.
"""

from __future__ import annotations

import logging
import random
from pathlib import Path
from typing import Sequence

from .data import LabeledText, read_excerpts_with_split, read_labeled_tweets
from .modeling import build_tokenizer_and_model, classifier_head_parameters
from .recipe import TrainRecipe, write_manifest

logger = logging.getLogger(__name__)


def _encode(tokenizer, texts: Sequence[str], max_seq_len: int):
    return tokenizer(
        list(texts),
        padding=True,
        truncation=True,
        max_length=max_seq_len,
        return_tensors="pt",
    )


def _train_loop(model, batches, epochs: int, lr: float, loss_fn, seed: int, phase: str):
    import torch

    if epochs <= 0 or not batches:
        return
    trainable = [p for p in model.parameters() if p.requires_grad]
    optimizer = torch.optim.AdamW(trainable, lr=lr)
    order = list(range(len(batches)))
    rnd = random.Random(seed)
    model.train()
    for epoch in range(epochs):
        rnd.shuffle(order)
        total_loss = 0.0
        for i in order:
            inputs, labels = batches[i]
            optimizer.zero_grad()
            logits = model(**inputs).logits
            loss = loss_fn(logits, labels)
            loss.backward()
            optimizer.step()
            total_loss += float(loss)
        logger.info("%s epoch %d/%d loss %.4f", phase, epoch + 1, epochs, total_loss / len(order))


def train_classifier(
    examples: Sequence[LabeledText],
    recipe: TrainRecipe,
    out_dir: Path | str,
    task: str,
    dataset_sizes: dict | None = None,
) -> Path:
    """Run both phases and save model + tokenizer + manifest under out_dir."""
    import torch

    n_pos = sum(1 for e in examples if e.label == 1)
    n_neg = len(examples) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError(
            f"both classes required for training, got {n_pos} positive / {n_neg} negative"
        )

    torch.manual_seed(recipe.seed)
    texts = [e.text for e in examples]
    tokenizer, model = build_tokenizer_and_model(recipe.base_model, texts, recipe.max_seq_len)

    batches = []
    for start in range(0, len(examples), recipe.batch_size):
        chunk = examples[start : start + recipe.batch_size]
        inputs = _encode(tokenizer, [e.text for e in chunk], recipe.max_seq_len)
        labels = torch.tensor([e.label for e in chunk], dtype=torch.long)
        batches.append((inputs, labels))

    weights = torch.tensor([recipe.class_weight_ratio, 1.0], dtype=torch.float)
    loss_fn = torch.nn.CrossEntropyLoss(weight=weights)

    head = set(classifier_head_parameters(model))
    for name, param in model.named_parameters():
        param.requires_grad = name in head
    _train_loop(
        model, batches, recipe.frozen_epochs, recipe.learning_rate, loss_fn,
        recipe.seed, f"{task} frozen phase",
    )
    for param in model.parameters():
        param.requires_grad = True
    _train_loop(
        model, batches, recipe.full_epochs, recipe.learning_rate, loss_fn,
        recipe.seed + 1, f"{task} full phase",
    )

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    model.eval()
    model.save_pretrained(out)
    tokenizer.save_pretrained(out)
    sizes = dict(dataset_sizes or {})
    sizes.update({"n_examples": len(examples), "n_positive": n_pos, "n_negative": n_neg})
    write_manifest(recipe, task, sizes, out)
    return out


def train_cdm(
    labeled_tweets_path: Path | str, recipe: TrainRecipe, out_dir: Path | str
) -> Path:
    """Fine-tune the claim detector on a `text,label` CSV of tweets."""
    examples = read_labeled_tweets(labeled_tweets_path)
    return train_classifier(examples, recipe, out_dir, task="cdm")


def train_bdm(
    excerpts_path: Path | str,
    split_path: Path | str,
    recipe: TrainRecipe,
    out_dir: Path | str,
) -> Path:
    """Fine-tune the bias detector on stratified excerpt splits (train split)."""
    splits = read_excerpts_with_split(excerpts_path, split_path)
    sizes = {name: len(items) for name, items in splits.items()}
    return train_classifier(
        splits["train"], recipe, out_dir, task="bdm", dataset_sizes=sizes
    )
