"""Tokenizer/model construction, online or fully offline.

``base_model`` accepts either a Hugging Face model name (requires the hub or
a local cache; e.g. "roberta-base", "distilbert-base-uncased") or one of the
offline presets "tiny:roberta" / "tiny:distilbert", which train a word-level
tokenizer on the task's own texts and randomly initialize a small
transformer. The tiny presets exist so smoke runs and CI work with no
network at all; they are not meant to reproduce published metrics.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

TINY_PREFIX = "tiny:"
_TINY_VOCAB_LIMIT = 4000
_SPECIAL_TOKENS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]"]


def _train_tiny_tokenizer(texts: Sequence[str], max_seq_len: int):
    from tokenizers import Tokenizer, models, pre_tokenizers, trainers
    from transformers import PreTrainedTokenizerFast

    tokenizer = Tokenizer(models.WordLevel(unk_token="[UNK]"))
    tokenizer.pre_tokenizer = pre_tokenizers.Whitespace()
    trainer = trainers.WordLevelTrainer(
        vocab_size=_TINY_VOCAB_LIMIT, special_tokens=_SPECIAL_TOKENS
    )
    tokenizer.train_from_iterator(texts or ["empty"], trainer)
    return PreTrainedTokenizerFast(
        tokenizer_object=tokenizer,
        pad_token="[PAD]",
        unk_token="[UNK]",
        cls_token="[CLS]",
        sep_token="[SEP]",
        model_max_length=max_seq_len,
    )


def _tiny_model(kind: str, vocab_size: int, max_seq_len: int, pad_token_id: int):
    if kind == "roberta":
        from transformers import RobertaConfig, RobertaForSequenceClassification

        config = RobertaConfig(
            vocab_size=vocab_size,
            hidden_size=32,
            num_hidden_layers=2,
            num_attention_heads=2,
            intermediate_size=64,
            max_position_embeddings=max_seq_len + 4,
            num_labels=2,
            pad_token_id=pad_token_id,
        )
        return RobertaForSequenceClassification(config)
    if kind == "distilbert":
        from transformers import DistilBertConfig, DistilBertForSequenceClassification

        config = DistilBertConfig(
            vocab_size=vocab_size,
            dim=32,
            n_layers=2,
            n_heads=2,
            hidden_dim=64,
            max_position_embeddings=max_seq_len + 4,
            num_labels=2,
            pad_token_id=pad_token_id,
        )
        return DistilBertForSequenceClassification(config)
    raise ValueError(f"unknown tiny model kind: {kind!r}")


def build_tokenizer_and_model(base_model: str, train_texts: Sequence[str], max_seq_len: int):
    """Return (tokenizer, model) for a recipe's base_model."""
    if base_model.startswith(TINY_PREFIX):
        kind = base_model[len(TINY_PREFIX):]
        tokenizer = _train_tiny_tokenizer(train_texts, max_seq_len)
        model = _tiny_model(
            kind, tokenizer.vocab_size, max_seq_len, tokenizer.pad_token_id
        )
        return tokenizer, model

    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(base_model)
    model = AutoModelForSequenceClassification.from_pretrained(base_model, num_labels=2)
    return tokenizer, model


def load_artifact(artifact_dir: Path | str):
    """Load a saved (tokenizer, model) pair from a training artifact."""
    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    artifact_dir = str(artifact_dir)
    tokenizer = AutoTokenizer.from_pretrained(artifact_dir)
    model = AutoModelForSequenceClassification.from_pretrained(artifact_dir)
    model.eval()
    return tokenizer, model


def classifier_head_parameters(model) -> list[str]:
    """Names of parameters outside the pre-trained encoder (the
    classification head: two linear layers on these architectures)."""
    prefix = model.base_model_prefix + "."
    return [name for name, _ in model.named_parameters() if not name.startswith(prefix)]
