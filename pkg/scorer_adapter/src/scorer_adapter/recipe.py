"""Training recipes and their manifests.

A recipe fully determines a training run: the manifest written next to each
model artifact contains every field (plus dataset sizes), so two runs with
the same seed and data produce byte-identical manifests. Defaults follow the
published fine-tuning procedure: 20 frozen-phase epochs training only the
two classification layers, then 2 full-model epochs at a constant 1e-5
learning rate, with a 6.93 class-weight ratio. Sequence length, batch size
and the optimizer (AdamW) are not specified by that procedure; the defaults
here are flagged as such in the manifest.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

#: Fields the published procedure does not specify; recorded in the manifest.
UNSPECIFIED_BY_SOURCE = ("max_seq_len", "batch_size", "optimizer")


@dataclass(frozen=True)
class TrainRecipe:
    base_model: str = "roberta-base"
    frozen_epochs: int = 20
    full_epochs: int = 2
    learning_rate: float = 1e-5
    class_weight_ratio: float = 6.93
    max_seq_len: int = 128
    batch_size: int = 16
    seed: int = 0
    optimizer: str = "adamw"

    def __post_init__(self) -> None:
        if self.frozen_epochs < 0 or self.full_epochs < 0:
            raise ValueError("epoch counts must be >= 0")
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be > 0")
        if self.class_weight_ratio < 0:
            raise ValueError("class weight ratio must be >= 0")
        if self.max_seq_len < 8:
            raise ValueError("max_seq_len must be >= 8")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


def cdm_recipe(**overrides) -> TrainRecipe:
    """Claim-detection recipe (RoBERTa base by default)."""
    return TrainRecipe(**{"base_model": "roberta-base", **overrides})


def bdm_recipe(**overrides) -> TrainRecipe:
    """Bias-detection recipe (DistilBERT base by default)."""
    return TrainRecipe(**{"base_model": "distilbert-base-uncased", **overrides})


def write_manifest(
    recipe: TrainRecipe, task: str, dataset_sizes: dict, out_dir: Path
) -> Path:
    manifest = {
        "task": task,
        "recipe": asdict(recipe),
        "dataset_sizes": dataset_sizes,
        "unspecified_by_source": list(UNSPECIFIED_BY_SOURCE),
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def read_manifest(artifact_dir: Path | str) -> dict:
    return json.loads((Path(artifact_dir) / "manifest.json").read_text(encoding="utf-8"))
