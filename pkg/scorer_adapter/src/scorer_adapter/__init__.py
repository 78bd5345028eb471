"""scorer_adapter: fine-tune the transformer claim/bias classifiers and
batch-score tweet corpora into the analytics engine's score-file format.

The adapter shares nothing with the analytics engine but files: it consumes
line-delimited JSON corpora, `text,label` claim CSVs and excerpt/split CSVs,
and emits `tweet_id,p_claim,p_bias` score files plus a JSON recipe manifest
per trained artifact.
"""

__version__ = "0.1.0"

from .recipe import TrainRecipe, bdm_recipe, cdm_recipe, read_manifest  # noqa: F401
from .scoring import score_corpus  # noqa: F401
from .training import train_bdm, train_cdm, train_classifier  # noqa: F401
