"""biascade: batch analytics for biased-medical-claim cohorts and the
retweet cascades they start.

The package ingests line-delimited tweet corpora, attaches claim/bias
probabilities (external score files or built-in lexical baselines),
calibrates the claim threshold from a labeled validation set, splits
original claims into most/least-biased cohorts, reconstructs their retweet
cascades by BFS, and compares the cohorts on authorship, size and velocity.
A seeded synthetic generator with exact ground truth backs the test suite.
"""

__version__ = "0.1.0"

from .calibration import (  # noqa: F401
    CalibrationResult,
    ConfusionCounts,
    LabeledExample,
    PRPoint,
    class_weight,
    confusion_at,
    eval_report,
    pr_curve,
    prf,
    select_threshold,
)
from .cascade import (  # noqa: F401
    Cascade,
    CascadeMetrics,
    CohortReport,
    Edge,
    build_cohort_report,
    build_edgelist,
    cascades_per_user,
    metrics,
    nearest_rank_quantile,
    reconstruct,
    size_ccdf,
    velocity_curve,
)
from .cohort import (  # noqa: F401
    CohortAssignment,
    CohortSpec,
    decile_split,
    filter_claims,
    select_roots,
)
from .corpusprep import (  # noqa: F401
    Excerpt,
    SplitAssignment,
    mine_hard_negatives,
    segment_sentences,
    stratified_split,
    tfidf_cosine,
)
from .errors import BiascadeError  # noqa: F401
from .ingest import (  # noqa: F401
    CorpusStats,
    ParseResult,
    RefKind,
    TweetRecord,
    corpus_stats,
    parse_corpus,
    preprocess_text,
)
from .pipeline import RunConfig, run_pipeline  # noqa: F401
from .scoring import (  # noqa: F401
    ScoreRecord,
    ScoredTweet,
    baseline_bias_score,
    baseline_claim_score,
    join_scores,
    load_scores,
    write_scores,
)
from .synth import GenConfig, CohortProfile, GroundTruth, generate, paper_profile  # noqa: F401
