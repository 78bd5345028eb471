"""Shared exception types.

All data-level failures raise a subclass of BiascadeError so the CLI can map
them to a single "data error" exit status.
"""


class BiascadeError(Exception):
    """Base class for all data and contract errors raised by this package."""


class RecordError(BiascadeError):
    """A single input record violates the record contract."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class CorpusError(BiascadeError):
    """Corpus-level failure (abort-mode parse error, unusable input file)."""


class ScoreFileError(BiascadeError):
    """Score or validation file violates its CSV contract."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class InfeasibleFloorError(BiascadeError):
    """No threshold on the precision/recall curve satisfies the recall floor."""


class CohortError(BiascadeError):
    """Cohort split cannot be performed (e.g. fewer than two usable roots)."""


class EdgelistError(BiascadeError):
    """Edgelist construction hit an invariant violation."""


class MiningError(BiascadeError):
    """Hard-negative mining exhausted the candidate pool."""

    def __init__(self, message: str, unmatched: tuple[str, ...] = ()):
        self.unmatched = unmatched
        super().__init__(message)


class StageError(BiascadeError):
    """Wraps a failure with the pipeline stage it occurred in."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")
