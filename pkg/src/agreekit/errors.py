"""Exception hierarchy.

Two branches matter for the CLI: ConfigError maps to exit code 2, DataError
(and every validation error below it) maps to exit code 1.
"""

from __future__ import annotations


class AgreekitError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(AgreekitError):
    """Invalid experiment configuration (CLI exit code 2)."""


class DataError(AgreekitError):
    """Invalid input data (CLI exit code 1)."""


# record and scale validation


class OutOfRangeScoreError(DataError):
    """Score value lies outside the governing scale."""


class CriterionConditionMismatchError(DataError):
    """OVERALL used with an analytic condition, or a named criterion with a holistic one."""


class DistributionMismatchError(DataError):
    """Stored value disagrees with the weighted score of the attached distribution."""


# score distributions


class EmptyDistributionError(DataError):
    pass


class NonFiniteProbabilityError(DataError):
    """A log probability is NaN or infinite, so no finite probability mass exists."""


class NoValidScoreTokenError(DataError):
    """No answer token parsed to an in-scale score."""


# aggregation


class CriterionSetMismatchError(DataError):
    pass


class EmptyAnswerListError(DataError):
    pass


class MissingDesignatedRaterError(DataError):
    pass


class EvenVoterCountError(DataError):
    pass


class NonBinaryMajorityInputError(DataError):
    pass


# rank agreement


class LengthMismatchError(DataError):
    pass


class DegenerateVariableError(DataError):
    """All pairs tied on one variable: the tie-corrected denominator is zero."""


# bootstrap


class TooFewItemsError(DataError):
    pass


class AllResamplesDegenerateError(DataError):
    """Every attempted resample produced a degenerate variable."""


# stratification


class InconsistentRaterCountError(DataError):
    pass


class UnsupportedRaterCountError(DataError):
    pass


# prompt assembly and providers


class NoDominatingExampleError(DataError):
    """No pool item is maximal (or none minimal) on every criterion at once."""


class InsufficientPoolError(DataError):
    pass


class MissingExamplesError(DataError):
    pass


class MissingContextBlockError(DataError):
    pass


class ConditionBundleMismatchError(DataError):
    pass


class ReplayMissError(DataError):
    """Prompt hash absent from the replay store."""


class ProviderFailureError(AgreekitError):
    """Transport failure or malformed provider response."""


# ingestion and reporting


class ParseError(DataError):
    """Malformed record file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DuplicateRecordError(DataError):
    pass


class SchemaVersionMismatchError(DataError):
    pass


class MissingComparisonError(DataError):
    pass
