"""Shared vocabulary: scales, rubric conditions, rating records, comparison kinds.

Everything here is an immutable value type. Construction enforces the
invariants that do not need a scale; ``validate_record`` enforces the rest.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import (
    CriterionConditionMismatchError,
    DistributionMismatchError,
    OutOfRangeScoreError,
)

if TYPE_CHECKING:
    from .scoring import ScoreDistribution

#: Distinguished criterion identifier for holistic (single-judgment) ratings.
OVERALL = "OVERALL"

#: Stored value must match the weighted score of an attached distribution to this.
DISTRIBUTION_TOLERANCE = 1e-9


class ScaleKind(enum.Enum):
    INTEGER = "integer"
    BINARY_YES_NO = "binary"


class Decomposition(enum.Enum):
    HOLISTIC = "holistic"
    ANALYTIC = "analytic"


class ExampleRegime(enum.Enum):
    FULL = "full"
    THREE_EX = "3ex"
    ZERO_EX = "0ex"


class CallStrategy(enum.Enum):
    NOT_APPLICABLE = "none"
    SEPARATE = "separate"
    BATCH = "batch"


class RaterKind(enum.Enum):
    HUMAN = "human"
    AUTORATER = "autorater"


@dataclass(frozen=True)
class ScoreScale:
    """Closed integer score range; binary scales are fixed to yes=1 / no=0."""

    min_score: int
    max_score: int
    kind: ScaleKind = ScaleKind.INTEGER

    def __post_init__(self) -> None:
        if self.min_score >= self.max_score:
            raise ValueError(
                f"min_score must be below max_score, got {self.min_score}..{self.max_score}"
            )
        if self.kind is ScaleKind.BINARY_YES_NO and (self.min_score, self.max_score) != (0, 1):
            raise ValueError("binary scales must span exactly 0..1")

    def contains(self, value: float) -> bool:
        return self.min_score <= value <= self.max_score


@dataclass(frozen=True)
class RubricCondition:
    """One cell of the rubric-presentation grid.

    Holistic conditions have no call strategy; the edited condition is pinned
    to analytic / 3ex / separate by construction.
    """

    decomposition: Decomposition
    examples: ExampleRegime
    call_strategy: CallStrategy = CallStrategy.NOT_APPLICABLE
    edited: bool = False

    def __post_init__(self) -> None:
        if (
            self.decomposition is Decomposition.HOLISTIC
            and self.call_strategy is not CallStrategy.NOT_APPLICABLE
        ):
            raise ValueError("holistic conditions take no call strategy")
        if self.edited and (
            self.decomposition is not Decomposition.ANALYTIC
            or self.examples is not ExampleRegime.THREE_EX
            or self.call_strategy is not CallStrategy.SEPARATE
        ):
            raise ValueError("edited conditions are analytic/separate/3ex only")

    def encode(self) -> str:
        """Compact slash-separated form, e.g. ``analytic/separate/3ex/edited``."""
        if self.decomposition is Decomposition.HOLISTIC:
            parts = ["holistic", self.examples.value]
        else:
            parts = ["analytic", self.call_strategy.value, self.examples.value]
        if self.edited:
            parts.append("edited")
        return "/".join(parts)

    @classmethod
    def decode(cls, text: str) -> RubricCondition:
        """Parse the compact form. Raises ValueError on unknown or inconsistent parts."""
        parts = text.strip().split("/")
        edited = False
        if parts and parts[-1] == "edited":
            edited = True
            parts = parts[:-1]
        if not parts:
            raise ValueError(f"empty condition string: {text!r}")
        try:
            decomposition = Decomposition(parts[0])
        except ValueError:
            raise ValueError(f"unknown decomposition {parts[0]!r} in {text!r}") from None
        if decomposition is Decomposition.HOLISTIC:
            if len(parts) != 2:
                raise ValueError(f"holistic conditions are 'holistic/<examples>', got {text!r}")
            call = CallStrategy.NOT_APPLICABLE
            examples_part = parts[1]
        else:
            if len(parts) != 3:
                raise ValueError(
                    f"analytic conditions are 'analytic/<call>/<examples>', got {text!r}"
                )
            try:
                call = CallStrategy(parts[1])
            except ValueError:
                raise ValueError(f"unknown call strategy {parts[1]!r} in {text!r}") from None
            examples_part = parts[2]
        try:
            examples = ExampleRegime(examples_part)
        except ValueError:
            raise ValueError(f"unknown example regime {examples_part!r} in {text!r}") from None
        return cls(decomposition, examples, call, edited)


# shorthand constructors for the conditions the grid actually uses
def holistic(examples: ExampleRegime) -> RubricCondition:
    return RubricCondition(Decomposition.HOLISTIC, examples)


def analytic(call: CallStrategy, examples: ExampleRegime = ExampleRegime.ZERO_EX) -> RubricCondition:
    return RubricCondition(Decomposition.ANALYTIC, examples, call)


EDITED = RubricCondition(
    Decomposition.ANALYTIC, ExampleRegime.THREE_EX, CallStrategy.SEPARATE, edited=True
)


@dataclass(frozen=True)
class ScoreFamily:
    """One of the four families that partition all records: rater kind x decomposition."""

    rater_kind: RaterKind
    decomposition: Decomposition

    def encode(self) -> str:
        return f"{self.rater_kind.value}_{self.decomposition.value}"

    @classmethod
    def decode(cls, text: str) -> ScoreFamily:
        rater, _, decomp = text.partition("_")
        return cls(RaterKind(rater), Decomposition(decomp))


@dataclass(frozen=True)
class RatingRecord:
    """One score by one rater on one item under one condition and criterion."""

    item_id: str
    rater_id: str
    rater_kind: RaterKind
    condition: RubricCondition
    criterion: str
    value: float
    distribution: ScoreDistribution | None = None

    def __post_init__(self) -> None:
        if not self.item_id:
            raise ValueError("item_id must be non-empty")
        if not self.rater_id:
            raise ValueError("rater_id must be non-empty")
        if not self.criterion:
            raise ValueError("criterion must be non-empty")

    @property
    def family(self) -> ScoreFamily:
        return ScoreFamily(self.rater_kind, self.condition.decomposition)

    @property
    def key(self) -> tuple[str, str, str, str]:
        """Uniqueness key within a dataset."""
        return (self.item_id, self.rater_id, self.condition.encode(), self.criterion)


class ComparisonVariant(enum.Enum):
    DELTA_RATER = "delta_rater"
    DELTA_RUBRIC = "delta_rubric"
    DELTA_RATER_RUBRIC = "delta_rater_rubric"


@dataclass(frozen=True)
class ComparisonKind:
    """Which axis (rater, rubric, or both) differs between the two compared sides."""

    variant: ComparisonVariant
    side_a: ScoreFamily
    side_b: ScoreFamily

    def __post_init__(self) -> None:
        raters_differ = self.side_a.rater_kind is not self.side_b.rater_kind
        rubrics_differ = self.side_a.decomposition is not self.side_b.decomposition
        expected = {
            ComparisonVariant.DELTA_RATER: (True, False),
            ComparisonVariant.DELTA_RUBRIC: (False, True),
            ComparisonVariant.DELTA_RATER_RUBRIC: (True, True),
        }[self.variant]
        if (raters_differ, rubrics_differ) != expected:
            raise ValueError(
                f"{self.variant.value} requires rater/rubric difference pattern "
                f"{expected}, got ({raters_differ}, {rubrics_differ})"
            )


def validate_record(record: RatingRecord, scale: ScoreScale) -> RatingRecord:
    """Check every record invariant against the governing scale.

    Returns the record unchanged on success.
    """
    if not scale.contains(record.value):
        raise OutOfRangeScoreError(
            f"value {record.value} outside scale {scale.min_score}..{scale.max_score} "
            f"for item {record.item_id!r}"
        )
    is_holistic = record.condition.decomposition is Decomposition.HOLISTIC
    if is_holistic and record.criterion != OVERALL:
        raise CriterionConditionMismatchError(
            f"holistic record for item {record.item_id!r} must use criterion {OVERALL}, "
            f"got {record.criterion!r}"
        )
    if not is_holistic and record.criterion == OVERALL:
        raise CriterionConditionMismatchError(
            f"analytic record for item {record.item_id!r} may not use criterion {OVERALL}"
        )
    if record.distribution is not None:
        if record.rater_kind is not RaterKind.AUTORATER:
            raise DistributionMismatchError(
                f"human record for item {record.item_id!r} carries a score distribution"
            )
        from .scoring import weighted_score

        expected = weighted_score(record.distribution, scale)
        if abs(expected - record.value) > DISTRIBUTION_TOLERANCE:
            raise DistributionMismatchError(
                f"stored value {record.value} differs from weighted score {expected} "
                f"for item {record.item_id!r}"
            )
    return record
