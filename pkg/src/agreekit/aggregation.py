"""Pairwise preferences and score consolidation.

Preferences feed the rank-agreement layer: Pareto dominance over analytic
score vectors, instruction-following ratios, and plain scalar comparison all
reduce two items to First / Second / Tie / Incomparable.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Mapping

from .errors import (
    CriterionSetMismatchError,
    EmptyAnswerListError,
    EvenVoterCountError,
    MissingDesignatedRaterError,
    NonBinaryMajorityInputError,
)


class Preference(enum.Enum):
    FIRST = "first"
    SECOND = "second"
    TIE = "tie"
    INCOMPARABLE = "incomparable"

    def flipped(self) -> Preference:
        if self is Preference.FIRST:
            return Preference.SECOND
        if self is Preference.SECOND:
            return Preference.FIRST
        return self


def pareto_compare(a: Mapping[str, float], b: Mapping[str, float]) -> Preference:
    """Dominance over criterion score maps.

    First iff a is at least tied on every criterion and strictly higher on at
    least one; Second symmetrically; Tie iff equal everywhere; Incomparable
    otherwise. Both maps must cover the identical nonempty criterion set.
    """
    if not a or set(a) != set(b):
        raise CriterionSetMismatchError(
            f"criterion sets differ or are empty: {sorted(a)} vs {sorted(b)}"
        )
    a_higher = False
    b_higher = False
    for criterion, a_score in a.items():
        b_score = b[criterion]
        if a_score > b_score:
            a_higher = True
        elif b_score > a_score:
            b_higher = True
    if a_higher and b_higher:
        return Preference.INCOMPARABLE
    if a_higher:
        return Preference.FIRST
    if b_higher:
        return Preference.SECOND
    return Preference.TIE


def follow_ratio(answers: list[int]) -> float:
    """Fraction of correctly followed instructions (answers are 0/1)."""
    if not answers:
        raise EmptyAnswerListError("cannot take a follow ratio of zero answers")
    for answer in answers:
        if answer not in (0, 1):
            raise NonBinaryMajorityInputError(f"answers must be 0 or 1, got {answer!r}")
    return sum(answers) / len(answers)


def scalar_compare(a: float, b: float, tie_epsilon: float = 0.0) -> Preference:
    """Preference from two scalars; never Incomparable.

    Ties are exact by default (tie_epsilon 0); a positive epsilon widens the
    tie band for real-valued scores.
    """
    if tie_epsilon < 0:
        raise ValueError("tie_epsilon must be >= 0")
    if a > b + tie_epsilon:
        return Preference.FIRST
    if b > a + tie_epsilon:
        return Preference.SECOND
    return Preference.TIE


class PolicyKind(enum.Enum):
    AVERAGE_ALL = "average"
    SINGLE_RATER = "single"
    MAJORITY_VOTE = "majority"


@dataclass(frozen=True)
class ConsolidationPolicy:
    """How several raters' scores for one item collapse to a single value."""

    kind: PolicyKind
    rater_id: str | None = None

    def __post_init__(self) -> None:
        if self.kind is PolicyKind.SINGLE_RATER and not self.rater_id:
            raise ValueError("single-rater policy requires a rater_id")
        if self.kind is not PolicyKind.SINGLE_RATER and self.rater_id is not None:
            raise ValueError(f"{self.kind.value} policy takes no rater_id")

    def encode(self) -> str:
        if self.kind is PolicyKind.SINGLE_RATER:
            return f"single:{self.rater_id}"
        return self.kind.value

    @classmethod
    def decode(cls, text: str) -> ConsolidationPolicy:
        if text.startswith("single:"):
            return cls(PolicyKind.SINGLE_RATER, text.split(":", 1)[1])
        return cls(PolicyKind(text))


AVERAGE_ALL = ConsolidationPolicy(PolicyKind.AVERAGE_ALL)
MAJORITY_VOTE = ConsolidationPolicy(PolicyKind.MAJORITY_VOTE)


def single_rater(rater_id: str) -> ConsolidationPolicy:
    return ConsolidationPolicy(PolicyKind.SINGLE_RATER, rater_id)


def consolidate(values: Mapping[str, float], policy: ConsolidationPolicy) -> float:
    """Collapse a rater -> score map to one value.

    Majority vote requires binary values from an odd number of raters, so an
    even split can never arise.
    """
    if not values:
        raise EmptyAnswerListError("cannot consolidate zero scores")
    if policy.kind is PolicyKind.AVERAGE_ALL:
        return sum(values.values()) / len(values)
    if policy.kind is PolicyKind.SINGLE_RATER:
        assert policy.rater_id is not None
        try:
            return values[policy.rater_id]
        except KeyError:
            raise MissingDesignatedRaterError(
                f"designated rater {policy.rater_id!r} absent from {sorted(values)}"
            ) from None
    # majority vote
    if len(values) % 2 == 0:
        raise EvenVoterCountError(f"majority vote needs an odd rater count, got {len(values)}")
    for rater, value in values.items():
        if value not in (0, 1):
            raise NonBinaryMajorityInputError(
                f"majority vote needs binary scores, rater {rater!r} gave {value!r}"
            )
    counts = Counter(values.values())
    return counts.most_common(1)[0][0]
