"""Partition items by human inter-rater agreement level.

Agreement is exact equality of the raw discrete scores. With two raters an
item is Agree or Disagree; with three, the size of the largest equal-score
group (3 / 2 / all distinct) gives full agreement, partial agreement, or
full disagreement.
"""

from __future__ import annotations

import enum
from collections import Counter
from typing import Mapping

from .errors import InconsistentRaterCountError, UnsupportedRaterCountError


class AgreementLevel(enum.Enum):
    AGREE = "agree"
    DISAGREE = "disagree"
    FULL_AGREEMENT = "full_agreement"
    PARTIAL_AGREEMENT = "partial_agreement"
    FULL_DISAGREEMENT = "full_disagreement"


_TWO_RATER_LEVELS = (AgreementLevel.AGREE, AgreementLevel.DISAGREE)
_THREE_RATER_LEVELS = (
    AgreementLevel.FULL_AGREEMENT,
    AgreementLevel.PARTIAL_AGREEMENT,
    AgreementLevel.FULL_DISAGREEMENT,
)


def levels_for(rater_count: int) -> tuple[AgreementLevel, ...]:
    if rater_count == 2:
        return _TWO_RATER_LEVELS
    if rater_count == 3:
        return _THREE_RATER_LEVELS
    raise UnsupportedRaterCountError(f"supported rater counts are 2 and 3, got {rater_count}")


def partition_by_agreement(
    per_item_human_scores: Mapping[str, Mapping[str, float]],
) -> dict[AgreementLevel, list[str]]:
    """Label every item by its raters' agreement level.

    All items must carry the same rater count (2 or 3). Returns every level
    for that count, including empty ones, with item ids in input order.
    """
    items = list(per_item_human_scores.items())
    if not items:
        raise InconsistentRaterCountError("no items to partition")
    rater_count = len(items[0][1])
    levels = levels_for(rater_count)
    subsets: dict[AgreementLevel, list[str]] = {level: [] for level in levels}
    for item_id, scores in items:
        if len(scores) != rater_count:
            raise InconsistentRaterCountError(
                f"item {item_id!r} has {len(scores)} raters, expected {rater_count}"
            )
        largest_group = Counter(scores.values()).most_common(1)[0][1]
        if rater_count == 2:
            level = AgreementLevel.AGREE if largest_group == 2 else AgreementLevel.DISAGREE
        else:
            level = {
                3: AgreementLevel.FULL_AGREEMENT,
                2: AgreementLevel.PARTIAL_AGREEMENT,
                1: AgreementLevel.FULL_DISAGREEMENT,
            }[largest_group]
        subsets[level].append(item_id)
    return subsets
