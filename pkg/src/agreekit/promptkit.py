"""Prompt assembly for rubric conditions.

A RubricBundle packages everything a condition needs: rubric text per
criterion (or one overall text), an example pool, an optional context
block, and the score scale. ``assemble_prompts`` turns a bundle plus a
condition into the ordered list of prompt strings to send, and
``select_examples`` picks the representative high/medium/low triple used
by the reduced-example conditions.
"""

from __future__ import annotations

import dataclasses
from typing import Mapping, Optional, Sequence

from .errors import (
    ConditionBundleMismatchError,
    CriterionSetMismatchError,
    InsufficientPoolError,
    MissingContextBlockError,
    MissingExamplesError,
    NoDominatingExampleError,
)
from .model import (
    OVERALL,
    CallStrategy,
    Decomposition,
    ExampleRegime,
    RubricCondition,
    ScaleKind,
    ScoreScale,
)

_YES_NO_INSTRUCTION = (
    "Based on the provided Input and Generated Text, answer the following "
    "Question with either a YES or NO choice."
)


@dataclasses.dataclass(frozen=True)
class Example:
    """One scored example: its text, per-criterion scores, optional explanation."""

    text: str
    scores: Mapping[str, float]
    explanation: Optional[str] = None


@dataclasses.dataclass(frozen=True)
class RubricBundle:
    """Rubric texts, example pool, and scale backing one set of prompts.

    A bundle is holistic when criterion_order is exactly (OVERALL,) and
    analytic otherwise. rubric_texts must carry exactly one text per entry
    of criterion_order, and every pooled example must score every criterion.
    """

    rubric_texts: Mapping[str, str]
    criterion_order: tuple[str, ...]
    scale: ScoreScale
    example_pool: tuple[Example, ...] = ()
    context_block: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.criterion_order:
            raise ValueError("criterion_order must be nonempty")
        if len(set(self.criterion_order)) != len(self.criterion_order):
            raise ValueError("criterion_order contains duplicates")
        if OVERALL in self.criterion_order and self.criterion_order != (OVERALL,):
            raise ValueError(f"{OVERALL} cannot be mixed with analytic criteria")
        if set(self.rubric_texts) != set(self.criterion_order):
            raise ValueError("rubric_texts keys must match criterion_order exactly")
        for example in self.example_pool:
            missing = [c for c in self.criterion_order if c not in example.scores]
            if missing:
                raise ValueError(f"example lacks scores for criteria {missing}")

    @property
    def is_holistic(self) -> bool:
        return self.criterion_order == (OVERALL,)


def select_examples(
    pool: Sequence[Example],
    criteria: Optional[Sequence[str]] = None,
) -> tuple[Example, Example, Example]:
    """Pick the (high, medium, low) representative triple from a pool.

    High is an example whose score is the pool maximum on every criterion,
    low the analogous minimum, and medium the remaining example closest in
    total absolute distance to the per-criterion midpoints. Ties break
    toward the earliest pool position and the three picks are distinct.
    """
    if len(pool) < 3:
        raise InsufficientPoolError(f"need at least 3 examples, got {len(pool)}")
    if criteria is None:
        criteria = sorted(pool[0].scores)
        for example in pool[1:]:
            if sorted(example.scores) != criteria:
                raise CriterionSetMismatchError(
                    "pool examples are not all scored on the same criteria"
                )
    else:
        criteria = list(criteria)
        for example in pool:
            missing = [c for c in criteria if c not in example.scores]
            if missing:
                raise CriterionSetMismatchError(f"example lacks scores for {missing}")
    maxima = {c: max(ex.scores[c] for ex in pool) for c in criteria}
    minima = {c: min(ex.scores[c] for ex in pool) for c in criteria}

    high_idx = next(
        (i for i, ex in enumerate(pool) if all(ex.scores[c] == maxima[c] for c in criteria)),
        None,
    )
    if high_idx is None:
        raise NoDominatingExampleError("no example attains the maximum on every criterion")
    low_idx = next(
        (
            i
            for i, ex in enumerate(pool)
            if i != high_idx and all(ex.scores[c] == minima[c] for c in criteria)
        ),
        None,
    )
    if low_idx is None:
        raise NoDominatingExampleError(
            "no example distinct from the high pick attains the minimum on every criterion"
        )

    midpoints = {c: (minima[c] + maxima[c]) / 2.0 for c in criteria}
    rest = [i for i in range(len(pool)) if i not in (high_idx, low_idx)]
    medium_idx = min(
        rest, key=lambda i: (sum(abs(pool[i].scores[c] - midpoints[c]) for c in criteria), i)
    )
    return pool[high_idx], pool[medium_idx], pool[low_idx]


def _format_score(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def _render_example(example: Example, criteria: Sequence[str], index: int) -> str:
    lines = [f"Example {index}:", example.text]
    for criterion in criteria:
        lines.append(f"Score ({criterion}): {_format_score(example.scores[criterion])}")
    if example.explanation is not None:
        lines.append(f"Explanation: {example.explanation}")
    return "\n".join(lines)


def _answer_instruction(
    scale: ScoreScale, strategy: CallStrategy, decomposition: Decomposition
) -> str:
    if scale.kind is ScaleKind.BINARY_YES_NO:
        return _YES_NO_INSTRUCTION
    base = f"Score the response on a scale from {scale.min_score} to {scale.max_score}"
    if decomposition is Decomposition.HOLISTIC:
        return base + "."
    if strategy is CallStrategy.BATCH:
        return base + " on each attribute. Answer with one line per attribute, in the order listed."
    return base + " on the attribute."


def _examples_for(condition: RubricCondition, bundle: RubricBundle) -> tuple[Example, ...]:
    if condition.examples is ExampleRegime.ZERO_EX:
        return ()
    if condition.examples is ExampleRegime.FULL:
        if not bundle.example_pool:
            raise MissingExamplesError("full-example condition with an empty example pool")
        return bundle.example_pool
    if len(bundle.example_pool) < 3:
        raise MissingExamplesError(
            f"three-example condition needs a pool of at least 3, got {len(bundle.example_pool)}"
        )
    return tuple(select_examples(bundle.example_pool, bundle.criterion_order))


def _build_prompt(
    context: Optional[str],
    rubric_section: str,
    examples: tuple[Example, ...],
    shown_criteria: Sequence[str],
    item_text: str,
    instruction: str,
) -> str:
    sections = []
    if context is not None:
        sections.append(context)
    sections.append(rubric_section)
    if examples:
        blocks = [
            _render_example(ex, shown_criteria, i + 1) for i, ex in enumerate(examples)
        ]
        sections.append("Examples:\n" + "\n\n".join(blocks))
    sections.append("Response:\n" + item_text)
    sections.append(instruction)
    return "\n\n".join(sections)


def assemble_prompts(
    condition: RubricCondition, bundle: RubricBundle, item_text: str
) -> list[str]:
    """Render the ordered prompt list for one item under one condition.

    Holistic and batch conditions produce a single prompt; separate and
    edited conditions produce one prompt per criterion in bundle order.
    Every prompt lays its sections out the same way: context, rubric,
    examples, item, answer instruction.
    """
    if bundle.is_holistic != (condition.decomposition is Decomposition.HOLISTIC):
        raise ConditionBundleMismatchError(
            f"bundle criteria {bundle.criterion_order} do not fit a "
            f"{condition.decomposition.value} condition"
        )
    context = bundle.context_block
    if condition.edited and context is None:
        raise MissingContextBlockError("edited condition requires a context block")
    examples = _examples_for(condition, bundle)
    instruction = _answer_instruction(bundle.scale, condition.call_strategy, condition.decomposition)

    if condition.decomposition is Decomposition.HOLISTIC:
        rubric = "Rubric:\n" + bundle.rubric_texts[OVERALL]
        return [
            _build_prompt(context, rubric, examples, (OVERALL,), item_text, instruction)
        ]

    if condition.call_strategy is CallStrategy.BATCH:
        parts = [
            f"{criterion}:\n{bundle.rubric_texts[criterion]}"
            for criterion in bundle.criterion_order
        ]
        rubric = "Rubrics:\n" + "\n\n".join(parts)
        return [
            _build_prompt(
                context, rubric, examples, bundle.criterion_order, item_text, instruction
            )
        ]

    prompts = []
    for criterion in bundle.criterion_order:
        rubric = "Rubric:\n" + bundle.rubric_texts[criterion]
        prompts.append(
            _build_prompt(context, rubric, examples, (criterion,), item_text, instruction)
        )
    return prompts
