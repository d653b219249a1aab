"""Example selection and prompt assembly contracts."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agreekit.errors import (
    ConditionBundleMismatchError,
    CriterionSetMismatchError,
    InsufficientPoolError,
    MissingContextBlockError,
    MissingExamplesError,
    NoDominatingExampleError,
)
from agreekit.model import (
    EDITED,
    OVERALL,
    CallStrategy,
    Decomposition,
    ExampleRegime,
    RubricCondition,
    ScaleKind,
    ScoreScale,
    analytic,
    holistic,
)
from agreekit.promptkit import Example, RubricBundle, assemble_prompts, select_examples

SCALE = ScoreScale(1, 6)
BINARY = ScoreScale(0, 1, ScaleKind.BINARY_YES_NO)


def oracle_select(pool, criteria):
    """Reference selection written straight from the rule: high attains every
    per-criterion maximum, low every minimum (distinct from high), medium is
    the remaining example closest to the midpoints, earliest index on ties."""
    maxima = {c: max(e.scores[c] for e in pool) for c in criteria}
    minima = {c: min(e.scores[c] for e in pool) for c in criteria}
    high = None
    for i, e in enumerate(pool):
        if all(e.scores[c] == maxima[c] for c in criteria):
            high = i
            break
    if high is None:
        return None
    low = None
    for i, e in enumerate(pool):
        if i != high and all(e.scores[c] == minima[c] for c in criteria):
            low = i
            break
    if low is None:
        return None
    mid = {c: (maxima[c] + minima[c]) / 2 for c in criteria}
    best = None
    for i, e in enumerate(pool):
        if i in (high, low):
            continue
        dist = sum(abs(e.scores[c] - mid[c]) for c in criteria)
        if best is None or dist < best[0]:
            best = (dist, i)
    return high, best[1], low


def make_pool(score_rows, criteria=("a",)):
    return tuple(
        Example(text=f"essay {i}", scores=dict(zip(criteria, row)))
        for i, row in enumerate(score_rows)
    )


class TestSelectExamples:
    def test_worked_single_criterion(self):
        pool = make_pool([(6,), (1,), (3,), (2,), (4,)])
        high, medium, low = select_examples(pool)
        assert (high.text, medium.text, low.text) == ("essay 0", "essay 2", "essay 1")

    def test_tie_breaks_toward_earliest(self):
        pool = make_pool([(6,), (1,), (4,), (3,), (4,)])
        # midpoint 3.5: essays 2, 3, 4 are all 0.5 away; essay 2 comes first
        _, medium, _ = select_examples(pool)
        assert medium.text == "essay 2"

    def test_multi_criterion_selection(self):
        criteria = ("a", "b")
        pool = make_pool([(6, 5), (1, 1), (4, 3), (2, 4)], criteria)
        high, medium, low = select_examples(pool, criteria)
        assert high.text == "essay 0"
        assert low.text == "essay 1"
        assert medium.text == "essay 2"

    def test_no_dominating_high(self):
        criteria = ("a", "b")
        pool = make_pool([(6, 1), (1, 6), (3, 3)], criteria)
        with pytest.raises(NoDominatingExampleError):
            select_examples(pool, criteria)

    def test_low_must_differ_from_high(self):
        criteria = ("a",)
        pool = make_pool([(4,), (4,), (4,)], criteria)
        # every example attains both extremes; high takes index 0, low index 1
        high, medium, low = select_examples(pool, criteria)
        assert (high.text, low.text, medium.text) == ("essay 0", "essay 1", "essay 2")

    def test_pool_too_small(self):
        with pytest.raises(InsufficientPoolError):
            select_examples(make_pool([(1,), (2,)]))

    def test_inconsistent_pool_criteria(self):
        pool = (
            Example("x", {"a": 1.0}),
            Example("y", {"b": 2.0}),
            Example("z", {"a": 3.0}),
        )
        with pytest.raises(CriterionSetMismatchError):
            select_examples(pool)

    def test_explicit_criteria_missing_from_example(self):
        pool = make_pool([(1,), (2,), (3,)])
        with pytest.raises(CriterionSetMismatchError):
            select_examples(pool, ("a", "zz"))

    @given(
        rows=st.lists(
            st.tuples(st.integers(1, 6), st.integers(1, 6)), min_size=3, max_size=12
        )
    )
    @settings(max_examples=200)
    def test_matches_oracle(self, rows):
        criteria = ("a", "b")
        pool = make_pool(rows, criteria)
        expected = oracle_select(pool, criteria)
        if expected is None:
            with pytest.raises(NoDominatingExampleError):
                select_examples(pool, criteria)
            return
        high, medium, low = select_examples(pool, criteria)
        eh, em, el = expected
        assert (high, medium, low) == (pool[eh], pool[em], pool[el])

    @given(
        rows=st.lists(st.tuples(st.integers(1, 6)), min_size=3, max_size=12)
    )
    @settings(max_examples=200)
    def test_picks_are_distinct_positions(self, rows):
        pool = make_pool(rows)
        try:
            high, medium, low = select_examples(pool)
        except NoDominatingExampleError:
            return
        ids = [id(high), id(medium), id(low)]
        assert len(set(ids)) == 3


def analytic_bundle(k, pool_size=4, context=None):
    criteria = tuple(f"crit{i}" for i in range(k))
    pool = tuple(
        Example(
            text=f"example text {j}",
            scores={c: float(((j + i) % 6) + 1) for i, c in enumerate(criteria)},
        )
        for j in range(pool_size)
    )
    # force a dominating high and low so 3ex selection always succeeds
    top = Example("top example", {c: 6.0 for c in criteria})
    bottom = Example("bottom example", {c: 1.0 for c in criteria})
    return RubricBundle(
        rubric_texts={c: f"how well the response does {c}" for c in criteria},
        criterion_order=criteria,
        scale=SCALE,
        example_pool=(top, bottom) + pool,
        context_block=context,
    )


def holistic_bundle(pool_size=4, context=None):
    pool = tuple(
        Example(f"essay {j}", {OVERALL: float(j % 6 + 1)}) for j in range(pool_size)
    )
    top = Example("top essay", {OVERALL: 6.0})
    bottom = Example("bottom essay", {OVERALL: 1.0})
    return RubricBundle(
        rubric_texts={OVERALL: "overall quality"},
        criterion_order=(OVERALL,),
        scale=SCALE,
        example_pool=(top, bottom) + pool,
        context_block=context,
    )


class TestAssembleContracts:
    @pytest.mark.parametrize("k", range(1, 7))
    def test_separate_emits_one_prompt_per_criterion(self, k):
        bundle = analytic_bundle(k)
        prompts = assemble_prompts(analytic(CallStrategy.SEPARATE), bundle, "the response")
        assert len(prompts) == k
        for criterion, prompt in zip(bundle.criterion_order, prompts):
            assert f"how well the response does {criterion}" in prompt
            others = [c for c in bundle.criterion_order if c != criterion]
            for other in others:
                assert f"how well the response does {other}" not in prompt

    @pytest.mark.parametrize("k", range(1, 7))
    def test_batch_emits_single_prompt_in_order(self, k):
        bundle = analytic_bundle(k)
        prompts = assemble_prompts(analytic(CallStrategy.BATCH), bundle, "the response")
        assert len(prompts) == 1
        positions = [prompts[0].index(f"how well the response does {c}") for c in bundle.criterion_order]
        assert positions == sorted(positions)

    @pytest.mark.parametrize("k", range(1, 7))
    def test_edited_has_context_and_three_examples(self, k):
        bundle = analytic_bundle(k, context="These scores come from an essay test.")
        prompts = assemble_prompts(EDITED, bundle, "the response")
        assert len(prompts) == k
        for prompt in prompts:
            assert prompt.count("Example ") == 3
            assert "These scores come from an essay test." in prompt
            assert prompt.startswith("These scores come from an essay test.")

    def test_holistic_emits_single_prompt(self):
        prompts = assemble_prompts(
            holistic(ExampleRegime.ZERO_EX), holistic_bundle(), "the essay"
        )
        assert len(prompts) == 1
        assert "overall quality" in prompts[0]


class TestPromptLayout:
    def test_section_order_fixed(self):
        bundle = analytic_bundle(2, context="Context first.")
        prompt = assemble_prompts(EDITED, bundle, "response body")[0]
        positions = [
            prompt.index("Context first."),
            prompt.index("Rubric:"),
            prompt.index("Examples:"),
            prompt.index("Response:\nresponse body"),
            prompt.index("Score the response on a scale from 1 to 6"),
        ]
        assert positions == sorted(positions)

    def test_zero_ex_omits_examples_section(self):
        prompt = assemble_prompts(
            analytic(CallStrategy.SEPARATE), analytic_bundle(2), "body"
        )[0]
        assert "Examples:" not in prompt

    def test_full_uses_entire_pool(self):
        bundle = holistic_bundle(pool_size=5)
        prompt = assemble_prompts(holistic(ExampleRegime.FULL), bundle, "essay text")[0]
        assert prompt.count("Example ") == len(bundle.example_pool)

    def test_three_ex_uses_selected_triple(self):
        bundle = holistic_bundle(pool_size=5)
        prompt = assemble_prompts(holistic(ExampleRegime.THREE_EX), bundle, "essay text")[0]
        assert prompt.count("Example ") == 3
        assert "top essay" in prompt and "bottom essay" in prompt

    def test_examples_show_scores_per_criterion(self):
        bundle = analytic_bundle(2)
        prompt = assemble_prompts(
            analytic(CallStrategy.SEPARATE, ExampleRegime.THREE_EX), bundle, "body"
        )[0]
        assert "Score (crit0): 6" in prompt or "Score (crit0):" in prompt

    def test_explanation_rendered_when_present(self):
        pool = (
            Example("great essay", {OVERALL: 6.0}, explanation="flawless structure"),
            Example("poor essay", {OVERALL: 1.0}),
            Example("fine essay", {OVERALL: 3.0}),
        )
        bundle = RubricBundle(
            rubric_texts={OVERALL: "overall quality"},
            criterion_order=(OVERALL,),
            scale=SCALE,
            example_pool=pool,
        )
        prompt = assemble_prompts(holistic(ExampleRegime.FULL), bundle, "essay")[0]
        assert "Explanation: flawless structure" in prompt

    def test_integer_instruction_variants(self):
        separate = assemble_prompts(
            analytic(CallStrategy.SEPARATE), analytic_bundle(2), "b"
        )[0]
        assert separate.endswith("Score the response on a scale from 1 to 6 on the attribute.")
        batch = assemble_prompts(analytic(CallStrategy.BATCH), analytic_bundle(2), "b")[0]
        assert "on each attribute" in batch
        overall = assemble_prompts(
            holistic(ExampleRegime.ZERO_EX), holistic_bundle(), "b"
        )[0]
        assert overall.endswith("Score the response on a scale from 1 to 6.")

    def test_binary_instruction_verbatim(self):
        bundle = RubricBundle(
            rubric_texts={"q1": "Does the response answer in French?"},
            criterion_order=("q1",),
            scale=BINARY,
        )
        prompt = assemble_prompts(analytic(CallStrategy.SEPARATE), bundle, "bonjour")[0]
        assert "answer the following Question with either a YES or NO" in prompt


class TestAssemblyErrors:
    def test_holistic_condition_needs_holistic_bundle(self):
        with pytest.raises(ConditionBundleMismatchError):
            assemble_prompts(holistic(ExampleRegime.ZERO_EX), analytic_bundle(2), "x")

    def test_analytic_condition_needs_analytic_bundle(self):
        with pytest.raises(ConditionBundleMismatchError):
            assemble_prompts(analytic(CallStrategy.SEPARATE), holistic_bundle(), "x")

    def test_edited_requires_context(self):
        with pytest.raises(MissingContextBlockError):
            assemble_prompts(EDITED, analytic_bundle(2, context=None), "x")

    def test_full_requires_nonempty_pool(self):
        bundle = RubricBundle(
            rubric_texts={OVERALL: "quality"}, criterion_order=(OVERALL,), scale=SCALE
        )
        with pytest.raises(MissingExamplesError):
            assemble_prompts(holistic(ExampleRegime.FULL), bundle, "x")

    def test_three_ex_requires_pool_of_three(self):
        bundle = RubricBundle(
            rubric_texts={OVERALL: "quality"},
            criterion_order=(OVERALL,),
            scale=SCALE,
            example_pool=(Example("a", {OVERALL: 1.0}), Example("b", {OVERALL: 6.0})),
        )
        with pytest.raises(MissingExamplesError):
            assemble_prompts(holistic(ExampleRegime.THREE_EX), bundle, "x")


class TestBundleValidation:
    def test_rubric_keys_must_match_order(self):
        with pytest.raises(ValueError):
            RubricBundle(
                rubric_texts={"a": "text"}, criterion_order=("a", "b"), scale=SCALE
            )

    def test_overall_cannot_mix_with_criteria(self):
        with pytest.raises(ValueError):
            RubricBundle(
                rubric_texts={OVERALL: "t", "a": "t"},
                criterion_order=(OVERALL, "a"),
                scale=SCALE,
            )

    def test_duplicate_criteria_rejected(self):
        with pytest.raises(ValueError):
            RubricBundle(
                rubric_texts={"a": "t"}, criterion_order=("a", "a"), scale=SCALE
            )

    def test_pool_must_cover_criteria(self):
        with pytest.raises(ValueError):
            RubricBundle(
                rubric_texts={"a": "t", "b": "t"},
                criterion_order=("a", "b"),
                scale=SCALE,
                example_pool=(Example("x", {"a": 1.0}),),
            )
