"""Paired bootstrap intervals: rank arithmetic, exactness, determinism."""

import random

import numpy as np
import pytest

from agreekit.concordance import TauStatistic
from agreekit.errors import (
    AllResamplesDegenerateError,
    DegenerateVariableError,
    TooFewItemsError,
)
from agreekit.inference import (
    BootstrapInterval,
    Correction,
    Direction,
    bootstrap_tau_diff,
    compare_triple,
    rank_interval,
)
from agreekit.rng import derive_seed


def expected_rank(n, rank_at_1000):
    return min(max(round(n * rank_at_1000 / 1000), 1), n)


class TestRankInterval:
    def test_none95_uses_ranks_25_and_975(self):
        rng = random.Random(31)
        diffs = sorted(rng.uniform(-1, 1) for _ in range(1000))
        lo, hi = rank_interval(diffs, Correction.NONE95)
        assert lo == diffs[24]
        assert hi == diffs[974]

    def test_bonferroni3_averages_ranks_8_9_and_991_992(self):
        rng = random.Random(37)
        diffs = sorted(rng.uniform(-1, 1) for _ in range(1000))
        lo, hi = rank_interval(diffs, Correction.BONFERRONI3)
        assert lo == (diffs[7] + diffs[8]) / 2.0
        assert hi == (diffs[990] + diffs[991]) / 2.0

    def test_injected_integer_vector_picks_exact_positions(self):
        # diffs[i] == i + 1, so the interval bounds read off the rank directly
        diffs = [float(i + 1) for i in range(1000)]
        assert rank_interval(diffs, Correction.NONE95) == (25.0, 975.0)
        assert rank_interval(diffs, Correction.BONFERRONI3) == (8.5, 991.5)

    @pytest.mark.parametrize("n", [100, 200, 500, 750, 2000])
    def test_proportional_ranks_for_other_sizes(self, n):
        diffs = [float(i + 1) for i in range(n)]
        lo, hi = rank_interval(diffs, Correction.NONE95)
        assert lo == float(expected_rank(n, 25))
        assert hi == float(expected_rank(n, 975))
        lo3, hi3 = rank_interval(diffs, Correction.BONFERRONI3)
        assert lo3 == (expected_rank(n, 8) + expected_rank(n, 9)) / 2.0
        assert hi3 == (expected_rank(n, 991) + expected_rank(n, 992)) / 2.0

    def test_tiny_vectors_clamp_to_valid_ranks(self):
        assert rank_interval([4.0], Correction.NONE95) == (4.0, 4.0)
        lo, hi = rank_interval([1.0, 2.0], Correction.BONFERRONI3)
        assert (lo, hi) == (1.0, 2.0)


class TestBootstrapExactness:
    def test_identical_sides_give_zero_interval(self):
        stat = TauStatistic.from_scores([1, 2, 3, 4, 2, 4], [2, 3, 1, 4, 2, 3])
        interval = bootstrap_tau_diff(
            6, stat, stat, n_resamples=1000, correction=Correction.NONE95, seed=42
        )
        assert interval.lo == 0.0 and interval.hi == 0.0
        assert interval.diff_point == 0.0
        assert not interval.significant
        assert interval.direction is Direction.NO_CALL

    def test_opposed_sides_give_two_interval(self):
        scores = list(range(10))
        agree = TauStatistic.from_scores(scores, scores)
        oppose = TauStatistic.from_scores(scores, scores[::-1])
        interval = bootstrap_tau_diff(
            10, agree, oppose, n_resamples=1000, correction=Correction.NONE95, seed=42
        )
        assert interval.lo == 2.0 and interval.hi == 2.0
        assert interval.diff_point == 2.0
        assert interval.significant
        assert interval.direction is Direction.A_FAVORED

    def test_boundary_zero_is_not_significant(self):
        # a diff vector touching zero at the lower rank must not be called
        diffs = np.zeros(1000)
        diffs[500:] = 1.0
        lo, hi = rank_interval(np.sort(diffs), Correction.NONE95)
        assert lo == 0.0
        assert not (lo > 0.0 or hi < 0.0)


class TestBootstrapBehavior:
    def make_stats(self):
        rng = random.Random(3)
        x = [rng.randint(1, 5) for _ in range(30)]
        y = [rng.randint(1, 5) for _ in range(30)]
        z = [rng.randint(1, 5) for _ in range(30)]
        return TauStatistic.from_scores(x, y), TauStatistic.from_scores(x, z)

    def test_same_seed_reproduces_interval(self):
        a, b = self.make_stats()
        first = bootstrap_tau_diff(30, a, b, n_resamples=500, seed=7)
        second = bootstrap_tau_diff(30, a, b, n_resamples=500, seed=7)
        assert first == second

    def test_different_seed_changes_resamples(self):
        a, b = self.make_stats()
        first = bootstrap_tau_diff(30, a, b, n_resamples=500, seed=7)
        second = bootstrap_tau_diff(30, a, b, n_resamples=500, seed=8)
        assert (first.lo, first.hi) != (second.lo, second.hi)

    def test_accepts_plain_callables(self):
        a, b = self.make_stats()
        wrapped = bootstrap_tau_diff(30, a.tau_of, b.tau_of, n_resamples=200, seed=5)
        direct = bootstrap_tau_diff(30, a, b, n_resamples=200, seed=5)
        assert wrapped == direct

    def test_sized_paired_data(self):
        a, b = self.make_stats()
        by_int = bootstrap_tau_diff(30, a, b, n_resamples=200, seed=5)
        by_list = bootstrap_tau_diff(list(range(30)), a, b, n_resamples=200, seed=5)
        assert by_int == by_list

    def test_interval_contains_point_estimate_usually(self):
        a, b = self.make_stats()
        interval = bootstrap_tau_diff(30, a, b, n_resamples=1000, seed=11)
        assert interval.lo <= interval.hi

    def test_too_few_items(self):
        a, b = self.make_stats()
        with pytest.raises(TooFewItemsError):
            bootstrap_tau_diff(1, a, b, seed=1)

    def test_bad_resample_count(self):
        a, b = self.make_stats()
        with pytest.raises(ValueError):
            bootstrap_tau_diff(30, a, b, n_resamples=0, seed=1)

    def test_non_callable_condition_rejected(self):
        with pytest.raises(TypeError):
            bootstrap_tau_diff(30, object(), object(), seed=1)


class TestDegenerateRedraw:
    def test_tiny_n_redraws_and_records_skips(self):
        """At n = 2 half of all resamples are single-item multisets; they must
        be redrawn (not dropped) and counted, and the interval stays exact."""
        stat = TauStatistic.from_scores([1.0, 2.0], [1.0, 2.0])
        interval = bootstrap_tau_diff(2, stat, stat, n_resamples=1000, seed=0)
        assert interval.skipped_resamples > 0
        assert (interval.lo, interval.hi) == (0.0, 0.0)

    def test_redraws_are_deterministic(self):
        stat = TauStatistic.from_scores([1.0, 2.0], [1.0, 3.0])
        first = bootstrap_tau_diff(2, stat, stat, n_resamples=300, seed=9)
        second = bootstrap_tau_diff(2, stat, stat, n_resamples=300, seed=9)
        assert first == second
        assert first.skipped_resamples == second.skipped_resamples

    def test_clean_data_skips_nothing(self):
        rng = random.Random(13)
        x = [rng.randint(1, 5) for _ in range(40)]
        y = [rng.randint(1, 5) for _ in range(40)]
        stat = TauStatistic.from_scores(x, y)
        interval = bootstrap_tau_diff(40, stat, stat, n_resamples=300, seed=2)
        assert interval.skipped_resamples == 0

    def test_budget_exhaustion_raises(self):
        """A tau function that only works on the untouched index set fails
        every resample, so the global redraw budget must run out."""
        n = 8
        full = np.arange(n)
        calls = {"count": 0}

        def picky_tau(idx):
            calls["count"] += 1
            if np.array_equal(np.sort(np.asarray(idx)), full):
                return 1.0
            raise DegenerateVariableError("resample rejected")

        with pytest.raises(AllResamplesDegenerateError):
            bootstrap_tau_diff(n, picky_tau, picky_tau, n_resamples=50, seed=3)
        # the 10x total draw budget bounds the work actually done
        assert calls["count"] <= 10 * 50 + 2


class TestCompareTriple:
    def make_fns(self):
        rng = random.Random(41)
        base = [rng.randint(1, 6) for _ in range(40)]
        noisy = [min(6, v + rng.randint(0, 1)) for v in base]
        scrambled = [base[(i * 13 + 3) % 40] for i in range(40)]
        human = base
        return {
            "separate": TauStatistic.from_scores(human, noisy),
            "batch": TauStatistic.from_scores(human, scrambled),
            "edited": TauStatistic.from_scores(human, base),
        }

    def test_matches_direct_bootstrap_calls(self):
        fns = self.make_fns()
        triple = compare_triple(40, fns, n_resamples=400, seed=77)
        pairs = [("edited", "separate"), ("edited", "batch"), ("separate", "batch")]
        for pair_index, (a, b) in enumerate(pairs):
            direct = bootstrap_tau_diff(
                40,
                fns[a],
                fns[b],
                n_resamples=400,
                correction=Correction.BONFERRONI3,
                seed=derive_seed(77, pair_index),
            )
            got = (triple.edited_vs_separate, triple.edited_vs_batch, triple.separate_vs_batch)[
                pair_index
            ]
            assert got == direct

    def test_all_three_use_bonferroni(self):
        triple = compare_triple(40, self.make_fns(), n_resamples=400, seed=77)
        for interval in (
            triple.edited_vs_separate,
            triple.edited_vs_batch,
            triple.separate_vs_batch,
        ):
            assert interval.correction is Correction.BONFERRONI3

    def test_missing_condition_rejected(self):
        fns = self.make_fns()
        del fns["batch"]
        with pytest.raises(ValueError):
            compare_triple(40, fns, seed=1)


class TestIntervalSerialization:
    def test_as_dict_round_trips_fields(self):
        stat = TauStatistic.from_scores([1, 2, 3, 1], [2, 3, 1, 1])
        interval = bootstrap_tau_diff(4, stat, stat, n_resamples=100, seed=6)
        payload = interval.as_dict()
        assert payload["correction"] == "none95"
        assert payload["direction"] == "no_call"
        assert payload["n_resamples"] == 100
        assert payload["seed"] == 6
        assert isinstance(payload["significant"], bool)
        assert payload["lo"] == interval.lo and payload["hi"] == interval.hi
