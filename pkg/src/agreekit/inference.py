"""Bootstrap significance of tau differences with rank-based intervals.

Paired resampling: each of the n_resamples slots draws one item-index
multiset (with replacement) and applies it to both conditions, so per-slot
differences are well defined on shared items. Interval bounds come from
fixed 1-based ranks on the ascending sorted difference vector: 25 / 975
uncorrected, and the averages of ranks (8, 9) / (991, 992) under the
three-way Bonferroni correction. For n_resamples other than 1000 the ranks
scale proportionally (round(n * k / 1000), clamped into [1, n]) — an
extension; 1000 reproduces the fixed ranks verbatim.

Degenerate resamples (tau undefined because one variable is all-tied in the
resample) are redrawn from the same slot stream, up to 10 draws per slot
(10 * n_resamples overall); exhausting the cap raises
AllResamplesDegenerateError. Slot streams are derived from the seed by the
counter scheme in ``rng``, so results are bit-identical under any schedule.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Sized

import numpy as np

from .errors import AllResamplesDegenerateError, DegenerateVariableError, TooFewItemsError
from .rng import SplitMix64Stream, batch_first_indices, derive_seed

TauFn = Callable[[np.ndarray], float]

# total resample draws allowed per bootstrap, as a multiple of n_resamples
_TOTAL_DRAW_FACTOR = 10


class Correction(enum.Enum):
    NONE95 = "none95"
    BONFERRONI3 = "bonferroni3"


class Direction(enum.Enum):
    A_FAVORED = "a_favored"
    B_FAVORED = "b_favored"
    NO_CALL = "no_call"


@dataclass(frozen=True)
class BootstrapInterval:
    """Rank-based confidence interval over a tau difference."""

    diff_point: float
    lo: float
    hi: float
    n_resamples: int
    correction: Correction
    significant: bool
    direction: Direction
    seed: int
    skipped_resamples: int

    def as_dict(self) -> dict:
        return {
            "diff_point": self.diff_point,
            "lo": self.lo,
            "hi": self.hi,
            "n_resamples": self.n_resamples,
            "correction": self.correction.value,
            "significant": self.significant,
            "direction": self.direction.value,
            "seed": self.seed,
            "skipped_resamples": self.skipped_resamples,
        }


def _proportional_rank(n_resamples: int, rank_at_1000: int) -> int:
    rank = round(n_resamples * rank_at_1000 / 1000)
    return min(max(rank, 1), n_resamples)


def rank_interval(sorted_diffs: Sequence[float], correction: Correction) -> tuple[float, float]:
    """Interval bounds from an ascending difference vector, by fixed ranks."""
    diffs = np.asarray(sorted_diffs, dtype=np.float64)
    n = diffs.shape[0]

    def at(rank_at_1000: int) -> float:
        return float(diffs[_proportional_rank(n, rank_at_1000) - 1])

    if correction is Correction.NONE95:
        return at(25), at(975)
    return (at(8) + at(9)) / 2.0, (at(991) + at(992)) / 2.0


def _as_tau_fn(condition: object) -> TauFn:
    if callable(condition):
        return condition
    tau_of = getattr(condition, "tau_of", None)
    if callable(tau_of):
        return tau_of
    raise TypeError(f"expected a tau callable or an object with .tau_of, got {condition!r}")


def _n_items(paired_data: int | Sized) -> int:
    if isinstance(paired_data, int):
        return paired_data
    return len(paired_data)


def _make_interval(
    diffs: np.ndarray,
    diff_point: float,
    n_resamples: int,
    correction: Correction,
    seed: int,
    skipped: int,
) -> BootstrapInterval:
    diffs = np.sort(diffs)
    lo, hi = rank_interval(diffs, correction)
    significant = lo > 0.0 or hi < 0.0
    if significant and lo > 0.0:
        direction = Direction.A_FAVORED
    elif significant:
        direction = Direction.B_FAVORED
    else:
        direction = Direction.NO_CALL
    return BootstrapInterval(
        diff_point=diff_point,
        lo=lo,
        hi=hi,
        n_resamples=n_resamples,
        correction=correction,
        significant=significant,
        direction=direction,
        seed=seed,
        skipped_resamples=skipped,
    )


def bootstrap_tau_diff(
    paired_data: int | Sized,
    tau_fn_a: TauFn | object,
    tau_fn_b: TauFn | object,
    *,
    n_resamples: int = 1000,
    correction: Correction = Correction.NONE95,
    seed: int,
) -> BootstrapInterval:
    """Bootstrap the difference tau_a - tau_b over paired item resamples.

    The tau callables receive an item-index multiset (int64 array indexing the
    paired data) and return tau for their condition on that multiset, raising
    DegenerateVariableError when undefined. ``TauStatistic`` objects from the
    concordance module are accepted directly.
    """
    n = _n_items(paired_data)
    if n < 2:
        raise TooFewItemsError(f"need at least 2 items to resample, got {n}")
    if n_resamples < 1:
        raise ValueError("n_resamples must be >= 1")
    fn_a = _as_tau_fn(tau_fn_a)
    fn_b = _as_tau_fn(tau_fn_b)

    diff_point = fn_a(np.arange(n, dtype=np.int64)) - fn_b(np.arange(n, dtype=np.int64))

    slot_seeds = np.array(
        [derive_seed(seed, slot) for slot in range(n_resamples)], dtype=np.uint64
    )
    first_draws, draw_ok = batch_first_indices(slot_seeds, n, n)

    diffs = np.empty(n_resamples, dtype=np.float64)
    skipped = 0
    draw_budget = _TOTAL_DRAW_FACTOR * n_resamples - n_resamples  # redraws beyond the first
    for slot in range(n_resamples):
        stream: SplitMix64Stream | None = None
        if draw_ok[slot]:
            idx = first_draws[slot]
        else:
            stream = SplitMix64Stream(int(slot_seeds[slot]))
            idx = stream.draw_indices(n, n)
        while True:
            try:
                diffs[slot] = fn_a(idx) - fn_b(idx)
                break
            except DegenerateVariableError:
                skipped += 1
                if draw_budget == 0:
                    raise AllResamplesDegenerateError(
                        f"exhausted {_TOTAL_DRAW_FACTOR * n_resamples} resample draws "
                        f"with degenerate resamples still outstanding (slot {slot})"
                    ) from None
                draw_budget -= 1
                if stream is None:
                    stream = SplitMix64Stream(int(slot_seeds[slot]))
                    stream.position = n  # the batch draw consumed n outputs
                idx = stream.draw_indices(n, n)

    return _make_interval(diffs, diff_point, n_resamples, correction, seed, skipped)


@dataclass(frozen=True)
class TripleResult:
    """The three pairwise intervals among separate, batch, and edited conditions."""

    edited_vs_separate: BootstrapInterval
    edited_vs_batch: BootstrapInterval
    separate_vs_batch: BootstrapInterval


def compare_triple(
    paired_data: int | Sized,
    tau_fns: Mapping[str, TauFn | object],
    *,
    n_resamples: int = 1000,
    seed: int,
) -> TripleResult:
    """Bonferroni-corrected intervals for each pair among the three conditions.

    tau_fns must be keyed "separate", "batch", "edited"; each pair gets an
    independent seed derived from the master seed (pair counters 0, 1, 2 for
    edited-separate, edited-batch, separate-batch).
    """
    missing = {"separate", "batch", "edited"} - set(tau_fns)
    if missing:
        raise ValueError(f"tau_fns missing conditions: {sorted(missing)}")
    pairs = [("edited", "separate"), ("edited", "batch"), ("separate", "batch")]
    intervals = [
        bootstrap_tau_diff(
            paired_data,
            tau_fns[a],
            tau_fns[b],
            n_resamples=n_resamples,
            correction=Correction.BONFERRONI3,
            seed=derive_seed(seed, pair_index),
        )
        for pair_index, (a, b) in enumerate(pairs)
    ]
    return TripleResult(*intervals)
