"""Tie-aware Kendall rank agreement over scalars and preference relations.

tau = (concordant - discordant) / sqrt((n0 - Tx) (n0 - Ty)) with
n0 = n (n - 1) / 2 and Tx, Ty the pair counts tied on each variable. All
counts are exact integers from the kernel layer, so the statistic is
bit-identical across backends and parallel schedules.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._kernels import count_pairs, count_pairs_indexed
from .aggregation import Preference
from .errors import DegenerateVariableError, LengthMismatchError

PreferenceFn = Callable[[object, object], Preference]


@dataclass(frozen=True)
class TauResult:
    """Tie-aware tau with its pair-count decomposition.

    ties_x / ties_y count pairs tied only on that side; ties_both counts
    pairs tied on both. The five counts partition all n(n-1)/2 pairs.
    """

    tau: float
    concordant: int
    discordant: int
    ties_x: int
    ties_y: int
    ties_both: int
    n_items: int

    @property
    def n_pairs(self) -> int:
        return self.n_items * (self.n_items - 1) // 2


def _assemble(counts: tuple[int, int, int, int, int], n: int) -> TauResult:
    nc, nd, tx, ty, tb = counts
    n0 = n * (n - 1) // 2
    denom_x = n0 - (tx + tb)
    denom_y = n0 - (ty + tb)
    if denom_x == 0 or denom_y == 0:
        side = "x" if denom_x == 0 else "y"
        raise DegenerateVariableError(f"all pairs tied on {side}: tau denominator is zero")
    tau = (nc - nd) / math.sqrt(denom_x * denom_y)
    return TauResult(tau, nc, nd, tx, ty, tb, n)


def tau_scalar(x: Sequence[float], y: Sequence[float]) -> TauResult:
    """Tie-corrected tau between two equal-length score sequences."""
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.shape != ya.shape:
        raise LengthMismatchError(f"length mismatch: {xa.shape[0]} vs {ya.shape[0]}")
    if xa.ndim != 1 or xa.shape[0] < 2:
        raise LengthMismatchError("need two 1-d sequences of length >= 2")
    return _assemble(count_pairs(xa, ya), xa.shape[0])


class IncomparablePolicy(enum.Enum):
    """How incomparable pairs enter the pair counts (tie on that variable)."""

    COUNT_AS_TIE = "count_as_tie"


_CODE = {Preference.FIRST: 1, Preference.SECOND: -1, Preference.TIE: 0}


def preference_codes(
    items: Sequence[object],
    prefer: PreferenceFn,
    policy: IncomparablePolicy = IncomparablePolicy.COUNT_AS_TIE,
) -> np.ndarray:
    """Antisymmetric -1/0/+1 matrix of pairwise preferences over items.

    prefer is consulted once per unordered pair and must be antisymmetric;
    entry [i, j] is +1 when item i is preferred over item j.
    """
    if policy is not IncomparablePolicy.COUNT_AS_TIE:  # pragma: no cover
        raise ValueError(f"unknown incomparable policy: {policy}")
    n = len(items)
    codes = np.zeros((n, n), dtype=np.int8)
    for i in range(n):
        for j in range(i + 1, n):
            pref = prefer(items[i], items[j])
            code = _CODE.get(pref, 0)
            codes[i, j] = code
            codes[j, i] = -code
    return codes


def scalar_codes(values: Sequence[float]) -> np.ndarray:
    """Code matrix from plain scores: exact comparison, entry [i, j] = sign(v_i - v_j)."""
    va = np.asarray(values, dtype=np.float64)
    if va.ndim != 1:
        raise ValueError("expected a 1-d score sequence")
    if not np.isfinite(va).all():
        raise ValueError("scores must be finite")
    return np.sign(va[:, None] - va[None, :]).astype(np.int8)


class TauStatistic:
    """A tau computation frozen over one item set, reusable across resamples.

    Holds the two code matrices; ``result_of``/``tau_of`` count pairs over an
    arbitrary index multiset, which is what the bootstrap feeds it.
    """

    def __init__(self, codes_x: np.ndarray, codes_y: np.ndarray):
        codes_x = np.ascontiguousarray(codes_x, dtype=np.int8)
        codes_y = np.ascontiguousarray(codes_y, dtype=np.int8)
        if codes_x.shape != codes_y.shape or codes_x.ndim != 2:
            raise LengthMismatchError(
                f"code matrices disagree: {codes_x.shape} vs {codes_y.shape}"
            )
        self.codes_x = codes_x
        self.codes_y = codes_y
        self.n_items = codes_x.shape[0]
        self._full_index = np.arange(self.n_items, dtype=np.int64)

    @classmethod
    def from_scores(cls, x: Sequence[float], y: Sequence[float]) -> TauStatistic:
        if len(x) != len(y):
            raise LengthMismatchError(f"length mismatch: {len(x)} vs {len(y)}")
        return cls(scalar_codes(x), scalar_codes(y))

    @classmethod
    def from_preferences(
        cls,
        items: Sequence[object],
        prefer_x: PreferenceFn,
        prefer_y: PreferenceFn,
        policy: IncomparablePolicy = IncomparablePolicy.COUNT_AS_TIE,
    ) -> TauStatistic:
        return cls(
            preference_codes(items, prefer_x, policy),
            preference_codes(items, prefer_y, policy),
        )

    def result_of(self, idx: np.ndarray | None = None) -> TauResult:
        if idx is None:
            idx = self._full_index
        else:
            idx = np.ascontiguousarray(idx, dtype=np.int64)
        if idx.shape[0] < 2:
            raise LengthMismatchError("need at least 2 items for tau")
        counts = count_pairs_indexed(self.codes_x, self.codes_y, idx)
        return _assemble(counts, idx.shape[0])

    def tau_of(self, idx: np.ndarray | None = None) -> float:
        return self.result_of(idx).tau


def tau_preference(
    items: Sequence[object],
    prefer_x: PreferenceFn,
    prefer_y: PreferenceFn,
    incomparable_policy: IncomparablePolicy = IncomparablePolicy.COUNT_AS_TIE,
) -> TauResult:
    """Tau over generalized pairwise preferences.

    A pair is concordant when both relations pick the same strict direction,
    discordant on opposite directions, and tied on a variable whose relation
    returned Tie or Incomparable (incomparable pairs count as ties under the
    only shipped policy). Relations must be antisymmetric.
    """
    if len(items) < 2:
        raise LengthMismatchError("need at least 2 items for tau")
    stat = TauStatistic.from_preferences(items, prefer_x, prefer_y, incomparable_policy)
    return stat.result_of()
