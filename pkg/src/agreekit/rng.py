"""Deterministic counter-based randomness for resampling.

Everything is built on the SplitMix64 output function: output k of a stream
seeded with s is mix64(s + (k + 1) * GOLDEN) mod 2^64. Streams are therefore
pure functions of (seed, k), independent of numpy's generators, and identical
across backends, platforms, and thread schedules.

Seed chaining: derive_seed(master, c1, c2, ...) walks
s_0 = mix64(master + GOLDEN), s_{i+1} = mix64(s_i + GOLDEN + c_i). The
pipeline derives one seed per table cell from (block, row, subset, pair)
counters and the bootstrap derives one stream per resample slot, so results
never depend on evaluation order.

Index draws use rejection sampling (accept u < 2^64 - 2^64 mod n) to stay
exactly uniform over [0, n).
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(value: int) -> int:
    """SplitMix64 finalizer (a bijection on 64-bit integers)."""
    z = value & MASK64
    z = (z ^ (z >> 30)) * _M1 & MASK64
    z = (z ^ (z >> 27)) * _M2 & MASK64
    return z ^ (z >> 31)


def _mix64_np(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_M1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def derive_seed(master: int, *path: int) -> int:
    """Derive a child seed from a master seed and a counter path."""
    state = mix64((master + GOLDEN) & MASK64)
    for component in path:
        state = mix64((state + GOLDEN + component) & MASK64)
    return state


def _acceptance_threshold(n: int) -> int:
    # largest multiple of n representable in 64 bits; draws >= this are rejected
    return ((1 << 64) // n) * n


class SplitMix64Stream:
    """One output stream; tracks how many raw outputs it has consumed."""

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self.position = 0

    def _outputs(self, count: int) -> np.ndarray:
        ks = np.arange(self.position + 1, self.position + count + 1, dtype=np.uint64)
        self.position += count
        return _mix64_np(np.uint64(self.seed) + ks * np.uint64(GOLDEN))

    def draw_indices(self, n_items: int, count: int) -> np.ndarray:
        """Next `count` uniform indices in [0, n_items), in stream order.

        The stream position ends directly after the raw output that produced
        the final accepted index, as if outputs had been consumed one by one.
        """
        if n_items <= 0:
            raise ValueError("n_items must be positive")
        threshold = np.uint64(_acceptance_threshold(n_items) - 1)
        accepted: list[np.ndarray] = []
        have = 0
        while have < count:
            need = count - have
            start = self.position
            raw = self._outputs(need + 8)
            ok_at = np.nonzero(raw <= threshold)[0]
            if ok_at.shape[0] >= need:
                self.position = start + int(ok_at[need - 1]) + 1
                good = raw[ok_at[:need]]
            else:
                good = raw[ok_at]
            accepted.append(good)
            have += good.shape[0]
        draws = np.concatenate(accepted) if len(accepted) > 1 else accepted[0]
        return (draws % np.uint64(n_items)).astype(np.int64)


def batch_first_indices(
    seeds: np.ndarray, n_items: int, count: int
) -> tuple[np.ndarray, np.ndarray]:
    """First `count` indices of many streams at once, where no rejection occurred.

    Returns (indices of shape (len(seeds), count), ok mask). Rows flagged not-ok
    hit a rejected draw (probability ~ 2^-64 per draw for small n) and must be
    recomputed with a per-slot SplitMix64Stream.
    """
    seeds = np.asarray(seeds, dtype=np.uint64)
    ks = np.arange(1, count + 1, dtype=np.uint64)
    raw = _mix64_np(seeds[:, None] + ks[None, :] * np.uint64(GOLDEN))
    threshold = np.uint64(_acceptance_threshold(n_items) - 1)
    ok = (raw <= threshold).all(axis=1)
    return (raw % np.uint64(n_items)).astype(np.int64), ok
