"""Numpy fallback for the pair-counting kernels.

Count-identical to the compiled kernels: every count is an exact integer
derived from the same comparisons, only vectorized instead of looped.
"""

from __future__ import annotations

import numpy as np


def count_pairs(x: np.ndarray, y: np.ndarray) -> tuple[int, int, int, int, int]:
    n = x.shape[0]
    sx = np.sign(x[:, None] - x[None, :]).astype(np.int8)
    sy = np.sign(y[:, None] - y[None, :]).astype(np.int8)
    return _count_from_signs(sx, sy, n)


def count_pairs_indexed(
    codes_x: np.ndarray, codes_y: np.ndarray, idx: np.ndarray
) -> tuple[int, int, int, int, int]:
    m = idx.shape[0]
    grid = np.ix_(idx, idx)
    return _count_from_signs(codes_x[grid], codes_y[grid], m)


def _count_from_signs(sx: np.ndarray, sy: np.ndarray, n: int) -> tuple[int, int, int, int, int]:
    # full symmetric matrices: every unordered pair appears twice, the
    # diagonal contributes n spurious tied-on-both cells
    x_tied = sx == 0
    y_tied = sy == 0
    prod = sx * sy
    nc = int(np.count_nonzero(prod == 1)) // 2
    nd = int(np.count_nonzero(prod == -1)) // 2
    tb = (int(np.count_nonzero(x_tied & y_tied)) - n) // 2
    tx = int(np.count_nonzero(x_tied & ~y_tied)) // 2
    ty = int(np.count_nonzero(~x_tied & y_tied)) // 2
    return nc, nd, tx, ty, tb
