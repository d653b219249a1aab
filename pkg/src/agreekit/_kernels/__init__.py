"""Pair-counting backend selection.

Imports the compiled Cython kernels when the extension was built, otherwise
the numpy fallback. Set AGREEKIT_PURE=1 to force the fallback. Both backends
return identical integer counts, so results never depend on the choice.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

if os.environ.get("AGREEKIT_PURE", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "fallback"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernels
        BACKEND = "fallback"

PairCounts = tuple[int, int, int, int, int]


def count_pairs(x: np.ndarray, y: np.ndarray) -> PairCounts:
    """(concordant, discordant, ties x only, ties y only, ties both) over all pairs."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.shape[0] != y.shape[0]:
        raise ValueError(f"expected equal-length 1-d arrays, got {x.shape} and {y.shape}")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise ValueError("scores must be finite")
    nc, nd, tx, ty, tb = _impl.count_pairs(x, y)
    return int(nc), int(nd), int(tx), int(ty), int(tb)


def count_pairs_indexed(codes_x: np.ndarray, codes_y: np.ndarray, idx: np.ndarray) -> PairCounts:
    """Same counts over an index multiset, using precomputed -1/0/+1 code matrices."""
    codes_x = np.ascontiguousarray(codes_x, dtype=np.int8)
    codes_y = np.ascontiguousarray(codes_y, dtype=np.int8)
    idx = np.ascontiguousarray(idx, dtype=np.int64)
    n = codes_x.shape[0]
    if codes_x.shape != (n, n) or codes_y.shape != (n, n):
        raise ValueError(
            f"code matrices must be square and equal-shaped, got {codes_x.shape} and {codes_y.shape}"
        )
    if idx.ndim != 1:
        raise ValueError("index multiset must be 1-d")
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ValueError(f"index out of range for {n} items")
    nc, nd, tx, ty, tb = _impl.count_pairs_indexed(codes_x, codes_y, idx)
    return int(nc), int(nd), int(tx), int(ty), int(tb)
