"""Shared fixtures and brute-force oracles used across the suite."""

from __future__ import annotations

import math
from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent / "fixtures"
GOLDEN = FIXTURES / "golden"


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN


def brute_force_pair_counts(x, y):
    """O(n^2) tie-aware pair decomposition, written independently of the
    library kernels so it can serve as an oracle."""
    nc = nd = tx = ty = txy = 0
    n = len(x)
    for i in range(n):
        for j in range(i + 1, n):
            dx = (x[i] > x[j]) - (x[i] < x[j])
            dy = (y[i] > y[j]) - (y[i] < y[j])
            if dx == 0 and dy == 0:
                txy += 1
            elif dx == 0:
                tx += 1
            elif dy == 0:
                ty += 1
            elif dx == dy:
                nc += 1
            else:
                nd += 1
    return nc, nd, tx, ty, txy


def brute_force_tau(x, y):
    """Tie-corrected rank correlation straight from the textbook formula."""
    nc, nd, tx, ty, txy = brute_force_pair_counts(x, y)
    n = len(x)
    n0 = n * (n - 1) // 2
    denom = math.sqrt((n0 - (tx + txy)) * (n0 - (ty + txy)))
    if denom == 0.0:
        raise ZeroDivisionError("tau undefined: one variable is all ties")
    return (nc - nd) / denom
