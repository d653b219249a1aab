"""Benchmark the compiled pair-counting kernels against the numpy fallback.

Times count_pairs on raw score vectors and count_pairs_indexed on bootstrap
index draws, checks that both backends return identical counts, and prints
a small table with the speedup.

Usage: python3 benchmarks/bench_kernels.py [--sizes 100,300,1000] [--repeats 20]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from agreekit._kernels import _pykernels

try:
    from agreekit._kernels import _ckernels
except ImportError:
    _ckernels = None

from agreekit.concordance import scalar_codes
from agreekit.rng import SplitMix64Stream, derive_seed


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_size(n: int, repeats: int, seed: int) -> list[tuple[str, float, float]]:
    rng = np.random.default_rng(seed)
    x = rng.integers(1, 7, size=n).astype(np.float64)
    y = rng.integers(1, 7, size=n).astype(np.float64)
    codes_x = scalar_codes(x)
    codes_y = scalar_codes(y)
    stream = SplitMix64Stream(derive_seed(seed, n))
    idx = stream.draw_indices(n, n).astype(np.int64)

    rows = []
    for label, args in (
        (f"count_pairs n={n}", (x, y)),
        (f"count_pairs_indexed n={n}", (codes_x, codes_y, idx)),
    ):
        fallback_fn = getattr(_pykernels, label.split()[0])
        pure = _time(lambda: fallback_fn(*args), repeats)
        if _ckernels is None:
            rows.append((label, pure, float("nan")))
            continue
        compiled_fn = getattr(_ckernels, label.split()[0])
        if tuple(compiled_fn(*args)) != tuple(fallback_fn(*args)):
            raise AssertionError(f"backends disagree on {label}")
        compiled = _time(lambda: compiled_fn(*args), repeats)
        rows.append((label, pure, compiled))
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="100,300,1000", help="comma-separated vector lengths")
    parser.add_argument("--repeats", type=int, default=20, help="best-of-N timing")
    parser.add_argument("--seed", type=int, default=1234)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]

    if _ckernels is None:
        print("compiled kernels unavailable; timing the fallback only\n")
    header = f"{'kernel':<28} {'fallback':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        for label, pure, compiled in bench_size(n, args.repeats, args.seed):
            if compiled != compiled:  # NaN: no compiled backend
                print(f"{label:<28} {pure * 1e6:>10.1f}us {'-':>12} {'-':>9}")
            else:
                print(
                    f"{label:<28} {pure * 1e6:>10.1f}us {compiled * 1e6:>10.1f}us "
                    f"{pure / compiled:>8.1f}x"
                )


if __name__ == "__main__":
    main()
