#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the pairwise-distance kernel and the O(P^3) triangle scans / minimax
closure on synthetic clouds. Run after an in-place build:

    python benchmarks/bench_kernels.py [--sizes 64,128,256] [--repeats 3]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from ultracloud import _fallback

try:
    from ultracloud import _kernels
except ImportError:
    _kernels = None


def best_of(repeats, fn, *args):
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_pairwise(sizes, repeats):
    rng = np.random.default_rng(0)
    print("\npairwise_minkowski (alpha=2)")
    print(f"{'P':>6} {'dim':>6} {'numpy':>10} {'cython':>10} {'speedup':>8}")
    for n_pts in sizes:
        x = rng.normal(size=(n_pts, 512))
        t_np = best_of(repeats, _fallback.pairwise_minkowski, x, 2.0)
        if _kernels is None:
            print(f"{n_pts:>6} {512:>6} {t_np * 1e3:>8.2f}ms {'-':>10} {'-':>8}")
            continue
        t_cy = best_of(repeats, _kernels.pairwise_minkowski, x, 2.0)
        print(f"{n_pts:>6} {512:>6} {t_np * 1e3:>8.2f}ms {t_cy * 1e3:>8.2f}ms {t_np / t_cy:>7.1f}x")


def bench_scans(sizes, repeats):
    rng = np.random.default_rng(1)
    for name, np_fn, cy_fn, extra in [
        ("triangle_degree_scan", _fallback.triangle_degree_scan, None, ()),
        ("strong_triangle_scan", _fallback.strong_triangle_scan, None, (1e-9,)),
        ("minimax_closure", _fallback.minimax_closure, None, ()),
    ]:
        if _kernels is not None:
            cy_fn = getattr(_kernels, name)
        print(f"\n{name}")
        print(f"{'P':>6} {'numpy':>10} {'cython':>10} {'speedup':>8}")
        for n_pts in sizes:
            pts = rng.normal(size=(n_pts, 8))
            d = _fallback.pairwise_minkowski(pts, 2.0)
            t_np = best_of(repeats, np_fn, d, *extra)
            if cy_fn is None:
                print(f"{n_pts:>6} {t_np * 1e3:>8.2f}ms {'-':>10} {'-':>8}")
                continue
            t_cy = best_of(repeats, cy_fn, d, *extra)
            print(f"{n_pts:>6} {t_np * 1e3:>8.2f}ms {t_cy * 1e3:>8.2f}ms {t_np / t_cy:>7.1f}x")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="64,128,256,512", help="comma-separated point counts")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    if _kernels is None:
        print("compiled extension not built; timing the numpy fallback only")
    bench_pairwise(sizes, args.repeats)
    bench_scans(sizes, args.repeats)


if __name__ == "__main__":
    main()
