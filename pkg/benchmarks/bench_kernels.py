#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel on identical inputs through both implementations,
reporting wall time and the worst output mismatch.  The same selection is
what QWP_NO_NUMBA toggles at import time.

Usage: python benchmarks/bench_kernels.py [--side 256] [--repeat 3]
"""

import argparse
import time

import numpy as np


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--side", type=int, default=256)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    from qwpdn import _kernels_numpy as knp

    try:
        from qwpdn import _kernels_numba as knb
    except ImportError:
        raise SystemExit("numba unavailable; nothing to compare")

    rng = np.random.default_rng(0)
    side = args.side
    img = np.ascontiguousarray(rng.normal(120.0, 30.0, size=(side, side)))

    rows = []

    # local windowed energy (the shrinkage-stage kernel)
    block = np.ascontiguousarray(rng.normal(size=(side // 2, side // 2)))
    knb.local_mean_sq(block, 8)  # JIT warm-up
    t_nb, out_nb = best_of(lambda: knb.local_mean_sq(block, 8), args.repeat)
    t_np, out_np = best_of(lambda: knp.local_mean_sq(block, 8), args.repeat)
    rows.append(("local_mean_sq", t_nb, t_np, np.max(np.abs(out_nb - out_np))))

    # block matching + stacking
    patch, half, num = 6, 12, 70
    keys = np.stack(np.meshgrid(
        np.arange(0, side - patch, 4), np.arange(0, side - patch, 4),
        indexing="ij"), axis=-1).reshape(-1, 2).astype(np.int64)
    knb.collect_stacks(img, keys[:4], patch, half, num)
    t_nb, (s_nb, c_nb) = best_of(
        lambda: knb.collect_stacks(img, keys, patch, half, num), args.repeat)
    t_np, (s_np, c_np) = best_of(
        lambda: knp.collect_stacks(img, keys, patch, half, num), args.repeat)
    match = "exact" if np.array_equal(c_nb, c_np) else "DIFFERS"
    rows.append((f"collect_stacks ({len(keys)} keys)", t_nb, t_np,
                 float(np.max(np.abs(s_nb - s_np)))))

    # singular value shrinkage over the stacks
    stacks = s_nb.copy()
    knb.shrink_stacks(stacks[:4].copy(), 25.0, 2.8, 1e-16)
    t_nb, out_nb = best_of(lambda: knb.shrink_stacks(s_nb.copy(), 25.0, 2.8, 1e-16),
                           args.repeat)
    t_np, out_np = best_of(lambda: knp.shrink_stacks(s_np.copy(), 25.0, 2.8, 1e-16),
                           args.repeat)
    rows.append(("shrink_stacks", t_nb, t_np, float(np.max(np.abs(out_nb - out_np)))))

    # aggregation back into the image
    def agg(mod, stacks_in):
        est = np.zeros_like(img)
        wgt = np.zeros_like(img)
        mod.aggregate_stacks(est, wgt, stacks_in, c_nb, patch)
        return est

    agg(knb, out_nb[:4])
    t_nb, est_nb = best_of(lambda: agg(knb, out_nb), args.repeat)
    t_np, est_np = best_of(lambda: agg(knp, out_nb), args.repeat)
    rows.append(("aggregate_stacks", t_nb, t_np, float(np.max(np.abs(est_nb - est_np)))))

    print(f"{'kernel':38s} {'numba':>9s} {'numpy':>9s} {'speedup':>8s} {'max diff':>10s}")
    for name, t_nb, t_np, diff in rows:
        print(f"{name:38s} {t_nb:8.3f}s {t_np:8.3f}s {t_np / t_nb:7.1f}x {diff:10.2e}")
    print(f"\nblock-match positions: {match}")


if __name__ == "__main__":
    main()
