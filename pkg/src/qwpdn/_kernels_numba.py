"""Numba implementations of the hot kernels.

Same signatures and semantics as ``_kernels_numpy``; selection happens in
``accel``.  All loops are serial so results are independent of thread count.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def local_mean_sq(values, w):
    """Wrapped-window mean of squares over offsets [-w//2, w//2 - 1]."""
    rows, cols = values.shape
    half = w // 2
    inv = 1.0 / (w * w)
    col_sums = np.empty((rows, cols), dtype=np.float64)
    for k in range(rows):
        for n in range(cols):
            acc = 0.0
            for dk in range(-half, half):
                v = values[(k + dk) % rows, n]
                acc += v * v
            col_sums[k, n] = acc
    out = np.empty((rows, cols), dtype=np.float64)
    for k in range(rows):
        for n in range(cols):
            acc = 0.0
            for dn in range(-half, half):
                acc += col_sums[k, (n + dn) % cols]
            out[k, n] = acc * inv
    return out


@njit(cache=True)
def _match_one(img, ref_r, ref_c, patch, r0, c0, span_r, span_c, num, cols_out):
    d = patch * patch
    nc = span_r * span_c
    dist = np.empty(nc, dtype=np.float64)
    idx = 0
    for a in range(r0, r0 + span_r):
        for b in range(c0, c0 + span_c):
            acc = 0.0
            for i in range(patch):
                for jj in range(patch):
                    diff = img[a + i, b + jj] - img[ref_r + i, ref_c + jj]
                    acc += diff * diff
            dist[idx] = acc
            idx += 1
    order = np.argsort(dist, kind="mergesort")
    cols_out[0, 0] = ref_r
    cols_out[0, 1] = ref_c
    filled = 1
    for oi in range(nc):
        if filled >= num:
            break
        cand = order[oi]
        a = r0 + cand // span_c
        b = c0 + cand % span_c
        if a == ref_r and b == ref_c:
            continue
        cols_out[filled, 0] = a
        cols_out[filled, 1] = b
        filled += 1
    return filled


@njit(cache=True)
def collect_stacks(img, keys, patch, half, num):
    """Block-match every key patch; returns stacked patch matrices and positions."""
    h, w = img.shape
    n_keys = keys.shape[0]
    d = patch * patch
    stacks = np.empty((n_keys, d, num), dtype=np.float64)
    cols = np.empty((n_keys, num, 2), dtype=np.int64)
    max_r = h - patch
    max_c = w - patch
    for t in range(n_keys):
        ref_r = keys[t, 0]
        ref_c = keys[t, 1]
        span_r = min(2 * half, max_r) + 1
        span_c = min(2 * half, max_c) + 1
        r0 = min(max(ref_r - half, 0), max_r - (span_r - 1))
        c0 = min(max(ref_c - half, 0), max_c - (span_c - 1))
        _match_one(img, ref_r, ref_c, patch, r0, c0, span_r, span_c, num, cols[t])
        for k in range(num):
            a = cols[t, k, 0]
            b = cols[t, k, 1]
            pos = 0
            for i in range(patch):
                for jj in range(patch):
                    stacks[t, pos, k] = img[a + i, b + jj]
                    pos += 1
    return stacks, cols


@njit(cache=True)
def shrink_stacks(stacks, sigma, c_weight, eps):
    """Adaptive singular-value soft thresholding of every stack (in place).

    Per-column (patch) means bypass the SVD and are restored afterwards.
    Each singular value is the closed-form root of x = (s - w(x))+ with
    w(x) = c*sqrt(K)*2*sigma^2/x; the noise bulk collapses to zero.
    """
    n_keys, d, num = stacks.shape
    c2 = c_weight * np.sqrt(num) * 2.0 * sigma * sigma
    mean = np.empty(num, dtype=np.float64)
    for t in range(n_keys):
        y = stacks[t]
        for k in range(num):
            acc = 0.0
            for i in range(d):
                acc += y[i, k]
            mean[k] = acc / d
            for i in range(d):
                y[i, k] -= mean[k]
        u, s, vt = np.linalg.svd(y, full_matrices=False)
        for i in range(s.shape[0]):
            disc = s[i] * s[i] - 4.0 * c2
            s[i] = 0.5 * (s[i] + np.sqrt(disc)) if disc > 0.0 else 0.0
        y2 = (u * s) @ vt
        for k in range(num):
            for i in range(d):
                y[i, k] = y2[i, k] + mean[k]
    return stacks


@njit(cache=True)
def aggregate_stacks(est, wgt, stacks, cols, patch):
    """Accumulate patch estimates with uniform weights (sequential, deterministic)."""
    n_keys, d, num = stacks.shape
    for t in range(n_keys):
        for k in range(num):
            a = cols[t, k, 0]
            b = cols[t, k, 1]
            pos = 0
            for i in range(patch):
                for jj in range(patch):
                    est[a + i, b + jj] += stacks[t, pos, k]
                    pos += 1
            for i in range(patch):
                for jj in range(patch):
                    wgt[a + i, b + jj] += 1.0
