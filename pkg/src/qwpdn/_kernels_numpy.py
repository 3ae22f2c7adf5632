"""Pure-numpy fallback implementations of the hot kernels.

Selected by ``accel`` when numba is unavailable or disabled via the
``QWP_NO_NUMBA`` environment variable.  Semantics match ``_kernels_numba``;
small floating-point differences are possible because numpy sums pairwise.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def local_mean_sq(values, w):
    """Wrapped-window mean of squares over offsets [-w//2, w//2 - 1]."""
    sq = values * values
    half = w // 2
    acc_rows = np.zeros_like(sq)
    for dk in range(-half, half):
        acc_rows += np.roll(sq, -dk, axis=0)
    out = np.zeros_like(sq)
    for dn in range(-half, half):
        out += np.roll(acc_rows, -dn, axis=1)
    return out / float(w * w)


def collect_stacks(img, keys, patch, half, num):
    """Block-match every key patch; returns stacked patch matrices and positions."""
    h, w = img.shape
    n_keys = keys.shape[0]
    d = patch * patch
    view = sliding_window_view(img, (patch, patch))
    flat = view.reshape(view.shape[0], view.shape[1], d)
    max_r = h - patch
    max_c = w - patch
    span_r = min(2 * half, max_r) + 1
    span_c = min(2 * half, max_c) + 1
    stacks = np.empty((n_keys, d, num), dtype=np.float64)
    cols = np.empty((n_keys, num, 2), dtype=np.int64)
    for t in range(n_keys):
        ref_r, ref_c = keys[t]
        r0 = min(max(ref_r - half, 0), max_r - (span_r - 1))
        c0 = min(max(ref_c - half, 0), max_c - (span_c - 1))
        cand = flat[r0 : r0 + span_r, c0 : c0 + span_c].reshape(-1, d)
        dist = np.sum((cand - flat[ref_r, ref_c]) ** 2, axis=1)
        order = np.argsort(dist, kind="stable")
        rows = r0 + order // span_c
        ccs = c0 + order % span_c
        keep = ~((rows == ref_r) & (ccs == ref_c))
        rows = np.concatenate(([ref_r], rows[keep][: num - 1]))
        ccs = np.concatenate(([ref_c], ccs[keep][: num - 1]))
        cols[t, :, 0] = rows
        cols[t, :, 1] = ccs
        stacks[t] = flat[rows, ccs].T
    return stacks, cols


def shrink_stacks(stacks, sigma, c_weight, eps):
    """Adaptive singular-value soft thresholding of every stack (in place)."""
    n_keys, d, num = stacks.shape
    mean = stacks.mean(axis=1, keepdims=True)
    centered = stacks - mean
    u, s, vt = np.linalg.svd(centered, full_matrices=False)
    c2 = c_weight * np.sqrt(num) * 2.0 * sigma * sigma
    disc = s * s - 4.0 * c2
    s = np.where(disc > 0.0, 0.5 * (s + np.sqrt(np.maximum(disc, 0.0))), 0.0)
    stacks[:] = (u * s[:, np.newaxis, :]) @ vt + mean
    return stacks


def aggregate_stacks(est, wgt, stacks, cols, patch):
    """Accumulate patch estimates with uniform weights."""
    n_keys, d, num = stacks.shape
    patches = stacks.transpose(0, 2, 1).reshape(-1, patch, patch)
    rows = cols[:, :, 0].ravel()
    ccs = cols[:, :, 1].ravel()
    for i in range(patch):
        for jj in range(patch):
            np.add.at(est, (rows + i, ccs + jj), patches[:, i, jj])
            np.add.at(wgt, (rows + i, ccs + jj), 1.0)
