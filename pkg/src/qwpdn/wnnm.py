"""Weighted nuclear norm minimization denoiser.

Stacks of similar patches are gathered by block matching, their singular
values soft-thresholded with adaptive weights (small estimated-clean values
get large weights and are annihilated), and the overlapping patch estimates
averaged back.  Iterative regularization feeds a fraction of the residual
back into the working image.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import accel

__all__ = ["WnnmParams", "PatchStack", "block_match", "wnnm_shrink", "wnnm_denoise"]


@dataclass
class WnnmParams:
    """Block-matching and thresholding parameters.

    ``for_sigma`` picks the customary noise-level-dependent defaults; the
    dataclass itself stores one concrete configuration.
    """

    patch_side: int = 6
    search_window: int = 30
    num_patches: int = 70
    step: int = 4
    c_weight: float = 2.0 * np.sqrt(2.0)
    eps: float = 1e-16
    iterations: int = 8
    delta: float = 0.1
    gamma: float = 0.56      # residual-noise damping between iterations

    def __post_init__(self):
        if self.patch_side < 2:
            raise ValueError("patch_side must be >= 2")
        if self.search_window < self.patch_side:
            raise ValueError("search_window must cover at least one patch")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        if self.num_patches < 1:
            raise ValueError("num_patches must be >= 1")

    @classmethod
    def for_sigma(cls, sigma: float, **overrides) -> "WnnmParams":
        if sigma <= 40:
            base = dict(patch_side=6, num_patches=70, iterations=8)
        elif sigma <= 60:
            base = dict(patch_side=8, num_patches=90, iterations=12)
        else:
            base = dict(patch_side=8, num_patches=120, iterations=14)
        base.update(overrides)
        return cls(**base)

    def ledger(self) -> dict:
        return {
            "patch_side": self.patch_side,
            "search_window": self.search_window,
            "num_patches": self.num_patches,
            "step": self.step,
            "c_weight": self.c_weight,
            "eps": self.eps,
            "iterations": self.iterations,
            "delta": self.delta,
            "gamma": self.gamma,
        }


@dataclass
class PatchStack:
    """d x K matrix of vectorized similar patches plus their coordinates."""

    matrix: np.ndarray
    positions: list
    reference: tuple


def _match_half(params: WnnmParams) -> int:
    return max((params.search_window - params.patch_side) // 2, 0)


def block_match(x: np.ndarray, ref: tuple, params: WnnmParams) -> PatchStack:
    """Gather the ``num_patches`` nearest patches around one reference patch.

    The search window is centered on the reference and shifted inward at the
    borders.  The reference is always the first column; ties in the distance
    are broken by row-major scan order.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    p = params.patch_side
    r, c = int(ref[0]), int(ref[1])
    if not (0 <= r <= x.shape[0] - p and 0 <= c <= x.shape[1] - p):
        raise ValueError(f"reference patch {ref} not inside the image")
    avail = (min(2 * _match_half(params), x.shape[0] - p) + 1) * \
            (min(2 * _match_half(params), x.shape[1] - p) + 1)
    num = min(params.num_patches, avail)
    keys = np.array([[r, c]], dtype=np.int64)
    stacks, cols = accel.collect_stacks(x, keys, p, _match_half(params), num)
    positions = [tuple(pt) for pt in cols[0]]
    return PatchStack(matrix=stacks[0], positions=positions, reference=(r, c))


def shrink_singular_values(s: np.ndarray, num: int, sigma: float,
                           c_weight: float) -> np.ndarray:
    """Self-consistent adaptive soft threshold of singular values.

    Each output value solves x = (s - w(x))+ with weight
    w(x) = c*sqrt(K)*2*sigma^2 / x, taken at the closed-form positive root.
    Values whose discriminant is negative (the pure-noise bulk) collapse
    to zero; large values are reduced by roughly w evaluated at themselves.
    """
    c2 = c_weight * np.sqrt(num) * 2.0 * sigma * sigma
    disc = s * s - 4.0 * c2
    return np.where(disc > 0.0, 0.5 * (s + np.sqrt(np.maximum(disc, 0.0))), 0.0)


def wnnm_shrink(y: np.ndarray, sigma: float, params: WnnmParams) -> np.ndarray:
    """Adaptive-weight singular value thresholding of one patch stack.

    Column means bypass the SVD and are restored afterwards; the centered
    matrix is reassembled from its shrunken singular values.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 2:
        raise ValueError("expected a 2D patch matrix")
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    num = y.shape[1]
    mean = y.mean(axis=0, keepdims=True)
    u, s, vt = np.linalg.svd(y - mean, full_matrices=False)
    s = shrink_singular_values(s, num, sigma, params.c_weight)
    return (u * s) @ vt + mean


def _key_grid(side: int, patch: int, step: int) -> np.ndarray:
    last = side - patch
    marks = list(range(0, last + 1, step))
    if marks[-1] != last:
        marks.append(last)
    return np.asarray(marks, dtype=np.int64)


def wnnm_denoise(y: np.ndarray, sigma: float, params: WnnmParams | None = None,
                 return_info: bool = False):
    """Iterative WNNM restoration of a noisy image.

    Each iteration nudges the working image toward the observation
    (x + delta*(y - x)), re-estimates the residual noise level, denoises
    every key-patch stack, and averages the overlapping estimates.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 2:
        raise ValueError("expected a 2D image")
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    params = params or WnnmParams.for_sigma(sigma)
    accel.apply_thread_limit()
    p = params.patch_side
    half = _match_half(params)
    rows = _key_grid(y.shape[0], p, params.step)
    cols = _key_grid(y.shape[1], p, params.step)
    keys = np.stack(np.meshgrid(rows, cols, indexing="ij"), axis=-1).reshape(-1, 2)
    keys = np.ascontiguousarray(keys, dtype=np.int64)
    avail = (min(2 * half, y.shape[0] - p) + 1) * (min(2 * half, y.shape[1] - p) + 1)
    num = min(params.num_patches, avail)
    # chunk the key list so the stack buffers stay around ~32 MB
    chunk = max(1, (1 << 22) // (p * p * num))

    x_hat = y.copy()
    sigmas = []
    for _ in range(params.iterations):
        x_in = x_hat + params.delta * (y - x_hat)
        resid = float(np.mean((y - x_in) ** 2))
        sigma_t = params.gamma * np.sqrt(max(sigma * sigma - resid, 0.0))
        sigmas.append(sigma_t)
        est = np.zeros_like(y)
        wgt = np.zeros_like(y)
        work = np.ascontiguousarray(x_in)
        for lo in range(0, keys.shape[0], chunk):
            part = keys[lo : lo + chunk]
            stacks, positions = accel.collect_stacks(work, part, p, half, num)
            accel.shrink_stacks(stacks, sigma_t, params.c_weight, params.eps)
            accel.aggregate_stacks(est, wgt, stacks, positions, p)
        x_hat = est / wgt
    if return_info:
        return x_hat, {"sigma_schedule": sigmas, "params": params.ledger()}
    return x_hat
