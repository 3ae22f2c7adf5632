"""Reproducible Gaussian noise from a counter-based generator.

Each normal deviate is derived from two SplitMix64 words keyed by (seed,
counter), turned into uniforms and combined by the Box-Muller cosine branch.
The construction is stateless, so identical (shape, sigma, seed) inputs give
bit-identical noise on every platform, independent of call order.
"""

from __future__ import annotations

import numpy as np

__all__ = ["PRNG_NAME", "PRNG_VERSION", "normal_field", "add_gaussian_noise"]

PRNG_NAME = "splitmix64-boxmuller"
PRNG_VERSION = 1

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U53 = float(2 ** 53)


def _splitmix64(counters: np.ndarray, seed: int) -> np.ndarray:
    z = (np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + counters * _GAMMA).astype(np.uint64)
    z ^= z >> np.uint64(30)
    z *= _MIX1
    z ^= z >> np.uint64(27)
    z *= _MIX2
    z ^= z >> np.uint64(31)
    return z


def _uniforms(counters: np.ndarray, seed: int) -> np.ndarray:
    """53-bit uniforms in [0, 1)."""
    return (_splitmix64(counters, seed) >> np.uint64(11)).astype(np.float64) / _U53


def normal_field(shape, seed: int) -> np.ndarray:
    """Standard-normal array; element i consumes counters (2i, 2i+1)."""
    n = int(np.prod(shape))
    counters = np.arange(2 * n, dtype=np.uint64)
    u = _uniforms(counters, seed)
    u1 = 1.0 - u[0::2]          # (0, 1]: keeps the log finite
    u2 = u[1::2]
    g = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
    return g.reshape(shape)


def add_gaussian_noise(x: np.ndarray, sigma: float, seed: int) -> np.ndarray:
    """Additive zero-mean Gaussian noise; output is not clipped."""
    x = np.asarray(x, dtype=np.float64)
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if sigma == 0:
        return x.copy()
    return x + sigma * normal_field(x.shape, seed)
