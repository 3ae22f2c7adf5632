"""Orthonormal spline-based wavelet-packet filter banks and 1D transforms.

All filters live in the DFT domain.  A decomposition level splits each
coefficient block of even length L into a lowpass and a highpass child of
length L/2 by spectral windowing and aliasing (fold by 2), which is exactly
the critically sampled two-channel orthonormal filter bank.  Blocks are kept
in frequency-increasing (sequency) order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "FilterPair",
    "WaveletPacketTree",
    "level_filters",
    "wp_split",
    "wp_merge",
    "wp_analysis",
    "wp_synthesis",
    "wp_waveform",
]


@dataclass(frozen=True)
class FilterPair:
    """DFT-domain lowpass/highpass pair for one split of block length ``length``."""

    lowpass: np.ndarray       # real, even-symmetric in the DFT index
    highpass: np.ndarray      # complex, quadrature mate of ``lowpass``
    length: int
    order: int


@dataclass
class WaveletPacketTree:
    """Multilevel wavelet-packet coefficients of one 1D signal.

    ``levels[m]`` is an array of shape (2**m, n // 2**m) whose rows are the
    coefficient blocks of level ``m`` in sequency order.
    """

    levels: dict = field(default_factory=dict)
    order: int = 9
    max_level: int = 0
    length: int = 0

    def block(self, m: int, l: int) -> np.ndarray:
        return self.levels[m][l]


def _check_block_length(length: int) -> None:
    if length < 2 or length % 2 != 0:
        raise ValueError(f"block length must be even and >= 2, got {length}")


@lru_cache(maxsize=None)
def _cached_filters(order: int, length: int):
    n = np.arange(length)
    c2 = np.cos(np.pi * n / length) ** 2
    s2 = np.sin(np.pi * n / length) ** 2
    # |cos|^p and |sin|^p via squared bases: keeps the filter real, nonnegative
    # and even-symmetric in the DFT index for odd orders as well.
    cp = c2 ** (order / 2.0)
    sp = s2 ** (order / 2.0)
    lo = np.sqrt(2.0) * cp / np.sqrt(cp * cp + sp * sp)
    shift = (n + length // 2) % length
    hi = np.exp(-2j * np.pi * n / length) * lo[shift]
    lo.setflags(write=False)
    hi.setflags(write=False)
    return lo, hi


def level_filters(order: int, length: int) -> FilterPair:
    """Orthonormal spline lowpass/highpass pair for splitting blocks of ``length``.

    The lowpass is sqrt(2)*|cos(pi n/L)|^p / sqrt(cos^2p + sin^2p); the
    highpass follows from the quadrature relation
    g[n] = exp(-2i pi n/L) * conj(h[n + L/2]).
    """
    if order < 1:
        raise ValueError(f"spline order must be >= 1, got {order}")
    _check_block_length(length)
    lo, hi = _cached_filters(int(order), int(length))
    return FilterPair(lowpass=lo, highpass=hi, length=length, order=order)


def _child_slots(num_parents: int):
    """Sequency-order destinations of (lowpass, highpass) children.

    An odd-indexed parent block has a spectrally inverted band, so its
    children swap: highpass lands on the lower-frequency slot.
    """
    l = np.arange(num_parents)
    even = l % 2 == 0
    lo_dest = np.where(even, 2 * l, 2 * l + 1)
    hi_dest = np.where(even, 2 * l + 1, 2 * l)
    return lo_dest, hi_dest


def wp_split(blocks: np.ndarray, order: int) -> np.ndarray:
    """One analysis step: (..., B, L) blocks -> (..., 2B, L/2), sequency order."""
    length = blocks.shape[-1]
    pair = level_filters(order, length)
    half = length // 2
    f = np.fft.fft(blocks, axis=-1)
    wl = f * pair.lowpass
    wh = f * np.conj(pair.highpass)
    lo = np.fft.ifft(0.5 * (wl[..., :half] + wl[..., half:]), axis=-1)
    hi = np.fft.ifft(0.5 * (wh[..., :half] + wh[..., half:]), axis=-1)
    num = blocks.shape[-2]
    lo_dest, hi_dest = _child_slots(num)
    out = np.empty(blocks.shape[:-2] + (2 * num, half), dtype=np.complex128)
    out[..., lo_dest, :] = lo
    out[..., hi_dest, :] = hi
    return out


def wp_merge(children: np.ndarray, order: int) -> np.ndarray:
    """One synthesis step, the exact adjoint/inverse of :func:`wp_split`."""
    num = children.shape[-2] // 2
    half = children.shape[-1]
    length = 2 * half
    pair = level_filters(order, length)
    lo_dest, hi_dest = _child_slots(num)
    lo = np.fft.fft(children[..., lo_dest, :], axis=-1)
    hi = np.fft.fft(children[..., hi_dest, :], axis=-1)
    lo2 = np.concatenate([lo, lo], axis=-1)
    hi2 = np.concatenate([hi, hi], axis=-1)
    xf = pair.lowpass * lo2 + pair.highpass * hi2
    return np.fft.ifft(xf, axis=-1)


def wp_analysis(x: np.ndarray, order: int = 9, max_level: int = 1) -> WaveletPacketTree:
    """Full multilevel 1D wavelet-packet analysis.

    Level-m block l holds the inner products of ``x`` with the 2**m-sample
    shifts of the level-m, band-l packet waveform.
    """
    x = np.asarray(x)
    if x.ndim != 1:
        raise ValueError("expected a 1D signal")
    n = x.shape[0]
    if max_level < 1:
        raise ValueError("max_level must be >= 1")
    if n % (2 ** max_level) != 0 or n // (2 ** max_level) < 2:
        raise ValueError(
            f"signal length {n} does not support {max_level} decomposition levels"
        )
    tree = WaveletPacketTree(order=order, max_level=max_level, length=n)
    blocks = x.astype(np.complex128)[np.newaxis, :]
    for m in range(1, max_level + 1):
        blocks = wp_split(blocks, order)
        tree.levels[m] = blocks
    if np.isrealobj(x):
        tree.levels = {m: b.real.copy() for m, b in tree.levels.items()}
    return tree


def wp_synthesis(tree: WaveletPacketTree, level: int) -> np.ndarray:
    """Reconstruct the signal from all blocks of one level."""
    if level not in tree.levels:
        raise ValueError(f"tree holds no level {level}")
    blocks = np.asarray(tree.levels[level], dtype=np.complex128)
    if blocks.shape[0] != 2 ** level:
        raise ValueError(
            f"level {level} is incomplete: {blocks.shape[0]} of {2 ** level} blocks"
        )
    for _ in range(level):
        blocks = wp_merge(blocks, tree.order)
    x = blocks[0]
    return x.real if float(np.max(np.abs(x.imag), initial=0.0)) < 1e-9 else x


def wp_waveform(order: int, n: int, level: int, band: int) -> np.ndarray:
    """Packet waveform: level-``level``, band-``band`` basis signal of length ``n``.

    Built by synthesizing a unit impulse coefficient, i.e. by iterated
    spectral filtering, so analysis coefficients are exactly inner products
    with its 2**level-sample shifts.
    """
    if not 0 <= band < 2 ** level:
        raise ValueError(f"band index {band} out of range for level {level}")
    blocks = np.zeros((2 ** level, n // 2 ** level), dtype=np.complex128)
    blocks[band, 0] = 1.0
    for _ in range(level):
        blocks = wp_merge(blocks, order)
    return blocks[0].real
