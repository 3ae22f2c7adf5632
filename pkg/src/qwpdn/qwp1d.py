"""Quasi-analytic wavelet packets in 1D.

The complementary packet is the Hilbert transform of a spline packet with the
DC and Nyquist spectral bins restored; the quasi-analytic packet is the
complex combination whose spectrum is (almost) one-sided.  Coefficients for
the whole complex bank factor through a single spectral premodulation of the
input followed by the ordinary real filter-bank cascade, which is what makes
the transform fast.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .splinewp import wp_analysis, wp_split, wp_waveform

__all__ = [
    "hilbert",
    "cwp_from_dwp",
    "QwpWaveform",
    "qwp_waveform",
    "analysis_premask",
    "synthesis_postmask",
    "premodulate",
    "ComplexBank",
    "first_level_banks",
]


def hilbert(x: np.ndarray) -> np.ndarray:
    """Discrete periodic Hilbert transform.

    Output spectrum is -i*sign(n)*X[n] with the DC and Nyquist bins zeroed.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[-1]
    if n % 2 != 0:
        raise ValueError("signal length must be even")
    f = np.fft.fft(x, axis=-1)
    mult = np.zeros(n, dtype=np.complex128)
    mult[1 : n // 2] = -1j
    mult[n // 2 + 1 :] = 1j
    return np.fft.ifft(f * mult, axis=-1).real


def cwp_from_dwp(psi: np.ndarray) -> np.ndarray:
    """Complementary packet: Hilbert transform with DC/Nyquist bins restored.

    The restored bins keep |phi_hat| == |psi_hat| at every index, at the cost
    of an antisymmetry distortion in the bands that touch DC or Nyquist.
    """
    psi = np.asarray(psi, dtype=np.float64)
    n = psi.shape[-1]
    f = np.fft.fft(psi)
    out = np.fft.fft(hilbert(psi))
    out[0] = f[0]
    out[n // 2] = f[n // 2]
    return np.fft.ifft(out).real


@dataclass(frozen=True)
class QwpWaveform:
    """Quasi-analytic packet: symmetric part, antisymmetric mate, complex view."""

    sym: np.ndarray      # real spline packet
    anti: np.ndarray     # complementary (Hilbert-based) packet
    sign: int            # +1 or -1

    @property
    def complex_view(self) -> np.ndarray:
        return self.sym + 1j * self.sign * self.anti


def qwp_waveform(order: int, n: int, level: int, band: int, sign: int = +1) -> QwpWaveform:
    """Level/band quasi-analytic packet of length ``n`` as an explicit signal."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    sym = wp_waveform(order, n, level, band)
    anti = cwp_from_dwp(sym)
    return QwpWaveform(sym=sym, anti=anti, sign=sign)


def analysis_premask(n: int, sign: int) -> np.ndarray:
    """Spectral input mask through which the complex bank factors.

    Multiplying the input spectrum by this mask and then running the real
    cascade yields exactly the inner products with the shifted quasi-analytic
    packets of the requested sign.
    """
    w = np.zeros(n, dtype=np.complex128)
    if sign == +1:
        w[1 : n // 2] = 2.0
        w[0] = w[n // 2] = 1.0 - 1.0j
    elif sign == -1:
        w[n // 2 + 1 :] = 2.0
        w[0] = w[n // 2] = 1.0 + 1.0j
    else:
        raise ValueError("sign must be +1 or -1")
    return w


def synthesis_postmask(n: int, sign: int) -> np.ndarray:
    """Adjoint-side spectral mask; conjugate of :func:`analysis_premask`."""
    return np.conj(analysis_premask(n, sign))


def premodulate(x: np.ndarray, sign: int, axis: int = -1) -> np.ndarray:
    """Apply the one-sided spectral mask along ``axis``."""
    x = np.asarray(x)
    n = x.shape[axis]
    mask = analysis_premask(n, sign)
    shape = [1] * x.ndim
    shape[axis] = n
    return np.fft.ifft(np.fft.fft(x, axis=axis) * mask.reshape(shape), axis=axis)


@dataclass(frozen=True)
class ComplexBank:
    """First-level complex analysis bank of one sign.

    ``apply`` returns the two level-1 coefficient blocks (shape (2, n/2));
    ``adjoint`` maps blocks back, so that Re(plus + minus adjoint chains)/4
    restores a real 1D signal (the 2D pipeline carries the /8 variant).
    """

    length: int
    order: int
    sign: int

    def apply(self, x: np.ndarray) -> np.ndarray:
        u = premodulate(np.asarray(x, dtype=np.complex128), self.sign)
        return wp_split(u[np.newaxis, :], self.order)

    def adjoint(self, blocks: np.ndarray) -> np.ndarray:
        from .splinewp import wp_merge

        u = wp_merge(np.asarray(blocks, dtype=np.complex128)[np.newaxis], self.order)[0, 0]
        mask = synthesis_postmask(self.length, self.sign)
        return np.fft.ifft(np.fft.fft(u) * mask)


def first_level_banks(order: int, n: int) -> tuple[ComplexBank, ComplexBank]:
    """The level-1 plus/minus complex banks; deeper levels reuse the real bank."""
    return (
        ComplexBank(length=n, order=order, sign=+1),
        ComplexBank(length=n, order=order, sign=-1),
    )


def qwp_analysis_1d(x: np.ndarray, order: int, max_level: int, sign: int):
    """Multilevel quasi-analytic coefficients: premodulate, then real cascade."""
    u = premodulate(np.asarray(x, dtype=np.complex128), sign)
    return wp_analysis(u, order=order, max_level=max_level)
