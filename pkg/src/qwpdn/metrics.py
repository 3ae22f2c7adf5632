"""Image quality metrics: PSNR over the 8-bit range, and SSIM.

SSIM follows the common reference configuration: 11x11 Gaussian window with
sigma 1.5, stabilizers C1=(0.01*255)^2 and C2=(0.03*255)^2, symmetric
boundary handling, global index = mean of the local map.
"""

from __future__ import annotations

import numpy as np
from scipy.ndimage import correlate

__all__ = ["PSNR_CAP_DB", "psnr", "ssim", "metric_report"]

PSNR_CAP_DB = 400.0
_PEAK = 255.0


def _check_pair(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"image shapes differ: {x.shape} vs {y.shape}")
    return x, y


def psnr(x: np.ndarray, x_hat: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB; identical images report the cap."""
    x, x_hat = _check_pair(x, x_hat)
    err = np.sum((x - x_hat) ** 2)
    if err == 0.0:
        return PSNR_CAP_DB
    return float(10.0 * np.log10(x.size * _PEAK * _PEAK / err))


def _gaussian_kernel(size: int = 11, sigma: float = 1.5) -> np.ndarray:
    half = (size - 1) / 2.0
    g = np.exp(-((np.arange(size) - half) ** 2) / (2.0 * sigma * sigma))
    k = np.outer(g, g)
    return k / k.sum()


_SSIM_KERNEL = _gaussian_kernel()


def _smooth(a: np.ndarray) -> np.ndarray:
    return correlate(a, _SSIM_KERNEL, mode="reflect")


def ssim(x: np.ndarray, x_hat: np.ndarray) -> float:
    """Mean structural similarity over an 11x11 Gaussian-weighted local map."""
    x, x_hat = _check_pair(x, x_hat)
    c1 = (0.01 * _PEAK) ** 2
    c2 = (0.03 * _PEAK) ** 2
    mu_x = _smooth(x)
    mu_y = _smooth(x_hat)
    mu_xx = mu_x * mu_x
    mu_yy = mu_y * mu_y
    mu_xy = mu_x * mu_y
    var_x = _smooth(x * x) - mu_xx
    var_y = _smooth(x_hat * x_hat) - mu_yy
    cov = _smooth(x * x_hat) - mu_xy
    num = (2.0 * mu_xy + c1) * (2.0 * cov + c2)
    den = (mu_xx + mu_yy + c1) * (var_x + var_y + c2)
    return float(np.mean(num / den))


def metric_report(clean: np.ndarray, restored: np.ndarray) -> dict:
    return {"psnr_db": psnr(clean, restored), "ssim": ssim(clean, restored)}
