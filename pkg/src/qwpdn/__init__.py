"""Directional quasi-analytic wavelet-packet transforms and image denoising.

Library layout:

- ``splinewp``:   orthonormal spline wavelet-packet filters, 1D transforms
- ``qwp1d``:      Hilbert-based complementary packets, quasi-analytic packets
- ``qwp2d``:      2D directional analysis/synthesis, waveforms, oracles
- ``denoise``:    bivariate-shrinkage denoiser over the 2D packet frame
- ``wnnm``:       weighted nuclear norm minimization patch denoiser
- ``crossboost``: iteration scheme coupling the two denoisers
- ``metrics``:    PSNR / SSIM
- ``noise``, ``images``, ``golden``, ``report``, ``runner``, ``cli``: harness
"""

from .crossboost import final_estimate, run_crossboost
from .denoiser import DenoiseParams, denoise
from .metrics import psnr, ssim
from .noise import add_gaussian_noise
from .qwp2d import qwp2d_analysis, qwp2d_synthesis
from .wnnm import WnnmParams, wnnm_denoise

__version__ = "0.1.0"

__all__ = [
    "DenoiseParams",
    "WnnmParams",
    "add_gaussian_noise",
    "denoise",
    "final_estimate",
    "psnr",
    "qwp2d_analysis",
    "qwp2d_synthesis",
    "run_crossboost",
    "ssim",
    "wnnm_denoise",
    "__version__",
]
