import os

import numpy as np
import pytest


def psnr_db(x, y):
    """Reference PSNR used by the tests (independent of qwpdn.metrics)."""
    mse = np.mean((np.asarray(x, float) - np.asarray(y, float)) ** 2)
    if mse == 0:
        return np.inf
    return 10.0 * np.log10(255.0 ** 2 / mse)


def reflection_center_doubled(w):
    """Lag maximizing the circular auto-convolution; symmetry axis is lag/2."""
    conv = np.fft.ifft(np.fft.fft(w) ** 2).real
    return int(np.argmax(conv))


def ring_texture(n=512, freq=0.55):
    """Fingerprint-like concentric ridge pattern in [0, 255]."""
    k = np.arange(n) - n / 2.0
    r = np.sqrt(k[:, None] ** 2 + k[None, :] ** 2)
    return 127.5 + 127.5 * np.sin(freq * r)


def mixed_image(n=128, seed=0):
    """Piecewise-smooth plus oscillatory content, the denoiser's target class."""
    k = np.arange(n)
    base = 100.0 + 60.0 * (np.add.outer(k, k) > n) + 0.2 * np.add.outer(k, 0 * k)
    ripple = 45.0 * np.sin(k / 2.5)[:, None] * (k[None, :] > n // 2)
    return np.clip(base + ripple, 0, 255)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def bench_images_dir():
    return os.environ.get("QWP_BENCH_IMAGES", "")


needs_bench_images = pytest.mark.skipif(
    not bench_images_dir(),
    reason="set QWP_BENCH_IMAGES to a directory with the standard test images",
)
