"""Numba kernels against the pure-numpy fallback, and path selection."""

import os
import subprocess
import sys

import numpy as np
import pytest

from qwpdn import _kernels_numpy as knp

numba_kernels = pytest.importorskip("qwpdn._kernels_numba")


class TestLocalMeanSq:
    @pytest.mark.parametrize("w", [2, 4, 8])
    def test_paths_agree(self, rng, w):
        values = np.ascontiguousarray(rng.normal(size=(24, 24)))
        a = numba_kernels.local_mean_sq(values, w)
        b = knp.local_mean_sq(values, w)
        assert np.max(np.abs(a - b)) < 1e-12


class TestCollectStacks:
    def test_paths_agree_on_noisy_image(self, rng):
        img = np.ascontiguousarray(rng.normal(100.0, 30.0, size=(40, 40)))
        keys = np.array([[0, 0], [5, 7], [17, 33], [34, 34]], dtype=np.int64)
        sa, ca = numba_kernels.collect_stacks(img, keys, 5, 8, 12)
        sb, cb = knp.collect_stacks(img, keys, 5, 8, 12)
        assert np.array_equal(ca, cb)
        assert np.max(np.abs(sa - sb)) == 0.0

    def test_paths_agree_on_constant_ties(self):
        img = np.full((30, 30), 9.0)
        keys = np.array([[3, 3], [12, 25]], dtype=np.int64)
        sa, ca = numba_kernels.collect_stacks(img, keys, 4, 6, 9)
        sb, cb = knp.collect_stacks(img, keys, 4, 6, 9)
        assert np.array_equal(ca, cb)


class TestShrinkStacks:
    def test_paths_agree(self, rng):
        stacks = rng.normal(10.0, 5.0, size=(6, 25, 18))
        a = numba_kernels.shrink_stacks(stacks.copy(), 2.0, 2.8, 1e-16)
        b = knp.shrink_stacks(stacks.copy(), 2.0, 2.8, 1e-16)
        assert np.max(np.abs(a - b)) < 1e-8


class TestAggregate:
    def test_paths_agree(self, rng):
        img_shape = (20, 20)
        stacks = rng.normal(size=(3, 16, 5))
        cols = rng.integers(0, 16, size=(3, 5, 2)).astype(np.int64)
        est_a = np.zeros(img_shape)
        wgt_a = np.zeros(img_shape)
        numba_kernels.aggregate_stacks(est_a, wgt_a, stacks, cols, 4)
        est_b = np.zeros(img_shape)
        wgt_b = np.zeros(img_shape)
        knp.aggregate_stacks(est_b, wgt_b, stacks, cols, 4)
        assert np.max(np.abs(est_a - est_b)) < 1e-12
        assert np.array_equal(wgt_a, wgt_b)


class TestPathSelection:
    def test_env_flag_selects_numpy_path(self):
        env = dict(os.environ, QWP_NO_NUMBA="1")
        out = subprocess.run(
            [sys.executable, "-c",
             "from qwpdn import accel; print(accel.NUMBA_ENABLED)"],
            capture_output=True, text=True, env=env, check=True)
        assert out.stdout.strip() == "False"

    def test_default_selects_numba_path(self):
        env = {k: v for k, v in os.environ.items() if k != "QWP_NO_NUMBA"}
        out = subprocess.run(
            [sys.executable, "-c",
             "from qwpdn import accel; print(accel.NUMBA_ENABLED)"],
            capture_output=True, text=True, env=env, check=True)
        assert out.stdout.strip() == "True"

    def test_full_denoiser_agrees_across_paths(self, rng, tmp_path):
        """End-to-end wavelet denoiser result is path-independent (FFT math
        is shared; only the local-variance kernel differs)."""
        from conftest import mixed_image
        from qwpdn.noise import add_gaussian_noise

        noisy = add_gaussian_noise(mixed_image(64), 20.0, 5)
        script = (
            "import numpy as np, sys;"
            "from qwpdn.denoiser import denoise, DenoiseParams;"
            "x = np.load(sys.argv[1]);"
            "out = denoise(x, DenoiseParams(levels=(2, 3), margin=16));"
            "np.save(sys.argv[2], out)"
        )
        inp = tmp_path / "in.npy"
        np.save(inp, noisy)
        results = []
        for flag in ("0", "1"):
            env = dict(os.environ, QWP_NO_NUMBA=flag)
            outp = tmp_path / f"out_{flag}.npy"
            subprocess.run([sys.executable, "-c", script, str(inp), str(outp)],
                           check=True, env=env)
            results.append(np.load(outp))
        assert np.max(np.abs(results[0] - results[1])) < 1e-10
