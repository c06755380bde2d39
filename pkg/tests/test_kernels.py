import importlib
import os
import subprocess
import sys

import numpy as np
import pytest

from waveguide_nls import kernels

BACKENDS = [pytest.param(kernels.reference, id="numpy")]
if kernels.fast is not None:
    BACKENDS.append(pytest.param(kernels.fast, id="cython"))


def _c(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.mark.parametrize("k", BACKENDS)
class TestKernelsAgainstFormulas:
    def test_nonlinear_rotate(self, k, rng):
        u = _c(rng, 16, 8)
        expected = u * np.exp(-1j * np.abs(u) ** 2 * 0.3)
        total = k.nonlinear_rotate(u, 0.3)
        assert np.allclose(u, expected, rtol=0, atol=1e-14)
        assert total == pytest.approx(np.sum(np.abs(expected) ** 2), rel=1e-13)

    def test_nonlinear_rotate_preserves_modulus(self, k, rng):
        u = _c(rng, 32, 32)
        before = np.abs(u).copy()
        k.nonlinear_rotate(u, 7.0)
        assert np.allclose(np.abs(u), before, rtol=1e-14, atol=0)

    def test_sums(self, k, rng):
        u = _c(rng, 13, 7)
        w = rng.random((13, 7))
        a = np.abs(u) ** 2
        assert k.abs2_sum(u) == pytest.approx(a.sum(), rel=1e-13)
        assert k.quartic_sum(u) == pytest.approx((a ** 2).sum(), rel=1e-13)
        assert k.weighted_abs2_sum(u, w) == pytest.approx((w * a).sum(), rel=1e-13)

    def test_xsb_weighted_sum(self, k, rng):
        nt, m = 8, 11
        c = _c(rng, nt, m)
        c[:, 3] = 0.0
        tau = rng.standard_normal(nt) * 5
        sym = np.array([0, 1, 1, 2, 4, 4, 5, 8, 9, 9, 10], dtype=float)
        w = 1 + rng.random(m)
        b = 0.55
        expected = sum(abs(c[i, j]) ** 2 * w[j] * (1 + abs(tau[i] - sym[j])) ** (2 * b)
                       for i in range(nt) for j in range(m))
        assert k.xsb_weighted_sum(c, tau, sym, w, b) == pytest.approx(expected, rel=1e-13)

    def test_xsb_negative_b(self, k, rng):
        c = _c(rng, 4, 5)
        tau, sym, w = rng.standard_normal(4), rng.random(5), np.ones(5)
        expected = np.sum(np.abs(c) ** 2 * (1 + np.abs(tau[:, None] - sym[None, :])) ** (-0.9))
        assert k.xsb_weighted_sum(c, tau, sym, w, -0.45) == pytest.approx(expected, rel=1e-13)

    def test_triple_product(self, k, rng):
        a, b, c = _c(rng, 3, 4, 5), _c(rng, 3, 4, 5), _c(rng, 3, 4, 5)
        out = np.empty_like(a)
        k.triple_product(a, b, c, out)
        assert np.allclose(out, a * np.conj(b) * c, rtol=1e-14, atol=1e-14)

    def test_triple_product_in_place(self, k, rng):
        a, b, c = _c(rng, 6, 6), _c(rng, 6, 6), _c(rng, 6, 6)
        expected = a * np.conj(b) * c
        k.triple_product(a, b, c, a)
        assert np.allclose(a, expected, rtol=1e-14, atol=1e-14)


@pytest.mark.skipif(kernels.fast is None, reason="compiled kernels not built")
class TestBackendEquivalence:
    def test_rotate_bitwise_close(self, rng):
        u = _c(rng, 64, 64)
        v = u.copy()
        t1 = kernels.fast.nonlinear_rotate(u, 1e-3)
        t2 = kernels.reference.nonlinear_rotate(v, 1e-3)
        assert np.max(np.abs(u - v)) < 1e-15
        assert t1 == pytest.approx(t2, rel=1e-13)

    def test_shape_mismatch_rejected(self, rng):
        with pytest.raises(ValueError):
            kernels.fast.weighted_abs2_sum(_c(rng, 4, 4), np.ones(3))


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "numpy")
    assert (kernels.BACKEND == "cython") == (kernels.fast is not None)


def test_pure_python_override():
    env = dict(os.environ, WAVEGUIDE_NLS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import waveguide_nls.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
