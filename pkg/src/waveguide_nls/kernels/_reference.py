"""NumPy implementations of the elementwise hot loops.

These are the fallback used when the compiled extension is unavailable and the
oracle the compiled versions are tested against.  Every function takes
C-contiguous arrays; the in-place ones mutate their first argument.
"""
import numpy as np


def nonlinear_rotate(u, dt):
    """Apply ``u <- u * exp(-i |u|^2 dt)`` in place and return ``sum |u|^2``."""
    a = u.real * u.real + u.imag * u.imag
    u *= np.exp(-1j * dt * a)
    return float(a.sum())


def abs2_sum(u):
    return float(np.vdot(u, u).real)


def quartic_sum(u):
    """Return ``sum |u|^4``."""
    a = u.real * u.real + u.imag * u.imag
    return float(np.dot(a.ravel(), a.ravel()))


def weighted_abs2_sum(c, w):
    """Return ``sum w * |c|^2`` for arrays of identical shape."""
    a = c.real * c.real + c.imag * c.imag
    return float(np.dot(a.ravel(), w.ravel()))


def xsb_weighted_sum(c, tau, symbol, space_weight, b):
    """Weighted space-time sum for Bourgain-type norms.

    Parameters
    ----------
    c : complex array, shape (nt, m)
        Space-time coefficients, spatial modes flattened.
    tau : float array, shape (nt,)
        Temporal frequencies.
    symbol : float array, shape (m,)
        Dispersion relation ``xi^2 + n^2`` per spatial mode.
    space_weight : float array, shape (m,)
        Squared spatial weight per mode.
    b : float
        Modulation exponent; the temporal weight is ``(1 + |tau - symbol|)^(2b)``.
    """
    a = c.real * c.real + c.imag * c.imag
    total = 0.0
    for i in range(c.shape[0]):
        wt = (1.0 + np.abs(tau[i] - symbol)) ** (2.0 * b)
        total += float(np.dot(a[i], wt * space_weight))
    return total


def triple_product(u1, u2, u3, out):
    """Write ``u1 * conj(u2) * u3`` into ``out`` and return it."""
    np.multiply(u1, np.conj(u2), out=out)
    out *= u3
    return out
