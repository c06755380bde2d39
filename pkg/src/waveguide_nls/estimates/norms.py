"""Discrete Bourgain X^{s,b} norms and space-time Lebesgue norms.

Temporal convention: the time transform pairs ``exp(+i tau t)`` with the
samples, so a free wave ``exp(-i (xi^2+n^2) t)`` sits at ``tau = xi^2 + n^2``
and the modulation weight is ``(1 + |tau - xi^2 - n^2|)^(2b)``.  The tau
lattice is dual to the window: spacing ``2*pi/window``, ``nt`` points,
symmetric about zero.
"""
from __future__ import annotations

import math

import numpy as np
import scipy.fft as sfft

from .. import kernels
from ..errors import ContractError, ParameterError
from .fields import BandField, SpaceTimeField, XsbParams


def tau_lattice(nt, window):
    """Temporal frequencies matching ``numpy.fft.fft`` output order."""
    return -2.0 * np.pi * np.fft.fftfreq(nt, d=window / nt)


def _require_cutoff(u):
    if not u.cutoff_applied:
        raise ContractError("time cutoff must be applied before computing a space-time norm")


def _spatial_coeffs(u: SpaceTimeField):
    """Parseval-normalized spatial coefficients per time slice, shape (nt, nx*ny)."""
    d = u.domain
    nx, ny = d.shape
    c = sfft.fft2(u.values, axes=(1, 2))
    c *= math.sqrt(d.cell_area / (nx * ny))
    return c.reshape(u.nt, nx * ny)


def xsb_from_time_coeffs(a, window, symbol, size, params: XsbParams):
    """X^{s,b} norm from spatial coefficients sampled in time.

    Parameters
    ----------
    a : complex array, shape (nt, m)
        Parseval-normalized spatial coefficients of ``m`` modes at the ``nt``
        sample times.
    symbol, size : float arrays, shape (m,)
        ``xi^2 + n^2`` and ``1 + |xi| + |n|`` for each stored mode.
    """
    nt = a.shape[0]
    A = sfft.fft(a, axis=0)
    A *= math.sqrt(window / nt / nt)
    w = size ** (2.0 * params.s) if params.s else np.ones_like(size)
    if params.b == 0:
        return math.sqrt(kernels.weighted_abs2_sum(A, np.broadcast_to(w, A.shape)))
    return math.sqrt(kernels.xsb_weighted_sum(A, tau_lattice(nt, window), symbol, w, params.b))


def xsb_norm(u: SpaceTimeField | BandField, p: XsbParams) -> float:
    """Discrete ``X^{s,b}`` norm of a cut-off space-time field."""
    _require_cutoff(u)
    if isinstance(u, BandField):
        return xsb_from_time_coeffs(u.coeffs, u.window, u.symbol, u.frequency_size, p)
    g = u.domain.grid
    return xsb_from_time_coeffs(
        _spatial_coeffs(u), u.window, g.symbol.ravel(), g.frequency_size.ravel(), p
    )


def spacetime_l2_norm(u: SpaceTimeField) -> float:
    return math.sqrt(kernels.abs2_sum(u.values) * u.domain.cell_area * u.dt)


def spacetime_l4_norm(u: SpaceTimeField | BandField, chunk=16) -> float:
    """``(integral |u|^4 dx dt)^(1/4)`` by the periodic trapezoid rule in time."""
    if isinstance(u, SpaceTimeField):
        return (kernels.quartic_sum(u.values) * u.domain.cell_area * u.dt) ** 0.25
    total = 0.0
    for start in range(0, u.nt, chunk):
        total += kernels.quartic_sum(u.physical(start, min(u.nt, start + chunk)))
    return (total * u.domain.cell_area * u.window / u.nt) ** 0.25


def characteristic_concentration(u: SpaceTimeField | BandField, radius=None, p: XsbParams | None = None):
    """Share of the (optionally X^{s,b}-weighted) squared spectrum within ``radius`` of the characteristic.

    ``radius`` defaults to ``4*pi/window``, two tau-lattice spacings.
    """
    _require_cutoff(u)
    if radius is None:
        radius = 4.0 * np.pi / u.window
    if isinstance(u, BandField):
        a, symbol, size = u.coeffs, u.symbol, u.frequency_size
    else:
        g = u.domain.grid
        a, symbol, size = _spatial_coeffs(u), g.symbol.ravel(), g.frequency_size.ravel()
    A = sfft.fft(a, axis=0)
    mag = A.real ** 2 + A.imag ** 2
    dist = np.abs(tau_lattice(a.shape[0], u.window)[:, None] - symbol[None, :])
    if p is not None:
        mag = mag * (1.0 + dist) ** (2.0 * p.b) * (size ** (2.0 * p.s))[None, :]
    total = mag.sum()
    if total == 0:
        raise ParameterError("zero field has no spectral concentration")
    return float(mag[dist <= radius + 1e-9].sum() / total)
