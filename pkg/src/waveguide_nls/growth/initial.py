"""Shipped initial-condition families.

Families that are periodic in ``x1`` (plane waves, ``random_box``) fill the
whole truncated line on purpose; the Gaussian families keep their mass far
from ``x1 = +-L`` so the truncation stays invisible over long runs.
"""
from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from ..spectral import DomainSpec, Field, Spectrum, dealias_project, forward_transform, inverse_transform


def _params(params, allowed, **defaults):
    unknown = set(params) - set(allowed)
    if unknown:
        raise ParameterError(f"unknown initial-condition parameters: {sorted(unknown)}")
    out = dict(defaults)
    out.update(params)
    return out


def _normalize_peak(u, amplitude):
    peak = np.abs(u).max()
    if peak == 0:
        raise ParameterError("initial condition is identically zero")
    return u * (amplitude / peak)


def plane_wave(domain: DomainSpec, rng, amplitude=1.0, n=1, j=0):
    """``A exp(i (xi_j x1 + n x2))`` with ``xi_j = pi j / L``."""
    x1, x2 = domain.mesh()
    xi = np.pi * j / domain.half_length
    return amplitude * np.exp(1j * (xi * x1 + n * x2))


def multi_plane_wave(domain: DomainSpec, rng, modes=((0, 1, 1.0, 0.0),)):
    """Sum of plane waves given as ``[j, n, re, im]`` rows (physical amplitudes)."""
    x1, x2 = domain.mesh()
    u = np.zeros(domain.shape, dtype=np.complex128)
    xi_step = np.pi / domain.half_length
    for row in modes:
        if len(row) != 4:
            raise ParameterError(f"plane-wave mode needs [j, n, re, im], got {row}")
        j, n, re, im = row
        u += complex(re, im) * np.exp(1j * (xi_step * j * x1 + n * x2))
    return u


def random_box(domain: DomainSpec, rng, amplitude=0.5, K=2):
    """Gaussian coefficients on ``|j|, |k| <= K`` (lattice units), scaled to peak ``amplitude``."""
    g = domain.grid
    mask = (np.abs(g.j)[:, None] <= K) & (np.abs(g.k)[None, :] <= K)
    c = np.zeros(domain.shape, dtype=np.complex128)
    c[mask] = rng.standard_normal(int(mask.sum())) + 1j * rng.standard_normal(int(mask.sum()))
    u = inverse_transform(Spectrum(c, domain)).values
    return _normalize_peak(u, amplitude)


def gaussian_torus(domain: DomainSpec, rng, amplitude=0.3, width=20.0, n=1, velocity=0.0):
    """``A exp(-x1^2 / (2 w^2)) exp(i (v x1 / 2 + n x2))``: a torus mode under a Gaussian envelope."""
    if not width > 0:
        raise ParameterError(f"width must be positive, got {width}")
    x1, x2 = domain.mesh()
    return amplitude * np.exp(-x1 ** 2 / (2.0 * width ** 2)) * np.exp(1j * (0.5 * velocity * x1 + n * x2))


def random_low_band(domain: DomainSpec, rng, amplitude=0.3, width=20.0, K=2, J=3):
    """Gaussian envelope times random torus modes ``|k| <= K`` with x1 drifts ``|j| <= J`` lattice steps."""
    if not width > 0:
        raise ParameterError(f"width must be positive, got {width}")
    x1, x2 = domain.mesh()
    xi_step = np.pi / domain.half_length
    u = np.zeros(domain.shape, dtype=np.complex128)
    for k in range(-K, K + 1):
        a = rng.standard_normal() + 1j * rng.standard_normal()
        j = rng.integers(-J, J + 1)
        u += a * np.exp(1j * (xi_step * j * x1 + k * x2))
    u *= np.exp(-x1 ** 2 / (2.0 * width ** 2))
    return _normalize_peak(u, amplitude)


FAMILIES = {
    "plane_wave": (plane_wave, ("amplitude", "n", "j")),
    "multi_plane_wave": (multi_plane_wave, ("modes",)),
    "random_box": (random_box, ("amplitude", "K")),
    "gaussian_torus": (gaussian_torus, ("amplitude", "width", "n", "velocity")),
    "random_low_band": (random_low_band, ("amplitude", "width", "K", "J")),
}


def build_initial(domain: DomainSpec, family: str, params=None, seed=0, dealias=True) -> Field:
    """Sample a shipped family on ``domain``.

    With ``dealias`` the data is projected onto the 2/3 band, and a
    :class:`ParameterError` is raised if that would remove more than a
    relative ``1e-12`` of its mass.
    """
    try:
        fn, allowed = FAMILIES[family]
    except KeyError:
        raise ParameterError(f"unknown initial-condition family {family!r}; known: {sorted(FAMILIES)}") from None
    kwargs = _params(params or {}, allowed)
    u = fn(domain, np.random.default_rng(seed), **kwargs)
    f = Field(u, domain)
    if not dealias:
        return f
    s = forward_transform(f)
    keep = domain.grid.dealias_mask
    total = float(np.sum(np.abs(s.coeffs) ** 2))
    outside = float(np.sum(np.abs(s.coeffs[~keep]) ** 2))
    # Gaussian tails are never exactly band-limited; reject only real content
    if outside > 1e-12 * total:
        raise ParameterError(
            f"initial condition {family!r} has {outside / total:.2e} of its mass outside the dealiased band"
        )
    return inverse_transform(dealias_project(s))
