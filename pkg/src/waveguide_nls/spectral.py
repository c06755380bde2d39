"""Grids, transforms and frequency-space projections on the truncated waveguide.

The real line is truncated to ``[-L, L)`` and periodized; the torus direction
is ``[0, 2*pi)``.  Arrays are indexed ``[j, k]`` with ``j`` along ``x1`` (the
real-line direction) and ``k`` along ``x2`` (the torus).  Spectral arrays are
stored in FFT order, so ``FourierGrid.xi[j]`` and ``FourierGrid.n[k]`` give the
frequency attached to ``coeffs[j, k]``.

Normalization
-------------
Coefficients are scaled so that the discrete Parseval identity holds against
the physical quadrature measure ``dA = (2L/nx) * (2*pi/ny)``::

    sum_{j,k} |u[j,k]|^2 dA == sum_{j,k} |c[j,k]|^2

A coefficient of 1 at a single mode therefore corresponds to the unit-L2
plane wave ``exp(i(xi x1 + n x2)) / sqrt(area)``.  The phase factor
``(-1)^j`` accounts for the grid starting at ``x1 = -L``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BlowUpError, ParameterError


def _is_pow2(n):
    return isinstance(n, (int, np.integer)) and n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class DomainSpec:
    """Discretization of ``[-L, L) x [0, 2pi)`` with ``nx x ny`` samples."""

    half_length: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (np.isfinite(self.half_length) and self.half_length > 0):
            raise ParameterError(f"half_length must be positive, got {self.half_length}")
        for name in ("nx", "ny"):
            v = getattr(self, name)
            if not _is_pow2(v) or v < 8:
                raise ParameterError(f"{name} must be a power of two >= 8, got {v}")
        object.__setattr__(self, "half_length", float(self.half_length))
        object.__setattr__(self, "nx", int(self.nx))
        object.__setattr__(self, "ny", int(self.ny))

    @property
    def shape(self):
        return (self.nx, self.ny)

    @property
    def dx1(self):
        return 2.0 * self.half_length / self.nx

    @property
    def dx2(self):
        return 2.0 * np.pi / self.ny

    @property
    def cell_area(self):
        return self.dx1 * self.dx2

    @property
    def area(self):
        return 4.0 * np.pi * self.half_length

    def coordinates(self):
        """Return the 1-D sample coordinates ``(x1, x2)``."""
        x1 = -self.half_length + self.dx1 * np.arange(self.nx)
        x2 = self.dx2 * np.arange(self.ny)
        return x1, x2

    def mesh(self):
        x1, x2 = self.coordinates()
        return np.meshgrid(x1, x2, indexing="ij")

    @cached_property
    def grid(self) -> "FourierGrid":
        return FourierGrid.from_domain(self)


@dataclass(frozen=True, eq=False)
class FourierGrid:
    """Frequency lattice dual to a :class:`DomainSpec`.

    Attributes
    ----------
    xi : ndarray, shape (nx,)
        Real-line frequencies ``(pi/L) * j`` in FFT order.
    n : ndarray, shape (ny,)
        Integer torus frequencies in FFT order.
    j, k : ndarray
        Integer mode indices matching ``xi`` and ``n``.
    """

    domain: DomainSpec
    xi: np.ndarray
    n: np.ndarray
    j: np.ndarray
    k: np.ndarray

    @classmethod
    def from_domain(cls, domain):
        j = np.fft.fftfreq(domain.nx, 1.0 / domain.nx).astype(np.int64)
        k = np.fft.fftfreq(domain.ny, 1.0 / domain.ny).astype(np.int64)
        xi = (np.pi / domain.half_length) * j
        return cls(domain=domain, xi=xi, n=k.astype(np.float64), j=j, k=k)

    @property
    def dxi(self):
        return np.pi / self.domain.half_length

    @property
    def dn(self):
        return 1.0

    @cached_property
    def symbol(self):
        """Dispersion relation ``xi^2 + n^2`` on the 2-D lattice."""
        return self.xi[:, None] ** 2 + self.n[None, :] ** 2

    @cached_property
    def frequency_size(self):
        """``1 + |xi| + |n|`` on the 2-D lattice."""
        return 1.0 + np.abs(self.xi)[:, None] + np.abs(self.n)[None, :]

    @cached_property
    def parity(self):
        """``(-1)^j`` broadcast over the lattice, the grid-origin phase."""
        return np.where(self.j % 2 == 0, 1.0, -1.0)[:, None]

    @cached_property
    def dealias_mask(self):
        nx, ny = self.domain.shape
        return (np.abs(self.j)[:, None] <= nx // 3) & (np.abs(self.k)[None, :] <= ny // 3)

    @property
    def max_dealiased_frequency(self):
        """Largest ``N`` for which the box ``|xi|, |n| <= N`` survives dealiasing."""
        nx, ny = self.domain.shape
        return min(self.dxi * (nx // 3), float(ny // 3))

    def mode_index(self, j, k):
        """Array index of integer mode ``(j, k)`` in FFT order."""
        nx, ny = self.domain.shape
        if not (-nx // 2 <= j < nx // 2 and -ny // 2 <= k < ny // 2):
            raise ParameterError(f"mode ({j}, {k}) not on a {nx}x{ny} grid")
        return (j % nx, k % ny)


def _check_finite(values, what):
    if not np.all(np.isfinite(values)):
        raise BlowUpError(f"non-finite values in {what}")


@dataclass
class Field:
    """Samples of ``u`` on the physical grid, shape ``(nx, ny)``."""

    values: np.ndarray
    domain: DomainSpec

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.complex128)
        if self.values.shape != self.domain.shape:
            raise ParameterError(
                f"field shape {self.values.shape} does not match domain {self.domain.shape}"
            )

    def is_finite(self):
        return bool(np.all(np.isfinite(self.values)))

    def copy(self):
        return Field(self.values.copy(), self.domain)


@dataclass
class Spectrum:
    """Parseval-normalized Fourier coefficients, shape ``(nx, ny)``, FFT order."""

    coeffs: np.ndarray
    domain: DomainSpec
    grid: FourierGrid = field(init=False, repr=False)

    def __post_init__(self):
        self.coeffs = np.ascontiguousarray(self.coeffs, dtype=np.complex128)
        if self.coeffs.shape != self.domain.shape:
            raise ParameterError(
                f"spectrum shape {self.coeffs.shape} does not match domain {self.domain.shape}"
            )
        self.grid = self.domain.grid

    def l2_norm(self):
        return float(np.sqrt(np.vdot(self.coeffs, self.coeffs).real))

    def copy(self):
        return Spectrum(self.coeffs.copy(), self.domain)


def _scale(domain):
    return np.sqrt(domain.cell_area / (domain.nx * domain.ny))


def forward_transform(f: Field) -> Spectrum:
    """Physical samples to Parseval-normalized coefficients."""
    _check_finite(f.values, "field")
    d = f.domain
    c = np.fft.fft2(f.values)
    c *= _scale(d)
    c *= d.grid.parity
    return Spectrum(c, d)


def inverse_transform(s: Spectrum) -> Field:
    """Exact inverse of :func:`forward_transform`."""
    _check_finite(s.coeffs, "spectrum")
    d = s.domain
    u = np.fft.ifft2(s.coeffs * (d.grid.parity / _scale(d)))
    return Field(u, d)


def dealias_project(s: Spectrum) -> Spectrum:
    """Zero every mode with ``|j| > nx/3`` or ``|k| > ny/3`` (2/3 rule)."""
    return Spectrum(np.where(s.grid.dealias_mask, s.coeffs, 0.0), s.domain)


def band_mask(grid: FourierGrid, N: float) -> np.ndarray:
    """Boolean mask of the box ``|xi| <= N`` and ``|n| <= N``."""
    if not N > 0:
        raise ParameterError(f"band limit must be positive, got {N}")
    # small slack so that N = xi_j exactly is kept despite rounding in pi/L * j
    tol = 1e-12 * max(1.0, N)
    return (np.abs(grid.xi)[:, None] <= N + tol) & (np.abs(grid.n)[None, :] <= N + tol)


def project_band(s: Spectrum, N: float) -> Spectrum:
    """Sharp Littlewood-Paley projector onto ``|xi| <= N, |n| <= N``."""
    return Spectrum(np.where(band_mask(s.grid, N), s.coeffs, 0.0), s.domain)


def sobolev_weights(g: FourierGrid, s: float) -> np.ndarray:
    """``(1 + |xi| + |n|)^s`` per lattice point; the H^s weight is its square."""
    if not s >= 0:
        raise ParameterError(f"Sobolev order must be >= 0, got {s}")
    if s == 0:
        return np.ones(g.domain.shape)
    return g.frequency_size ** s


def spectrum_from_modes(domain: DomainSpec, modes) -> Spectrum:
    """Build a spectrum from ``{(j, k): coefficient}``."""
    c = np.zeros(domain.shape, dtype=np.complex128)
    g = domain.grid
    for (j, k), v in dict(modes).items():
        c[g.mode_index(j, k)] = v
    return Spectrum(c, domain)
