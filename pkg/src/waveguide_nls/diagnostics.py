"""Conserved quantities, Sobolev norms and dyadic shell energies."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ParameterError
from .spectral import Field, FourierGrid, Spectrum, forward_transform, sobolev_weights

BOUNDARY_FRACTION = 0.1


def mass(f: Field) -> float:
    """Quadrature of ``|u|^2`` over the truncated domain."""
    return kernels.abs2_sum(np.ascontiguousarray(f.values)) * f.domain.cell_area


def kinetic_energy(s: Spectrum) -> float:
    """``(1/2) * integral |grad u|^2``, computed with the multiplier ``xi^2 + n^2``."""
    return 0.5 * kernels.weighted_abs2_sum(s.coeffs, s.grid.symbol)


def potential_energy(f: Field) -> float:
    """``(1/4) * integral |u|^4`` by grid quadrature."""
    return 0.25 * kernels.quartic_sum(np.ascontiguousarray(f.values)) * f.domain.cell_area


def energy(f: Field, spectrum: Spectrum | None = None) -> float:
    """Hamiltonian of the cubic defocusing equation (``p = 3``).

    The quartic term is grid quadrature, exact when ``u`` is band-limited to
    the 2/3 band.  Pass ``spectrum`` to reuse an existing transform.
    """
    s = forward_transform(f) if spectrum is None else spectrum
    return kinetic_energy(s) + potential_energy(f)


def sobolev_norm(s: Spectrum, order: float) -> float:
    """``(sum (1+|xi|+|n|)^(2 order) |c|^2)^(1/2)``."""
    if not order >= 0:
        raise ParameterError(f"Sobolev order must be >= 0, got {order}")
    if order == 0:
        return math.sqrt(kernels.abs2_sum(s.coeffs))
    w = sobolev_weights(s.grid, order)
    return math.sqrt(kernels.weighted_abs2_sum(s.coeffs, w * w))


def shell_index(grid: FourierGrid) -> np.ndarray:
    """Dyadic shell ``k`` with ``2^k <= 1+|xi|+|n| < 2^(k+1)`` for every lattice point."""
    size = grid.frequency_size
    k = np.floor(np.log2(size)).astype(np.int64)
    # guard log2 rounding at exact powers of two
    k[2.0 ** (k + 1) <= size] += 1
    k[2.0 ** k > size] -= 1
    return k


@dataclass
class ShellSpectrum:
    """Energies of the dyadic shells, ``energies[k]`` for ``k = 0..len-1``."""

    energies: np.ndarray

    @property
    def shells(self):
        return [(k, float(e)) for k, e in enumerate(self.energies)]

    @property
    def total(self):
        return float(self.energies.sum())


def lp_shells(s: Spectrum) -> ShellSpectrum:
    idx = shell_index(s.grid)
    a = s.coeffs.real ** 2 + s.coeffs.imag ** 2
    return ShellSpectrum(np.bincount(idx.ravel(), weights=a.ravel(), minlength=int(idx.max()) + 1))


def cascade_fraction(s: Spectrum | ShellSpectrum, k0: int) -> float:
    """Fraction of L2 mass in shells ``k >= k0``."""
    if int(k0) != k0 or k0 < 0:
        raise ParameterError(f"k0 must be a non-negative integer, got {k0}")
    shells = s if isinstance(s, ShellSpectrum) else lp_shells(s)
    total = shells.total
    if total == 0:
        return 0.0
    return float(shells.energies[int(k0):].sum() / total)


def boundary_mass_fraction(f: Field, fraction: float = BOUNDARY_FRACTION) -> float:
    """Share of the mass in the outer ``fraction`` of ``[-L, L)`` (both ends)."""
    x1, _ = f.domain.coordinates()
    outer = np.abs(x1) >= (1.0 - fraction) * f.domain.half_length
    a = f.values.real ** 2 + f.values.imag ** 2
    total = a.sum()
    if total == 0:
        return 0.0
    return float(a[outer].sum() / total)


def h1_bound_constant(grid: FourierGrid) -> float:
    """``max over the grid of (1+|xi|+|n|)^2 - (xi^2+n^2)``.

    Since ``sum (xi^2+n^2)|c|^2 <= 2E``, every state on this grid satisfies
    ``||u||_{H^1}^2 <= 2E + C M`` with this ``C``.
    """
    return float(np.max(grid.frequency_size ** 2 - grid.symbol))


def h1_bound(mass_value: float, energy_value: float, grid: FourierGrid) -> float:
    """Upper bound on ``||u||_{H^1}^2`` from the conserved mass and energy.

    Takes the smaller of two valid bounds: the grid-dependent
    ``2E + C_grid M`` and the grid-free ``3M + 6E``, the latter from
    ``(1+a+b)^2 <= 3(1+a^2+b^2)``.
    """
    return min(
        2.0 * energy_value + h1_bound_constant(grid) * mass_value,
        3.0 * mass_value + 6.0 * energy_value,
    )
