"""Space-time fields on a finite time window and their time cutoff."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.fft as sfft

from ..errors import ParameterError
from ..spectral import DomainSpec, Spectrum, band_mask


def next_pow2(n):
    return 1 << max(0, math.ceil(math.log2(max(1, n))))


@dataclass(frozen=True)
class CutoffProfile:
    """Cosine taper: 1 on the central ``1 - 2*taper`` of the window, raised-cosine ramps to 0."""

    kind: str = "cosine-taper"
    taper: float = 0.25

    def __post_init__(self):
        if self.kind != "cosine-taper":
            raise ParameterError(f"unknown cutoff kind {self.kind!r}")
        if not 0.0 < self.taper < 0.5:
            raise ParameterError(f"taper fraction must lie in (0, 1/2), got {self.taper}")

    def __call__(self, t, window):
        r = np.clip(np.asarray(t, dtype=np.float64) / window, 0.0, 1.0)
        rho = self.taper
        out = np.ones_like(r)
        lo = r < rho
        hi = r > 1.0 - rho
        out[lo] = 0.5 * (1.0 - np.cos(np.pi * r[lo] / rho))
        out[hi] = 0.5 * (1.0 - np.cos(np.pi * (1.0 - r[hi]) / rho))
        return out


@dataclass(frozen=True)
class XsbParams:
    """Exponents of a Bourgain norm: spatial order ``s`` and modulation order ``b``."""

    s: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        if not self.s >= 0:
            raise ParameterError(f"s must be >= 0, got {self.s}")
        if not math.isfinite(self.b):
            raise ParameterError(f"b must be finite, got {self.b}")


@dataclass
class SpaceTimeField:
    """``u`` sampled at ``nt`` uniform times ``m * window / nt`` on a spatial grid.

    ``values`` has shape ``(nt, nx, ny)``.  Norms require ``cutoff_applied``:
    the time-periodic extension of the samples is only meaningful once the
    field has been tapered to zero at both ends of the window.
    """

    values: np.ndarray
    window: float
    domain: DomainSpec
    cutoff: CutoffProfile | None = None
    cutoff_applied: bool = False

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.complex128)
        if self.values.ndim != 3 or self.values.shape[1:] != self.domain.shape:
            raise ParameterError(f"values shape {self.values.shape} incompatible with domain")
        nt = self.values.shape[0]
        if nt < 2 or nt & (nt - 1):
            raise ParameterError(f"nt must be a power of two >= 2, got {nt}")
        if not self.window > 0:
            raise ParameterError(f"window must be positive, got {self.window}")

    @property
    def nt(self):
        return self.values.shape[0]

    @property
    def dt(self):
        return self.window / self.nt

    def times(self):
        return self.dt * np.arange(self.nt)

    def apply_cutoff(self, profile: CutoffProfile | None = None) -> "SpaceTimeField":
        profile = profile or self.cutoff or CutoffProfile()
        phi = profile(self.times(), self.window)
        return replace(self, values=self.values * phi[:, None, None], cutoff=profile, cutoff_applied=True)

    def scaled(self, factor):
        return replace(self, values=self.values * factor)


@dataclass
class BandField:
    """Band-limited space-time field held as spatial coefficients over time.

    ``coeffs[m, i]`` is the Parseval-normalized spatial coefficient of mode
    ``modes[i]`` at time ``m * window / nt``.  Only the modes in ``modes`` are
    stored, which keeps X^{s,b} evaluation to a time FFT over a few thousand
    columns instead of a full 3-D transform.
    """

    coeffs: np.ndarray
    modes: tuple  # (row indices, column indices) into the FFT-ordered grid
    window: float
    domain: DomainSpec
    cutoff: CutoffProfile | None = None
    cutoff_applied: bool = True
    _rows: np.ndarray = field(init=False, repr=False)
    _row_pos: np.ndarray = field(init=False, repr=False)
    _prefactor: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        d = self.domain
        rows, _ = self.modes
        self._rows, self._row_pos = np.unique(rows, return_inverse=True)
        self._prefactor = d.grid.parity[rows, 0] / math.sqrt(d.cell_area / (d.nx * d.ny))

    @property
    def nt(self):
        return self.coeffs.shape[0]

    @property
    def symbol(self):
        return self.domain.grid.symbol[self.modes]

    @property
    def frequency_size(self):
        return self.domain.grid.frequency_size[self.modes]

    def times(self):
        return (self.window / self.nt) * np.arange(self.nt)

    def physical(self, start, stop):
        """Physical samples for time indices ``start:stop``, shape ``(stop-start, nx, ny)``."""
        nx, ny = self.domain.shape
        m = stop - start
        # transform only the occupied x1 rows along x2, then all columns along x1
        part = np.zeros((m, self._rows.size, ny), dtype=np.complex128)
        part[:, self._row_pos, self.modes[1]] = self.coeffs[start:stop] * self._prefactor
        part = sfft.ifft(part, axis=2, overwrite_x=True)
        block = np.zeros((m, nx, ny), dtype=np.complex128)
        block[:, self._rows] = part
        return sfft.ifft(block, axis=1, overwrite_x=True)

    def to_spacetime(self) -> SpaceTimeField:
        return SpaceTimeField(self.physical(0, self.nt), self.window, self.domain,
                              self.cutoff, cutoff_applied=self.cutoff_applied)

    def translated(self, shift):
        """Translate by ``shift = (a1, a2)`` in physical space."""
        g = self.domain.grid
        rows, cols = self.modes
        phase = np.exp(-1j * (g.xi[rows] * shift[0] + g.n[cols] * shift[1]))
        return replace(self, coeffs=self.coeffs * phase[None, :])

    def scaled(self, factor):
        return replace(self, coeffs=self.coeffs * factor)


def box_modes(domain: DomainSpec, N: float):
    """Row/column indices of the lattice box ``|xi| <= N, |n| <= N``."""
    rows, cols = np.nonzero(band_mask(domain.grid, N))
    return rows, cols


def random_band_field(domain, N, window, nt, rng, modulation=2, cutoff=None) -> BandField:
    """Random field supported in the box of size ``N``, near the Schrodinger characteristic.

    Each mode ``k`` gets independent unit complex Gaussian amplitudes at the
    temporal frequencies ``|k|^2 + 2*pi*m/window`` for ``|m| <= modulation``;
    ``modulation=0`` gives a free solution.  The time cutoff is applied.
    """
    cutoff = cutoff or CutoffProfile()
    rows, cols = box_modes(domain, N)
    symbol = domain.grid.symbol[rows, cols]
    t = (window / nt) * np.arange(nt)
    offsets = 2.0 * np.pi / window * np.arange(-modulation, modulation + 1)
    g = (rng.standard_normal((offsets.size, rows.size))
         + 1j * rng.standard_normal((offsets.size, rows.size))) / math.sqrt(2.0)
    a = np.exp(-1j * np.outer(t, offsets)) @ g
    a *= np.exp(-1j * np.outer(t, symbol))
    a *= cutoff(t, window)[:, None]
    return BandField(a, (rows, cols), window, domain, cutoff)


def free_band_field(spectrum: Spectrum, window, nt, cutoff=None) -> BandField:
    """Free evolution of ``spectrum`` on ``[0, window)`` with the cutoff applied."""
    cutoff = cutoff or CutoffProfile()
    d = spectrum.domain
    rows, cols = np.nonzero(spectrum.coeffs)
    t = (window / nt) * np.arange(nt)
    a = spectrum.coeffs[rows, cols][None, :] * np.exp(-1j * np.outer(t, d.grid.symbol[rows, cols]))
    a *= cutoff(t, window)[:, None]
    return BandField(a, (rows, cols), window, d, cutoff)


def free_evolution_field(spectrum: Spectrum, window, nt, cutoff=None) -> SpaceTimeField:
    """Dense :class:`SpaceTimeField` of the cut-off free evolution of ``spectrum``."""
    return free_band_field(spectrum, window, nt, cutoff).to_spacetime()
