"""Randomized empirical checks of the Strichartz-type and multilinear estimates.

Each trial draws random band-limited data, evaluates both sides of an
inequality and records their ratio.  A bounded ensemble maximum whose growth
in the band parameter matches the claimed exponent is evidence for the
estimate, not a proof of it.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.fft as sfft

from .. import kernels
from ..errors import ContractError, ParameterError
from ..spectral import DomainSpec, Spectrum, band_mask
from .fields import (
    BandField,
    CutoffProfile,
    SpaceTimeField,
    XsbParams,
    box_modes,
    next_pow2,
    random_band_field,
)
from .norms import spacetime_l2_norm, spacetime_l4_norm, xsb_from_time_coeffs, xsb_norm

STRICHARTZ_GRID = 256
DEFAULT_WINDOW = 0.25
TRILINEAR_WINDOW = 0.0625
DEFAULT_MODULATION = 2
TAU_MARGIN_POINTS = 16


@dataclass
class EstimateTrial:
    lhs: float
    rhs: float
    seed: int | None = None
    metadata: dict = field(default_factory=dict)
    ratio: float = field(init=False)

    def __post_init__(self):
        self.lhs, self.rhs = float(self.lhs), float(self.rhs)
        if self.lhs < 0 or self.rhs < 0:
            raise ParameterError("norms must be non-negative")
        if self.rhs == 0:
            self.ratio = math.inf if self.lhs > 0 else 0.0
        else:
            self.ratio = self.lhs / self.rhs

    def to_dict(self):
        return asdict(self)


def _rng(seed):
    return np.random.default_rng(seed)


def _complex_gaussian(rng, size):
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / math.sqrt(2.0)


def _box_domain(N, degree, half_length=math.pi):
    """Smallest square-ish power-of-two grid on which degree-``degree`` products of box-``N`` data do not alias."""
    jmax = max(1, math.floor(N * half_length / math.pi + 1e-12))
    kmax = max(1, math.floor(N + 1e-12))
    return DomainSpec(half_length, max(16, next_pow2(2 * degree * jmax + 1)),
                      max(16, next_pow2(2 * degree * kmax + 1)))


def _auto_nt(window, tau_max):
    """Time samples whose symmetric tau lattice covers ``|tau| <= tau_max`` plus a margin."""
    reach = tau_max + TAU_MARGIN_POINTS * 2.0 * math.pi / window
    return max(16, next_pow2(math.ceil(window * reach / math.pi)))


def _max_symbol(domain, N):
    rows, cols = box_modes(domain, N)
    return float(domain.grid.symbol[rows, cols].max())


def _check_band(domain, N):
    if not N > 0:
        raise ParameterError(f"band N must be positive, got {N}")
    limit = domain.grid.max_dealiased_frequency
    if N > limit + 1e-12:
        raise ParameterError(f"band N={N} exceeds the dealiased band {limit:g} of this grid")


# --------------------------------------------------------------------------
# Local Strichartz estimate: ||e^{it Lap} P_{<=N} u||_{L^4(I x R x T)} <~ N^eps ||u||_{L^2}


def gauss_nodes(count, interval):
    x, w = np.polynomial.legendre.leggauss(count)
    return 0.5 * interval * (x + 1.0), 0.5 * interval * w


def strichartz_nodes(spectrum, interval):
    """Gauss-Legendre node count for the time integral of ``|e^{it Lap} u|^4``.

    ``|u|^4`` contains temporal frequencies up to ``Omega = 2 * max(xi^2+n^2)``
    over the support.  ``Omega * interval / 8`` nodes resolve the bulk of that
    content: doubling them moves the L^4 norm of Gaussian data by about
    2e-4 relative.  Resolving the extreme corners would need twice as many.
    """
    support = spectrum.coeffs != 0
    if not support.any():
        return 16
    omega = 2.0 * float(spectrum.grid.symbol[support].max())
    return int(math.ceil(omega * interval / 8.0)) + 16


def strichartz_lhs(spectrum: Spectrum, interval=1.0, nodes=None, chunk=8):
    """``||e^{it Lap} u||_{L^4([0, interval] x domain)}`` by Gauss-Legendre in time."""
    d = spectrum.domain
    g = d.grid
    nx, ny = d.shape
    rows = np.nonzero(np.any(spectrum.coeffs != 0, axis=1))[0]
    if rows.size == 0:
        return 0.0
    nodes = nodes or strichartz_nodes(spectrum, interval)
    t, w = gauss_nodes(nodes, interval)
    c0 = spectrum.coeffs[rows] * (g.parity[rows] / math.sqrt(d.cell_area / (nx * ny)))
    # the free phase factorizes as exp(-i t xi^2) exp(-i t n^2)
    xi2 = g.xi[rows] ** 2
    n2 = g.n ** 2
    total = 0.0
    for start in range(0, nodes, chunk):
        tt = t[start:start + chunk]
        part = c0[None] * np.exp(-1j * np.outer(tt, xi2))[:, :, None]
        part *= np.exp(-1j * np.outer(tt, n2))[:, None, :]
        part = sfft.ifft(part, axis=2, overwrite_x=True)
        block = np.zeros((tt.size, nx, ny), dtype=np.complex128)
        block[:, rows] = part
        u = sfft.ifft(block, axis=1, overwrite_x=True)
        for i in range(tt.size):
            total += w[start + i] * kernels.quartic_sum(u[i])
    return (total * d.cell_area) ** 0.25


def strichartz_trial(N, seed, domain: DomainSpec | None = None, interval=1.0, nodes=None,
                     scale=1.0, shift=(0.0, 0.0)) -> EstimateTrial:
    """Random Gaussian data in ``P_{<=N}``, free evolution over ``[0, interval]``."""
    domain = domain or DomainSpec(math.pi, STRICHARTZ_GRID, STRICHARTZ_GRID)
    _check_band(domain, N)
    mask = band_mask(domain.grid, N)
    c = np.zeros(domain.shape, dtype=np.complex128)
    c[mask] = _complex_gaussian(_rng(seed), int(mask.sum()))
    g = domain.grid
    if shift != (0.0, 0.0):
        c *= np.exp(-1j * (g.xi[:, None] * shift[0] + g.n[None, :] * shift[1]))
    c *= scale
    s = Spectrum(c, domain)
    nodes = nodes or strichartz_nodes(s, interval)
    lhs = strichartz_lhs(s, interval, nodes)
    return EstimateTrial(lhs, s.l2_norm(), seed, {
        "estimate": "strichartz", "N": float(N), "scale_param": float(N), "interval": interval,
        "nodes": nodes, "grid": list(domain.shape), "half_length": domain.half_length,
    })


# --------------------------------------------------------------------------
# Space-time trials built on random band-limited fields


def _spacetime_setup(N, degree, window, nt, domain, modulation, tau_factor):
    domain = domain or _box_domain(N, degree)
    _check_band(domain, N)
    sigma = 2.0 * math.pi * modulation / window
    nt = nt or _auto_nt(window, tau_factor * (_max_symbol(domain, N) + sigma))
    return domain, nt


def _draw(domain, N, window, nt, rng, modulation, cutoff, scale, shift):
    f = random_band_field(domain, N, window, nt, rng, modulation=modulation, cutoff=cutoff)
    if shift != (0.0, 0.0):
        f = f.translated(shift)
    if scale != 1.0:
        f = f.scaled(scale)
    return f


def lemma25_trial(N, b2, seed, window=DEFAULT_WINDOW, nt=None, domain=None,
                  modulation=DEFAULT_MODULATION, cutoff=None, scale=1.0, shift=(0.0, 0.0)) -> EstimateTrial:
    """``||u||_{L^4} <= C N^{1/4} ||u||_{X^{0,b2}}`` for a random field in the box of size ``N``."""
    if not b2 > 0.25:
        raise ParameterError(f"b2 must exceed 1/4, got {b2}")
    domain, nt = _spacetime_setup(N, 2, window, nt, domain, modulation, 1.0)
    u = _draw(domain, N, window, nt, _rng(seed), modulation, cutoff, scale, shift)
    lhs = spacetime_l4_norm(u)
    rhs = N ** 0.25 * xsb_norm(u, XsbParams(0.0, b2))
    return EstimateTrial(lhs, rhs, seed, {
        "estimate": "lemma25", "N": float(N), "scale_param": float(N), "b2": b2,
        "window": window, "nt": nt, "grid": list(domain.shape), "modulation": modulation,
    })


def interpolation_trial(N, s0, b3, seed, window=DEFAULT_WINDOW, nt=None, domain=None,
                        modulation=DEFAULT_MODULATION, cutoff=None, scale=1.0, shift=(0.0, 0.0)) -> EstimateTrial:
    """``||u||_{L^4} <= C N^{s0} ||u||_{X^{0,b3}}`` with ``0 < s0 < 1/4``, ``(1-2 s0)/2 < b3 < 1/2``."""
    if not 0 < s0 < 0.25:
        raise ParameterError(f"s0 must lie in (0, 1/4), got {s0}")
    if not (1.0 - 2.0 * s0) / 2.0 < b3 < 0.5:
        raise ParameterError(f"b3 must lie in ({(1 - 2 * s0) / 2:g}, 1/2), got {b3}")
    domain, nt = _spacetime_setup(N, 2, window, nt, domain, modulation, 1.0)
    u = _draw(domain, N, window, nt, _rng(seed), modulation, cutoff, scale, shift)
    lhs = spacetime_l4_norm(u)
    rhs = N ** s0 * xsb_norm(u, XsbParams(0.0, b3))
    return EstimateTrial(lhs, rhs, seed, {
        "estimate": "interpolation", "N": float(N), "scale_param": float(N), "s0": s0, "b3": b3,
        "window": window, "nt": nt, "grid": list(domain.shape), "modulation": modulation,
    })


def bilinear_ratio_parts(u: BandField, v: BandField, b1, chunk=16):
    """``(||uv||_{L^2}, ||u||_{X^{0,b1}} ||v||_{X^{0,b1}})`` for fields on the same grid and window."""
    d = u.domain
    total = 0.0
    for start in range(0, u.nt, chunk):
        stop = min(u.nt, start + chunk)
        w = u.physical(start, stop)
        w *= v.physical(start, stop)
        total += kernels.abs2_sum(w)
    lhs = math.sqrt(total * d.cell_area * u.window / u.nt)
    p = XsbParams(0.0, b1)
    return lhs, xsb_norm(u, p) * xsb_norm(v, p)


def bilinear_trial(N1, N2, b1, seed, window=DEFAULT_WINDOW, nt=None, domain=None,
                   modulation=DEFAULT_MODULATION, cutoff=None, scale=1.0, shift=(0.0, 0.0)) -> EstimateTrial:
    """``||uv||_{L^2} <= C (N1 N2)^eps ||u||_{X^{0,b1}} ||v||_{X^{0,b1}}``."""
    if not b1 > 0.5:
        raise ParameterError(f"b1 must exceed 1/2, got {b1}")
    big = max(N1, N2)
    domain = domain or _box_domain(N1 + N2, 1)
    _check_band(domain, big)
    sigma = 2.0 * math.pi * modulation / window
    nt = nt or _auto_nt(window, _max_symbol(domain, big) + 2 * sigma)
    rng = _rng(seed)
    u = _draw(domain, N1, window, nt, rng, modulation, cutoff, scale, shift)
    v = _draw(domain, N2, window, nt, rng, modulation, cutoff, scale, shift)
    lhs, rhs = bilinear_ratio_parts(u, v, b1)
    return EstimateTrial(lhs, rhs, seed, {
        "estimate": "bilinear", "N1": float(N1), "N2": float(N2), "scale_param": float(N1 * N2),
        "b1": b1, "window": window, "nt": nt, "grid": list(domain.shape), "modulation": modulation,
    })


# --------------------------------------------------------------------------
# Trilinear estimate ||u1 conj(u2) u3||_{X^{s,b'-1}} <= C prod ||u_j||_{X^{s,b}}


def _check_trilinear(params: XsbParams, bprime):
    if not params.s > 0:
        raise ParameterError(f"trilinear estimate needs s > 0, got {params.s}")
    if not 0.5 < params.b <= bprime:
        raise ParameterError(f"need 1/2 < b <= b', got b={params.b}, b'={bprime}")


def trilinear_product(u1: BandField, u2: BandField, u3: BandField, support_N, chunk=8) -> BandField:
    """``u1 * conj(u2) * u3`` as a :class:`BandField` on the box of size ``support_N``."""
    d = u1.domain
    nx, ny = d.shape
    rows, cols = box_modes(d, support_N)
    kept, row_pos = np.unique(rows, return_inverse=True)
    factor = d.grid.parity[rows, 0] * math.sqrt(d.cell_area / (nx * ny))
    out = np.empty((u1.nt, rows.size), dtype=np.complex128)
    for start in range(0, u1.nt, chunk):
        stop = min(u1.nt, start + chunk)
        a = u1.physical(start, stop)
        kernels.triple_product(a, u2.physical(start, stop), u3.physical(start, stop), a)
        c = sfft.fft(a, axis=1, overwrite_x=True)
        c = sfft.fft(c[:, kept], axis=2, overwrite_x=True)
        out[start:stop] = c[:, row_pos, cols] * factor
    return BandField(out, (rows, cols), u1.window, d, u1.cutoff, cutoff_applied=True)


def trilinear_ratio(u1, u2, u3, params: XsbParams, bprime):
    """``(lhs, rhs)`` of the trilinear estimate for dense cut-off space-time fields."""
    for u in (u1, u2, u3):
        if not u.cutoff_applied:
            raise ContractError("time cutoff must be applied before computing a space-time norm")
    prod = SpaceTimeField(u1.values * np.conj(u2.values) * u3.values, u1.window, u1.domain,
                          u1.cutoff, cutoff_applied=True)
    lhs = xsb_norm(prod, XsbParams(params.s, bprime - 1.0))
    rhs = xsb_norm(u1, params) * xsb_norm(u2, params) * xsb_norm(u3, params)
    return lhs, rhs


def trilinear_trials(param_sets, N, seed, window=TRILINEAR_WINDOW, nt=None, domain=None,
                     modulation=DEFAULT_MODULATION, cutoff=None, scale=1.0, shift=(0.0, 0.0)):
    """Evaluate several ``(XsbParams, b')`` pairs on one draw of three random fields.

    The product is independent of the exponents, so sharing the draw costs one
    product evaluation for all parameter sets.
    """
    param_sets = [(p if isinstance(p, XsbParams) else XsbParams(*p), float(bp)) for p, bp in param_sets]
    for p, bp in param_sets:
        _check_trilinear(p, bp)
    domain, nt = _spacetime_setup(N, 3, window, nt, domain, modulation, 2.0)
    rng = _rng(seed)
    fields = [_draw(domain, N, window, nt, rng, modulation, cutoff, scale, shift) for _ in range(3)]
    prod = trilinear_product(*fields, support_N=3 * N)
    trials = []
    for p, bp in param_sets:
        lhs = xsb_from_time_coeffs(prod.coeffs, window, prod.symbol, prod.frequency_size,
                                   XsbParams(p.s, bp - 1.0))
        rhs = math.prod(xsb_norm(f, p) for f in fields)
        trials.append(EstimateTrial(lhs, rhs, seed, {
            "estimate": "trilinear", "N": float(N), "scale_param": float(N), "s": p.s, "b": p.b,
            "bprime": bp, "window": window, "nt": nt, "grid": list(domain.shape),
            "modulation": modulation,
        }))
    return trials


def trilinear_trial(p: XsbParams, bprime, N, seed, **kwargs) -> EstimateTrial:
    return trilinear_trials([(p, bprime)], N, seed, **kwargs)[0]
