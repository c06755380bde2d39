"""Strang-split time integration of the defocusing cubic NLS

    i u_t + Laplacian u = |u|^2 u      on  [-L, L) x [0, 2pi).

Both sub-flows are solved exactly: the linear flow is the phase multiplier
``exp(-i (xi^2 + n^2) t)`` and the nonlinear flow ``u_t = -i |u|^2 u`` keeps
``|u|`` fixed pointwise, so it is the rotation ``u * exp(-i |u|^2 t)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
import scipy.fft as sfft

from . import kernels
from .errors import BlowUpError, ObserverError, ParameterError
from .spectral import Field, Spectrum

MASS_JUMP_LIMIT = 0.01


def linear_propagate(s: Spectrum, t: float) -> Spectrum:
    """Free Schrodinger flow ``exp(it Laplacian)`` applied to a spectrum."""
    if t == 0:
        return s.copy()
    return Spectrum(s.coeffs * np.exp(-1j * t * s.grid.symbol), s.domain)


@dataclass
class EvolutionState:
    field: Field
    t: float = 0.0
    dt: float = 1e-3
    dealias: bool = True

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ParameterError(f"dt must be positive, got {self.dt}")
        if not self.field.is_finite():
            raise BlowUpError("initial field is not finite", t=self.t)

    @property
    def domain(self):
        return self.field.domain


@dataclass
class Observer:
    """Callback ``fn(t, field)`` fired every ``every`` steps.

    With ``include_final`` the observer also fires after the last step of an
    :func:`evolve` call even when it is off-cadence.
    """

    fn: Callable[[float, Field], None]
    every: int = 1
    include_final: bool = False
    name: str = ""

    def __post_init__(self):
        if int(self.every) < 1:
            raise ParameterError(f"observer cadence must be >= 1, got {self.every}")
        self.every = int(self.every)
        if not self.name:
            self.name = getattr(self.fn, "__name__", type(self.fn).__name__)


def _half_multiplier(grid, h, dealias):
    m = np.exp(-0.5j * h * grid.symbol)
    if dealias:
        m = np.where(grid.dealias_mask, m, 0.0)
    return m


def _check_mass(m, m_prev, t):
    if not math.isfinite(m):
        raise BlowUpError("non-finite field", t=t)
    if m_prev is not None and abs(m - m_prev) > MASS_JUMP_LIMIT * m_prev:
        raise BlowUpError(
            f"mass jumped from {m_prev:.6g} to {m:.6g} in one step (>{MASS_JUMP_LIMIT:.0%})", t=t
        )


def step_strang(state: EvolutionState) -> EvolutionState:
    """Advance one step of size ``state.dt``; the input state is not modified."""
    grid = state.domain.grid
    half = _half_multiplier(grid, state.dt, state.dealias)
    u = state.field.values
    m_prev = kernels.abs2_sum(u)
    c = sfft.fft2(u)
    c *= half
    u = sfft.ifft2(c)
    m = kernels.nonlinear_rotate(u, state.dt)
    t_new = state.t + state.dt
    _check_mass(m, m_prev if not state.dealias else None, t_new)
    c = sfft.fft2(u)
    c *= half
    u = sfft.ifft2(c)
    if not np.all(np.isfinite(u)):
        raise BlowUpError("non-finite field", t=t_new)
    return replace(state, field=Field(u, state.domain), t=t_new)


def _as_observers(observers):
    out = []
    for ob in observers or ():
        out.append(ob if isinstance(ob, Observer) else Observer(ob))
    return out


def step_count(span, dt):
    """Number of steps used to cover ``span``; the last one may be shorter."""
    if span <= 0:
        return 0
    return max(1, math.ceil(span / dt - 1e-9))


def evolve(
    state: EvolutionState,
    t_end: float,
    observers: Sequence[Observer | Callable] = (),
) -> EvolutionState:
    """Integrate from ``state.t`` to ``t_end`` with fixed steps ``state.dt``.

    Consecutive linear half-steps are fused into one multiplier between
    observation points, so each step costs one forward and one inverse FFT.
    Observers receive a :class:`Field` they must not modify.  An observer
    may abort the run by raising :class:`BlowUpError`, which propagates
    unchanged; any other exception is wrapped in :class:`ObserverError`.
    """
    if t_end < state.t:
        raise ParameterError(f"t_end={t_end} precedes current time {state.t}")
    obs = _as_observers(observers)
    span = t_end - state.t
    nsteps = step_count(span, state.dt)
    if nsteps == 0:
        return replace(state, field=state.field.copy())

    grid = state.domain.grid
    dt = state.dt
    h_last = span - (nsteps - 1) * dt
    half = _half_multiplier(grid, dt, state.dealias)
    full = half * half
    half_last = half if h_last == dt else _half_multiplier(grid, h_last, state.dealias)

    u = np.ascontiguousarray(state.field.values, dtype=np.complex128)
    m_prev = None if state.dealias else kernels.abs2_sum(u)
    c = sfft.fft2(u)
    c *= half if nsteps > 1 else half_last
    t0 = state.t
    t = t0
    for i in range(nsteps):
        last = i == nsteps - 1
        h = h_last if last else dt
        u = sfft.ifft2(c)
        m = kernels.nonlinear_rotate(u, h)
        t = t_end if last else t0 + (i + 1) * dt
        _check_mass(m, m_prev, t)
        m_prev = m
        c = sfft.fft2(u)
        due = [ob for ob in obs if (i + 1) % ob.every == 0 or (last and ob.include_final)]
        next_half = None
        if not last:
            next_half = half_last if i + 1 == nsteps - 1 else half
        if due or last or next_half is not half:
            c *= half_last if last else half
            if due or last:
                u = sfft.ifft2(c)
                if not np.all(np.isfinite(u)):
                    raise BlowUpError("non-finite field", t=t)
                snapshot = Field(u, state.domain)
                for ob in due:
                    try:
                        ob.fn(t, snapshot)
                    except BlowUpError:
                        raise
                    except Exception as exc:
                        raise ObserverError(f"observer {ob.name!r} failed at t={t:.6g}: {exc}", t=t) from exc
            if not last:
                c *= next_half
        else:
            c *= full
    return replace(state, field=Field(u, state.domain), t=t)
