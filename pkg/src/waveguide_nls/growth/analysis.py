"""Power-law fits of norm growth and the windowed iteration-bound checker."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats

from ..errors import DegenerateInputError, ParameterError

MIN_FIT_SAMPLES = 8
GAMMA_NUMERATOR = 0.45


@dataclass
class PowerLawFit:
    """``norm ~ prefactor * t^beta`` fitted on ``t >= t_min``.

    ``beta_low``/``beta_high`` bound a 95% confidence band from the
    regression standard error (Student t with ``n - 2`` dof).
    """

    beta: float
    r2: float
    prefactor: float
    stderr: float
    beta_low: float
    beta_high: float
    n: int
    t_min: float

    def to_dict(self):
        return asdict(self)


def fit_power_law(times, norms, t_min=10.0) -> PowerLawFit:
    """Least-squares slope of ``log norm`` against ``log t`` over ``t >= t_min``."""
    t = np.asarray(times, dtype=np.float64)
    y = np.asarray(norms, dtype=np.float64)
    if t.shape != y.shape:
        raise ParameterError(f"times and norms differ in shape: {t.shape} vs {y.shape}")
    sel = t >= t_min
    n = int(np.count_nonzero(sel))
    if n < MIN_FIT_SAMPLES:
        raise ParameterError(f"need >= {MIN_FIT_SAMPLES} samples with t >= {t_min}, got {n}")
    t, y = t[sel], y[sel]
    if np.any(t <= 0):
        raise ParameterError("fit times must be positive")
    if not np.all(y > 0):
        raise ParameterError("norms must be positive to fit a power law")
    lt, ly = np.log(t), np.log(y)
    if np.ptp(lt) == 0:
        raise ParameterError("fit needs at least two distinct times")
    res = stats.linregress(lt, ly)
    resid = ly - (res.intercept + res.slope * lt)
    ss_res = float(np.dot(resid, resid))
    ss_tot = float(np.dot(ly - ly.mean(), ly - ly.mean()))
    if np.ptp(ly) == 0:
        # constant data: a flat line fits exactly
        r2 = 1.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    half = float(stats.t.ppf(0.975, n - 2) * res.stderr)
    beta = float(res.slope)
    return PowerLawFit(beta, float(r2), float(math.exp(res.intercept)), float(res.stderr),
                       beta - half, beta + half, n, float(t_min))


def default_gamma(s: float) -> float:
    """``0.45 / (s - 1)``, a concrete value for the exponent loss ``(1/2-)/(s-1)``."""
    if not s > 1:
        raise ParameterError(f"the default gamma needs s > 1, got s={s}; pass gamma explicitly")
    return GAMMA_NUMERATOR / (s - 1.0)


@dataclass
class IterationBoundReport:
    """Per-window constants ``C_j`` of the bound ``a_{j+1} <= a_j + C a_j^{1 - gamma/2}``, ``a = ||u||^2``."""

    s: float | None
    gamma: float
    window_times: list
    constants: list
    max: float
    median: float

    def to_dict(self):
        return asdict(self)


def iteration_constants(norms, gamma) -> np.ndarray:
    """``C_j = max(0, x_{j+1}^2 - x_j^2) / x_j^(2 - gamma)`` for a sequence of norms ``x_j``."""
    x = np.asarray(norms, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise ParameterError("need at least two window endpoints")
    if not gamma > 0:
        raise ParameterError(f"gamma must be positive, got {gamma}")
    if np.any(x[:-1] <= 0):
        j = int(np.argmax(x[:-1] <= 0))
        raise DegenerateInputError(f"zero norm at window endpoint {j}")
    growth = np.maximum(0.0, x[1:] ** 2 - x[:-1] ** 2)
    return growth / x[:-1] ** (2.0 - gamma)


def check_iteration_bound(record, s: float, gamma: float | None = None) -> IterationBoundReport:
    """Constants ``C_j`` over the windows ``[t_j, t_{j+1}]`` of a :class:`GrowthRecord`."""
    gamma = default_gamma(s) if gamma is None else float(gamma)
    times = record.window_times
    c = iteration_constants(record.norms_at_windows(s), gamma)
    return IterationBoundReport(float(s), gamma, [float(t) for t in times], [float(v) for v in c],
                                float(c.max()), float(np.median(c)))
