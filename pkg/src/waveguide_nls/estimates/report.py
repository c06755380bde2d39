"""Aggregate statistics and JSON output for trial ensembles."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import ParameterError

QUANTILES = (0.05, 0.25, 0.5, 0.75, 0.95)

NOTE = ("Empirical check: ratios over a finite random ensemble. A bounded maximum with "
        "growth slope matching the claimed exponent is evidence, not proof.")


def loglog_slope(x, y):
    """Least-squares slope of ``log y`` against ``log x``."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size < 2:
        return None
    lx, ly = np.log(x), np.log(y)
    lx0 = lx - lx.mean()
    return float(np.dot(lx0, ly - ly.mean()) / np.dot(lx0, lx0))


@dataclass
class EnsembleReport:
    count: int
    max: float
    median: float
    min: float
    mean: float
    spread: float
    quantiles: dict
    per_scale: list = field(default_factory=list)
    slope_max: float | None = None
    slope_median: float | None = None
    note: str = NOTE

    def to_dict(self):
        return asdict(self)


def ensemble_report(trials, scale_key="scale_param") -> EnsembleReport:
    """Summarize trial ratios; slopes are log-log regressions of per-scale max/median against scale."""
    trials = list(trials)
    if not trials:
        raise ParameterError("ensemble_report needs at least one trial")
    r = np.array([t.ratio for t in trials], dtype=np.float64)
    groups = {}
    for t in trials:
        scale = t.metadata.get(scale_key)
        if scale is not None:
            groups.setdefault(float(scale), []).append(t.ratio)
    per_scale = []
    for scale in sorted(groups):
        g = np.array(groups[scale])
        per_scale.append({"scale": scale, "count": int(g.size), "max": float(g.max()),
                          "median": float(np.median(g))})
    slope_max = slope_median = None
    if len(per_scale) >= 2 and all(p["max"] > 0 and math.isfinite(p["max"]) for p in per_scale):
        scales = [p["scale"] for p in per_scale]
        slope_max = loglog_slope(scales, [p["max"] for p in per_scale])
        slope_median = loglog_slope(scales, [p["median"] for p in per_scale])
    with np.errstate(invalid="ignore"):  # infinite ratios make interpolated quantiles inf or nan
        quantiles = {str(q): float(np.quantile(r, q)) for q in QUANTILES}
    return EnsembleReport(
        count=int(r.size),
        max=float(r.max()),
        median=float(np.median(r)),
        min=float(r.min()),
        mean=float(r.mean()),
        spread=float(r.max() - r.min()),
        quantiles=quantiles,
        per_scale=per_scale,
        slope_max=slope_max,
        slope_median=slope_median,
    )


def batch_document(estimate, parameters, trials, report: EnsembleReport | None = None):
    report = report or ensemble_report(trials)
    return {
        "estimate": estimate,
        "parameters": parameters,
        "seeds": [t.seed for t in trials],
        "trials": [{"seed": t.seed, "lhs": t.lhs, "rhs": t.rhs, "ratio": t.ratio,
                    "metadata": t.metadata} for t in trials],
        "summary": report.to_dict(),
    }


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=True)
