"""Long-time nonlinear runs with H^s tracking and on-disk persistence.

A run directory holds

``diagnostics.csv``
    one row per recorded time: ``t, mass, energy, boundary_fraction``, then ``hs_<s>``
    per order, ``shell_<k>`` energies and ``cascade_<k>`` fractions
    (``k >= 1``).  Floats are written with ``repr`` so they round-trip exactly.
``summary.json``
    fits, iteration-bound constants and consistency checks.
``config.json``
    the resolved configuration.
``final.bin`` (and ``snapshot_<step>.bin`` if a snapshot cadence is set)
    fields in the binary snapshot format of :mod:`waveguide_nls.snapshot`.

Nothing time- or host-dependent is written, so identical configs reproduce
identical files.
"""
from __future__ import annotations

import csv
import json
import logging
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import snapshot
from ..diagnostics import (
    boundary_mass_fraction,
    ShellSpectrum,
    cascade_fraction,
    energy,
    h1_bound,
    lp_shells,
    mass,
    shell_index,
    sobolev_norm,
)
from ..errors import BoundaryContaminationError, ParameterError
from ..evolution import EvolutionState, Observer, evolve
from ..spectral import Field, forward_transform
from .analysis import check_iteration_bound, default_gamma, fit_power_law
from .config import ExperimentConfig, config_from_dict
from .initial import build_initial

log = logging.getLogger(__name__)

BOUNDARY_WARN = 1e-6
BOUNDARY_ERROR = 1e-3
H1_BOUND_SLACK = 1e-6


class BoundaryContaminationWarning(UserWarning):
    pass


def order_label(s) -> str:
    return f"hs_{float(s):g}"


@dataclass
class GrowthRecord:
    """Aligned diagnostic time series of one run plus its derived statistics."""

    times: np.ndarray
    hs_norms: dict
    mass: np.ndarray
    energy: np.ndarray
    h1_bound: float
    window: float
    shells: np.ndarray
    boundary_fraction: np.ndarray
    fits: dict = field(default_factory=dict)
    iteration: dict = field(default_factory=dict)

    @property
    def window_times(self) -> np.ndarray:
        """Recorded times that are window endpoints ``t_j = j * window``."""
        q = self.times / self.window
        return self.times[np.abs(q - np.round(q)) < 1e-9 * np.maximum(1.0, q)]

    def norms_at_windows(self, s) -> np.ndarray:
        q = self.times / self.window
        on = np.abs(q - np.round(q)) < 1e-9 * np.maximum(1.0, q)
        return self.hs_norms[float(s)][on]

    def mass_drift(self) -> float:
        m0 = self.mass[0]
        return float(np.max(np.abs(self.mass - m0)) / m0) if m0 > 0 else 0.0

    def energy_drift(self) -> float:
        e0 = self.energy[0]
        return float(np.max(np.abs(self.energy - e0)) / e0) if e0 > 0 else 0.0


class _Recorder:
    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        g = cfg.domain.grid
        self.n_shells = int(shell_index(g).max()) + 1
        self.rows = []
        self.shells = []
        self.boundary = []
        self.check_boundary = cfg.boundary_check == "on"
        self.warned = False

    def __call__(self, t, f: Field):
        s = forward_transform(f)
        sh = lp_shells(s)
        m = mass(f)
        e = energy(f, s)
        frac = boundary_mass_fraction(f)
        self.rows.append((t, m, e, [sobolev_norm(s, order) for order in self.cfg.orders]))
        energies = np.zeros(self.n_shells)
        energies[:sh.energies.size] = sh.energies
        self.shells.append(energies)
        self.boundary.append(frac)
        if self.check_boundary:
            self._check(t, frac)

    def _check(self, t, frac):
        if frac > BOUNDARY_ERROR:
            raise BoundaryContaminationError(
                f"mass fraction {frac:.3g} in the outer 10% of [-L, L) exceeds {BOUNDARY_ERROR:g}", t=t
            )
        if frac > BOUNDARY_WARN and not self.warned:
            self.warned = True
            warnings.warn(f"boundary mass fraction {frac:.3g} at t={t:g} exceeds {BOUNDARY_WARN:g}",
                          BoundaryContaminationWarning, stacklevel=2)


def _record_from(rec: _Recorder, cfg: ExperimentConfig) -> GrowthRecord:
    times = np.array([r[0] for r in rec.rows])
    m = np.array([r[1] for r in rec.rows])
    e = np.array([r[2] for r in rec.rows])
    hs = {order: np.array([r[3][i] for r in rec.rows]) for i, order in enumerate(cfg.orders)}
    return GrowthRecord(
        times=times, hs_norms=hs, mass=m, energy=e,
        h1_bound=float(h1_bound(m[0], e[0], cfg.domain.grid)), window=cfg.window,
        shells=np.array(rec.shells), boundary_fraction=np.array(rec.boundary),
    )


def analyze_record(record: GrowthRecord, cfg: ExperimentConfig) -> dict:
    """Fit growth exponents and iteration constants; return the consistency checks."""
    record.fits = {}
    record.iteration = {}
    for s in cfg.growth_orders:
        t = record.times
        if np.count_nonzero(t >= cfg.fit_t_min) >= 8:
            record.fits[s] = fit_power_law(t, record.hs_norms[s], cfg.fit_t_min)
        gamma = cfg.gamma if cfg.gamma is not None else default_gamma(s)
        if record.window_times.size >= 2:
            record.iteration[s] = check_iteration_bound(record, s, gamma)
    h1_sq = record.hs_norms[1.0] ** 2
    checks = {
        "mass_drift": {"value": record.mass_drift(), "limit": cfg.mass_tolerance,
                       "ok": record.mass_drift() <= cfg.mass_tolerance},
        "h1_bound": {"value": float(h1_sq.max()), "limit": record.h1_bound,
                     "ok": bool(h1_sq.max() <= record.h1_bound * (1.0 + H1_BOUND_SLACK))},
    }
    for s, fit in record.fits.items():
        limit = 2.0 * (s - 1.0) + 0.5
        checks[f"beta_{s:g}"] = {"value": fit.beta, "limit": limit, "ok": fit.beta <= limit}
    return checks


def summary_document(record: GrowthRecord, cfg: ExperimentConfig, checks: dict, status="completed") -> dict:
    return {
        "name": cfg.name,
        "config_hash": cfg.content_hash(),
        "status": status,
        "t_final": float(record.times[-1]),
        "rows": int(record.times.size),
        "mass_drift": record.mass_drift(),
        "energy_drift": record.energy_drift(),
        "h1_bound": record.h1_bound,
        "max_boundary_fraction": float(record.boundary_fraction.max()),
        "fits": {f"{s:g}": fit.to_dict() for s, fit in record.fits.items()},
        "iteration": {f"{s:g}": rep.to_dict() for s, rep in record.iteration.items()},
        "checks": checks,
        "passed": all(c["ok"] for c in checks.values()),
        "note": "growth below the bound is consistency with an upper bound, not evidence of sharpness",
    }


def csv_header(cfg: ExperimentConfig, n_shells: int):
    return (["t", "mass", "energy", "boundary_fraction"] + [order_label(s) for s in cfg.orders]
            + [f"shell_{k}" for k in range(n_shells)] + [f"cascade_{k}" for k in range(1, n_shells)])


def write_csv(path, record: GrowthRecord, cfg: ExperimentConfig):
    n_shells = record.shells.shape[1]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(csv_header(cfg, n_shells))
        for i, t in enumerate(record.times):
            sh = record.shells[i]
            casc = [cascade_fraction(ShellSpectrum(sh), k) for k in range(1, n_shells)]
            row = [t, record.mass[i], record.energy[i], record.boundary_fraction[i]]
            row += [record.hs_norms[s][i] for s in cfg.orders] + list(sh) + casc
            w.writerow([repr(float(v)) for v in row])


def read_csv(path, cfg: ExperimentConfig) -> GrowthRecord:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, data = rows[0], np.array([[float(v) for v in r] for r in rows[1:]])
    col = {name: i for i, name in enumerate(header)}
    shells = data[:, [i for name, i in col.items() if name.startswith("shell_")]]
    m, e = data[:, col["mass"]], data[:, col["energy"]]
    return GrowthRecord(
        times=data[:, col["t"]],
        hs_norms={s: data[:, col[order_label(s)]] for s in cfg.orders},
        mass=m, energy=e, h1_bound=float(h1_bound(m[0], e[0], cfg.domain.grid)), window=cfg.window,
        shells=shells, boundary_fraction=data[:, col["boundary_fraction"]],
    )


def dump_json(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")


def run_experiment(cfg: ExperimentConfig, write: bool = True) -> GrowthRecord:
    """Evolve ``cfg`` to ``t_end``, record diagnostics and (optionally) persist them.

    Raises
    ------
    BlowUpError
        non-finite values or a mass jump, with the time of failure.
    BoundaryContaminationError
        more than ``1e-3`` of the mass reached the outer tenth of ``[-L, L)``.
        In ``boundary_check = "auto"`` mode the check is active only when the
        initial data starts below the ``1e-6`` warning level, so families that
        are periodic in ``x1`` by construction are exempt.
    """
    g = cfg.domain.grid
    top = float(g.symbol[g.dealias_mask].max() if cfg.dealias else g.symbol.max())
    if cfg.dt * top > np.pi:
        log.warning("dt * max(xi^2 + n^2) = %.3g exceeds pi: split-step resonances can amplify "
                    "roundoff at high modes; check the mass and energy drift", cfg.dt * top)
    f0 = build_initial(cfg.domain, cfg.initial.family, cfg.initial.params, cfg.initial.seed, cfg.dealias)
    rec = _Recorder(cfg)
    if cfg.boundary_check == "auto":
        rec.check_boundary = boundary_mass_fraction(f0) <= BOUNDARY_WARN
    rec(0.0, f0)
    out = Path(cfg.output_dir) if (write and cfg.output_dir) else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    observers = [Observer(rec, every=cfg.diagnostics_every, include_final=True, name="diagnostics")]
    if out is not None and cfg.cadence.snapshot:
        counter = {"step": 0}

        def save_snapshot(t, f):
            counter["step"] += cfg.cadence.snapshot
            snapshot.save(out / f"snapshot_{counter['step']:08d}.bin", f)

        observers.append(Observer(save_snapshot, every=cfg.cadence.snapshot, name="snapshot"))
    state = EvolutionState(f0, 0.0, cfg.dt, cfg.dealias)
    if cfg.t_end > 0:
        log.info("running %s to t=%g (dt=%g)", cfg.name, cfg.t_end, cfg.dt)
        state = evolve(state, cfg.t_end, observers)
    if rec.rows[-1][0] != state.t:
        rec(state.t, state.field)
    record = _record_from(rec, cfg)
    checks = analyze_record(record, cfg)
    if out is not None:
        write_csv(out / "diagnostics.csv", record, cfg)
        dump_json(out / "config.json", cfg.to_dict())
        snapshot.save(out / "final.bin", state.field)
        # written last: its presence marks the run as complete
        dump_json(out / "summary.json", summary_document(record, cfg, checks))
    return record


def analyze_run(run_dir) -> dict:
    """Recompute fits and checks from a run directory's CSV and config.

    Writes ``analysis.json`` next to the inputs and returns its content; the
    ``passed`` key is false if any consistency check fails.
    """
    run_dir = Path(run_dir)
    try:
        cfg = config_from_dict(json.loads((run_dir / "config.json").read_text()))
        record = read_csv(run_dir / "diagnostics.csv", cfg)
    except FileNotFoundError as exc:
        raise ParameterError(f"{run_dir} is not a run directory: missing {Path(exc.filename).name}") from None
    checks = analyze_record(record, cfg)
    doc = summary_document(record, cfg, checks, status="analyzed")
    dump_json(run_dir / "analysis.json", doc)
    return doc
