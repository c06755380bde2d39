"""Resumable parameter sweeps over experiment configs.

Each config runs in ``<root>/<name>-<hash12>`` where the hash covers every
numerically relevant setting.  A run directory that already holds a
``summary.json`` is complete and is skipped, as is a second config with the
same hash in one sweep.  Failed runs leave an ``error.json`` and are retried
on the next sweep.
"""
from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import BlowUpError, ParameterError, WaveguideError
from .config import ExperimentConfig, config_from_dict, load_config
from .experiment import dump_json, run_experiment

log = logging.getLogger(__name__)

TABLE_COLUMNS = ("name", "hash", "status", "s", "bound", "beta", "beta_limit", "beta_ok", "r2",
                 "max_C", "median_C", "passed", "error")


@dataclass
class SweepResult:
    rows: list
    statuses: dict = field(default_factory=dict)  # hash -> status

    @property
    def failed(self):
        return [h for h, st in self.statuses.items() if st == "failed"]


def run_dir_for(cfg: ExperimentConfig, root) -> Path:
    return Path(root) / f"{cfg.name}-{cfg.content_hash()[:12]}"


def _run_one(cfg_dict, out):
    """Worker entry point; takes plain data so it pickles cleanly."""
    cfg = config_from_dict(cfg_dict).with_output_dir(out)
    try:
        run_experiment(cfg)
    except WaveguideError as exc:
        kind = "blowup" if isinstance(exc, BlowUpError) else "parameter" if isinstance(exc, ParameterError) else "error"
        Path(out).mkdir(parents=True, exist_ok=True)
        dump_json(Path(out) / "error.json", {"kind": kind, "message": str(exc)})
        return {"status": "failed", "error": f"{kind}: {exc}"}
    return {"status": "completed"}


def _table_rows(cfg: ExperimentConfig, h, status, summary, error=""):
    rows = []
    orders = cfg.growth_orders or (None,)
    for s in orders:
        row = dict.fromkeys(TABLE_COLUMNS, "")
        row.update(name=cfg.name, hash=h[:12], status=status, error=error)
        if s is not None:
            row["s"] = s
            row["bound"] = 2.0 * (s - 1.0)
            row["beta_limit"] = 2.0 * (s - 1.0) + 0.5
        if summary is not None:
            row["passed"] = summary["passed"]
            key = f"{s:g}" if s is not None else None
            fit = summary["fits"].get(key)
            if fit:
                row["beta"] = fit["beta"]
                row["r2"] = fit["r2"]
                row["beta_ok"] = fit["beta"] <= row["beta_limit"]
            it = summary["iteration"].get(key)
            if it:
                row["max_C"] = it["max"]
                row["median_C"] = it["median"]
        rows.append(row)
    return rows


def sweep(configs, root, workers: int = 1) -> SweepResult:
    """Run every config (at most ``workers`` at a time) and aggregate one table row per growth order."""
    configs = list(configs)
    if not configs:
        raise ParameterError("sweep needs at least one config")
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}")
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    plan = []  # (cfg, hash, run dir, status)
    seen = set()
    for cfg in configs:
        h = cfg.content_hash()
        out = run_dir_for(cfg, root)
        if h in seen:
            status = "duplicate"
        elif (out / "summary.json").exists():
            status = "skipped"
        else:
            status = "pending"
        seen.add(h)
        plan.append([cfg, h, out, status])

    todo = [p for p in plan if p[3] == "pending"]
    outcomes = {}
    if workers == 1 or len(todo) <= 1:
        for cfg, h, out, _ in todo:
            outcomes[h] = _run_one(cfg.to_dict(), str(out))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {h: pool.submit(_run_one, cfg.to_dict(), str(out)) for cfg, h, out, _ in todo}
            for h, fut in futures.items():
                try:
                    outcomes[h] = fut.result()
                except Exception as exc:  # worker crashed outside the run itself
                    outcomes[h] = {"status": "failed", "error": f"worker: {exc}"}

    rows = []
    statuses = {}
    for cfg, h, out, status in plan:
        error = ""
        if status == "pending":
            status = outcomes[h]["status"]
            error = outcomes[h].get("error", "")
        if status == "failed":
            log.warning("run %s failed: %s", cfg.name, error)
        summary = None
        if status in ("completed", "skipped", "duplicate") and (out / "summary.json").exists():
            summary = json.loads((out / "summary.json").read_text())
        statuses.setdefault(h, status)
        rows.extend(_table_rows(cfg, h, status, summary, error))
    write_table(root / "sweep_table.csv", rows)
    return SweepResult(rows, statuses)


def write_table(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=TABLE_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})


def load_config_dir(path):
    """All ``*.toml`` configs in ``path``, in sorted file-name order."""
    files = sorted(Path(path).glob("*.toml"))
    if not files:
        raise ParameterError(f"no *.toml configs in {path}")
    return [load_config(f) for f in files]
