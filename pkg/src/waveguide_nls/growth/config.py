"""Experiment configuration: TOML loading, validation and content hashing.

A config file looks like::

    name = "gaussian-torus"
    dt = 5e-3
    t_end = 200.0
    window = 1.0                # T_loc, the length of each [t_j, t_{j+1}]
    orders = [0, 1, 1.5, 2]     # H^s orders recorded; 1 is always added
    growth_orders = [1.5, 2]    # orders that get a power-law fit and bound check
    dealias = true
    fit_t_min = 10.0
    output_dir = "runs/gaussian-torus"

    [domain]
    half_length_pi = 48         # or half_length = 150.8
    nx = 128
    ny = 128

    [initial]
    family = "gaussian_torus"
    seed = 0
    [initial.params]
    amplitude = 0.3
    width = 20.0
    n = 1

    [cadence]
    diagnostics = 200           # steps between CSV rows; must divide the window
    snapshot = 0                # steps between snapshots; 0 keeps only the final one

Relative paths in ``output_dir`` resolve against the config file's directory.
"""
from __future__ import annotations

import hashlib
import json
import math
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..errors import ParameterError
from ..spectral import DomainSpec

BOUNDARY_MODES = ("auto", "on", "off")


@dataclass(frozen=True)
class InitialSpec:
    family: str
    seed: int = 0
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Cadence:
    diagnostics: int | None = None  # None: one row per window
    snapshot: int = 0


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated description of one nonlinear run."""

    domain: DomainSpec
    dt: float
    t_end: float
    initial: InitialSpec
    name: str = "run"
    orders: tuple = (0.0, 1.0, 2.0)
    growth_orders: tuple | None = None
    window: float = 1.0
    dealias: bool = True
    fit_t_min: float = 10.0
    gamma: float | None = None
    mass_tolerance: float = 1e-6
    boundary_check: str = "auto"
    cadence: Cadence = Cadence()
    output_dir: str | None = None

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ParameterError(f"dt must be positive, got {self.dt}")
        if not (self.window > 0 and math.isfinite(self.window)):
            raise ParameterError(f"window must be positive, got {self.window}")
        # t_end = 0 is the degenerate "initial diagnostics only" run
        if not (self.t_end == 0 or self.t_end >= self.window):
            raise ParameterError(f"t_end={self.t_end} must be 0 or at least the window {self.window}")
        orders = sorted({float(s) for s in self.orders} | {1.0})
        if any(not s >= 0 for s in orders):
            raise ParameterError(f"diagnostic orders must be >= 0, got {orders}")
        object.__setattr__(self, "orders", tuple(orders))
        growth = self.growth_orders
        if growth is None:
            growth = [s for s in orders if s > 1]
        growth = tuple(sorted({float(s) for s in growth}))
        missing = [s for s in growth if s not in orders]
        if missing:
            raise ParameterError(f"growth orders {missing} are not among the diagnostic orders")
        object.__setattr__(self, "growth_orders", growth)
        if self.gamma is not None and not self.gamma > 0:
            raise ParameterError(f"gamma must be positive, got {self.gamma}")
        if self.boundary_check not in BOUNDARY_MODES:
            raise ParameterError(f"boundary_check must be one of {BOUNDARY_MODES}, got {self.boundary_check!r}")
        if not self.mass_tolerance > 0:
            raise ParameterError("mass_tolerance must be positive")
        ratio = self.window / self.dt
        if abs(ratio - round(ratio)) > 1e-9 * ratio:
            raise ParameterError(f"window {self.window} is not an integer multiple of dt {self.dt}")
        every = self.cadence.diagnostics
        if every is not None and (every < 1 or self.window_steps % every):
            raise ParameterError(
                f"diagnostics cadence {every} must divide the {self.window_steps} steps of a window"
            )
        if self.cadence.snapshot < 0:
            raise ParameterError("snapshot cadence must be >= 0")

    @property
    def window_steps(self) -> int:
        return int(round(self.window / self.dt))

    @property
    def diagnostics_every(self) -> int:
        return self.cadence.diagnostics or self.window_steps

    def to_dict(self) -> dict:
        d = asdict(self)
        d["domain"] = {"half_length": self.domain.half_length, "nx": self.domain.nx, "ny": self.domain.ny}
        d["orders"] = list(self.orders)
        d["growth_orders"] = list(self.growth_orders)
        return d

    def physics_dict(self) -> dict:
        """Everything that determines the numerical result (no name or output path)."""
        d = self.to_dict()
        del d["name"], d["output_dir"]
        return d

    def content_hash(self) -> str:
        blob = json.dumps(self.physics_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def with_output_dir(self, path) -> "ExperimentConfig":
        return replace(self, output_dir=str(path))


_TOP_KEYS = {
    "name", "dt", "t_end", "window", "orders", "growth_orders", "dealias", "fit_t_min",
    "gamma", "mass_tolerance", "boundary_check", "output_dir", "domain", "initial", "cadence",
}


def _domain_from(d):
    d = dict(d)
    if "half_length_pi" in d:
        if "half_length" in d:
            raise ParameterError("give either half_length or half_length_pi, not both")
        d["half_length"] = math.pi * float(d.pop("half_length_pi"))
    unknown = set(d) - {"half_length", "nx", "ny"}
    if unknown:
        raise ParameterError(f"unknown [domain] keys: {sorted(unknown)}")
    try:
        return DomainSpec(float(d["half_length"]), d["nx"], d["ny"])
    except KeyError as exc:
        raise ParameterError(f"[domain] is missing {exc.args[0]!r}") from None


def config_from_dict(data: dict, base_dir: Path | None = None) -> ExperimentConfig:
    """Build a config from parsed TOML (or :meth:`ExperimentConfig.to_dict` output)."""
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ParameterError(f"unknown config keys: {sorted(unknown)}")
    for key in ("domain", "initial", "dt", "t_end"):
        if key not in data:
            raise ParameterError(f"config is missing {key!r}")
    init = dict(data["initial"])
    if "family" not in init:
        raise ParameterError("[initial] needs a family")
    unknown = set(init) - {"family", "seed", "params"}
    if unknown:
        raise ParameterError(f"unknown [initial] keys: {sorted(unknown)}")
    initial = InitialSpec(str(init["family"]), int(init.get("seed", 0)), dict(init.get("params", {})))
    cad = dict(data.get("cadence", {}))
    unknown = set(cad) - {"diagnostics", "snapshot"}
    if unknown:
        raise ParameterError(f"unknown [cadence] keys: {sorted(unknown)}")
    cadence = Cadence(cad.get("diagnostics"), int(cad.get("snapshot", 0)))
    out = data.get("output_dir")
    if out is not None and base_dir is not None and not Path(out).is_absolute():
        out = str(base_dir / out)
    kwargs = {k: data[k] for k in ("name", "window", "dealias", "fit_t_min", "gamma",
                                    "mass_tolerance", "boundary_check") if k in data}
    for key in ("orders", "growth_orders"):
        if key in data:
            kwargs[key] = tuple(data[key])
    try:
        return ExperimentConfig(
            domain=_domain_from(data["domain"]),
            dt=float(data["dt"]),
            t_end=float(data["t_end"]),
            initial=initial,
            cadence=cadence,
            output_dir=out,
            **kwargs,
        )
    except TypeError as exc:
        raise ParameterError(f"malformed config: {exc}") from None


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ParameterError(f"{path}: {exc}") from None
    except OSError as exc:
        raise ParameterError(f"cannot read config {path}: {exc.strerror}") from None
    return config_from_dict(data, base_dir=path.parent)
