"""Long-time growth experiments: configs, runs, fits and sweeps."""
from .analysis import (
    IterationBoundReport,
    PowerLawFit,
    check_iteration_bound,
    default_gamma,
    fit_power_law,
    iteration_constants,
)
from .config import Cadence, ExperimentConfig, InitialSpec, config_from_dict, load_config
from .experiment import (
    BoundaryContaminationWarning,
    GrowthRecord,
    analyze_run,
    read_csv,
    run_experiment,
)
from .initial import FAMILIES, build_initial
from .sweep import SweepResult, load_config_dir, sweep

__all__ = [
    "BoundaryContaminationWarning", "Cadence", "ExperimentConfig", "FAMILIES", "GrowthRecord",
    "InitialSpec", "IterationBoundReport", "PowerLawFit", "SweepResult", "analyze_run",
    "build_initial", "check_iteration_bound", "config_from_dict", "default_gamma",
    "fit_power_law", "iteration_constants", "load_config", "load_config_dir", "read_csv",
    "run_experiment", "sweep",
]
