"""Pseudospectral cubic NLS on the waveguide R x T with a Bourgain-norm estimate lab."""
from .diagnostics import (
    ShellSpectrum,
    cascade_fraction,
    energy,
    h1_bound,
    lp_shells,
    mass,
    sobolev_norm,
)
from .errors import (
    BlowUpError,
    BoundaryContaminationError,
    ContractError,
    DegenerateInputError,
    ObserverError,
    ParameterError,
    WaveguideError,
)
from .evolution import EvolutionState, Observer, evolve, linear_propagate, step_strang
from .kernels import BACKEND
from .spectral import (
    DomainSpec,
    Field,
    FourierGrid,
    Spectrum,
    dealias_project,
    forward_transform,
    inverse_transform,
    project_band,
    sobolev_weights,
)

__version__ = "0.1.0"
