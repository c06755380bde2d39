"""Exception hierarchy shared across the package."""


class WaveguideError(Exception):
    """Base class for all package errors."""


class ParameterError(WaveguideError, ValueError):
    """An argument is outside its admissible range."""


class DegenerateInputError(ParameterError):
    """Input data makes a requested quantity undefined (e.g. a zero norm in a ratio)."""


class ContractError(WaveguideError, RuntimeError):
    """A precondition on the *state* of an object is violated."""


class BlowUpError(WaveguideError, RuntimeError):
    """The numerical solution became non-finite or lost mass abruptly.

    Attributes
    ----------
    t : float or None
        Physical time at which the failure was detected.
    """

    def __init__(self, message, t=None):
        if t is not None:
            message = f"{message} (t={t:.6g})"
        super().__init__(message)
        self.t = t


class BoundaryContaminationError(BlowUpError):
    """Mass reached the edge of the truncated real line."""


class ObserverError(WaveguideError, RuntimeError):
    """An observer callback raised during a time integration."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t
