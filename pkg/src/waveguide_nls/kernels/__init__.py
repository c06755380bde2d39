"""Hot elementwise kernels with a compiled backend and a NumPy fallback.

The compiled extension is used when it imports; setting the environment
variable ``WAVEGUIDE_NLS_PURE_PYTHON=1`` forces the NumPy path.  ``BACKEND``
records which one is active.
"""
import os

from . import _reference as reference

fast = None
if os.environ.get("WAVEGUIDE_NLS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _fast as fast
    except ImportError:  # extension not built
        fast = None

_impl = fast if fast is not None else reference
BACKEND = "cython" if fast is not None else "numpy"

nonlinear_rotate = _impl.nonlinear_rotate
abs2_sum = _impl.abs2_sum
quartic_sum = _impl.quartic_sum
weighted_abs2_sum = _impl.weighted_abs2_sum
xsb_weighted_sum = _impl.xsb_weighted_sum
triple_product = _impl.triple_product

__all__ = [
    "BACKEND",
    "abs2_sum",
    "fast",
    "nonlinear_rotate",
    "quartic_sum",
    "reference",
    "triple_product",
    "weighted_abs2_sum",
    "xsb_weighted_sum",
]
