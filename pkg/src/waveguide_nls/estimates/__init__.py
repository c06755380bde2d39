"""Discrete Bourgain norms and randomized estimate trials."""
from .fields import (
    BandField,
    CutoffProfile,
    SpaceTimeField,
    XsbParams,
    free_band_field,
    free_evolution_field,
    random_band_field,
)
from .norms import (
    characteristic_concentration,
    spacetime_l2_norm,
    spacetime_l4_norm,
    tau_lattice,
    xsb_norm,
)
from .report import EnsembleReport, batch_document, ensemble_report, loglog_slope
from .trials import (
    EstimateTrial,
    bilinear_trial,
    interpolation_trial,
    lemma25_trial,
    strichartz_lhs,
    strichartz_trial,
    trilinear_product,
    trilinear_ratio,
    trilinear_trial,
    trilinear_trials,
)
