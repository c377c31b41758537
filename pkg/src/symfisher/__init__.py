"""Fisher-information sensitivity analysis with standard and symplectic (Williamson) spectra."""

__version__ = "0.1.0"

from .distributions import InputModel, Variable, analytic_fim, sample, score
from .entropy import (
    decompose_perturbation,
    ellipsoid_radii,
    kl_quadratic,
    parameter_contributions,
    symplectic_contributions,
)
from .estimator import EstimatorConfig, ScoreRegressor, estimate_fim, output_scores
from .fim import (
    FisherMatrix,
    PairingSpec,
    ParamLabel,
    apply_pairing,
    condition_number,
    normalize,
    read_fim,
    reparameterize,
    write_fim,
)
from .linalg import (
    EigenSpectrum,
    SymplecticSpectrum,
    regularize,
    skew_schur,
    spd_sqrt,
    sym_eig,
    symplectic_check,
    symplectic_form,
    williamson,
)
from .sensitivity import Decomposition, FisherSensitivity, decompose

__all__ = [
    "Decomposition",
    "EigenSpectrum",
    "EstimatorConfig",
    "FisherMatrix",
    "FisherSensitivity",
    "InputModel",
    "PairingSpec",
    "ParamLabel",
    "ScoreRegressor",
    "SymplecticSpectrum",
    "Variable",
    "analytic_fim",
    "apply_pairing",
    "condition_number",
    "decompose",
    "decompose_perturbation",
    "ellipsoid_radii",
    "estimate_fim",
    "kl_quadratic",
    "normalize",
    "output_scores",
    "parameter_contributions",
    "read_fim",
    "regularize",
    "reparameterize",
    "sample",
    "score",
    "skew_schur",
    "spd_sqrt",
    "sym_eig",
    "symplectic_check",
    "symplectic_contributions",
    "symplectic_form",
    "williamson",
    "write_fim",
]
