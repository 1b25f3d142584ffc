"""descentlab: double-descent risk curves for minimum-norm least squares.

Closed-form risks, seeded Monte Carlo cross-checks, and curve generation
for two random-feature regression models (isotropic Gaussian designs and
random DFT submatrices), with a small dense linear algebra layer whose
hot kernels run either as a compiled extension or a numpy fallback.
"""

from . import backend
from .fourier import (
    BetaModel,
    FourierSpec,
    Spectrum,
    asymptotic_risk,
    conditional_risk,
    dft_matrix,
    spectrum_weights,
    weighted_risk,
)
from .gaussian import (
    BASEL,
    GaussianSpec,
    SplitNorms,
    monte_carlo_risk,
    noiseless_risk,
    noisy_risk,
    prescient_norms,
    prescient_risk,
    random_selection_risk,
    split_norms,
)
from .harness import (
    DEFAULT_SEED,
    ExperimentConfig,
    ExperimentModel,
    RiskCurve,
    RiskPoint,
    run_experiment,
    write_csv,
)
from .linalg import (
    ConvergenceError,
    SvdResult,
    hermitian_eigenvalues,
    min_norm_solve,
    projection_onto_rowspace,
    pseudoinverse,
    svd,
)
from .risk import DIVERGENT, RiskValue, finite_risk
from .subsets import FeatureSet, random_subset

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend",
    # linalg
    "ConvergenceError",
    "SvdResult",
    "svd",
    "pseudoinverse",
    "min_norm_solve",
    "hermitian_eigenvalues",
    "projection_onto_rowspace",
    # risk primitives
    "RiskValue",
    "DIVERGENT",
    "finite_risk",
    "FeatureSet",
    "random_subset",
    # gaussian model
    "BASEL",
    "GaussianSpec",
    "SplitNorms",
    "split_norms",
    "noiseless_risk",
    "noisy_risk",
    "random_selection_risk",
    "prescient_norms",
    "prescient_risk",
    "monte_carlo_risk",
    # fourier model
    "BetaModel",
    "Spectrum",
    "FourierSpec",
    "dft_matrix",
    "spectrum_weights",
    "weighted_risk",
    "conditional_risk",
    "asymptotic_risk",
    # harness
    "DEFAULT_SEED",
    "ExperimentModel",
    "ExperimentConfig",
    "RiskPoint",
    "RiskCurve",
    "run_experiment",
    "write_csv",
]
