"""gaussep: separability of bipartite Gaussian quantum states.

Decides separability from covariance matrices with evidence-carrying
verdicts: positive definite symplectic certificates for separable states,
PPT witnesses for entangled ones.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .errors import (
    DegenerateSpectrum,
    DimensionMismatch,
    GaussepError,
    NonzeroMean,
    NotBonaFide,
    NotInLieAlgebra,
    NotPositiveDefinite,
    NotSymplectic,
    QuadratureNotConverged,
    ReconstructionMismatch,
    StateFileError,
)
from .separability import (
    DominationResult,
    Entangled,
    EntanglementWitness,
    PPTResult,
    Separable,
    SeparabilityCertificate,
    SeparabilityVerdict,
    SolverConfig,
    Undetermined,
    certificate_check,
    decide_separability,
    direct_symplectic_search,
    domination_check,
    equality_case_state,
    partial_transpose,
    ppt_test,
    werner_wolf_feasibility,
)
from .states import (
    GaussianState,
    Partition,
    PureGaussian,
    QuadConfig,
    make_state,
    pure_gaussian_from_symplectic,
    pure_gaussian_wavefunction,
    pure_gaussian_wigner_closed,
    purity,
    recommended_cutoff,
    standard_coherent_wigner,
    wigner_density,
    wigner_log_density,
    wigner_transform_numeric_1d,
)
from .symplectic import (
    WilliamsonDecomposition,
    blob_extract,
    direct_sum,
    is_posdef_symplectic,
    is_symplectic,
    posdef_symplectic_from_param,
    random_symplectic,
    standard_J,
    sym_lie_element,
    symplectic_eigenvalues,
    williamson,
)

__all__ = [
    "__version__",
    "BACKEND",
    # errors
    "GaussepError",
    "DimensionMismatch",
    "NotPositiveDefinite",
    "NotBonaFide",
    "NotSymplectic",
    "NotInLieAlgebra",
    "ReconstructionMismatch",
    "QuadratureNotConverged",
    "NonzeroMean",
    "StateFileError",
    "DegenerateSpectrum",
    # symplectic core
    "standard_J",
    "direct_sum",
    "is_symplectic",
    "is_posdef_symplectic",
    "symplectic_eigenvalues",
    "WilliamsonDecomposition",
    "williamson",
    "blob_extract",
    "random_symplectic",
    "sym_lie_element",
    "posdef_symplectic_from_param",
    # states
    "Partition",
    "GaussianState",
    "PureGaussian",
    "QuadConfig",
    "make_state",
    "wigner_density",
    "wigner_log_density",
    "purity",
    "standard_coherent_wigner",
    "pure_gaussian_from_symplectic",
    "pure_gaussian_wavefunction",
    "pure_gaussian_wigner_closed",
    "wigner_transform_numeric_1d",
    "recommended_cutoff",
    # separability
    "SolverConfig",
    "SeparabilityCertificate",
    "EntanglementWitness",
    "Separable",
    "Entangled",
    "Undetermined",
    "SeparabilityVerdict",
    "PPTResult",
    "DominationResult",
    "partial_transpose",
    "ppt_test",
    "werner_wolf_feasibility",
    "decide_separability",
    "certificate_check",
    "direct_symplectic_search",
    "equality_case_state",
    "domination_check",
]
