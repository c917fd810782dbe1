"""Exception hierarchy shared across the package."""


class GaussepError(Exception):
    """Base class for all gaussep errors."""


class DimensionMismatch(GaussepError):
    """Input dimensions are inconsistent (odd, non-square, or wrong size)."""


class NotPositiveDefinite(GaussepError):
    """A matrix that must be positive definite is not."""


class NotBonaFide(GaussepError):
    """A covariance matrix violates the quantum condition.

    Carries the offending eigenvalue in ``offending``.
    """

    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = offending


class NotSymplectic(GaussepError):
    """A matrix fails the symplectic-group predicate."""


class NotInLieAlgebra(GaussepError):
    """A parameter matrix is not a symmetric element of sp(2n)."""


class ReconstructionMismatch(GaussepError):
    """Block identities of S^T S are inconsistent beyond tolerance."""


class QuadratureNotConverged(GaussepError):
    """Node doubling changed a quadrature result by more than the tolerance."""


class NonzeroMean(GaussepError):
    """An operation requires a centered state but the mean is nonzero."""


class EigenSolverNotConverged(GaussepError):
    """Internal fault: the Jacobi sweep cap was exhausted."""


class StateFileError(GaussepError):
    """A state, certificate, or report file failed validation."""


class DegenerateSpectrum(UserWarning):
    """Diagnostic: symplectic eigenvalues closer than the degeneracy tolerance."""
