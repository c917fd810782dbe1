"""Gaussian states as covariance data: bona-fide checks, Wigner densities,
purity, pure-Gaussian reconstruction from S^T S, and a 1-D numerical
Wigner-transform oracle."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    DimensionMismatch,
    NotBonaFide,
    NotPositiveDefinite,
    NotSymplectic,
    QuadratureNotConverged,
    ReconstructionMismatch,
)
from .matrix_kernel import (
    det_sym,
    herm_embed,
    inverse_spd,
    sym_eig,
    symmetrize,
)
from .symplectic import (
    direct_sum,
    is_symplectic,
    standard_J,
    symplectic_eigenvalues,
)

__all__ = [
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
]


@dataclass(frozen=True)
class Partition:
    """Bipartition (n_A, n_B) with the per-subsystem (x, p) block layout.

    The global phase-space vector is z = (x_A, p_A, x_B, p_B); the form is
    J_AB = J_A (+) J_B, which is *not* the standard form of n_A + n_B modes
    in global (x, p) ordering.
    """

    n_A: int
    n_B: int

    def __post_init__(self):
        if self.n_A < 1 or self.n_B < 1:
            raise DimensionMismatch(
                "both subsystems need at least one mode, got (%r, %r)"
                % (self.n_A, self.n_B)
            )

    @property
    def n(self):
        return self.n_A + self.n_B

    @property
    def dim(self):
        return 2 * self.n

    def form(self):
        """J_AB = J_A (+) J_B in the per-subsystem layout."""
        return direct_sum(standard_J(self.n_A), standard_J(self.n_B))

    @property
    def slice_A(self):
        return slice(0, 2 * self.n_A)

    @property
    def slice_B(self):
        return slice(2 * self.n_A, 2 * self.n)

    def block(self, m, which):
        s = self.slice_A if which == "A" else self.slice_B
        return np.asarray(m)[s, s]

    def pt_signs(self):
        """Diagonal of the partial-transpose map: flip p_B only."""
        signs = np.ones(self.dim)
        signs[2 * self.n_A + self.n_B :] = -1.0
        return signs

    def std_permutation(self):
        """R mapping the per-subsystem layout to global (x..x, p..p) order."""
        na, nb = self.n_A, self.n_B
        xs = list(range(na)) + list(range(2 * na, 2 * na + nb))
        ps = list(range(na, 2 * na)) + list(range(2 * na + nb, 2 * (na + nb)))
        return np.eye(self.dim)[xs + ps]


@dataclass(frozen=True)
class GaussianState:
    """Bona-fide Gaussian state: covariance, mean, hbar, and bipartition.

    Construct through :func:`make_state`, which enforces the quantum
    condition.
    """

    sigma: np.ndarray
    mean: np.ndarray
    hbar: float
    partition: Partition

    @property
    def n(self):
        return self.partition.n


@dataclass(frozen=True)
class PureGaussian:
    """Pure Gaussian wavefunction data: psi(x) proportional to
    exp(-(X + iY) x.x / 2 hbar) with X symmetric PD and Y symmetric."""

    X: np.ndarray
    Y: np.ndarray
    hbar: float

    @property
    def n(self):
        return self.X.shape[0]


def make_state(sigma, mean=None, hbar=1.0, partition=None, tol=1e-9):
    """Validate and build a GaussianState.

    The bona-fide check is the minimum Hermitian eigenvalue of
    Sigma + (i hbar/2) J_AB >= -tol, cross-validated against
    nu_min >= hbar/2 - tol; the state is accepted when either test passes
    within its band (they agree away from the boundary).
    """
    if partition is None:
        raise DimensionMismatch("make_state requires a Partition")
    sigma = symmetrize(np.asarray(sigma, dtype=float))
    if sigma.shape != (partition.dim, partition.dim):
        raise DimensionMismatch(
            "covariance is %s but partition wants %dx%d"
            % (sigma.shape, partition.dim, partition.dim)
        )
    if mean is None:
        mean = np.zeros(partition.dim)
    mean = np.asarray(mean, dtype=float)
    if mean.shape != (partition.dim,):
        raise DimensionMismatch("mean has shape %s" % (mean.shape,))
    if hbar <= 0:
        raise ValueError("hbar must be positive")

    j_ab = partition.form()
    herm_min = float(sym_eig(herm_embed(sigma + 0.5j * hbar * j_ab))[0][0])
    try:
        nu_min = float(symplectic_eigenvalues(sigma, j_ab)[-1])
    except NotPositiveDefinite as exc:
        raise NotBonaFide(
            "covariance is not positive definite: %s" % exc, offending=herm_min
        ) from exc
    if herm_min < -tol and nu_min < hbar / 2.0 - tol:
        raise NotBonaFide(
            "state violates the quantum condition: "
            "min eig(Sigma + i hbar/2 J) = %.12g, nu_min = %.12g < hbar/2 = %.12g"
            % (herm_min, nu_min, hbar / 2.0),
            offending=nu_min,
        )
    return GaussianState(sigma=sigma, mean=mean, hbar=float(hbar), partition=partition)


def _quadform(m, z):
    z = np.asarray(z)
    return np.einsum("ij,...i,...j->...", m, z, z)


def wigner_log_density(state, z):
    """log of the Gaussian Wigner density at z (vectorized over rows)."""
    n = state.n
    dz = np.asarray(z, dtype=float) - state.mean
    inv = inverse_spd(state.sigma)
    logdet = float(np.sum(np.log(sym_eig(state.sigma)[0])))
    return -n * math.log(2.0 * math.pi) - 0.5 * logdet - 0.5 * _quadform(inv, dz)


def wigner_density(state, z):
    """Gaussian Wigner density (1/2pi)^n (det Sigma)^(-1/2) exp(-Sigma^{-1}dz.dz/2).

    ``z`` may be a single phase-space vector or an array of them (rows).
    """
    return np.exp(wigner_log_density(state, z))


def purity(state):
    """mu = (hbar/2)^n (det Sigma)^(-1/2); equals 1 exactly for pure states."""
    n = state.n
    det = det_sym(state.sigma)
    return float((state.hbar / 2.0) ** n / math.sqrt(det))


def standard_coherent_wigner(z_x, n_x, hbar):
    """Wigner function of the standard coherent state: (pi hbar)^-n e^{-|z|^2/hbar}."""
    z_x = np.asarray(z_x, dtype=float)
    sq = np.sum(z_x * z_x, axis=-1) if z_x.ndim > 0 else z_x * z_x
    return (math.pi * hbar) ** (-n_x) * np.exp(-sq / hbar)


def pure_gaussian_from_symplectic(s, hbar, sp_tol=1e-9, consistency_tol=1e-9):
    """Solve the S^T S block identities for the (X, Y) wavefunction matrices.

    With G = S^T S in (x, p) block form, X = G22^{-1} and Y = G22^{-1} G21;
    the remaining blocks must then satisfy G11 = X + Y X^{-1} Y, which is
    verified and raises :class:`ReconstructionMismatch` on failure (a
    non-symplectic input that slipped through the tolerance gate).
    """
    s = np.asarray(s, dtype=float)
    if not is_symplectic(s, tol=sp_tol):
        raise NotSymplectic("input to pure_gaussian_from_symplectic")
    n = s.shape[0] // 2
    g = symmetrize(s.T @ s)
    g11 = g[:n, :n]
    g21 = g[n:, :n]
    g22 = g[n:, n:]
    x = inverse_spd(g22)
    y_raw = x @ g21
    scale = max(1.0, float(np.max(np.abs(g))))
    if float(np.linalg.norm(y_raw - y_raw.T)) > consistency_tol * scale:
        raise ReconstructionMismatch("Y = G22^{-1} G21 is not symmetric")
    y = symmetrize(y_raw)
    if float(np.linalg.norm(g11 - (x + y @ g22 @ y))) > consistency_tol * scale:
        raise ReconstructionMismatch("G11 block identity failed")
    return PureGaussian(X=x, Y=y, hbar=float(hbar))


def _as_points(x, n):
    """Normalize x to shape (m, n); scalars and flat arrays allowed at n=1."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        if n != 1:
            raise DimensionMismatch("scalar point but n=%d" % n)
        return x.reshape(1, 1), True
    if x.ndim == 1:
        if x.shape[0] == n:
            return x.reshape(1, n), True
        if n == 1:
            return x.reshape(-1, 1), False
        raise DimensionMismatch("point has length %d, expected %d" % (x.shape[0], n))
    return x, False


def pure_gaussian_wavefunction(pg, x):
    """psi(x) = (pi hbar)^{-n/4} (det X)^{1/4} exp(-(X + iY) x.x / 2 hbar)."""
    pts, single = _as_points(x, pg.n)
    q = _quadform(pg.X + 1j * pg.Y, pts)
    amp = (math.pi * pg.hbar) ** (-pg.n / 4.0) * det_sym(pg.X) ** 0.25
    out = amp * np.exp(-q / (2.0 * pg.hbar))
    return out[0] if single else out


def pure_gaussian_wigner_closed(s, z, hbar, sp_tol=1e-9):
    """Closed-form Wigner of the pure Gaussian built from S:
    (pi hbar)^{-n} exp(-(S^T S z).z / hbar)."""
    s = np.asarray(s, dtype=float)
    if not is_symplectic(s, tol=sp_tol):
        raise NotSymplectic("input to pure_gaussian_wigner_closed")
    n = s.shape[0] // 2
    g = symmetrize(s.T @ s)
    return (math.pi * hbar) ** (-n) * np.exp(-_quadform(g, z) / hbar)


@dataclass(frozen=True)
class QuadConfig:
    """Quadrature controls for the numerical Wigner transform."""

    cutoff: Optional[float] = None  # half-width of the y window; None = 12 sqrt(hbar)
    nodes: int = 2048
    conv_tol: float = 1e-8


def recommended_cutoff(s, hbar):
    """Integration half-width covering the support of psi built from S:
    12 sqrt(hbar max eig(S^T S)^{+/-1})."""
    g = symmetrize(np.asarray(s).T @ np.asarray(s))
    w, _ = sym_eig(g)
    lam = max(float(w[-1]), 1.0 / float(w[0]))
    return 12.0 * math.sqrt(hbar * lam)


def wigner_transform_numeric_1d(psi, x, p, hbar, quad_cfg=None):
    """Numerical Wigner transform of a one-mode wavefunction:

        W(x, p) = (1/2 pi hbar) Int e^{-i p y / hbar} psi(x + y/2)
                  conj(psi(x - y/2)) dy

    by trapezoid quadrature.  ``psi`` must accept an ndarray of points.
    Raises :class:`QuadratureNotConverged` when doubling the node count
    moves the result by more than the configured tolerance; the doubled
    result is returned otherwise.
    """
    cfg = quad_cfg if quad_cfg is not None else QuadConfig()
    half_width = cfg.cutoff if cfg.cutoff is not None else 12.0 * math.sqrt(hbar)

    def trap(nodes):
        y = np.linspace(-half_width, half_width, nodes)
        f = np.exp(-1j * p * y / hbar) * psi(x + y / 2.0) * np.conj(psi(x - y / 2.0))
        return float(np.trapezoid(f, y).real) / (2.0 * math.pi * hbar)

    coarse = trap(cfg.nodes)
    fine = trap(2 * cfg.nodes)
    if abs(fine - coarse) > cfg.conv_tol:
        raise QuadratureNotConverged(
            "node doubling moved the Wigner value by %.3e (tol %.3e)"
            % (abs(fine - coarse), cfg.conv_tol)
        )
    return fine
