"""Dense real-symmetric and Hermitian matrix primitives.

Every spectral operation in the package reduces to one kernel: the cyclic
Jacobi eigensolver (compiled when available, pure Python otherwise).
Hermitian problems are solved on the 2d x 2d real embedding
``[[Re H, -Im H], [Im H, Re H]]`` so there is a single kernel to test.
"""

from dataclasses import dataclass

import numpy as np

from ._kernels import BACKEND, jacobi_eigh
from .errors import EigenSolverNotConverged, NotPositiveDefinite

__all__ = [
    "BACKEND",
    "Tolerances",
    "DEFAULT_TOL",
    "symmetrize",
    "hermitize",
    "sym_eig",
    "herm_eig",
    "herm_embed",
    "min_eig_sym",
    "min_eig_herm",
    "psd_project",
    "sqrtm_spd",
    "expm_sym",
    "logm_spd",
    "solve_spd",
    "inverse_spd",
    "det_sym",
]


@dataclass(frozen=True)
class Tolerances:
    """Central tolerance record; all scale-dependent bounds derive from it."""

    eig_off_rel: float = 1e-14   # Jacobi off-diagonal target, relative to ||M||_F
    eig_max_sweeps: int = 100
    pd_rel: float = 1e-12        # positive-definiteness floor, relative to max|entry|


DEFAULT_TOL = Tolerances()


def symmetrize(m):
    """Exact symmetric part 0.5*(M + M^T)."""
    m = np.asarray(m, dtype=float)
    return 0.5 * (m + m.T)


def hermitize(h):
    """Exact Hermitian part 0.5*(H + H^dagger)."""
    h = np.asarray(h, dtype=complex)
    return 0.5 * (h + h.conj().T)


def _scale(m):
    s = float(np.max(np.abs(m))) if m.size else 0.0
    return s if s > 0.0 else 1.0


def sym_eig(m, tol=DEFAULT_TOL):
    """Eigendecomposition of a real symmetric matrix.

    Returns ``(w, V)`` with eigenvalues ascending and orthogonal ``V`` such
    that ``M = V diag(w) V^T``.
    """
    m = symmetrize(m)
    try:
        return jacobi_eigh(m, off_rel=tol.eig_off_rel, max_sweeps=tol.eig_max_sweeps)
    except RuntimeError as exc:
        raise EigenSolverNotConverged(str(exc)) from exc


def herm_embed(h):
    """Real symmetric embedding [[Re H, -Im H], [Im H, Re H]] of Hermitian H."""
    h = np.asarray(h, dtype=complex)
    re, im = h.real, h.imag
    return np.block([[re, -im], [im, re]])


def _unembed(e, d):
    """Inverse of :func:`herm_embed`, averaging the redundant blocks."""
    re = 0.5 * (e[:d, :d] + e[d:, d:])
    im = 0.5 * (e[d:, :d] - e[:d, d:])
    return re + 1j * im


def herm_eig(h, tol=DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix via the real embedding.

    The embedding doubles every eigenvalue; pairs are deduplicated and each
    contributes one complex eigenvector.  Returns ``(w, U)`` with ``w``
    ascending (length d) and ``U`` unitary, ``H = U diag(w) U^dagger``.
    """
    h = hermitize(h)
    d = h.shape[0]
    we, ve = sym_eig(herm_embed(h), tol)
    # Each real eigenvector [u; v] yields the complex candidate u + i v.
    # Multiplying a complex eigenvector by i permutes the real pair, so a
    # greedy Gram-Schmidt over ascending candidates keeps exactly one per pair.
    w_out = np.empty(d)
    u_out = np.empty((d, d), dtype=complex)
    kept = 0
    for k in range(2 * d):
        cand = ve[:d, k] + 1j * ve[d:, k]
        for j in range(kept):
            cand = cand - (u_out[:, j].conj() @ cand) * u_out[:, j]
        nrm = np.linalg.norm(cand)
        if nrm < 0.5:
            continue
        u_out[:, kept] = cand / nrm
        w_out[kept] = we[k]
        kept += 1
        if kept == d:
            break
    if kept != d:
        raise EigenSolverNotConverged(
            "Hermitian pair deduplication kept %d of %d vectors" % (kept, d)
        )
    return w_out, u_out


def min_eig_sym(m, tol=DEFAULT_TOL):
    """Smallest eigenvalue of a real symmetric matrix."""
    w, _ = sym_eig(m, tol)
    return float(w[0])


def min_eig_herm(h, tol=DEFAULT_TOL):
    """Smallest eigenvalue of a Hermitian matrix (via the real embedding)."""
    w, _ = sym_eig(herm_embed(hermitize(h)), tol)
    return float(w[0])


def psd_project(m, tol=DEFAULT_TOL):
    """Frobenius-nearest positive semidefinite matrix (eigenvalue clipping).

    Accepts a real symmetric or complex Hermitian matrix and returns the
    same kind.
    """
    m = np.asarray(m)
    if np.iscomplexobj(m):
        h = hermitize(m)
        d = h.shape[0]
        e = psd_project(herm_embed(h), tol)
        return hermitize(_unembed(e, d))
    w, v = sym_eig(m, tol)
    return symmetrize((v * np.clip(w, 0.0, None)) @ v.T)


def _spd_eig(m, tol, what):
    w, v = sym_eig(m, tol)
    floor = tol.pd_rel * _scale(np.asarray(m, dtype=float))
    if w[0] <= floor:
        raise NotPositiveDefinite(
            "%s requires a positive definite matrix (min eigenvalue %.3e)"
            % (what, w[0])
        )
    return w, v


def sqrtm_spd(m, tol=DEFAULT_TOL):
    """Symmetric positive definite square root of an SPD matrix."""
    w, v = _spd_eig(m, tol, "sqrtm_spd")
    return symmetrize((v * np.sqrt(w)) @ v.T)


def expm_sym(m, tol=DEFAULT_TOL):
    """Matrix exponential of a symmetric matrix via eigendecomposition."""
    w, v = sym_eig(m, tol)
    return symmetrize((v * np.exp(w)) @ v.T)


def logm_spd(m, tol=DEFAULT_TOL):
    """Matrix logarithm of an SPD matrix; inverse of :func:`expm_sym` there."""
    w, v = _spd_eig(m, tol, "logm_spd")
    return symmetrize((v * np.log(w)) @ v.T)


def solve_spd(m, b, tol=DEFAULT_TOL):
    """Solve M x = b for SPD M."""
    w, v = _spd_eig(m, tol, "solve_spd")
    b = np.asarray(b, dtype=float)
    return v @ ((v.T @ b).T / w).T


def inverse_spd(m, tol=DEFAULT_TOL):
    """Inverse of an SPD matrix, symmetric by construction."""
    w, v = _spd_eig(m, tol, "inverse_spd")
    return symmetrize((v / w) @ v.T)


def det_sym(m, tol=DEFAULT_TOL):
    """Determinant of a symmetric matrix as the product of its eigenvalues."""
    w, _ = sym_eig(m, tol)
    return float(np.prod(w))
