"""Symplectic form, group predicates, Williamson decomposition, and the
constructive quantum-blob extraction.

Ordering convention: within one subsystem the phase-space vector is
``(x_1..x_n, p_1..p_n)`` and the form is ``J = [[0, I], [-I, 0]]``.  A
bipartite system uses the per-subsystem block layout ``z = z_A (+) z_B``
with ``J_AB = J_A (+) J_B``; see :class:`gaussep.states.Partition`.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSpectrum,
    DimensionMismatch,
    NotBonaFide,
    NotInLieAlgebra,
)
from .matrix_kernel import (
    expm_sym,
    herm_eig,
    sqrtm_spd,
    sym_eig,
    symmetrize,
)

__all__ = [
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
    "lie_algebra_residual",
    "posdef_symplectic_from_param",
    "lie_param_dim",
    "lie_element_from_vector",
    "vector_from_lie_element",
]

DEGENERACY_TOL = 1e-12


def standard_J(n):
    """Standard symplectic form [[0, I_n], [-I_n, 0]] for n modes."""
    if n < 1:
        raise DimensionMismatch("mode count must be >= 1, got %r" % (n,))
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def direct_sum(*mats):
    """Block-diagonal direct sum of square matrices."""
    dims = [m.shape[0] for m in mats]
    out = np.zeros((sum(dims), sum(dims)))
    at = 0
    for m, d in zip(mats, dims):
        out[at : at + d, at : at + d] = m
        at += d
    return out


def _check_even_square(m, what):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch("%s expects a square matrix" % what)
    if m.shape[0] % 2 != 0:
        raise DimensionMismatch(
            "%s expects an even dimension, got %d" % (what, m.shape[0])
        )
    return m


def is_symplectic(m, J=None, tol=1e-10):
    """True iff ||M^T J M - J||_F <= tol."""
    m = _check_even_square(m, "is_symplectic")
    if J is None:
        J = standard_J(m.shape[0] // 2)
    return float(np.linalg.norm(m.T @ J @ m - J)) <= tol


def is_posdef_symplectic(m, J=None, tol=1e-10):
    """True iff M is symmetric within tol, positive definite, and symplectic."""
    m = _check_even_square(m, "is_posdef_symplectic")
    if float(np.linalg.norm(m - m.T)) > tol:
        return False
    w, _ = sym_eig(m)
    if w[0] <= 0.0:
        return False
    return is_symplectic(m, J, tol)


def _xp_split(J):
    """Split indices of a standard-like form into (x-list, partner p-list).

    Works for any form assembled from standard blocks (so each column has a
    single +/-1 entry): column j holding -1 at row i marks j as an x-type
    coordinate with conjugate momentum i.
    """
    J = np.asarray(J)
    d = J.shape[0]
    xs, ps = [], []
    for j in range(d):
        col = J[:, j]
        nz = np.flatnonzero(np.abs(col) > 0.5)
        if nz.size != 1:
            raise DimensionMismatch("form is not assembled from standard blocks")
        i = int(nz[0])
        if col[i] < 0.0:
            xs.append(j)
            ps.append(i)
    if 2 * len(xs) != d:
        raise DimensionMismatch("form is not assembled from standard blocks")
    return xs, ps


def _ordering_permutation(J):
    """Rows-selection matrix R with R J R^T equal to the standard form."""
    xs, ps = _xp_split(J)
    return np.eye(J.shape[0])[xs + ps]


def symplectic_eigenvalues(sigma, J=None):
    """Symplectic spectrum of an SPD matrix: moduli of the eigenvalues of
    J Sigma, each returned once, descending."""
    sigma = _check_even_square(sigma, "symplectic_eigenvalues")
    n = sigma.shape[0] // 2
    if J is None:
        J = standard_J(n)
    elif np.shape(J) != sigma.shape:
        raise DimensionMismatch("form has shape %s, matrix %s" % (np.shape(J), sigma.shape))
    t = sqrtm_spd(sigma)
    k = t @ J @ t
    k = 0.5 * (k - k.T)
    w, _ = sym_eig(symmetrize(-k @ k))
    nu = np.sqrt(np.clip(w[::-1], 0.0, None))
    return nu.reshape(n, 2).mean(axis=1)


@dataclass(frozen=True)
class WilliamsonDecomposition:
    """Symplectic normal form Sigma = S diag(nu, nu) S^T.

    ``S`` is symplectic with respect to ``form`` and ``nu`` holds the n
    symplectic eigenvalues, descending.
    """

    S: np.ndarray
    nu: np.ndarray
    form: np.ndarray

    def diagonal(self):
        """diag(nu, nu) laid out to match the ordering of ``form``."""
        r = _ordering_permutation(self.form)
        d_std = np.diag(np.concatenate([self.nu, self.nu]))
        return r.T @ d_std @ r

    def reconstruct(self):
        return self.S @ self.diagonal() @ self.S.T


def _sign_fix(u, cutoff=1e-8):
    for x in u:
        if abs(x) > cutoff:
            return u if x > 0.0 else -u
    return u


def _williamson_standard(sigma, J):
    """Williamson decomposition for the standard-ordered form."""
    n = sigma.shape[0] // 2
    t = sqrtm_spd(sigma)
    k = t @ J @ t
    k = 0.5 * (k - k.T)
    w, v = sym_eig(symmetrize(-k @ k))
    order = np.argsort(-w, kind="stable")
    ctol = DEGENERACY_TOL * max(float(w[-1]), 1.0)

    us, ws_, nus = [], [], []
    i = 0
    while i < 2 * n:
        # cluster of (numerically) equal nu^2 eigenvalues
        j = i + 1
        while j < 2 * n and abs(w[order[j]] - w[order[i]]) <= ctol:
            j += 1
        cluster = order[i:j]
        i = j
        pairs_needed = len(cluster) // 2
        got = 0
        for idx in cluster:
            if got == pairs_needed:
                break
            u = v[:, idx].copy()
            for uu in us[-got:] if got else []:
                u -= (uu @ u) * uu
            for ww in ws_[-got:] if got else []:
                u -= (ww @ u) * ww
            nrm = float(np.linalg.norm(u))
            if nrm < 0.3:
                continue
            u = _sign_fix(u / nrm)
            ku = k @ u
            nu = float(np.linalg.norm(ku))
            wvec = -ku / nu
            us.append(u)
            ws_.append(wvec)
            nus.append(nu)
            got += 1
        if got != pairs_needed:
            raise DimensionMismatch(
                "Williamson pairing failed: found %d of %d pairs in a cluster"
                % (got, pairs_needed)
            )
    o = np.column_stack(us + ws_)
    scale = np.sqrt(np.concatenate([nus, nus]))
    s = t @ (o / scale[None, :])
    return s, np.asarray(nus)


def williamson(sigma, J=None):
    """Williamson decomposition of an SPD matrix with respect to ``J``.

    Emits a :class:`DegenerateSpectrum` warning when two symplectic
    eigenvalues are closer than 1e-12 (the decomposition is still valid).
    """
    sigma = symmetrize(_check_even_square(sigma, "williamson"))
    n = sigma.shape[0] // 2
    if J is None:
        J = standard_J(n)
    elif np.shape(J) != sigma.shape:
        raise DimensionMismatch("form has shape %s, matrix %s" % (np.shape(J), sigma.shape))
    r = _ordering_permutation(J)
    if np.array_equal(r, np.eye(2 * n)):
        s, nu = _williamson_standard(sigma, J)
    else:
        s_std, nu = _williamson_standard(r @ sigma @ r.T, standard_J(n))
        s = r.T @ s_std @ r
    if n > 1 and np.min(nu[:-1] - nu[1:]) < DEGENERACY_TOL:
        warnings.warn(
            "symplectic eigenvalues closer than %g" % DEGENERACY_TOL,
            DegenerateSpectrum,
        )
    return WilliamsonDecomposition(S=s, nu=nu, form=np.asarray(J, dtype=float))


def blob_extract(sigma_x, hbar, J=None, tol=1e-8):
    """Positive definite symplectic P = S S^T with Sigma_X >= (hbar/2) P.

    Requires a bona-fide input (nu_min >= hbar/2 - tol): the covariance
    ellipsoid must be large enough to contain a quantum blob.
    """
    wd = williamson(sigma_x, J)
    nu_min = float(wd.nu[-1])
    if nu_min < hbar / 2.0 - tol:
        raise NotBonaFide(
            "blob extraction needs nu_min >= hbar/2; got %.12g < %.12g"
            % (nu_min, hbar / 2.0),
            offending=nu_min,
        )
    return symmetrize(wd.S @ wd.S.T)


def sym_lie_element(a, b):
    """Symmetric element [[A, B], [B, -A]] of sp(2n) from symmetric blocks."""
    a = symmetrize(a)
    b = symmetrize(b)
    return np.block([[a, b], [b, -a]])


def lie_algebra_residual(x, J=None):
    """||X^T J + J X||_F: zero iff X is in the symplectic Lie algebra."""
    x = _check_even_square(x, "lie_algebra_residual")
    if J is None:
        J = standard_J(x.shape[0] // 2)
    return float(np.linalg.norm(x.T @ J + J @ x))


def posdef_symplectic_from_param(x, J=None, tol=1e-9):
    """exp of a symmetric Lie-algebra element: the parametrization of the
    positive definite symplectic matrices."""
    x = _check_even_square(x, "posdef_symplectic_from_param")
    scale = max(1.0, float(np.linalg.norm(x)))
    if float(np.linalg.norm(x - x.T)) > tol * scale:
        raise NotInLieAlgebra("parameter matrix is not symmetric")
    if lie_algebra_residual(x, J) > tol * scale:
        raise NotInLieAlgebra(
            "parameter matrix fails X^T J + J X = 0 within tolerance"
        )
    return expm_sym(symmetrize(x))


def _random_orthogonal_symplectic(n, rng, spread):
    """Haar-ish orthogonal symplectic rotation, the U(n) embedding."""
    f = spread * symmetrize(rng.standard_normal((n, n)))
    g = rng.standard_normal((n, n))
    e = spread * 0.5 * (g - g.T)
    w, u = herm_eig(f - 1j * e)
    wmat = (u * np.exp(1j * w)) @ u.conj().T
    c, d = wmat.real, wmat.imag
    return np.block([[c, -d], [d, c]])


def random_symplectic(n, seed, spread=0.5):
    """Seeded random symplectic matrix (standard ordering).

    Product of three exponentials of symmetric Lie-algebra elements
    interleaved with orthogonal-symplectic rotations; ``spread`` scales all
    generators, so spread 0 gives the identity.
    """
    if spread < 0:
        raise ValueError("spread must be >= 0")
    rng = np.random.default_rng(seed)
    s = np.eye(2 * n)
    for k in range(3):
        a = spread * symmetrize(rng.standard_normal((n, n)))
        b = spread * symmetrize(rng.standard_normal((n, n)))
        s = s @ expm_sym(sym_lie_element(a, b))
        if k < 2:
            s = s @ _random_orthogonal_symplectic(n, rng, spread)
    return s


def lie_param_dim(n):
    """Free parameters of a symmetric sp(2n) element: two symmetric blocks."""
    return n * (n + 1)


def lie_element_from_vector(v, n):
    """Unpack a flat vector into the symmetric Lie-algebra element."""
    v = np.asarray(v, dtype=float)
    half = n * (n + 1) // 2
    iu = np.triu_indices(n)

    def unpack(part):
        m = np.zeros((n, n))
        m[iu] = part
        return symmetrize(m + np.triu(m, 1).T)

    return sym_lie_element(unpack(v[:half]), unpack(v[half:]))


def vector_from_lie_element(x):
    """Inverse of :func:`lie_element_from_vector`."""
    n = x.shape[0] // 2
    a = symmetrize(x[:n, :n])
    b = symmetrize(x[:n, n:])
    iu = np.triu_indices(n)
    return np.concatenate([a[iu], b[iu]])
