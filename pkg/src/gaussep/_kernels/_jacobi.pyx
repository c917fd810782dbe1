# cython: language_level=3
# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Cyclic Jacobi eigensolver for small dense symmetric matrices.

Compiled twin of ``jacobi_py``; both must implement identical semantics:
ascending eigenvalues ``w`` and orthogonal ``V`` with ``A = V diag(w) V^T``.
"""

from libc.math cimport fabs, sqrt

import numpy as np


def jacobi_eigh(a, double off_rel=1e-14, int max_sweeps=100):
    """Diagonalize a symmetric matrix by cyclic Jacobi rotations.

    Sweeps rows cyclically until the off-diagonal Frobenius norm drops
    below ``off_rel`` times the Frobenius norm of the input.  Raises
    ``RuntimeError`` if the sweep cap is hit without convergence.
    """
    A_arr = np.array(a, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] A = A_arr
    cdef Py_ssize_t d = A.shape[0]
    if A_arr.ndim != 2 or A.shape[1] != d:
        raise ValueError("jacobi_eigh expects a square matrix")

    V_arr = np.eye(d, dtype=np.float64)
    cdef double[:, ::1] V = V_arr
    if d == 1:
        return np.array([A[0, 0]]), V_arr

    cdef double norm = 0.0, off = 0.0
    cdef Py_ssize_t i, j, p, q
    cdef int sweep
    for i in range(d):
        for j in range(d):
            norm += A[i, j] * A[i, j]
    norm = sqrt(norm)
    cdef double thresh = off_rel * norm

    cdef double apq, app, aqq, theta, t, c, s, aip, aiq, vip, viq
    cdef bint converged = False
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(d - 1):
            for q in range(p + 1, d):
                off += 2.0 * A[p, q] * A[p, q]
        off = sqrt(off)
        if off <= thresh:
            converged = True
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                app = A[p, p]
                aqq = A[q, q]
                theta = (aqq - app) / (2.0 * apq)
                if fabs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                elif theta >= 0.0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for i in range(d):
                    aip = A[i, p]
                    aiq = A[i, q]
                    A[i, p] = c * aip - s * aiq
                    A[i, q] = s * aip + c * aiq
                for i in range(d):
                    aip = A[p, i]
                    aiq = A[q, i]
                    A[p, i] = c * aip - s * aiq
                    A[q, i] = s * aip + c * aiq
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = 0.0
                A[q, p] = 0.0
                for i in range(d):
                    vip = V[i, p]
                    viq = V[i, q]
                    V[i, p] = c * vip - s * viq
                    V[i, q] = s * vip + c * viq
    if not converged:
        off = 0.0
        for p in range(d - 1):
            for q in range(p + 1, d):
                off += 2.0 * A[p, q] * A[p, q]
        off = sqrt(off)
        if off > thresh:
            raise RuntimeError(
                "Jacobi eigensolver did not converge in %d sweeps "
                "(off-norm %.3e, threshold %.3e)" % (max_sweeps, off, thresh)
            )

    w = np.diagonal(A_arr).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V_arr[:, order]
