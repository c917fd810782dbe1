"""Pure-Python twin of the compiled Jacobi kernel.

Same cyclic sweep, same rotation algebra, same convergence test as
``_jacobi.pyx``; used when the extension is unavailable or when
``GAUSSEP_PURE_PYTHON`` is set.
"""

import math

import numpy as np


def jacobi_eigh(a, off_rel=1e-14, max_sweeps=100):
    """Diagonalize a symmetric matrix by cyclic Jacobi rotations.

    Returns ascending eigenvalues ``w`` and orthogonal ``V`` with
    ``A = V diag(w) V^T``.  Raises ``RuntimeError`` on sweep-cap overrun.
    """
    A = np.array(a, dtype=np.float64, order="C", copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("jacobi_eigh expects a square matrix")
    d = A.shape[0]
    V = np.eye(d)
    if d == 1:
        return A[0, :1].copy(), V

    norm = math.sqrt(float(np.sum(A * A)))
    thresh = off_rel * norm

    converged = False
    for _ in range(max_sweeps):
        off = math.sqrt(2.0 * float(np.sum(np.triu(A, 1) ** 2)))
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
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                elif theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = c * colp - s * colq
                A[:, q] = s * colp + c * colq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = c * rowp - s * rowq
                A[q, :] = s * rowp + c * rowq
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = 0.0
                A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    if not converged:
        off = math.sqrt(2.0 * float(np.sum(np.triu(A, 1) ** 2)))
        if off > thresh:
            raise RuntimeError(
                "Jacobi eigensolver did not converge in %d sweeps "
                "(off-norm %.3e, threshold %.3e)" % (max_sweeps, off, thresh)
            )

    w = np.diagonal(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]
