"""Separability of bipartite Gaussian states.

Pipeline: PPT test (entanglement witness), Werner-Wolf convex feasibility
by Dykstra alternating projections, quantum-blob extraction of positive
definite symplectic certificates, a direct symplectic parameter search as
an independent second route, the equality-case pure product state, and the
pure-Gaussian domination check.

Verdicts are evidence-carrying: Separable holds a re-checkable certificate
(P_A, P_B), Entangled holds a PPT witness, everything else is Undetermined.
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.optimize import minimize

from .errors import (
    DimensionMismatch,
    NonzeroMean,
    NotBonaFide,
    NotSymplectic,
)
from .matrix_kernel import (
    expm_sym,
    inverse_spd,
    logm_spd,
    psd_project,
    sqrtm_spd,
    sym_eig,
    symmetrize,
)
from .states import (
    Partition,
    make_state,
    purity,
    pure_gaussian_from_symplectic,
    wigner_log_density,
)
from .symplectic import (
    blob_extract,
    direct_sum,
    is_posdef_symplectic,
    is_symplectic,
    lie_element_from_vector,
    lie_param_dim,
    standard_J,
    symplectic_eigenvalues,
    vector_from_lie_element,
)

__all__ = [
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


@dataclass(frozen=True)
class SolverConfig:
    """Controls for the Werner-Wolf feasibility solver and certificates."""

    max_iter: int = 20000
    residual_tol: float = 1e-9
    stall_window: int = 500
    stall_factor: float = 0.999
    cert_tol: float = 1e-9

    def __post_init__(self):
        if (
            self.max_iter <= 0
            or self.residual_tol <= 0
            or self.stall_window <= 0
            or self.stall_factor <= 0
            or self.cert_tol <= 0
        ):
            raise ValueError("SolverConfig fields must be positive")


@dataclass(frozen=True)
class SeparabilityCertificate:
    """Constructive evidence Sigma >= (hbar/2) [P_A (+) P_B].

    ``slack`` is the minimum eigenvalue of the difference; ``S_A``/``S_B``
    are the symmetric symplectic factors with (S^T S)^{-1} = P, and
    ``sigma_A``/``sigma_B`` the feasible Werner-Wolf pair that produced the
    certificate (when it came from the feasibility route).
    """

    P_A: np.ndarray
    P_B: np.ndarray
    S_A: np.ndarray
    S_B: np.ndarray
    slack: float
    sigma_A: Optional[np.ndarray] = None
    sigma_B: Optional[np.ndarray] = None


@dataclass(frozen=True)
class EntanglementWitness:
    """PPT violation: smallest symplectic eigenvalue of the partial
    transpose fell below hbar/2."""

    nu_tilde_min: float
    threshold: float
    kind: str = "ppt_violation"


@dataclass(frozen=True)
class Separable:
    certificate: SeparabilityCertificate


@dataclass(frozen=True)
class Entangled:
    witness: EntanglementWitness


@dataclass(frozen=True)
class Undetermined:
    residual: float
    iterations: int


SeparabilityVerdict = Union[Separable, Entangled, Undetermined]


@dataclass(frozen=True)
class PPTResult:
    passed: bool
    nu_tilde: np.ndarray
    witness: Optional[EntanglementWitness] = None


@dataclass(frozen=True)
class DominationResult:
    holds: bool
    worst_margin: float
    mode: str


def partial_transpose(sigma, partition):
    """Lambda Sigma Lambda with Lambda flipping the momenta of subsystem B."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (partition.dim, partition.dim):
        raise DimensionMismatch(
            "covariance is %s but partition wants %dx%d"
            % (sigma.shape, partition.dim, partition.dim)
        )
    signs = partition.pt_signs()
    return sigma * np.outer(signs, signs)


def ppt_test(state, tol=1e-9):
    """Peres/Simon test: the partial transpose must stay bona fide."""
    sigma_pt = partial_transpose(state.sigma, state.partition)
    nu_tilde = symplectic_eigenvalues(sigma_pt, state.partition.form())
    threshold = state.hbar / 2.0
    passed = bool(nu_tilde[-1] >= threshold - tol)
    witness = None
    if not passed:
        witness = EntanglementWitness(
            nu_tilde_min=float(nu_tilde[-1]), threshold=threshold
        )
    return PPTResult(passed=passed, nu_tilde=nu_tilde, witness=witness)


# ---------------------------------------------------------------------------
# Werner-Wolf feasibility: Dykstra alternating projections between
#   set A = {M symmetric : Sigma - M >= 0}
#   set B = {M block-diagonal : M_X + (i hbar/2) J_X >= 0 for X in {A, B}}


@dataclass(frozen=True)
class _WWResult:
    feasible: bool
    sigma_A: Optional[np.ndarray]
    sigma_B: Optional[np.ndarray]
    residual: float
    iterations: int


def _min_eig(m):
    return float(sym_eig(m)[0][0])


def _quantum_embed(m_x, j_x, hbar):
    """Real symmetric embedding of M_X + (i hbar/2) J_X."""
    d = m_x.shape[0]
    emb = np.empty((2 * d, 2 * d))
    emb[:d, :d] = m_x
    emb[d:, d:] = m_x
    emb[:d, d:] = -0.5 * hbar * j_x
    emb[d:, :d] = 0.5 * hbar * j_x
    return emb


def _min_eig_quantum(m_x, j_x, hbar):
    """Smallest eigenvalue of M_X + (i hbar/2) J_X via the real embedding."""
    return _min_eig(_quantum_embed(m_x, j_x, hbar))


def _project_set_a(m, sigma):
    return symmetrize(sigma - psd_project(sigma - m))


def _project_block_quantum(m_x, j_x, hbar, inner_tol, cap=200):
    """Approximate projection onto {M : M + (i hbar/2) J >= 0} within the
    real symmetric matrices: alternate the Hermitian eigenvalue clip with
    re-symmetrization until the constraint residual is below tolerance.

    Runs entirely on the real embedding (clipping the embedding equals
    embedding the clipped Hermitian matrix).  Returns the projected block
    and its final constraint eigenvalue.
    """
    d = m_x.shape[0]
    m = m_x
    for _ in range(cap):
        emb = _quantum_embed(m, j_x, hbar)
        w, v = sym_eig(emb)
        if w[0] >= -inner_tol:
            return m, float(w[0])
        clipped = (v * np.clip(w, 0.0, None)) @ v.T
        m = symmetrize(0.5 * (clipped[:d, :d] + clipped[d:, d:]))
    return m, _min_eig_quantum(m, j_x, hbar)


def _block_diag_part(m, partition):
    out = np.zeros_like(m)
    sa, sb = partition.slice_A, partition.slice_B
    out[sa, sa] = m[sa, sa]
    out[sb, sb] = m[sb, sb]
    return out


def _werner_wolf_solve(sigma, partition, hbar, cfg):
    """Dykstra alternating projections, then a polish phase.

    Phase one runs the projections at ``residual_tol``.  Once the iterate
    meets it, a bounded polish phase tightens the same iteration toward
    1e-12 so that downstream blob certificates keep their 1e-9 slack; the
    best iterate seen is returned either way.
    """
    sigma = symmetrize(sigma)
    sa, sb = partition.slice_A, partition.slice_B
    j_a = standard_J(partition.n_A)
    j_b = standard_J(partition.n_B)
    polish_tol = min(cfg.residual_tol, 1e-12)
    polish_budget = 300

    def residual_of(m):
        r_a = max(0.0, -_min_eig(sigma - m))
        r_qa = max(0.0, -_min_eig_quantum(m[sa, sa], j_a, hbar))
        r_qb = max(0.0, -_min_eig_quantum(m[sb, sb], j_b, hbar))
        return max(r_a, r_qa, r_qb)

    x = _block_diag_part(sigma, partition)
    best_r = residual_of(x)
    best_x = x.copy()
    if best_r <= polish_tol:
        return _WWResult(True, symmetrize(x[sa, sa]), symmetrize(x[sb, sb]), best_r, 0)

    # Closed-form candidate: the blob pair of the diagonal blocks is always
    # quantum; when Sigma dominates it we are done without iterating.
    try:
        cand = np.zeros_like(sigma)
        cand[sa, sa] = 0.5 * hbar * blob_extract(x[sa, sa], hbar, tol=1e-7)
        cand[sb, sb] = 0.5 * hbar * blob_extract(x[sb, sb], hbar, tol=1e-7)
        cand_r = residual_of(cand)
        if cand_r < best_r:
            best_r = cand_r
            best_x = cand.copy()
        if best_r <= polish_tol:
            return _WWResult(
                True, symmetrize(cand[sa, sa]), symmetrize(cand[sb, sb]), best_r, 0
            )
    except NotBonaFide:
        pass

    p = np.zeros_like(sigma)
    q = np.zeros_like(sigma)
    gaps = []
    iterations = 0
    achieved_at = None
    inner_tol = cfg.residual_tol
    inner_cap = 8
    for it in range(1, cfg.max_iter + 1):
        iterations = it
        y = _project_set_a(x + p, sigma)
        p = x + p - y
        z = y + q
        x_new = np.zeros_like(sigma)
        blk_a, lam_a = _project_block_quantum(
            symmetrize(z[sa, sa]), j_a, hbar, inner_tol, inner_cap
        )
        blk_b, lam_b = _project_block_quantum(
            symmetrize(z[sb, sb]), j_b, hbar, inner_tol, inner_cap
        )
        x_new[sa, sa] = blk_a
        x_new[sb, sb] = blk_b
        q = z - x_new
        x = x_new

        r_a = max(0.0, -_min_eig(sigma - x))
        r = max(r_a, max(0.0, -lam_a), max(0.0, -lam_b))
        if r < best_r:
            best_r = r
            best_x = x.copy()
        if r <= polish_tol:
            break
        if achieved_at is None and r <= cfg.residual_tol:
            achieved_at = it
            inner_tol = polish_tol
            inner_cap = 200
        if achieved_at is not None and it - achieved_at >= polish_budget:
            break
        gaps.append(float(np.linalg.norm(y - x)))
        if len(gaps) > cfg.stall_window:
            then = gaps[-1 - cfg.stall_window]
            if then == 0.0 or gaps[-1] > cfg.stall_factor * then:
                break
        # Alternating projections decay like C/k on thin intersections; bail
        # when even that optimistic model cannot reach the target in budget.
        if (
            achieved_at is None
            and it >= cfg.stall_window
            and it % 50 == 0
            and it * (best_r / cfg.residual_tol) > cfg.max_iter
        ):
            break

    feasible = best_r <= cfg.residual_tol
    if not feasible:
        return _WWResult(False, None, None, best_r, iterations)
    return _WWResult(
        True,
        symmetrize(best_x[sa, sa]),
        symmetrize(best_x[sb, sb]),
        best_r,
        iterations,
    )


def _require_bona_fide(sigma, partition, hbar, tol=1e-8):
    nu = symplectic_eigenvalues(sigma, partition.form())
    if nu[-1] < hbar / 2.0 - tol:
        raise NotBonaFide(
            "covariance is not bona fide: nu_min = %.12g < hbar/2 = %.12g"
            % (nu[-1], hbar / 2.0),
            offending=float(nu[-1]),
        )


def werner_wolf_feasibility(sigma, partition, hbar, cfg=None):
    """Search for symmetric Sigma_A, Sigma_B with Sigma >= Sigma_A (+) Sigma_B
    and each block bona fide.  Returns the pair, or None when the solver
    fails (which is not a proof of infeasibility)."""
    cfg = cfg or SolverConfig()
    _require_bona_fide(sigma, partition, hbar)
    res = _werner_wolf_solve(np.asarray(sigma, dtype=float), partition, hbar, cfg)
    if not res.feasible:
        return None
    return res.sigma_A, res.sigma_B


def certificate_check(sigma, p_a, p_b, hbar, predicate_tol=1e-9):
    """Trustless certificate verification: re-checks that P_A and P_B are
    positive definite symplectic and returns the minimum eigenvalue of
    Sigma - (hbar/2)[P_A (+) P_B].  Raises NotSymplectic when a P fails its
    predicate."""
    sigma = symmetrize(np.asarray(sigma, dtype=float))
    p_a = np.asarray(p_a, dtype=float)
    p_b = np.asarray(p_b, dtype=float)
    if p_a.shape[0] + p_b.shape[0] != sigma.shape[0]:
        raise DimensionMismatch(
            "certificate blocks %s + %s do not tile the covariance %s"
            % (p_a.shape, p_b.shape, sigma.shape)
        )
    for name, p in (("P_A", p_a), ("P_B", p_b)):
        if not is_posdef_symplectic(p, tol=predicate_tol):
            raise NotSymplectic("%s is not positive definite symplectic" % name)
    return _min_eig(sigma - 0.5 * hbar * direct_sum(p_a, p_b))


def _factors_from_p(p):
    """Symmetric symplectic S with (S^T S)^{-1} = P, namely S = P^{-1/2}."""
    return sqrtm_spd(inverse_spd(p))


def _certificate_from_p(sigma, p_a, p_b, hbar, sigma_a=None, sigma_b=None):
    slack = certificate_check(sigma, p_a, p_b, hbar)
    if sigma_a is None:
        sigma_a = 0.5 * hbar * p_a
        sigma_b = 0.5 * hbar * p_b
    return SeparabilityCertificate(
        P_A=p_a,
        P_B=p_b,
        S_A=_factors_from_p(p_a),
        S_B=_factors_from_p(p_b),
        slack=float(slack),
        sigma_A=sigma_a,
        sigma_B=sigma_b,
    ), slack


def decide_separability(state, cfg=None):
    """Decide separability with evidence.

    1. PPT failure is conclusive: Entangled with the witness.
    2. Werner-Wolf feasibility success: extract quantum blobs P_A, P_B from
       the feasible blocks, verify the certificate slack, return Separable.
    3. When the convex solver fails, try the direct symplectic search as an
       independent second certificate route.
    4. Otherwise Undetermined with the solver residual.  A PPT pass alone is
       never upgraded to Separable without a certificate.
    """
    cfg = cfg or SolverConfig()
    ppt = ppt_test(state, tol=cfg.cert_tol)
    if not ppt.passed:
        return Entangled(witness=ppt.witness)

    res = _werner_wolf_solve(state.sigma, state.partition, state.hbar, cfg)
    if res.feasible:
        try:
            p_a = blob_extract(res.sigma_A, state.hbar, tol=1e-7)
            p_b = blob_extract(res.sigma_B, state.hbar, tol=1e-7)
        except NotBonaFide:
            return Undetermined(residual=res.residual, iterations=res.iterations)
        cert, slack = _certificate_from_p(
            state.sigma, p_a, p_b, state.hbar, res.sigma_A, res.sigma_B
        )
        if slack >= -cfg.cert_tol:
            return Separable(certificate=cert)

    found = direct_symplectic_search(state, cfg)
    if found is not None:
        cert, slack = _certificate_from_p(state.sigma, found[0], found[1], state.hbar)
        if slack >= -cfg.cert_tol:
            return Separable(certificate=cert)
    return Undetermined(residual=res.residual, iterations=res.iterations)


def _exp_lie_one_mode(a, b):
    """Closed-form exp of [[a, b], [b, -a]]: X^2 = (a^2+b^2) I."""
    theta = math.hypot(a, b)
    c = math.cosh(theta)
    s = math.sinh(theta) / theta if theta > 1e-12 else 1.0
    return np.array([[c + s * a, s * b], [s * b, c - s * a]])


def direct_symplectic_search(state, cfg=None):
    """Independent certificate route: maximize the slack of
    Sigma - (hbar/2)[exp(X_A) (+) exp(X_B)] over symmetric Lie-algebra
    parameters by Nelder-Mead, started from the Williamson point of the
    diagonal blocks and from the identity.  Returns (P_A, P_B) when the
    final slack clears -cert_tol, else None."""
    cfg = cfg or SolverConfig()
    sigma, hbar, part = state.sigma, state.hbar, state.partition
    na, nb = part.n_A, part.n_B
    da = lie_param_dim(na)
    db = lie_param_dim(nb)
    d2 = 2 * na
    clear_margin = 100.0 * cfg.cert_tol
    work = np.empty_like(sigma)

    def build(v):
        if na == 1:
            p_a = _exp_lie_one_mode(v[0], v[1])
        else:
            p_a = expm_sym(lie_element_from_vector(v[:da], na))
        if nb == 1:
            p_b = _exp_lie_one_mode(v[da], v[da + 1])
        else:
            p_b = expm_sym(lie_element_from_vector(v[da:], nb))
        return p_a, p_b

    def neg_slack(v):
        p_a, p_b = build(v)
        np.copyto(work, sigma)
        work[:d2, :d2] -= 0.5 * hbar * p_a
        work[d2:, d2:] -= 0.5 * hbar * p_b
        return -_min_eig(work)

    starts = []
    try:
        p_a0 = blob_extract(part.block(sigma, "A"), hbar, tol=1e-7)
        p_b0 = blob_extract(part.block(sigma, "B"), hbar, tol=1e-7)
        starts.append(
            np.concatenate(
                [
                    vector_from_lie_element(logm_spd(p_a0)),
                    vector_from_lie_element(logm_spd(p_b0)),
                ]
            )
        )
    except NotBonaFide:
        pass
    starts.append(np.zeros(da + db))

    # A start point whose slack is already clearly positive is a finished
    # certificate; the maximization would only widen it.
    for v0 in starts:
        if -neg_slack(v0) >= clear_margin:
            return build(v0)

    best = None
    for v0 in starts:
        res = minimize(
            neg_slack,
            v0,
            method="Nelder-Mead",
            options={
                "xatol": 1e-9,
                "fatol": 1e-10,
                "maxfev": 300 * (da + db),
            },
        )
        if best is None or res.fun < best.fun:
            best = res
        if -best.fun >= clear_margin:
            break
    p_a, p_b = build(best.x)
    slack = -float(best.fun)
    if slack >= -cfg.cert_tol:
        return p_a, p_b
    return None


def equality_case_state(s_a, s_b, hbar, sp_tol=1e-9):
    """Pure product state at equality in the main criterion:
    Sigma = (hbar/2)[(S_A^T S_A)^{-1} (+) (S_B^T S_B)^{-1}], together with
    the two pure Gaussian factors."""
    s_a = np.asarray(s_a, dtype=float)
    s_b = np.asarray(s_b, dtype=float)
    for name, s in (("S_A", s_a), ("S_B", s_b)):
        if not is_symplectic(s, tol=sp_tol):
            raise NotSymplectic("%s is not symplectic" % name)
    part = Partition(n_A=s_a.shape[0] // 2, n_B=s_b.shape[0] // 2)
    sigma = 0.5 * hbar * direct_sum(
        inverse_spd(symmetrize(s_a.T @ s_a)),
        inverse_spd(symmetrize(s_b.T @ s_b)),
    )
    state = make_state(sigma, hbar=hbar, partition=part)
    return (
        state,
        pure_gaussian_from_symplectic(s_a, hbar, sp_tol=sp_tol),
        pure_gaussian_from_symplectic(s_b, hbar, sp_tol=sp_tol),
    )


def _symplectic_inverse(s, j):
    # S^{-1} = -J S^T J for S in Sp(J) with J^2 = -I
    return -j @ s.T @ j


def domination_check(
    state, s_a, s_b, mode="matrix", samples=10000, seed=0, tol=1e-9, tol_pt=1e-12
):
    """Does the state dominate the pure product Gaussian built from
    (S_A, S_B), scaled by its purity?

    matrix mode evaluates the equivalent eigenvalue condition
    Sigma >= (hbar/2)[(S_A^T S_A)^{-1} (+) (S_B^T S_B)^{-1}]; sampled mode
    draws points from a Gaussian of covariance 4 Sigma and checks the
    pointwise log-density inequality directly (tails first).
    """
    if float(np.max(np.abs(state.mean))) > 0.0:
        raise NonzeroMean("domination_check requires a centered state")
    s_a = np.asarray(s_a, dtype=float)
    s_b = np.asarray(s_b, dtype=float)
    for name, s in (("S_A", s_a), ("S_B", s_b)):
        if not is_symplectic(s, tol=1e-9):
            raise NotSymplectic("%s is not symplectic" % name)
    part = state.partition
    if s_a.shape[0] != 2 * part.n_A or s_b.shape[0] != 2 * part.n_B:
        raise DimensionMismatch("factor sizes do not match the partition")
    hbar = state.hbar

    if mode == "matrix":
        p_ab = direct_sum(
            inverse_spd(symmetrize(s_a.T @ s_a)),
            inverse_spd(symmetrize(s_b.T @ s_b)),
        )
        margin = _min_eig(state.sigma - 0.5 * hbar * p_ab)
        return DominationResult(holds=bool(margin >= -tol), worst_margin=margin, mode=mode)

    if mode != "sampled":
        raise ValueError("mode must be 'matrix' or 'sampled'")
    rng = np.random.default_rng(seed)
    root = sqrtm_spd(state.sigma)
    z = 2.0 * rng.standard_normal((samples, part.dim)) @ root
    s_ab_inv = direct_sum(
        _symplectic_inverse(s_a, standard_J(part.n_A)),
        _symplectic_inverse(s_b, standard_J(part.n_B)),
    )
    z_in = z @ s_ab_inv.T
    log_rho = wigner_log_density(state, z_in)
    mu = purity(state)
    z_a = z[:, part.slice_A]
    z_b = z[:, part.slice_B]
    log_rhs = (
        math.log(mu)
        - part.n * math.log(math.pi * hbar)
        - (np.sum(z_a * z_a, axis=1) + np.sum(z_b * z_b, axis=1)) / hbar
    )
    margins = log_rho - log_rhs
    worst = float(np.min(margins))
    return DominationResult(holds=bool(worst >= -tol_pt), worst_margin=worst, mode=mode)
