"""PPT, Werner-Wolf feasibility, the symplectic criterion with certificates,
the equality case, and the domination check."""

import math

import numpy as np
import pytest

from gaussep.ensembles import random_bonafide_sigma, tmsv_noisy_sigma, tmsv_sigma
from gaussep.errors import DimensionMismatch, NonzeroMean, NotBonaFide, NotSymplectic
from gaussep.matrix_kernel import sym_eig, symmetrize
from gaussep.separability import (
    Entangled,
    Separable,
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
from gaussep.states import Partition, make_state, purity, wigner_density
from gaussep.states import pure_gaussian_wigner_closed
from gaussep.symplectic import (
    blob_extract,
    direct_sum,
    is_posdef_symplectic,
    random_symplectic,
    standard_J,
    symplectic_eigenvalues,
)

PART = Partition(1, 1)
HBAR = 1.0

# closed forms for the two-mode squeezed vacuum family (hbar = 1):
#   nu_tilde_min(r) = e^{-2r} / 2,  separability threshold t*(r) = 1/2 - e^{-2r}/2
NU_TILDE_R05 = 0.5 * math.exp(-1.0)
T_STAR_R05 = 0.5 - NU_TILDE_R05


def _state(sigma, hbar=HBAR, part=PART):
    return make_state(sigma, hbar=hbar, partition=part)


# -- partial transpose ---------------------------------------------------------


def test_partial_transpose_product_diag_invariant():
    sigma = np.diag([0.7, 0.7, 0.9, 0.9])
    np.testing.assert_array_equal(partial_transpose(sigma, PART), sigma)


def test_partial_transpose_tmsv_flips_momentum_coupling():
    sigma = tmsv_sigma(0.5)
    got = partial_transpose(sigma, PART)
    want = sigma.copy()
    want[1, 3] = -sigma[1, 3]
    want[3, 1] = -sigma[3, 1]
    np.testing.assert_array_equal(got, want)
    # explicit sign structure: x_A x_B coupling kept, p_A p_B flipped
    s = 0.5 * math.sinh(1.0)
    assert abs(got[0, 2] - s) < 1e-15 and abs(got[1, 3] - s) < 1e-15


def test_partial_transpose_involution(rng):
    sigma = random_bonafide_sigma(PART, rng, spread=1.0)
    np.testing.assert_array_equal(
        partial_transpose(partial_transpose(sigma, PART), PART), sigma
    )


def test_partial_transpose_dimension_check():
    with pytest.raises(DimensionMismatch):
        partial_transpose(np.eye(6), PART)


# -- PPT test -------------------------------------------------------------------


def test_ppt_vacuum_passes():
    res = ppt_test(_state(0.5 * np.eye(4)))
    assert res.passed and res.witness is None
    np.testing.assert_allclose(res.nu_tilde, [0.5, 0.5], atol=1e-12)


def test_ppt_tmsv_fails_with_closed_form_witness():
    res = ppt_test(_state(tmsv_sigma(0.5)))
    assert not res.passed
    assert abs(res.witness.nu_tilde_min - NU_TILDE_R05) < 1e-10
    assert res.witness.threshold == 0.5
    assert res.witness.kind == "ppt_violation"


def test_ppt_tmsv_r0_passes():
    res = ppt_test(_state(tmsv_sigma(0.0)))
    assert res.passed


# -- Werner-Wolf feasibility -------------------------------------------------------


def test_ww_block_diagonal_feasible():
    sigma = np.diag([0.8, 0.8, 1.1, 1.1])
    pair = werner_wolf_feasibility(sigma, PART, HBAR)
    assert pair is not None
    sig_a, sig_b = pair
    assert sym_eig(sigma - direct_sum(sig_a, sig_b))[0][0] >= -1e-9
    for blk, n in ((sig_a, 1), (sig_b, 1)):
        assert symplectic_eigenvalues(blk, standard_J(n))[-1] >= 0.5 - 1e-9


def test_ww_tmsv_infeasible():
    assert werner_wolf_feasibility(tmsv_sigma(0.5), PART, HBAR) is None


def test_ww_noisy_tmsv_above_threshold_feasible():
    sigma = tmsv_noisy_sigma(0.5, 1.0)
    pair = werner_wolf_feasibility(sigma, PART, HBAR)
    assert pair is not None
    sig_a, sig_b = pair
    assert sym_eig(sigma - direct_sum(sig_a, sig_b))[0][0] >= -1e-9


def test_ww_rejects_nonquantum_input():
    with pytest.raises(NotBonaFide):
        werner_wolf_feasibility(0.3 * np.eye(4), PART, HBAR)


# -- certificates -------------------------------------------------------------------


def test_certificate_check_equality():
    assert abs(certificate_check(0.5 * np.eye(4), np.eye(2), np.eye(2), HBAR)) < 1e-15


def test_certificate_check_scaled_vacuum():
    slack = certificate_check(np.eye(4), np.eye(2), np.eye(2), HBAR)
    assert abs(slack - 0.5) < 1e-15


def test_certificate_check_tmsv_identity_P_negative():
    slack = certificate_check(tmsv_sigma(0.5), np.eye(2), np.eye(2), HBAR)
    want = 0.5 * (math.exp(-1.0) - 1.0)  # (cosh - sinh - 1)/2 at 2r = 1
    assert abs(slack - want) < 1e-12
    assert slack < 0


def test_certificate_check_rejects_tampered_P():
    p_bad = np.eye(2)
    p_bad[0, 1] += 0.1
    with pytest.raises(NotSymplectic):
        certificate_check(np.eye(4), p_bad, np.eye(2), HBAR)


def test_certificate_check_rejects_nonsymplectic_pd():
    with pytest.raises(NotSymplectic):
        certificate_check(np.eye(4), 2.0 * np.eye(2), np.eye(2), HBAR)


def test_certificate_check_dimension_gate():
    with pytest.raises(DimensionMismatch):
        certificate_check(np.eye(4), np.eye(2), np.eye(4), HBAR)


# -- the main criterion ----------------------------------------------------------------


def test_decide_vacuum_product():
    v = decide_separability(_state(0.5 * np.eye(4)))
    assert isinstance(v, Separable)
    cert = v.certificate
    np.testing.assert_allclose(cert.P_A, np.eye(2), atol=1e-9)
    np.testing.assert_allclose(cert.P_B, np.eye(2), atol=1e-9)
    assert abs(cert.slack) < 1e-9


def test_decide_tmsv_entangled():
    v = decide_separability(_state(tmsv_sigma(0.5)))
    assert isinstance(v, Entangled)
    assert abs(v.witness.nu_tilde_min - NU_TILDE_R05) < 1e-10


def test_decide_thermal_slack():
    v = decide_separability(_state(np.eye(4)))
    assert isinstance(v, Separable)
    assert abs(v.certificate.slack - 0.5) < 1e-9


def test_decide_certificate_is_self_verifying():
    v = decide_separability(_state(tmsv_noisy_sigma(0.5, 0.6)))
    assert isinstance(v, Separable)
    cert = v.certificate
    # re-verify with no reference to how the certificate was found
    slack = certificate_check(tmsv_noisy_sigma(0.5, 0.6), cert.P_A, cert.P_B, HBAR)
    assert slack >= -1e-9
    assert abs(slack - cert.slack) < 1e-12
    assert is_posdef_symplectic(cert.P_A, tol=1e-9)
    assert is_posdef_symplectic(cert.P_B, tol=1e-9)
    # the S factors invert their P
    np.testing.assert_allclose(
        symmetrize(cert.S_A.T @ cert.S_A) @ cert.P_A, np.eye(2), atol=1e-9
    )
    np.testing.assert_allclose(
        symmetrize(cert.S_B.T @ cert.S_B) @ cert.P_B, np.eye(2), atol=1e-9
    )
    # the Werner-Wolf pair in the certificate is itself feasible
    assert sym_eig(tmsv_noisy_sigma(0.5, 0.6) - direct_sum(cert.sigma_A, cert.sigma_B))[0][0] >= -1e-9


def test_decide_monotone_under_added_noise(rng):
    sigma = random_bonafide_sigma(PART, rng, spread=1.5, sympl_spread=0.25)
    v = decide_separability(_state(sigma))
    if not isinstance(v, Separable):
        sigma = tmsv_noisy_sigma(0.5, 0.7)
        v = decide_separability(_state(sigma))
    assert isinstance(v, Separable)
    for t in (0.1, 1.0):
        # the same certificate re-certifies with slack increased by t
        warm = certificate_check(sigma + t * np.eye(4), v.certificate.P_A, v.certificate.P_B, HBAR)
        assert warm >= v.certificate.slack + t - 1e-12
        v2 = decide_separability(_state(sigma + t * np.eye(4)))
        assert isinstance(v2, Separable)
        assert v2.certificate.slack > v.certificate.slack


def test_decide_never_contradicts_ppt(rng):
    # mini version of the acceptance-4 ensemble
    for i in range(40):
        sigma = random_bonafide_sigma(PART, rng, spread=1.6, sympl_spread=0.3)
        st = _state(sigma)
        ppt = ppt_test(st)
        v = decide_separability(st)
        if isinstance(v, Separable):
            assert ppt.passed
        if isinstance(v, Entangled):
            assert not ppt.passed


def test_necessity_pipeline_blob_slack(rng):
    # every solver-feasible pair yields a certificate with slack >= -1e-9
    for i in range(15):
        sigma = random_bonafide_sigma(PART, rng, spread=1.8, sympl_spread=0.2)
        pair = werner_wolf_feasibility(sigma, PART, HBAR)
        if pair is None:
            continue
        p_a = blob_extract(pair[0], HBAR, tol=1e-7)
        p_b = blob_extract(pair[1], HBAR, tol=1e-7)
        assert certificate_check(sigma, p_a, p_b, HBAR) >= -1e-9


# -- direct symplectic search ------------------------------------------------------------


def test_one_mode_exp_matches_general_exponential():
    from gaussep.matrix_kernel import expm_sym
    from gaussep.separability import _exp_lie_one_mode
    from gaussep.symplectic import sym_lie_element

    for a, b in [(0.0, 0.0), (0.3, -0.7), (1.2, 0.4)]:
        x = sym_lie_element(np.array([[a]]), np.array([[b]]))
        np.testing.assert_allclose(_exp_lie_one_mode(a, b), expm_sym(x), atol=1e-12)


def test_search_finds_certificate_for_scaled_vacuum():
    found = direct_symplectic_search(_state(np.eye(4)))
    assert found is not None
    p_a, p_b = found
    assert certificate_check(np.eye(4), p_a, p_b, HBAR) > 0


def test_search_returns_none_for_tmsv():
    assert direct_symplectic_search(_state(tmsv_sigma(0.5))) is None


def test_search_noisy_tmsv_above_threshold():
    st = _state(tmsv_noisy_sigma(0.5, T_STAR_R05 + 0.05))
    found = direct_symplectic_search(st)
    assert found is not None
    assert certificate_check(st.sigma, found[0], found[1], HBAR) >= -1e-9


# -- equality case -------------------------------------------------------------------------


def test_equality_case_identity_factors():
    st, pg_a, pg_b = equality_case_state(np.eye(2), np.eye(2), HBAR)
    np.testing.assert_allclose(st.sigma, 0.5 * np.eye(4), atol=1e-14)
    np.testing.assert_allclose(pg_a.X, np.eye(1))
    np.testing.assert_allclose(pg_b.Y, np.zeros((1, 1)))


def test_equality_case_squeezed_times_vacuum():
    st, _, _ = equality_case_state(np.diag([2.0, 0.5]), np.eye(2), HBAR)
    assert abs(purity(st) - 1.0) < 1e-10


def test_equality_case_wigner_factorizes(rng):
    s_a = random_symplectic(1, seed=61, spread=0.5)
    s_b = random_symplectic(1, seed=62, spread=0.5)
    st, _, _ = equality_case_state(s_a, s_b, HBAR)
    zs = rng.standard_normal((20, 4))
    lhs = wigner_density(st, zs)
    rhs = pure_gaussian_wigner_closed(s_a, zs[:, :2], HBAR) * pure_gaussian_wigner_closed(
        s_b, zs[:, 2:], HBAR
    )
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_equality_case_rejects_nonsymplectic():
    with pytest.raises(NotSymplectic):
        equality_case_state(np.diag([2.0, 1.0]), np.eye(2), HBAR)


# -- domination ---------------------------------------------------------------------------


def test_domination_equality_margin_zero():
    s_a = random_symplectic(1, seed=71, spread=0.4)
    s_b = random_symplectic(1, seed=72, spread=0.4)
    st, _, _ = equality_case_state(s_a, s_b, HBAR)
    m = domination_check(st, s_a, s_b, mode="matrix")
    assert m.holds and abs(m.worst_margin) < 1e-12
    s = domination_check(st, s_a, s_b, mode="sampled", samples=4000, seed=1)
    assert s.holds


def test_domination_thermal_margin():
    nu = 0.9
    st = _state(nu * np.eye(4))
    m = domination_check(st, np.eye(2), np.eye(2), mode="matrix")
    assert m.holds and abs(m.worst_margin - (nu - 0.5)) < 1e-12


def test_domination_tmsv_fails_for_any_factors():
    st = _state(tmsv_sigma(0.5))
    for k in range(50):
        s_a = random_symplectic(1, seed=500 + k, spread=0.5)
        s_b = random_symplectic(1, seed=700 + k, spread=0.5)
        m = domination_check(st, s_a, s_b, mode="matrix")
        assert not m.holds
    # spot-check the pointwise mode agrees on a few
    for k in range(3):
        s_a = random_symplectic(1, seed=500 + k, spread=0.5)
        s_b = random_symplectic(1, seed=700 + k, spread=0.5)
        s = domination_check(st, s_a, s_b, mode="sampled", samples=4000, seed=k)
        assert not s.holds


def test_domination_modes_agree_on_separable():
    v = decide_separability(_state(tmsv_noisy_sigma(0.5, 0.8)))
    assert isinstance(v, Separable)
    st = _state(tmsv_noisy_sigma(0.5, 0.8))
    m = domination_check(st, v.certificate.S_A, v.certificate.S_B, mode="matrix")
    s = domination_check(st, v.certificate.S_A, v.certificate.S_B, mode="sampled", samples=4000)
    assert m.holds and s.holds


def test_domination_rejects_nonzero_mean():
    st = make_state(0.5 * np.eye(4), mean=np.array([1.0, 0, 0, 0]), hbar=HBAR, partition=PART)
    with pytest.raises(NonzeroMean):
        domination_check(st, np.eye(2), np.eye(2))


def test_domination_rejects_nonsymplectic_factor():
    st = _state(0.5 * np.eye(4))
    with pytest.raises(NotSymplectic):
        domination_check(st, np.diag([2.0, 1.0]), np.eye(2))


# -- larger systems and hbar scaling -----------------------------------------------------


def test_decide_two_plus_two_modes(rng):
    part = Partition(2, 2)
    for _ in range(6):
        sigma = random_bonafide_sigma(part, rng, spread=1.5, sympl_spread=0.15)
        st = make_state(sigma, hbar=HBAR, partition=part)
        ppt = ppt_test(st)
        v = decide_separability(st)
        if isinstance(v, Separable):
            assert ppt.passed
            assert (
                certificate_check(sigma, v.certificate.P_A, v.certificate.P_B, HBAR)
                >= -1e-9
            )
        if isinstance(v, Entangled):
            assert not ppt.passed


def test_hbar_is_a_runtime_parameter():
    part = Partition(1, 1)
    st = make_state(2.0 * np.eye(4), hbar=2.0, partition=part)
    v = decide_separability(st)
    assert isinstance(v, Separable)
    assert abs(v.certificate.slack - 1.0) < 1e-9
    st = make_state(tmsv_sigma(0.5, hbar=2.0), hbar=2.0, partition=part)
    res = ppt_test(st)
    assert abs(res.nu_tilde[-1] - math.exp(-1.0)) < 1e-10  # (hbar/2) e^{-2r}
    assert isinstance(decide_separability(st), Entangled)


# -- solver config ---------------------------------------------------------------------------


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(max_iter=0)
    with pytest.raises(ValueError):
        SolverConfig(residual_tol=-1.0)


def test_undetermined_shape():
    u = Undetermined(residual=0.25, iterations=100)
    assert u.residual == 0.25 and u.iterations == 100
