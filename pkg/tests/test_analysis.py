import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from album import analysis, gallery
from album.driver import IterationRecord


def charpoly(A):
    """Characteristic polynomial coefficients (highest degree first) by
    Faddeev-LeVerrier; uses only matrix products."""
    n = A.shape[0]
    coeffs = [1.0]
    M = np.zeros_like(A)
    for k in range(1, n + 1):
        M = A @ M + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(A @ M) / k)
    return coeffs


def poly_roots_by_bisection(coeffs, bound, grid=200001):
    f = lambda t: sum(c * t ** (len(coeffs) - 1 - i) for i, c in enumerate(coeffs))
    ts = np.linspace(-bound, bound, grid)
    vals = f(ts)
    roots = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0)[0]:
        lo, hi = ts[i], ts[i + 1]
        if vals[i] == 0:
            roots.append(lo)
            continue
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if np.sign(f(mid)) == np.sign(f(lo)):
                lo = mid
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    return np.unique(np.round(roots, 12))


def test_lambda_min_examples():
    assert analysis.lambda_min_symmetric(np.eye(3)) == pytest.approx(1.0)
    assert analysis.lambda_min_symmetric(np.diag([4.0, 9.0])) == 4.0


@pytest.mark.parametrize("seed", range(5))
def test_eigenvalues_match_characteristic_polynomial(seed):
    B = np.random.default_rng(seed).standard_normal((4, 4))
    A = B + B.T
    roots = poly_roots_by_bisection(charpoly(A), np.linalg.norm(A) + 1)
    assert len(roots) == 4
    np.testing.assert_allclose(analysis.symmetric_eigenvalues(A), roots, atol=1e-8)


@settings(max_examples=100)
@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10))
def test_jacobi_matches_2x2_closed_form(a, b, c):
    A = np.array([[a, b], [b, c]])
    mid, rad = (a + c) / 2, math.hypot((a - c) / 2, b)
    np.testing.assert_allclose(analysis.symmetric_eigenvalues(A), [mid - rad, mid + rad],
                               atol=1e-10 * (1 + abs(mid) + rad))


def test_jacobi_matches_3x3_closed_form():
    # trigonometric solution of the depressed cubic
    A = np.array([[2.0, -1.0, 0.5], [-1.0, 3.0, 0.25], [0.5, 0.25, 1.0]])
    q = np.trace(A) / 3
    p = math.sqrt(np.sum((A - q * np.eye(3)) ** 2) / 6)
    r = np.linalg.det((A - q * np.eye(3)) / p) / 2
    phi = math.acos(max(-1.0, min(1.0, r))) / 3
    e1 = q + 2 * p * math.cos(phi)
    e3 = q + 2 * p * math.cos(phi + 2 * math.pi / 3)
    e2 = 3 * q - e1 - e3
    np.testing.assert_allclose(analysis.symmetric_eigenvalues(A), sorted([e1, e2, e3]), atol=1e-10)


def test_asymmetric_rejected():
    with pytest.raises(ValueError):
        analysis.lambda_min_symmetric(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_gamma_at_examples(rng):
    sph = gallery.sphere_problem([1.0, 1.0, 0.0], 0.5)
    x = rng.standard_normal(3)
    x *= 0.7 / np.linalg.norm(x)
    assert analysis.gamma_at(sph, x) == pytest.approx(1.4, rel=1e-12)
    ident = gallery.linear_composite_problem(np.eye(2), np.zeros(2), np.eye(2), "zero")
    assert analysis.gamma_at(ident, rng.standard_normal(2)) == pytest.approx(1.0)
    diag = gallery.linear_composite_problem(np.eye(2), np.zeros(2), [[1.0, 0.0], [0.0, 2.0]], "zero")
    assert analysis.gamma_at(diag, rng.standard_normal(2)) == pytest.approx(1.0)


def test_sphere_gamma_is_twice_norm(rng):
    sph = gallery.sphere_problem(rng.standard_normal(4), 0.3)
    for _ in range(50):
        x = rng.standard_normal(4) * rng.uniform(0.1, 3)
        assert analysis.gamma_at(sph, x) == pytest.approx(2 * np.linalg.norm(x), rel=1e-12)


def test_gamma_constant_for_linear_F(problems, rng):
    p = problems["l1_equality"]
    vals = [analysis.gamma_at(p, rng.standard_normal(p.n)) for _ in range(10)]
    assert max(vals) - min(vals) == 0.0


def test_dual_bound_constants_examples():
    assert analysis.dual_bound_constants(1, 0, 0, 1, 1) == (8.0, 2.0)
    assert analysis.dual_bound_constants(1, 0, 0, 1, 2)[1] == 0.5
    with pytest.raises(ValueError):
        analysis.dual_bound_constants(1, 0, 0, 0, 1)
    with pytest.raises(ValueError):
        analysis.dual_bound_constants(1, 0, 0, 1, 0)


def test_linear_threshold_examples():
    assert analysis.linear_threshold_rho(1, 2, 1) == 6
    assert analysis.linear_threshold_rho(2, 2, 2) == 4
    d1, d2 = analysis.dual_bound_constants(1, 0, 0, 1, 1)
    assert analysis.linear_threshold_rho(1, d1, d2) == 20
    with pytest.raises(ValueError):
        analysis.linear_threshold_rho(0, 1, 1)


def test_adm_threshold_examples():
    assert analysis.adm_threshold_rho(1, 1, 1) == 20
    assert analysis.adm_threshold_rho(0, 2, 1) == 4
    assert analysis.adm_threshold_rho(1, 2, 1) == 10
    with pytest.raises(ValueError):
        analysis.adm_threshold_rho(1, 0, 1)


def test_album3_bundle_examples():
    b = analysis.album3_thresholds(1.0, 1.0, 1.0)
    assert b.eta == 17.0
    assert b.rho_bar == pytest.approx(8 / 17 * (2 + math.sqrt(21)), abs=1e-10)
    assert abs(b.delta_psi(b.rho_bar)) <= 1e-8
    assert b.delta_psi(4.0) == 80.0
    mu1, mu2 = b.mu_interval(4.0)
    assert mu1 == pytest.approx((60 - math.sqrt(80)) / 16, abs=1e-12)
    assert mu2 == pytest.approx((60 + math.sqrt(80)) / 16, abs=1e-12)
    for t in b.t_roots(4.0):
        assert abs(b.psi(t, 4.0)) <= 1e-8
    assert b.psi((mu1 + mu2) / 2 - 4.0, 4.0) < 0
    with pytest.raises(ValueError):
        b.mu_interval(3.0)


def test_album3_condition_number_enforced():
    with pytest.raises(ValueError):
        analysis.album3_thresholds(1.0, 1.0, 1.5)


@settings(max_examples=100)
@given(st.floats(0.05, 5), st.floats(0.6, 1.4), st.floats(0.01, 20), st.floats(0.01, 0.99))
def test_album3_admissible_pairs_have_positive_margin(ell, gamma, rho_excess, frac):
    norm_F = gamma * 1.3  # kappa(FF^T) = 1.69 < 2
    b = analysis.album3_thresholds(ell, gamma, norm_F)
    rho = b.rho_bar * (1 + rho_excess) + 1e-3
    mu1, mu2 = b.mu_interval(rho)
    mu = mu1 + frac * (mu2 - mu1)
    assert b.descent_margin(rho, mu) > 0


def test_subgradient_bound_example():
    assert analysis.subgradient_bound_constants(1, 1, 1, 1, 0, 0, 1, 1, 2) == (16.0, 3.0)
    s2 = analysis.subgradient_bound_constants(1, 2, 1, 1, 0, 0, 1, 1, 2)[1]
    assert s2 == 6.0
    assert analysis.subgradient_bound_constants(1, 1, 1, 1, 0, 0, 1e12, 1, 2)[1] < 1e-11


def _rec(step_x, step_y):
    return IterationRecord(k=0, rho=1, beta=0, step_x=step_x, step_y=step_y, laug=0,
                           lyapunov_prev=0, lyapunov_next=0, in_zone=True, lyap_test_pass=True,
                           kkt=(0, 0, 0), c1_slack=0, c2_slack=0, c3_slack=0)


def test_check_dual_bound_synthetic():
    assert analysis.check_dual_bound([_rec(1.0, 5.0)], 1.0, 1.0)
    good = [_rec(1.0, 0.0), _rec(0.5, 1.0), _rec(0.25, 0.6)]
    assert analysis.check_dual_bound(good, 2.0, 1.0)
    bad = good + [_rec(0.1, 3.0)]
    assert not analysis.check_dual_bound(bad, 2.0, 1.0)
