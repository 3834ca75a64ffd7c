import numpy as np
import pytest

from album import AlgoParams, CompositeProblem, DimensionError, gallery, prox
from album.model import eval_f0, eval_F, eval_h, in_zone, prox_h


def _problem(f0, F, m, h=None, **kw):
    h = h or prox.Zero()
    return CompositeProblem(n=2, m=m, f0_oracle=f0, F_oracle=F, h_oracle=h, prox_h=h.prox,
                            dist_dom_h=h.dist, lipschitz_f0=1.0, lipschitz_F=0.0, gamma=1.0, **kw)


IDENT = lambda x: (x.copy(), np.eye(2))


def test_eval_f0_examples():
    p = _problem(lambda x: (0.5 * x @ x, x.copy()), IDENT, 2)
    val, g = eval_f0(p, [3.0, 4.0])
    assert val == 12.5 and np.array_equal(g, [3.0, 4.0])
    p = _problem(lambda x: (0.0, np.zeros(2)), IDENT, 2)
    assert eval_f0(p, [7.0, -1.0])[0] == 0.0
    c = np.array([2.0, 0.0])
    p = _problem(lambda x: (c @ x, c), IDENT, 2)
    val, g = eval_f0(p, [1.0, 1.0])
    assert val == 2.0 and np.array_equal(g, c)


def test_eval_F_examples():
    sph = gallery.sphere_problem([1.0, 0.0], 0.5)
    val, J = eval_F(sph, [1.0, 2.0])
    assert val[0] == 5.0 and np.array_equal(J, [[2.0, 4.0]])
    p = _problem(lambda x: (0.0, np.zeros(2)), IDENT, 2)
    val, J = eval_F(p, [1.0, 2.0])
    assert np.array_equal(val, [1.0, 2.0]) and np.array_equal(J, np.eye(2))
    lin = gallery.linear_composite_problem(np.eye(2), np.zeros(2), [[1.0, 0.0], [0.0, 2.0]], "zero")
    val, J = eval_F(lin, [1.0, 1.0])
    assert np.array_equal(val, [1.0, 2.0]) and np.array_equal(J, [[1.0, 0.0], [0.0, 2.0]])


def test_dimension_mismatch_raises():
    p = _problem(lambda x: (0.0, np.zeros(2)), IDENT, 2)
    with pytest.raises(DimensionError):
        eval_f0(p, [1.0, 2.0, 3.0])
    bad = _problem(lambda x: (0.0, np.zeros(3)), IDENT, 2)
    with pytest.raises(DimensionError):
        eval_f0(bad, [1.0, 2.0])


def test_prox_h_examples():
    l1 = gallery.linear_composite_problem(np.eye(1), np.zeros(1), np.eye(1), "l1")
    assert prox_h(l1, [3.0], 1.0)[0] == 2.0
    sparse = gallery.sparsity_problem(np.eye(2), np.zeros(2), 1)
    np.testing.assert_array_equal(prox_h(sparse, [3.0, -4.0], 0.3), [0.0, -4.0])
    with pytest.raises(ValueError):
        prox_h(l1, [3.0], 0.0)


def test_in_zone_sphere_examples():
    p = gallery.sphere_problem([1.0, 2.0], 0.5)
    assert in_zone(p, [0.6, 0.8])
    assert not in_zone(p, [0.0, 0.0])


def test_in_zone_default_uses_d_bar():
    h = prox.Indicator(prox.Singleton([1.0]))
    p = CompositeProblem(n=2, m=1, f0_oracle=lambda x: (0.0, np.zeros(2)),
                         F_oracle=lambda x: (np.array([x @ x]), 2 * x.reshape(1, -1)), h_oracle=h,
                         prox_h=h.prox, dist_dom_h=h.dist, lipschitz_f0=0.0, lipschitz_F=2.0,
                         gamma=1.0, d_bar=0.75)
    assert in_zone(p, [1.0, 0.0])
    assert not in_zone(p, [0.0, 0.0])  # dist(0, {1}) = 1 > 0.75


def test_linear_problems_zone_is_everything(problems, rng):
    for name in ("feasibility", "sparsity", "linear_composite", "l1_equality"):
        p = problems[name]
        assert np.isinf(p.d_bar)
        for x in rng.standard_normal((20, p.n)) * 100:
            assert in_zone(p, x)


def test_feasible_points_are_in_zone(problems, rng):
    for name, p in problems.items():
        for _ in range(100):
            x = rng.standard_normal(p.n)
            if name == "sphere":
                x /= np.linalg.norm(x)
            u = prox_h(p, eval_F(p, x)[0], 1.0)
            if name != "sphere" and p.dist_dom_h(eval_F(p, x)[0]) > 0:
                x = np.linalg.lstsq(p.F_matrix, u, rcond=None)[0]
            assert p.dist_dom_h(eval_F(p, x)[0]) <= 1e-12
            assert in_zone(p, x)


def test_finite_differences_of_oracles(problems, rng):
    h = 1e-6
    for p in problems.values():
        for _ in range(20):
            x = rng.standard_normal(p.n)
            _, g = eval_f0(p, x)
            _, J = eval_F(p, x)
            E = np.eye(p.n)
            fd = np.array([(eval_f0(p, x + h * e)[0] - eval_f0(p, x - h * e)[0]) / (2 * h) for e in E])
            assert np.linalg.norm(g - fd) <= 1e-6 * (1 + np.linalg.norm(g))
            fdJ = np.column_stack([(eval_F(p, x + h * e)[0] - eval_F(p, x - h * e)[0]) / (2 * h) for e in E])
            for i in range(p.m):
                assert np.linalg.norm(J[i] - fdJ[i]) <= 1e-6 * (1 + np.linalg.norm(J[i]))


def test_problem_validation():
    with pytest.raises(ValueError):
        _problem(lambda x: (0.0, np.zeros(2)), IDENT, 3)
    with pytest.raises(ValueError):
        _problem(lambda x: (0.0, np.zeros(2)), IDENT, 2, d_bar=0.0)
    with pytest.raises(ValueError):
        _problem(lambda x: (0.0, np.zeros(2)), IDENT, 2, is_linear_F=True)


def test_algo_params_defaults_and_validation():
    p = AlgoParams(rho0=3.0)
    assert p.delta == 3.0 and p.tau_fraction == 0.25
    with pytest.raises(ValueError):
        AlgoParams(tau_fraction=0.6)
    with pytest.raises(ValueError):
        AlgoParams(rho0=1.0, rho_bar=2.0)


def test_eval_h_extended_real():
    p = gallery.sphere_problem([1.0, 0.0], 0.5)
    assert eval_h(p, [1.0]) == 0.0
    assert eval_h(p, [2.0]) == np.inf
