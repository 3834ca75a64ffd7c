"""Ready-to-run example problems with analytically derived constants."""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import prox
from .analysis import lambda_max_symmetric, lambda_min_symmetric, spectral_norm
from .model import CompositeProblem


def _identity_F(n):
    eye = np.eye(n)
    return lambda x: (np.array(x, dtype=float, copy=True), eye)


def _quadratic_f0(Q, q):
    def oracle(x):
        Qx = Q @ x
        return 0.5 * float(x @ Qx) + float(q @ x), Qx + q
    return oracle


def sphere_problem(c, r1):
    """Minimize ``<c, x>`` on the unit sphere, written as ``F(x) = ||x||^2``
    with ``h`` the indicator of ``{1}``.

    The zone is ``||x|| >= r1``, on which F is ``2 r1``-regular.
    """
    c = np.atleast_1d(np.asarray(c, dtype=float))
    cnorm = float(np.linalg.norm(c))
    if cnorm == 0.0:
        raise ValueError("c must be nonzero")
    if not 0.0 < r1 < 1.0:
        raise ValueError("r1 must lie in (0, 1)")

    def f0(x):
        return float(c @ x), c.copy()

    def F(x):
        return np.array([float(x @ x)]), 2.0 * x.reshape(1, -1)

    h = prox.Indicator(prox.Singleton([1.0]))
    return CompositeProblem(
        n=c.size, m=1, f0_oracle=f0, F_oracle=F, h_oracle=h, prox_h=h.prox,
        dist_dom_h=h.dist, lipschitz_f0=0.0, lipschitz_F=2.0, gamma=2.0 * r1,
        d_bar=1.0 - r1**2, zone_predicate=lambda x: float(np.linalg.norm(x)) >= r1,
        name="sphere",
        meta={"c": c, "r1": r1, "minimizer": -c / cnorm, "optimal_value": -cnorm,
              "multiplier": cnorm / 2.0, "h": h},
    )


def feasibility_problem(sets):
    """Find a point common to ``p >= 2`` projectable sets.

    Variables are ``p`` stacked copies ``x_1..x_p``; f0 couples them to the
    first copy, F is the identity and h is the product indicator.
    """
    sets = list(sets)
    p = len(sets)
    if p < 2:
        raise ValueError("need at least two sets")
    d = sets[0].dim
    if any(s.dim != d for s in sets):
        raise ValueError("all sets must live in the same space")
    n = d * p
    K = -np.ones((p, p))
    K[0, 0] = p - 1.0
    K[1:, 1:] = np.eye(p - 1)
    K[0, 1:] = K[1:, 0] = -1.0
    Q = np.kron(K, np.eye(d)) / (p - 1.0)
    h = prox.ProductIndicator(sets)

    def f0(x):
        blocks = x.reshape(p, d)
        diff = blocks[0] - blocks[1:]
        val = float(np.sum(diff * diff)) / (2.0 * (p - 1.0))
        return val, Q @ x

    return CompositeProblem(
        n=n, m=n, f0_oracle=f0, F_oracle=_identity_F(n), h_oracle=h, prox_h=h.prox,
        dist_dom_h=h.dist, lipschitz_f0=lambda_max_symmetric(Q), lipschitz_F=0.0, gamma=1.0,
        is_linear_F=True, F_matrix=np.eye(n), f0_hessian=Q, name="feasibility",
        meta={"sets": sets, "p": p, "block_dim": d, "h": h, "norm_F": 1.0},
    )


def sparsity_problem(A, bvec, s):
    """Least squares ``0.5||Ax - b||^2`` over ``s``-sparse vectors."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    bvec = np.asarray(bvec, dtype=float).reshape(A.shape[0])
    n = A.shape[1]
    if not 1 <= s:
        raise ValueError("sparsity level must be a positive integer")
    if s > n:
        raise ValueError(f"sparsity level {s} exceeds dimension {n}")
    Q = A.T @ A
    q = -A.T @ bvec
    h = prox.SparsityBall(s)

    def f0(x):
        r = A @ x - bvec
        return 0.5 * float(r @ r), A.T @ r

    return CompositeProblem(
        n=n, m=n, f0_oracle=f0, F_oracle=_identity_F(n), h_oracle=h, prox_h=h.prox,
        dist_dom_h=h.dist, lipschitz_f0=lambda_max_symmetric(Q), lipschitz_F=0.0, gamma=1.0,
        is_linear_F=True, F_matrix=np.eye(n), f0_hessian=Q, name="sparsity",
        meta={"A": A, "b": bvec, "s": int(s), "q": q, "h": h, "norm_F": 1.0},
    )


@dataclass(frozen=True)
class Quadratic:
    """``f0(x) = 0.5 x^T Q x + q^T x``."""

    Q: np.ndarray
    q: np.ndarray


@dataclass(frozen=True)
class Smooth:
    """A general smooth f0 given by its value/gradient oracle."""

    oracle: Callable
    lipschitz: float
    n: int


@dataclass(frozen=True)
class LinearMap:
    matrix: np.ndarray


@dataclass(frozen=True)
class NonlinearMap:
    """A smooth map with its zone constants supplied by the caller."""

    oracle: Callable
    m: int
    lipschitz: float
    gamma: float
    d_bar: float = float("inf")
    zone_predicate: Optional[Callable] = None


def _build(f0_spec, F_spec, h, name, meta=None):
    meta = dict(meta or {})
    meta["h"] = h
    if isinstance(f0_spec, Quadratic):
        Q = np.atleast_2d(np.asarray(f0_spec.Q, dtype=float))
        q = np.asarray(f0_spec.q, dtype=float).reshape(Q.shape[0])
        f0, L_f0, hess, n = _quadratic_f0(Q, q), max(lambda_max_symmetric(Q), 0.0), Q, Q.shape[0]
    else:
        f0, L_f0, hess, n = f0_spec.oracle, f0_spec.lipschitz, None, f0_spec.n
    if isinstance(F_spec, LinearMap):
        Fm = np.atleast_2d(np.asarray(F_spec.matrix, dtype=float))
        lam = lambda_min_symmetric(Fm @ Fm.T)
        if lam <= 1e-12 * max(1.0, lambda_max_symmetric(Fm @ Fm.T)):
            raise ValueError("F must have full row rank")
        meta["norm_F"] = spectral_norm(Fm)
        return CompositeProblem(
            n=n, m=Fm.shape[0], f0_oracle=f0, F_oracle=lambda x: (Fm @ x, Fm), h_oracle=h,
            prox_h=h.prox, dist_dom_h=h.dist, lipschitz_f0=L_f0, lipschitz_F=0.0,
            gamma=math.sqrt(lam), is_linear_F=True, F_matrix=Fm, f0_hessian=hess, name=name,
            meta=meta)
    return CompositeProblem(
        n=n, m=F_spec.m, f0_oracle=f0, F_oracle=F_spec.oracle, h_oracle=h, prox_h=h.prox,
        dist_dom_h=h.dist, lipschitz_f0=L_f0, lipschitz_F=F_spec.lipschitz, gamma=F_spec.gamma,
        d_bar=F_spec.d_bar, zone_predicate=F_spec.zone_predicate, f0_hessian=hess, name=name,
        meta=meta)


def l1_equality_problem(f0_spec, F_spec, weights):
    """Exact l1 penalty of the equality constraints ``F(x) = 0``."""
    weights = np.atleast_1d(np.asarray(weights, dtype=float))
    if np.any(weights <= 0):
        raise ValueError("penalty weights must be positive")
    m = np.atleast_2d(F_spec.matrix).shape[0] if isinstance(F_spec, LinearMap) else F_spec.m
    if weights.size == 1:
        weights = np.full(m, weights[0])
    if weights.size != m:
        raise ValueError(f"expected {m} weights, got {weights.size}")
    return _build(f0_spec, F_spec, prox.WeightedL1(weights), "l1_equality")


def _h_from_kind(h_kind, m, **params):
    if not isinstance(h_kind, str):
        return h_kind
    if h_kind == "zero":
        return prox.Zero()
    if h_kind == "l1":
        return prox.WeightedL1(np.broadcast_to(params.get("weight", 1.0), (m,)))
    if h_kind == "l0":
        return prox.SparsityBall(params["s"])
    raise ValueError(f"unknown h kind {h_kind!r}")


def linear_composite_problem(Q, q, F_matrix, h_kind="l1", **h_params):
    """``0.5 x^T Q x + q^T x + h(Fx)`` with F of full row rank."""
    Fm = np.atleast_2d(np.asarray(F_matrix, dtype=float))
    h = _h_from_kind(h_kind, Fm.shape[0], **h_params)
    return _build(Quadratic(np.asarray(Q, dtype=float), np.asarray(q, dtype=float)),
                  LinearMap(Fm), h, "linear_composite")


def strong_convexity_modulus(problem):
    """``rho -> lambda_min(Q) + rho lambda_min(F^T F)`` for quadratic f0 and
    linear F: the modulus of ``x -> Laug_rho(x, u, y)``."""
    if problem.f0_hessian is None or not problem.is_linear_F:
        raise ValueError("needs a quadratic f0 and a linear F")
    lam_q = lambda_min_symmetric(problem.f0_hessian)
    Fm = problem.F_matrix
    lam_f = lambda_min_symmetric(Fm.T @ Fm) if Fm.shape[0] == Fm.shape[1] else 0.0

    def sigma(rho):
        return lam_q + rho * max(lam_f, 0.0)
    return sigma


def _make_set(spec):
    kind = spec.get("type")
    if kind == "ball":
        return prox.Ball(spec["center"], spec.get("radius", 1.0))
    if kind == "sphere":
        return prox.Sphere(spec["center"], spec.get("radius", 1.0))
    if kind == "singleton":
        return prox.Singleton(spec["point"])
    raise ValueError(f"unknown set type {kind!r}")


def build(name, params, rng=None):
    """Build a gallery problem from a name and a parameter mapping.

    Random data (``c`` for the sphere, ``A``/``b`` for sparsity) is drawn
    from ``rng`` when not given explicitly.
    """
    rng = np.random.default_rng(rng)
    params = dict(params or {})
    if name == "sphere":
        c = params.get("c")
        if c is None:
            c = rng.standard_normal(int(params.get("n", 2)))
        return sphere_problem(c, float(params.get("r1", 0.5)))
    if name == "feasibility":
        return feasibility_problem([_make_set(s) for s in params["sets"]])
    if name == "sparsity":
        A = params.get("A")
        if A is None:
            rows = int(params.get("rows", params.get("n", 8) * 2))
            A = rng.standard_normal((rows, int(params.get("n", 8))))
        A = np.asarray(A, dtype=float)
        b = params.get("b")
        if b is None:
            b = rng.standard_normal(A.shape[0])
        return sparsity_problem(A, b, int(params.get("s", 1)))
    if name in ("linear_composite", "l1_equality"):
        Q = np.asarray(params["Q"], dtype=float)
        q = np.asarray(params.get("q", np.zeros(Q.shape[0])), dtype=float)
        F = np.asarray(params.get("F", np.eye(Q.shape[0])), dtype=float)
        if name == "l1_equality":
            return l1_equality_problem(Quadratic(Q, q), LinearMap(F), params.get("weights", 1.0))
        h_kind = params.get("h", "l1")
        extra = {k: params[k] for k in ("weight", "s") if k in params}
        return linear_composite_problem(Q, q, F, h_kind, **extra)
    raise ValueError(f"unknown problem {name!r}")
