"""Composite problem ``min f0(x) + h(F(x))``: oracles, constants and zone."""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DimensionError


@dataclass(frozen=True)
class CompositeProblem:
    """Oracle bundle for ``f0 + h o F``.

    Oracles must be deterministic pure functions. The constants
    ``lipschitz_f0``, ``lipschitz_F`` and ``gamma`` are the builder's
    claims on the information zone; nothing here estimates them.

    ``f0_hessian`` (when f0 is quadratic) and ``F_matrix`` (when F is
    linear) enable exact linear solves in the x-subproblems.
    """

    n: int
    m: int
    f0_oracle: Callable
    F_oracle: Callable
    h_oracle: Callable
    prox_h: Callable
    dist_dom_h: Callable
    lipschitz_f0: float
    lipschitz_F: float
    gamma: float
    d_bar: float = float("inf")
    zone_predicate: Optional[Callable] = None
    is_linear_F: bool = False
    F_matrix: Optional[np.ndarray] = None
    f0_hessian: Optional[np.ndarray] = None
    name: str = "composite"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.n <= 0 or self.m <= 0:
            raise ValueError("dimensions n and m must be positive")
        if self.m > self.n:
            raise ValueError(f"image dimension m={self.m} exceeds n={self.n}")
        if self.gamma <= 0:
            raise ValueError("uniform regularity constant gamma must be positive")
        if self.lipschitz_f0 < 0 or self.lipschitz_F < 0:
            raise ValueError("Lipschitz constants must be nonnegative")
        if not self.d_bar > 0:
            raise ValueError("zone radius d_bar must be positive")
        if self.is_linear_F:
            if self.F_matrix is None:
                raise ValueError("linear F requires F_matrix")
            mat = np.asarray(self.F_matrix, dtype=float)
            if mat.shape != (self.m, self.n):
                raise DimensionError(f"F_matrix has shape {mat.shape}, expected {(self.m, self.n)}")
            object.__setattr__(self, "F_matrix", mat)
        if self.f0_hessian is not None:
            hess = np.asarray(self.f0_hessian, dtype=float)
            if hess.shape != (self.n, self.n):
                raise DimensionError(f"f0_hessian has shape {hess.shape}, expected {(self.n, self.n)}")
            object.__setattr__(self, "f0_hessian", hess)


@dataclass(frozen=True)
class AlgoParams:
    """Parameters of the adaptive outer loop and the inner solvers.

    ``delta=None`` means "same as rho0". Setting ``rho_bar`` to a
    precomputed penalty threshold (linear F only) holds the penalty fixed
    at ``rho0`` and bypasses the adaptive step.
    """

    rho0: float = 1.0
    delta: Optional[float] = None
    mu: float = 1.0
    tau_fraction: float = 0.25
    inner_tol: float = 1e-10
    inner_max_iters: int = 10_000
    outer_max_iters: int = 20_000
    stop_tol: float = 1e-6
    rho_bar: Optional[float] = None
    multiplier_guard: float = 1e8
    rho_guard: float = 1e12

    def __post_init__(self):
        if not self.rho0 > 0:
            raise ValueError("rho0 must be positive")
        if self.delta is None:
            object.__setattr__(self, "delta", float(self.rho0))
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.mu < 0:
            raise ValueError("mu must be nonnegative")
        if not 0.0 < self.tau_fraction < 0.5:
            raise ValueError("tau_fraction must lie in (0, 0.5) so that tau is in (0, a/2)")
        if not self.inner_tol > 0 or not self.stop_tol > 0:
            raise ValueError("tolerances must be positive")
        if self.inner_max_iters < 1 or self.outer_max_iters < 1:
            raise ValueError("iteration caps must be positive")
        if self.rho_bar is not None and not self.rho0 > self.rho_bar:
            raise ValueError(f"fixed penalty rho0={self.rho0} must exceed threshold {self.rho_bar}")


def _vec(x, size, what):
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x.reshape(1)
    if x.shape != (size,):
        raise DimensionError(f"{what} has shape {x.shape}, expected ({size},)")
    return x


def eval_f0(problem, x):
    """Return ``(f0(x), grad f0(x))``."""
    x = _vec(x, problem.n, "x")
    value, grad = problem.f0_oracle(x)
    return float(value), _vec(grad, problem.n, "grad f0")


def eval_F(problem, x):
    """Return ``(F(x), Jacobian)``; the Jacobian is ``m x n``."""
    x = _vec(x, problem.n, "x")
    value, jac = problem.F_oracle(x)
    value = _vec(value, problem.m, "F(x)")
    jac = np.asarray(jac, dtype=float).reshape(problem.m, problem.n)
    return value, jac


def eval_h(problem, u):
    u = _vec(u, problem.m, "u")
    return float(problem.h_oracle(u))


def prox_h(problem, v, t):
    """Prox of ``t * h`` at ``v``."""
    if not t > 0:
        raise ValueError("prox step t must be positive")
    v = _vec(v, problem.m, "v")
    return _vec(problem.prox_h(v, t), problem.m, "prox output")


def in_zone(problem, x):
    """Membership of ``x`` in the information zone."""
    x = _vec(x, problem.n, "x")
    if problem.zone_predicate is not None:
        return bool(problem.zone_predicate(x))
    if np.isinf(problem.d_bar):
        return True
    Fx, _ = eval_F(problem, x)
    return bool(problem.dist_dom_h(Fx) <= problem.d_bar)
