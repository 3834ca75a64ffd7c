"""Lagrangian algorithmic maps: the primal step of each scheme and its
``(a, b, c)`` certificate.

ALBUM1   joint proximal minimization in ``(x, u)``
ALBUM2   alternating: exact u-prox, then proximal x-minimization
ALBUM3   alternating with a single linearized (explicit gradient) x-step
ADM      alternating with ``mu = 0`` under a strong-convexity certificate
"""

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .analysis import lambda_max_symmetric, lambda_min_symmetric, spectral_norm
from .errors import InnerSolverError
from .inner import armijo_descent
from .lagrangian import grad_x_aug_lagrangian
from .model import eval_F, eval_f0, prox_h

ALBUM1 = "album1"
ALBUM2 = "album2"
ALBUM3 = "album3"
ADM = "adm"
KINDS = (ALBUM1, ALBUM2, ALBUM3, ADM)


@dataclass(frozen=True)
class MapConstants:
    a: float
    b: float
    c: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"nonpositive descent constant a={self.a}")
        if not self.b > 0:
            raise ValueError(f"nonpositive gradient constant b={self.b}")
        if self.c < 0:
            raise ValueError(f"negative constant c={self.c}")


@dataclass(frozen=True)
class MapKind:
    """Which map to run. ``sigma`` (ADM only) certifies strong convexity of
    ``x -> Laug_rho(x, u, y)``; it may be a callable of ``rho``."""

    tag: str
    sigma: Optional[Union[float, Callable[[float], float]]] = None

    def __post_init__(self):
        if self.tag not in KINDS:
            raise ValueError(f"unknown map kind {self.tag!r}; expected one of {KINDS}")
        if self.tag == ADM:
            if self.sigma is None:
                raise ValueError("ADM requires a strong-convexity modulus sigma")
            if not callable(self.sigma) and not self.sigma > 0:
                raise ValueError("ADM strong-convexity modulus must be positive")

    def sigma_at(self, rho):
        s = self.sigma(rho) if callable(self.sigma) else self.sigma
        if s is None or not s > 0:
            raise ValueError(f"strong convexity not certified at rho={rho}")
        return float(s)


def validate_map(kind, problem, params):
    """Raise ``ValueError`` when ``kind`` cannot run on ``problem``."""
    if kind.tag in (ALBUM1, ALBUM2, ALBUM3) and not params.mu > 0:
        raise ValueError(f"{kind.tag} needs a positive proximal weight mu")
    if kind.tag == ALBUM3:
        if not problem.is_linear_F:
            raise ValueError("album3 requires a linear F")
        G = problem.F_matrix @ problem.F_matrix.T
        kappa = lambda_max_symmetric(G) / lambda_min_symmetric(G)
        if not kappa < 2.0:
            raise ValueError(f"album3 requires cond(FF^T) < 2, got {kappa:.4g}")
        map_constants(kind, params.mu, params.rho0, problem)


def _norm_F(problem):
    norm = problem.meta.get("norm_F")
    if norm is None:
        norm = spectral_norm(problem.F_matrix)
    return norm


def map_constants(kind, mu, rho, problem, grad_bound=0.0):
    """Certificate ``(a, b, c)`` of the map at penalty ``rho``.

    ``grad_bound`` is the running bound B on ``||grad F(x^k)||`` used for c
    in the alternating schemes.
    """
    if kind.tag == ALBUM1:
        return MapConstants(mu, mu, 0.0)
    if kind.tag == ALBUM2:
        return MapConstants(mu, mu, rho * grad_bound)
    if kind.tag == ADM:
        return MapConstants(kind.sigma_at(rho), 1.0, rho * grad_bound)
    norm_F = _norm_F(problem)
    lip = problem.lipschitz_f0 + rho * norm_F**2
    a = mu - 0.5 * lip
    if not a > 0:
        raise ValueError(f"nonpositive descent constant a={a:.6g} (mu={mu}, rho={rho})")
    return MapConstants(a, lip + mu, rho * norm_F)


def album2_u_step(problem, state):
    """Exact minimizer of ``u -> Laug(x^k, u, y^k)``."""
    Fx, _ = eval_F(problem, state.x)
    return prox_h(problem, Fx + state.y / state.rho, 1.0 / state.rho)


def _x_subproblem(problem, u, y, rho, mu, anchor, start, params):
    """Minimize ``Laug(., u, y) + (mu/2)||. - anchor||^2`` starting at ``start``."""
    if problem.is_linear_F and problem.f0_hessian is not None:
        Q = problem.f0_hessian
        Fm = problem.F_matrix
        _, g = eval_f0(problem, anchor)
        q = g - Q @ anchor
        H = Q + rho * Fm.T @ Fm + mu * np.eye(problem.n)
        rhs = -q - Fm.T @ y + rho * Fm.T @ u + mu * anchor
        return np.linalg.solve(H, rhs)

    def fun_grad(x):
        f0, g0 = eval_f0(problem, x)
        Fx, J = eval_F(problem, x)
        r = Fx - u
        d = x - anchor
        val = f0 + float(y @ r) + 0.5 * rho * float(r @ r) + 0.5 * mu * float(d @ d)
        return val, g0 + J.T @ (y + rho * r) + mu * d

    x, _, _ = armijo_descent(fun_grad, start, params.inner_tol, params.inner_max_iters)
    return x


def album2_x_step(problem, state, u_next, params):
    return _x_subproblem(problem, u_next, state.y, state.rho, params.mu,
                         state.x, state.x, params)


def adm_x_step(problem, state, u_next, params):
    return _x_subproblem(problem, u_next, state.y, state.rho, 0.0, state.x, state.x, params)


def album3_x_step(problem, state, u_next, params):
    """One explicit gradient step of length ``1/mu`` on the augmented Lagrangian."""
    if not problem.is_linear_F:
        raise ValueError("album3 requires a linear F")
    g = grad_x_aug_lagrangian(problem, state.x, u_next, state.y, state.rho)
    return state.x - g / params.mu


def _album1_joint(problem, state, params):
    """Block-coordinate descent on ``Laug(x, u, y^k) + (mu/2)||x - x^k||^2``.

    Stops once ``rho ||F(x_tilde) - F(x)||`` is below the inner tolerance,
    where ``x_tilde`` is the point the last u-block was solved at; that
    quantity is the norm of the u-subgradient witness. Returns
    ``(x, u, x_tilde)``.
    """
    y, rho, mu = state.y, state.rho, params.mu
    x = state.x
    Fx, _ = eval_F(problem, x)
    gap = np.inf
    for _ in range(params.inner_max_iters):
        x_tilde, F_tilde = x, Fx
        u = prox_h(problem, F_tilde + y / rho, 1.0 / rho)
        x = _x_subproblem(problem, u, y, rho, mu, state.x, x_tilde, params)
        Fx, _ = eval_F(problem, x)
        gap = rho * float(np.linalg.norm(F_tilde - Fx))
        if gap <= params.inner_tol:
            return x, u, x_tilde
    raise InnerSolverError("joint minimization exceeded its round cap", gap)


def album1_step(problem, state, params):
    x, u, _ = _album1_joint(problem, state, params)
    return x, u


@dataclass
class PrimalStep:
    x: np.ndarray
    u: np.ndarray
    witness: np.ndarray  # element of the u-subdifferential used for C3


def primal_step(problem, kind, state, params):
    """Apply the map once and return the new pair with its C3 witness."""
    rho = state.rho
    if kind.tag == ALBUM1:
        x, u, x_tilde = _album1_joint(problem, state, params)
        # u solves the u-block at x_tilde, so the residual shift is the witness
        witness = rho * (eval_F(problem, x_tilde)[0] - eval_F(problem, x)[0])
        return PrimalStep(x, u, witness)
    u = album2_u_step(problem, state)
    if kind.tag == ALBUM2:
        x = album2_x_step(problem, state, u, params)
    elif kind.tag == ALBUM3:
        x = album3_x_step(problem, state, u, params)
    else:
        x = adm_x_step(problem, state, u, params)
    witness = rho * (eval_F(problem, state.x)[0] - eval_F(problem, x)[0])
    return PrimalStep(x, u, witness)
