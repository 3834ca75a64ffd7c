"""Augmented Lagrangian, Lyapunov function, multiplier update, KKT residuals."""

from dataclasses import dataclass, replace

import numpy as np

from .model import eval_F, eval_f0, eval_h, prox_h


@dataclass(frozen=True)
class SolverState:
    """Iterate ``(x, u, y)`` plus the previous primal ``x_prev``."""

    x: np.ndarray
    u: np.ndarray
    y: np.ndarray
    x_prev: np.ndarray
    rho: float
    beta: float
    k: int = 0

    def advance(self, **changes):
        return replace(self, **changes)


def eval_aug_lagrangian(problem, x, u, y, rho):
    """``f0(x) + h(u) + <y, F(x) - u> + (rho/2) ||F(x) - u||^2``; may be +inf."""
    f0, _ = eval_f0(problem, x)
    hu = eval_h(problem, u)
    if np.isinf(hu):
        return float("inf")
    r = eval_F(problem, x)[0] - u
    return f0 + hu + float(y @ r) + 0.5 * rho * float(r @ r)


def grad_x_aug_lagrangian(problem, x, u, y, rho):
    _, g = eval_f0(problem, x)
    Fx, J = eval_F(problem, x)
    return g + J.T @ (y + rho * (Fx - u))


def eval_lyapunov(problem, x, u, y, w, rho, beta):
    """Lyapunov function: augmented Lagrangian plus ``beta ||x - w||^2``."""
    d = np.asarray(x, dtype=float) - np.asarray(w, dtype=float)
    return eval_aug_lagrangian(problem, x, u, y, rho) + beta * float(d @ d)


def multiplier_step(problem, x_next, u_next, y, rho):
    Fx, _ = eval_F(problem, x_next)
    return y + rho * (Fx - u_next)


def kkt_residuals(problem, x, u, y, rho):
    """Return ``(stationarity, feasibility, dual)``.

    The dual residual is the prox fixed-point gap
    ``||u - prox_{h/rho}(u + y/rho)||``, a computable stand-in for
    ``y in dh(u)``.
    """
    _, g = eval_f0(problem, x)
    Fx, J = eval_F(problem, x)
    stationarity = float(np.linalg.norm(g + J.T @ y))
    feasibility = float(np.linalg.norm(Fx - u))
    dual = float(np.linalg.norm(u - prox_h(problem, u + y / rho, 1.0 / rho)))
    return stationarity, feasibility, dual


def lyapunov_subgradient(problem, x, u, y, w, rho, beta, h_subgradient):
    """Components of a subgradient of the Lyapunov function at ``(x, u, y, w)``.

    ``h_subgradient`` must be an element of the subdifferential of h at u.
    """
    Fx, _ = eval_F(problem, x)
    gx = grad_x_aug_lagrangian(problem, x, u, y, rho) + 2.0 * beta * (x - w)
    gu = h_subgradient + rho * (u - Fx) - y
    gy = Fx - u
    gw = 2.0 * beta * (w - x)
    return gx, gu, gy, gw
