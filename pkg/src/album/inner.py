"""Smooth inner solver: gradient descent with Armijo backtracking."""

import numpy as np

from .errors import InnerSolverError

_EPS = np.finfo(float).eps


def armijo_descent(fun_grad, x0, tol, max_iters, c1=1e-4, first_step=1.0):
    """Minimize a smooth function from ``x0`` until ``||grad|| <= tol``.

    Trial steps start at ``first_step`` on the first iteration and at the
    Barzilai-Borwein step afterwards; each trial is halved until the
    sufficient-decrease test holds. The test carries a few-ulp allowance so
    that it stays decidable once decreases fall below rounding level.
    Iterates are monotone in the objective up to that allowance.

    Returns ``(x, grad_norm, iterations)``.
    """
    x = np.array(x0, dtype=float, copy=True)
    f, g = fun_grad(x)
    gnorm = float(np.linalg.norm(g))
    step = first_step
    for it in range(max_iters):
        if gnorm <= tol:
            return x, gnorm, it
        gg = gnorm * gnorm
        slack = 8.0 * _EPS * (1.0 + abs(f))
        t = step
        while True:
            x_new = x - t * g
            f_new, g_new = fun_grad(x_new)
            if np.isfinite(f_new) and f_new <= f - c1 * t * gg + slack:
                break
            t *= 0.5
            if t < 1e-30:
                raise InnerSolverError("line search failed to find a decrease", gnorm)
        s = x_new - x
        dg = g_new - g
        sy = float(s @ dg)
        step = float(s @ s) / sy if sy > 0 else 2.0 * t
        step = min(max(step, 1e-12), 1e12)
        x, f, g = x_new, f_new, g_new
        gnorm = float(np.linalg.norm(g))
    if gnorm <= tol:
        return x, gnorm, max_iters
    raise InnerSolverError(f"inner solver exceeded {max_iters} iterations", gnorm)
