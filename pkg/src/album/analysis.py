"""Regularity constants, lemma constants and closed-form penalty thresholds."""

import math
from dataclasses import dataclass

import numpy as np

from . import _core
from .model import eval_F

SYMMETRY_TOL = 1e-12


def _symmetric(A):
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    if A.size and float(np.max(np.abs(A - A.T))) > SYMMETRY_TOL * scale:
        raise ValueError("matrix is not symmetric")
    return 0.5 * (A + A.T)


def symmetric_eigenvalues(A):
    """All eigenvalues of a symmetric matrix, ascending (cyclic Jacobi)."""
    return _core.jacobi_eigenvalues(_symmetric(A), 1e-12)


def lambda_min_symmetric(A):
    return float(symmetric_eigenvalues(A)[0])


def lambda_max_symmetric(A):
    return float(symmetric_eigenvalues(A)[-1])


def spectral_norm(M):
    M = np.atleast_2d(np.asarray(M, dtype=float))
    G = M @ M.T if M.shape[0] <= M.shape[1] else M.T @ M
    return math.sqrt(max(lambda_max_symmetric(G), 0.0))


def gamma_at(problem, x):
    """Pointwise regularity ``sqrt(lambda_min(J J^T))`` of F at ``x``."""
    _, J = eval_F(problem, x)
    return math.sqrt(max(lambda_min_symmetric(J @ J.T), 0.0))


def dual_bound_constants(L_f0, L_F, Lambda, b, gamma):
    """Constants ``(d1, d2)`` bounding ``||dy||^2`` by the last two primal steps."""
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    if not b > 0:
        raise ValueError("b must be positive")
    d1 = 2.0 / gamma**2 * (L_f0 + L_F * Lambda + b) ** 2
    d2 = 2.0 * b**2 / gamma**2
    return d1, d2


def linear_threshold_rho(a, d1, d2):
    if not a > 0:
        raise ValueError("descent constant a must be positive")
    return 2.0 * (d1 + d2) / a


def adm_threshold_rho(L_f0, sigma, lambda_min_FFt):
    if not sigma > 0 or not lambda_min_FFt > 0 or L_f0 < 0:
        raise ValueError("sigma and lambda_min(FF^T) must be positive, L(f0) nonnegative")
    return 4.0 * ((L_f0 + 1.0) ** 2 + 1.0) / (sigma * lambda_min_FFt)


@dataclass(frozen=True)
class ThresholdBundle:
    """Dual-bound constants and the fixed-penalty threshold for linear F."""

    d1: float
    d2: float
    rho_bar: float


def linear_thresholds(a, b, L_f0, gamma):
    d1, d2 = dual_bound_constants(L_f0, 0.0, 0.0, b, gamma)
    return ThresholdBundle(d1, d2, linear_threshold_rho(a, d1, d2))


@dataclass(frozen=True)
class Album3Bundle:
    """Admissible ``(rho, mu)`` region of the linearized scheme.

    Built from ``ell = L(f0)``, ``gamma = sqrt(lambda_min(FF^T))`` and the
    spectral norm of F. The interval endpoints and the quadratic ``psi``
    depend on the chosen penalty, hence the methods.
    """

    ell: float
    gamma: float
    norm_F: float
    eta: float
    rho_bar: float

    def delta_psi(self, rho):
        g2 = self.gamma**2
        return rho**2 * g2 * self.eta - 32.0 * rho * g2 * self.ell - 64.0 * self.ell**2

    def psi(self, t, rho):
        g2 = self.gamma**2
        return (16.0 * t**2 - 2.0 * (rho * g2 - 8.0 * self.ell) * t
                + rho * g2 * (self.ell + rho * self.norm_F**2 - 2.0 * rho * g2)
                + 8.0 * self.ell**2)

    def _check_rho(self, rho):
        if not rho > self.rho_bar:
            raise ValueError(f"rho={rho} does not exceed threshold {self.rho_bar}")

    def t_roots(self, rho):
        self._check_rho(rho)
        root = math.sqrt(self.delta_psi(rho))
        center = rho * self.gamma**2 - 8.0 * self.ell
        return (center - root) / 16.0, (center + root) / 16.0

    def mu_interval(self, rho):
        t1, t2 = self.t_roots(rho)
        shift = rho * self.gamma**2
        return t1 + shift, t2 + shift

    def dual_constants(self, rho, mu):
        """``(d1, d2)`` of the linear-F dual bound for this scheme, with
        ``||M|| = mu - rho gamma^2`` taken signed as in the derivation."""
        g2 = self.gamma**2
        m_norm = mu - rho * g2
        return 2.0 * m_norm**2 / g2, 2.0 * (self.ell + m_norm) ** 2 / g2

    def descent_margin(self, rho, mu):
        """``a/2 - (d1 + d2)/rho`` with ``a = mu - (ell + rho ||F||^2)/2``."""
        a = mu - 0.5 * (self.ell + rho * self.norm_F**2)
        d1, d2 = self.dual_constants(rho, mu)
        return 0.5 * a - (d1 + d2) / rho


def album3_thresholds(L_f0, gamma, norm_F):
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    if L_f0 < 0:
        raise ValueError("L(f0) must be nonnegative")
    # kappa(FF^T) = ||F||^2 / gamma^2 < 2 is the standing hypothesis
    if not norm_F**2 < 2.0 * gamma**2:
        raise ValueError(f"condition number of FF^T is {norm_F**2 / gamma**2:.4g}, must be < 2")
    eta = 33.0 * gamma**2 - 16.0 * norm_F**2
    rho_bar = 8.0 * L_f0 / (eta * gamma) * (2.0 * gamma + math.sqrt(4.0 * gamma**2 + eta))
    return Album3Bundle(float(L_f0), float(gamma), float(norm_F), eta, rho_bar)


def subgradient_bound_constants(B, b, d_c, L_f0, L_F, Lambda, gamma, rho0, beta0):
    """``(sigma1, sigma2)`` bounding a Lyapunov subgradient by the last two steps."""
    if not gamma > 0 or not rho0 > 0:
        raise ValueError("gamma and rho0 must be positive")
    factor = B + 1.0 + 1.0 / rho0
    sigma1 = factor * (L_f0 + L_F * Lambda + b) / gamma + 4.0 * beta0 + b + d_c
    sigma2 = b / gamma * factor
    return sigma1, sigma2


def _records(trace):
    return trace.records if hasattr(trace, "records") else list(trace)


def check_dual_bound(trace, d1, d2, k_from=1):
    """True iff ``||dy_k||^2 <= d1 ||dx_k||^2 + d2 ||dx_{k-1}||^2`` for ``k >= k_from``."""
    records = _records(trace)
    for i in range(max(k_from, 1), len(records)):
        rhs = d1 * records[i].step_x**2 + d2 * records[i - 1].step_x**2
        if records[i].step_y**2 > rhs + 1e-8 * (1.0 + rhs):
            return False
    return True


def posthoc_dual_constants(report, problem):
    """``(d1, d2)`` from the run's running multiplier bound and largest ``b``."""
    records = report.records
    Lambda = max(r.y_norm for r in records)
    b = max(r.b for r in records)
    L_F = 0.0 if problem.is_linear_F else problem.lipschitz_F
    return dual_bound_constants(problem.lipschitz_f0, L_F, Lambda, b, problem.gamma)
