"""Outer loop: primal map step, multiplier step, adaptive penalty step."""

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import DivergenceError, UnboundedError
from .lagrangian import (SolverState, eval_aug_lagrangian, eval_lyapunov,
                         grad_x_aug_lagrangian, kkt_residuals, multiplier_step)
from .maps import MapKind, map_constants, primal_step, validate_map
from .model import AlgoParams, eval_F, eval_h, in_zone, prox_h

log = logging.getLogger(__name__)

# Rounding allowance of the Lyapunov decrease test, relative to |E|.
LYAPUNOV_RTOL = 1e-12


@dataclass
class IterationRecord:
    k: int
    rho: float
    beta: float
    step_x: float
    step_y: float
    laug: float
    lyapunov_prev: float
    lyapunov_next: float
    in_zone: bool
    lyap_test_pass: bool
    kkt: Tuple[float, float, float]
    c1_slack: float
    c2_slack: float
    c3_slack: float
    # raw quantities behind the slacks, so diagnostics can re-check other constants
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    tau: float = 0.0
    descent: float = 0.0
    grad_norm: float = 0.0
    witness_norm: float = 0.0
    y_norm: float = 0.0
    h_value: float = 0.0
    x: Optional[np.ndarray] = None


@dataclass
class RunReport:
    records: List[IterationRecord]
    k_statio: Optional[int]
    converged: bool
    final_state: SolverState
    k_info: Optional[int] = None
    x0: Optional[np.ndarray] = None
    max_multiplier: float = 0.0
    grad_bound: float = 0.0
    params: Optional[AlgoParams] = None
    notes: List[str] = field(default_factory=list)

    @property
    def iterations(self):
        return len(self.records)


def lyapunov_weight(b, rho, gamma):
    """Memory weight ``2 b^2 / (rho gamma^2)`` of the Lyapunov function."""
    return 2.0 * b**2 / (rho * gamma**2)


def adaptive_step(problem, constants, state_prev, state_next, params):
    """Penalty update after one iteration.

    ``state_prev`` holds ``(x^k, u^k, y^k)`` with ``x_prev = x^{k-1}``;
    ``state_next`` holds ``(x^{k+1}, u^{k+1}, y^{k+1})``. Both Lyapunov
    values use ``rho_k = state_prev.rho``. Returns
    ``(rho_next, beta_used, passed)``.
    """
    rho = state_prev.rho
    beta = lyapunov_weight(constants.b, rho, problem.gamma)
    tau = params.tau_fraction * constants.a
    passed, _, _ = _lyapunov_test(problem, state_prev, state_next, rho, beta, tau)
    passed = passed and in_zone(problem, state_next.x)
    return (rho if passed else rho + params.delta), beta, passed


def _lyapunov_test(problem, prev, nxt, rho, beta, tau):
    e_prev = eval_lyapunov(problem, prev.x, prev.u, prev.y, prev.x_prev, rho, beta)
    e_next = eval_lyapunov(problem, nxt.x, nxt.u, nxt.y, prev.x, rho, beta)
    dx = nxt.x - prev.x
    lhs = tau * float(dx @ dx)
    allowance = LYAPUNOV_RTOL * (1.0 + max(abs(e_prev), abs(e_next)))
    return lhs <= e_prev - e_next + allowance, e_prev, e_next


def detect_stabilization(trace):
    """First index after which the penalty never changes again.

    Accepts a ``RunReport`` (its final penalty counts as one more entry) or
    a plain sequence of penalties. ``None`` when the trace ends on an
    increment.
    """
    if isinstance(trace, RunReport):
        rhos = [r.rho for r in trace.records] + [trace.final_state.rho]
    else:
        rhos = list(trace)
    if not rhos:
        raise ValueError("empty trace")
    if len(rhos) == 1:
        return 0
    if rhos[-1] != rhos[-2]:
        return None
    k = len(rhos) - 1
    while k > 0 and rhos[k - 1] == rhos[k]:
        k -= 1
    return k


def initial_state(problem, params, x0=None, rng=None):
    """``x0`` (random unit vector if absent), ``u0 = prox(F(x0))``, ``y0 = 0``."""
    if x0 is None:
        rng = np.random.default_rng(rng)
        x0 = rng.standard_normal(problem.n)
        x0 /= np.linalg.norm(x0)
    x0 = np.array(x0, dtype=float).reshape(problem.n)
    Fx0, _ = eval_F(problem, x0)
    u0 = prox_h(problem, Fx0, 1.0 / params.rho0)
    return SolverState(x=x0, u=u0, y=np.zeros(problem.m), x_prev=x0.copy(),
                       rho=float(params.rho0), beta=0.0, k=0)


def _grad_F_norm(problem, x):
    _, J = eval_F(problem, x)
    return float(np.linalg.norm(J, 2))


def run(problem, kind, params, x0=None, rng=None, callback=None):
    """Run the adaptive multiplier method and return the full trace.

    Stops when all three KKT residuals are below ``params.stop_tol`` or after
    ``params.outer_max_iters`` iterations. With ``params.rho_bar`` set on a
    linear problem the penalty stays at ``rho0`` and the adaptive step only
    records its test outcome.
    """
    if isinstance(kind, str):
        kind = MapKind(kind)
    validate_map(kind, problem, params)
    fixed = params.rho_bar is not None
    if fixed and not problem.is_linear_F:
        raise ValueError("a fixed penalty threshold is only valid for linear F")
    mu = 0.0 if kind.tag == "adm" else params.mu

    state = initial_state(problem, params, x0, rng)
    x_start = state.x.copy()
    grad_bound = _grad_F_norm(problem, state.x)
    max_y = 0.0
    warned = False
    records = []
    converged = False

    for k in range(params.outer_max_iters):
        rho = state.rho
        step = primal_step(problem, kind, state, params)
        x_new, u_new = step.x, step.u
        grad_bound = max(grad_bound, _grad_F_norm(problem, x_new))
        consts = map_constants(kind, mu, rho, problem, grad_bound)
        y_new = multiplier_step(problem, x_new, u_new, state.y, rho)

        # C1-C3 quantities, all at (x+, u+, y^k) with rho_k
        laug_old = eval_aug_lagrangian(problem, state.x, state.u, state.y, rho)
        laug_mid = eval_aug_lagrangian(problem, x_new, u_new, state.y, rho)
        if not (math.isfinite(laug_mid) and math.isfinite(laug_old)):
            raise UnboundedError("augmented Lagrangian is not finite: unbounded below or oracle fault "
                                 "(the method assumes inf Laug_rho > -inf)")
        dx = x_new - state.x
        step_x = float(np.linalg.norm(dx))
        descent = laug_old - laug_mid
        grad_norm = float(np.linalg.norm(grad_x_aug_lagrangian(problem, x_new, u_new, state.y, rho)))
        witness_norm = float(np.linalg.norm(step.witness))

        nxt = SolverState(x=x_new, u=u_new, y=y_new, x_prev=state.x, rho=rho, beta=0.0, k=k + 1)
        beta = lyapunov_weight(consts.b, rho, problem.gamma)
        tau = params.tau_fraction * consts.a
        lyap_ok, e_prev, e_next = _lyapunov_test(problem, state, nxt, rho, beta, tau)
        zone_ok = in_zone(problem, x_new)
        passed = lyap_ok and zone_ok
        rho_next = rho if (passed or fixed) else rho + params.delta
        if rho_next > params.rho_guard:
            raise DivergenceError(f"penalty exceeded {params.rho_guard:g}; the information zone is "
                                  "never reached (check the zone or d_bar)")

        y_norm = float(np.linalg.norm(y_new))
        max_y = max(max_y, y_norm)
        if max_y > params.multiplier_guard and not warned:
            warnings.warn(f"multiplier norm {max_y:.3e} exceeds guard {params.multiplier_guard:g}; "
                          "the bounded-multiplier assumption may fail", RuntimeWarning)
            warned = True

        kkt = kkt_residuals(problem, x_new, u_new, y_new, rho)
        rec = IterationRecord(
            k=k, rho=rho, beta=beta, step_x=step_x,
            step_y=float(np.linalg.norm(y_new - state.y)),
            laug=eval_aug_lagrangian(problem, x_new, u_new, y_new, rho), lyapunov_prev=e_prev, lyapunov_next=e_next,
            in_zone=zone_ok, lyap_test_pass=passed, kkt=kkt,
            c1_slack=0.5 * consts.a * step_x**2 - descent,
            c2_slack=grad_norm - consts.b * step_x,
            c3_slack=witness_norm - consts.c * step_x,
            a=consts.a, b=consts.b, c=consts.c, tau=tau, descent=descent,
            grad_norm=grad_norm, witness_norm=witness_norm, y_norm=y_norm,
            h_value=eval_h(problem, u_new), x=x_new,
        )
        records.append(rec)
        if callback is not None:
            callback(rec)
        state = SolverState(x=x_new, u=u_new, y=y_new, x_prev=state.x, rho=rho_next,
                            beta=beta, k=k + 1)
        if max(kkt) <= params.stop_tol:
            converged = True
            break

    report = RunReport(records=records, k_statio=None, converged=converged, final_state=state,
                       x0=x_start, max_multiplier=max_y, grad_bound=grad_bound,
                       params=params)
    report.k_statio = detect_stabilization(report)
    report.k_info = detect_zone_entry(report, problem)
    log.info("run finished: %d iterations, converged=%s, k_statio=%s", len(records), converged,
             report.k_statio)
    return report


def detect_zone_entry(report, problem):
    """Smallest iterate index from which every ``x^k`` lies in the zone."""
    flags = [in_zone(problem, report.x0)] + [r.in_zone for r in report.records]
    if not flags[-1]:
        return None
    k = len(flags) - 1
    while k > 0 and flags[k - 1]:
        k -= 1
    return k
