"""Checks of the descent conditions and convergence lemmas against a trace.

Every check is a pure function of its inputs and returns ``CheckResult``
objects, so the harness can also be pointed at corrupted traces or
deliberately wrong constants to confirm that it fails them.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .analysis import gamma_at

C4_TOL = 1e-6
LYAPUNOV_SLACK = 1e-10
TAIL_RATIO_MAX = 0.05


@dataclass(frozen=True)
class CheckResult:
    """``passed`` is ``None`` when the check does not apply to the trace."""

    name: str
    passed: Optional[bool]
    worst_slack: float = 0.0
    failures: int = 0
    detail: str = ""

    def verdict(self):
        return {True: "pass", False: "fail", None: "not applicable"}[self.passed]

    def as_dict(self):
        return {"passed": self.passed, "verdict": self.verdict(),
                "worst_slack": float(self.worst_slack), "failures": int(self.failures),
                "detail": self.detail}


def _records(trace):
    return list(trace.records) if hasattr(trace, "records") else list(trace)


def _inner_tol(trace, inner_tol):
    if inner_tol is not None:
        return inner_tol
    params = getattr(trace, "params", None)
    return params.inner_tol if params is not None else 1e-10


def _scan(name, slacks, tols):
    worst = -math.inf
    failures = 0
    for s, t in zip(slacks, tols):
        worst = max(worst, s - t)
        failures += s > t
    if worst == -math.inf:
        return CheckResult(name, True, 0.0, 0, "empty trace")
    return CheckResult(name, failures == 0, worst, failures)


def check_c1_c4(trace, constants=None, inner_tol=None):
    """Check C1-C3 on every step and the C4 surrogate on the tail.

    Slacks are recomputed from the recorded descent, gradient norm and
    subgradient witness, using ``constants`` (a ``MapConstants``) when given
    and each record's own ``(a, b, c)`` otherwise. A step passes when its
    slack is at most ``10 eps_inner (1 + ||dx||)``.

    C4 quantifies over subsequences and cannot be checked literally; the
    surrogate requires ``h(u^k) <= h(u_final) + 1e-6`` along the last
    quarter of the trace.
    """
    records = _records(trace)
    eps = _inner_tol(trace, inner_tol)
    tols = [10.0 * eps * (1.0 + r.step_x) for r in records]

    def abc(r):
        if constants is None:
            return r.a, r.b, r.c
        return constants.a, constants.b, constants.c

    c1 = [0.5 * abc(r)[0] * r.step_x**2 - r.descent for r in records]
    c2 = [r.grad_norm - abc(r)[1] * r.step_x for r in records]
    c3 = [r.witness_norm - abc(r)[2] * r.step_x for r in records]
    out = {"C1": _scan("C1", c1, tols), "C2": _scan("C2", c2, tols), "C3": _scan("C3", c3, tols)}

    if records:
        h_final = records[-1].h_value
        tail = records[(3 * len(records)) // 4:]
        excess = [r.h_value - h_final - C4_TOL for r in tail]
        bad = sum(e > 0 for e in excess)
        out["C4"] = CheckResult("C4", bad == 0, max(excess), bad,
                                "trace-tail surrogate: h(u^k) <= h(u_final) + 1e-6")
    else:
        out["C4"] = CheckResult("C4", True, 0.0, 0, "empty trace")
    return out


def check_lyapunov_descent(trace, tau=None):
    """``E_prev - E_next >= tau ||dx||^2`` for every step from ``k_statio`` on.

    ``tau`` defaults to the value recorded with each step. Slack is
    ``1e-10 (1 + |E|)``. With a fixed penalty the first step is skipped:
    ``y^0`` is not produced by a multiplier step, so the dual bound behind
    the descent only holds from ``k = 1``.
    """
    k_statio = getattr(trace, "k_statio", None)
    if k_statio is None:
        return CheckResult("lyapunov", None, detail="no penalty stabilization in trace")
    params = getattr(trace, "params", None)
    if params is not None and params.rho_bar is not None:
        k_statio = max(k_statio, 1)
    records = _records(trace)[k_statio:]
    slacks, tols = [], []
    for r in records:
        t = r.tau if tau is None else tau
        slacks.append(t * r.step_x**2 - (r.lyapunov_prev - r.lyapunov_next))
        tols.append(LYAPUNOV_SLACK * (1.0 + max(abs(r.lyapunov_prev), abs(r.lyapunov_next))))
    res = _scan("lyapunov", slacks, tols)
    return CheckResult(res.name, res.passed, res.worst_slack, res.failures,
                       f"checked {len(records)} steps from k_statio={k_statio}")


def tail_ratio(steps):
    steps = np.asarray(steps, dtype=float)
    total = float(np.sum(steps))
    if total == 0.0:
        return 0.0
    return float(np.sum(steps[(3 * steps.size) // 4:])) / total


def check_finite_length(trace):
    """Heuristic Cauchy test: the last quarter of the steps carries at most
    5% of the total path length. Accepts a trace or a sequence of step
    lengths."""
    items = _records(trace)
    steps = [r.step_x if hasattr(r, "step_x") else float(r) for r in items]
    ratio = tail_ratio(steps)
    return CheckResult("finite_length", ratio <= TAIL_RATIO_MAX, ratio - TAIL_RATIO_MAX,
                       int(ratio > TAIL_RATIO_MAX), f"tail ratio {ratio:.3e}")


def check_gamma_samples(trace, problem, rtol=1e-9):
    """Sample the regularity of F at visited in-zone iterates against the
    declared ``gamma``. Only a sampled proxy for the constraint
    qualification; infeasible points outside the zone are not examined."""
    worst = -math.inf
    bad = 0
    for r in _records(trace):
        if r.x is None or not r.in_zone:
            continue
        slack = problem.gamma * (1.0 - rtol) - gamma_at(problem, r.x)
        worst = max(worst, slack)
        bad += slack > 0
    if worst == -math.inf:
        return CheckResult("gamma", None, detail="no in-zone iterates recorded")
    return CheckResult("gamma", bad == 0, worst, bad)


def run_all(report, problem=None):
    """All checks that apply to a finished run, keyed by name."""
    out = dict(check_c1_c4(report))
    out["lyapunov"] = check_lyapunov_descent(report)
    out["finite_length"] = check_finite_length(report)
    if problem is not None:
        out["gamma"] = check_gamma_samples(report, problem)
    return out
