"""Config-driven experiment runner.

A config is a YAML document with four sections::

    problem: {name: sphere, params: {n: 5, r1: 0.5}}
    map:     {kind: album2, mu: 1.0}
    algo:    {rho0: 10, delta: 10, seed: 42}
    output:  {trace_path: out/trace.csv, summary_path: out/summary.yaml}

Exit codes: 0 converged, 2 iteration cap reached, 3 divergence guard,
1 configuration or oracle error.
"""

import argparse
import csv
import io
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from . import diagnostics, gallery
from .driver import run
from .errors import AlbumError, ConfigError, DivergenceError
from .maps import ADM, ALBUM3, KINDS, MapKind
from .model import AlgoParams

log = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_MAX_ITERS, EXIT_DIVERGED = 0, 1, 2, 3

TRACE_HEADER = ["k", "rho", "beta", "step_x", "step_y", "laug", "lyapunov", "in_zone",
                "lyap_pass", "kkt_stat", "kkt_feas", "kkt_dual"]

LINEAR_PROBLEMS = ("feasibility", "sparsity", "linear_composite", "l1_equality")
PROBLEMS = ("sphere",) + LINEAR_PROBLEMS

_SCHEMA = {
    "problem": {"name", "params"},
    "map": {"kind", "mu", "sigma"},
    "algo": {"rho0", "delta", "tau_fraction", "tolerances", "max_iters", "seed", "x0", "rho_bar"},
    "output": {"trace_path", "summary_path"},
}
_NESTED = {("algo", "tolerances"): {"inner", "stop"}, ("algo", "max_iters"): {"outer", "inner"}}


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str
    problem_params: dict
    kind: str
    mu: float = 1.0
    sigma: Optional[float] = None
    rho0: float = 1.0
    delta: float = 1.0
    tau_fraction: float = 0.25
    inner_tol: float = 1e-10
    stop_tol: float = 1e-6
    outer_max_iters: int = 20000
    inner_max_iters: int = 10000
    seed: int = 42
    x0: Optional[tuple] = None
    rho_bar: Optional[float] = None
    trace_path: Optional[str] = None
    summary_path: Optional[str] = None
    source: Optional[str] = field(default=None, compare=False)

    def algo_params(self):
        return AlgoParams(rho0=self.rho0, delta=self.delta, mu=self.mu,
                          tau_fraction=self.tau_fraction, inner_tol=self.inner_tol,
                          inner_max_iters=self.inner_max_iters,
                          outer_max_iters=self.outer_max_iters, stop_tol=self.stop_tol,
                          rho_bar=self.rho_bar)


def _section(doc, name):
    sec = doc.get(name) or {}
    if not isinstance(sec, dict):
        raise ConfigError(f"section {name!r} must be a mapping")
    return sec


def _positive(value, name, allow_zero=False):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {value!r}") from None
    if not (value >= 0 if allow_zero else value > 0):
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


def _count(value, name):
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"{name} must be a positive integer, got {value!r}")
    return value


def parse_config(text, source=None):
    """Parse and validate YAML config text; defaults are filled in."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a mapping with problem/map/algo/output sections")

    unknown = [k for k in doc if k not in _SCHEMA]
    for sec, allowed in _SCHEMA.items():
        unknown += [f"{sec}.{k}" for k in _section(doc, sec) if k not in allowed]
    for (sec, sub), allowed in _NESTED.items():
        nested = _section(doc, sec).get(sub) or {}
        if not isinstance(nested, dict):
            raise ConfigError(f"{sec}.{sub} must be a mapping")
        unknown += [f"{sec}.{sub}.{k}" for k in nested if k not in allowed]
    if unknown:
        raise ConfigError("unknown config keys: " + ", ".join(sorted(map(str, unknown))))

    problem, mp, algo, out = (_section(doc, s) for s in ("problem", "map", "algo", "output"))
    if "name" not in problem:
        raise ConfigError("missing required key problem.name")
    if "kind" not in mp:
        raise ConfigError("missing required key map.kind")
    name, kind = problem["name"], mp["kind"]
    if name not in PROBLEMS:
        raise ConfigError(f"unknown problem {name!r}; expected one of {PROBLEMS}")
    if kind not in KINDS:
        raise ConfigError(f"unknown map kind {kind!r}; expected one of {KINDS}")
    if kind == ALBUM3 and name not in LINEAR_PROBLEMS:
        raise ConfigError(f"album3 requires a linear F; problem {name!r} is nonlinear")
    params = problem.get("params") or {}
    if not isinstance(params, dict):
        raise ConfigError("problem.params must be a mapping")

    tau = _positive(algo.get("tau_fraction", 0.25), "algo.tau_fraction")
    if not tau < 0.5:
        raise ConfigError(f"algo.tau_fraction={tau} outside (0, 1/2): tau must lie in (0, a/2)")
    sigma = mp.get("sigma")
    if sigma is not None:
        sigma = _positive(sigma, "map.sigma")
    tols = algo.get("tolerances") or {}
    caps = algo.get("max_iters") or {}
    seed = algo.get("seed", 42)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"algo.seed must be a nonnegative integer, got {seed!r}")
    x0 = algo.get("x0")
    if x0 is not None:
        try:
            x0 = tuple(float(v) for v in x0)
        except (TypeError, ValueError):
            raise ConfigError("algo.x0 must be a list of numbers") from None
    rho0 = _positive(algo.get("rho0", 1.0), "algo.rho0")
    rho_bar = algo.get("rho_bar")
    if rho_bar is not None:
        rho_bar = _positive(rho_bar, "algo.rho_bar", allow_zero=True)
        if name not in LINEAR_PROBLEMS:
            raise ConfigError("a fixed penalty (algo.rho_bar) needs a linear problem")
        if not rho0 > rho_bar:
            raise ConfigError(f"algo.rho0={rho0} must exceed algo.rho_bar={rho_bar}")
    return ExperimentConfig(
        problem=name, problem_params=dict(params), kind=kind,
        mu=_positive(mp.get("mu", 1.0), "map.mu", allow_zero=kind == ADM), sigma=sigma,
        rho0=rho0, delta=_positive(algo.get("delta", 1.0), "algo.delta"), tau_fraction=tau,
        inner_tol=_positive(tols.get("inner", 1e-10), "algo.tolerances.inner"),
        stop_tol=_positive(tols.get("stop", 1e-6), "algo.tolerances.stop"),
        outer_max_iters=_count(caps.get("outer", 20000), "algo.max_iters.outer"),
        inner_max_iters=_count(caps.get("inner", 10000), "algo.max_iters.inner"),
        seed=seed, x0=x0, rho_bar=rho_bar,
        trace_path=out.get("trace_path"), summary_path=out.get("summary_path"), source=source,
    )


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, source=str(path))


def _fmt(v):
    return repr(float(v))


def emit_trace(report, dest):
    """Write the per-iteration trace as CSV to a path or text stream."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", newline="") as fh:
            return emit_trace(report, fh)
    w = csv.writer(dest, lineterminator="\n")
    w.writerow(TRACE_HEADER)
    for r in report.records:
        w.writerow([r.k, _fmt(r.rho), _fmt(r.beta), _fmt(r.step_x), _fmt(r.step_y), _fmt(r.laug),
                    _fmt(r.lyapunov_next), int(r.in_zone), int(r.lyap_test_pass),
                    *(_fmt(v) for v in r.kkt)])
    return None


def trace_text(report):
    buf = io.StringIO()
    emit_trace(report, buf)
    return buf.getvalue()


def summarize(config, report, problem, checks, exit_code):
    last = report.records[-1] if report.records else None
    return {
        "problem": config.problem,
        "map": config.kind,
        "seed": config.seed,
        "exit_code": exit_code,
        "converged": bool(report.converged),
        "iterations": report.iterations,
        "k_statio": report.k_statio,
        "k_info": report.k_info,
        "final_rho": float(report.final_state.rho),
        "final_kkt": {k: float(v) for k, v in zip(("stationarity", "feasibility", "dual"),
                                                   last.kkt if last else (np.nan,) * 3)},
        "running_Lambda": float(report.max_multiplier),
        "final_x": [float(v) for v in report.final_state.x],
        "diagnostics": {name: res.as_dict() for name, res in checks.items()},
    }


def _map_kind(config, problem):
    if config.kind != ADM:
        return MapKind(config.kind)
    if config.sigma is not None:
        return MapKind(ADM, config.sigma)
    try:
        return MapKind(ADM, gallery.strong_convexity_modulus(problem))
    except ValueError as exc:
        raise ConfigError(f"adm needs map.sigma for this problem: {exc}") from None


def run_experiment(config, quiet=False):
    """Build, run, check and write outputs. Returns the exit code."""
    def say(msg):
        if not quiet:
            print(msg, file=sys.stderr)

    for p in (config.trace_path, config.summary_path):
        if p is not None and not Path(p).parent.is_dir():
            say(f"error: output directory {Path(p).parent} does not exist")
            return EXIT_ERROR
    rng = np.random.default_rng(config.seed)
    try:
        problem = gallery.build(config.problem, config.problem_params, rng)
        kind = _map_kind(config, problem)
        x0 = None if config.x0 is None else np.asarray(config.x0)
        report = run(problem, kind, config.algo_params(), x0=x0, rng=rng)
    except DivergenceError as exc:
        say(f"diverged: {exc}")
        return EXIT_DIVERGED
    except (AlbumError, ValueError, KeyError, TypeError) as exc:
        say(f"error: {exc}")
        return EXIT_ERROR

    code = EXIT_OK if report.converged else EXIT_MAX_ITERS
    checks = diagnostics.run_all(report, problem)
    try:
        if config.trace_path is not None:
            emit_trace(report, config.trace_path)
        if config.summary_path is not None:
            with open(config.summary_path, "w") as fh:
                yaml.safe_dump(summarize(config, report, problem, checks, code), fh,
                               sort_keys=False)
    except OSError as exc:
        say(f"error: {exc}")
        return EXIT_ERROR
    verdicts = " ".join(f"{k}={v.verdict()}" for k, v in checks.items())
    say(f"{config.problem}/{config.kind}: {'converged' if report.converged else 'not converged'} "
        f"after {report.iterations} iterations, rho={report.final_state.rho:g} [{verdicts}]")
    return code


def _run_path(path, quiet):
    try:
        config = load_config(path)
    except ConfigError as exc:
        if not quiet:
            print(f"{path}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return run_experiment(config, quiet)


def main(argv=None):
    ap = argparse.ArgumentParser(prog="album-run", description=__doc__.split("\n")[0])
    ap.add_argument("config", nargs="?", help="experiment config (YAML)")
    ap.add_argument("--batch", metavar="DIR", help="run every *.yaml/*.yml config in DIR")
    ap.add_argument("--quiet", action="store_true", help="suppress progress messages")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    if (args.config is None) == (args.batch is None):
        ap.error("give exactly one of a config path or --batch DIR")
    if args.config is not None:
        return _run_path(args.config, args.quiet)
    batch = Path(args.batch)
    if not batch.is_dir():
        print(f"error: {batch} is not a directory", file=sys.stderr)
        return EXIT_ERROR
    paths = sorted(list(batch.glob("*.yaml")) + list(batch.glob("*.yml")))
    if not paths:
        print(f"error: no configs in {batch}", file=sys.stderr)
        return EXIT_ERROR
    with ThreadPoolExecutor() as pool:
        codes = list(pool.map(lambda p: _run_path(p, args.quiet), paths))
    return max(codes)


if __name__ == "__main__":
    sys.exit(main())
