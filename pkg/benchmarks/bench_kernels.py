"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints one row per kernel and problem size with the median time of each
backend and the speedup. Requires the extension to be built.
"""

import argparse
import timeit

import numpy as np

from album import _pure

try:
    from album import _kernels
except ImportError:
    raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")


def cases(rng):
    for n in (4, 16, 64):
        M = rng.standard_normal((n, n))
        yield "jacobi_eigenvalues", n, (M + M.T,), {}
    for n in (8, 1000, 100000):
        v = rng.standard_normal(n)
        yield "soft_threshold", n, (v, 0.5), {}
        yield "hard_threshold", n, (v, max(1, n // 10)), {}
        yield "project_ball", n, (v, np.zeros(n), 1.0), {}
        yield "project_sphere", n, (v, np.zeros(n), 1.0), {}


def median_time(fn, args, repeat):
    timer = timeit.Timer(lambda: fn(*args))
    number, _ = timer.autorange()
    return float(np.median(timer.repeat(repeat, number))) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<20}{'n':>8}{'cython':>14}{'python':>14}{'speedup':>10}")
    for name, n, fargs, _ in cases(rng):
        fast = getattr(_kernels, name)
        slow = getattr(_pure, name)
        np.testing.assert_allclose(fast(*fargs), slow(*fargs), rtol=1e-9, atol=1e-12)
        tc = median_time(fast, fargs, args.repeat)
        tp = median_time(slow, fargs, args.repeat)
        print(f"{name:<20}{n:>8}{tc * 1e6:>12.2f}us{tp * 1e6:>12.2f}us{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
