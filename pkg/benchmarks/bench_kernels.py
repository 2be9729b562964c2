"""Timing comparison of the compiled and pure numerical kernels.

Runs the two hot kernels through both backends on representative
workloads and reports best-of-N wall times.  The compiled extension must
be importable; build it via an editable install first.

    python3 benchmarks/bench_kernels.py --repeats 7
"""

import argparse
import math
import time

import numpy as np

from specdet import _kernels_py as py
from specdet import _kernels_cy as cy


def _best(fn, repeats):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _workloads():
    out_t = np.linspace(0.0, 1.0, 513)
    stops = np.empty(0)
    grid = 4.0 + np.cos(2.0 * math.pi * np.linspace(0.0, 1.0, 1025)) ** 2

    def sampled(mod):
        return mod.dopri5(py.RHS_VLIN, 0.0, 0.0, grid, 0.0, 1.0,
                          1e-12, 1e-12, 1e-3, 1e12, stops, out_t)

    def profile(mod):
        return mod.dopri5(py.RHS_PSI, 2.0, 20.0, np.empty(0), 0.0, 5.5,
                          1e-12, 1e-12, 1e-3, 1e6, stops, out_t)

    rng = np.random.default_rng(20260816)
    edges = np.concatenate(([0.0], np.sort(rng.uniform(0.05, 0.95, 8)),
                            [1.0]))
    vals = rng.uniform(-30.0, 30.0, 9)
    lams = np.sort(rng.uniform(-50.0, 250000.0, 2000))

    def sweep(mod):
        return mod.sl_sweep(lams, edges, vals)

    return (("dopri5 sampled potential", sampled),
            ("dopri5 extremal profile", profile),
            ("sl_sweep 2000 levels", sweep))


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="time the compiled kernels against the pure reference")
    parser.add_argument("--repeats", type=int, default=7,
                        help="timed runs per workload; the best is kept")
    args = parser.parse_args(argv)

    print("%-28s %12s %12s %9s" % ("workload", "pure [ms]",
                                   "compiled [ms]", "speedup"))
    for name, fn in _workloads():
        t_py = _best(lambda: fn(py), args.repeats)
        t_cy = _best(lambda: fn(cy), args.repeats)
        print("%-28s %12.3f %12.3f %8.1fx"
              % (name, 1e3 * t_py, 1e3 * t_cy, t_py / t_cy))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
