"""Command-line front end.

Five subcommands cover the library surface: ``det`` (determinant of a
potential file), ``optimize`` (synthesize the extremal potential for given
q and A), ``spectrum`` (Dirichlet eigenvalues plus the regularized
product), ``sweep`` (extremal determinants across a q list), and
``verify`` (the acceptance checks).  All payloads are machine-readable
and deterministic: JSON objects are emitted with sorted keys and no
timestamps, CSV numbers use shortest round-trip formatting.

Exit codes: 0 success, 2 input problem, 3 numeric range, 4 solver
failure, 1 failed verification.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .elliptic import solve_l2
from .errors import InputError, SpecdetError
from .extremal_l1 import optimal_pulse
from .extremal_lq import endpoint_exponent, solve_extremal
from .gy import propagate
from .potential import eval_potential, parse_potential
from .spectrum import dirichlet_eigenvalues, regularized_det_product

__all__ = ["main"]


def _r(x) -> str:
    return repr(float(x))


def _emit(payload: dict, args) -> None:
    if getattr(args, "format", "json") == "csv":
        lines = []
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, (list, tuple, np.ndarray)):
                value = ";".join(_r(v) for v in value)
            elif isinstance(value, float):
                value = _r(value)
            lines.append(f"{key},{value}")
        print("\n".join(lines))
    else:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":"),
                         allow_nan=False))


def _load_potential(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read potential file: {exc}") from exc
    return parse_potential(text)


def _write_table(path: str, header: str, rows) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(header + "\n")
            for row in rows:
                fh.write(",".join(_r(x) for x in row) + "\n")
    except OSError as exc:
        raise InputError(f"cannot write output file: {exc}") from exc


def cmd_det(args) -> int:
    V = _load_potential(args.potential)
    res = propagate(V, tol=args.tol)
    payload = {"y1": res.y1, "det": res.det, "method": res.method,
               "est_error": res.est_error, "steps": res.steps,
               "min_y": res.min_y}
    _emit(payload, args)
    if args.out:
        grid = np.linspace(0.0, 1.0, 1025)
        _write_table(args.out, "t,v",
                     zip(grid, eval_potential(V, grid)))
    return 0


def _solution_payload(sol) -> dict:
    payload = {"q": sol.q, "A": sol.A, "H": sol.H, "det": sol.det,
               "miss": sol.miss, "norm_residual": sol.norm_residual,
               "first_integral_drift": sol.first_integral_drift,
               "symmetry_defect": sol.symmetry_defect}
    try:
        payload["endpoint_slope"] = endpoint_exponent(sol)
    except SpecdetError:
        pass
    return payload


def cmd_optimize(args) -> int:
    if args.q < 1.0:
        raise InputError("q must be at least 1")
    if args.A <= 0.0:
        raise InputError("A must be positive")
    if args.q == 1.0:
        opt = optimal_pulse(args.A)
        payload = {"q": 1.0, "A": opt.A, "det": opt.det_max,
                   "D": opt.D_max, "s": opt.s, "ell": opt.ell,
                   "height": opt.height, "norm_residual": 0.0}
        if args.out:
            grid = np.linspace(0.0, 1.0, args.grid_n)
            _write_table(args.out, "t,v",
                         zip(grid, eval_potential(opt.potential(), grid)))
        _emit(payload, args)
        return 0
    if args.q == 2.0:
        sol = solve_l2(args.A, tol=args.tol, grid_n=args.grid_n)
    else:
        sol = solve_extremal(args.A, args.q, shoot_tol=args.tol,
                             grid_n=args.grid_n)
    payload = _solution_payload(sol)
    if args.q == 2.0 and args.verify_cross:
        twin = solve_extremal(args.A, 2.0, shoot_tol=max(args.tol, 1e-12),
                              grid_n=args.grid_n)
        payload["cross_h_gap"] = abs(sol.H - twin.H) / sol.H
        payload["cross_v_gap"] = float(np.max(np.abs(sol.v - twin.v)))
    if args.out:
        _write_table(args.out, "t,v", zip(sol.t, sol.v))
    _emit(payload, args)
    return 0


def cmd_spectrum(args) -> int:
    V = _load_potential(args.potential)
    spec = dirichlet_eigenvalues(V, args.n, mesh=args.mesh,
                                 method=args.method)
    payload = {"n": spec.n, "method": spec.method, "mesh": spec.mesh,
               "est_error": spec.est_error, "s1": spec.s1,
               "norm1": spec.norm1,
               "lambdas": [float(x) for x in spec.lambdas]}
    try:
        prod = regularized_det_product(spec)
        payload.update(product_raw=prod.raw,
                       product_corrected=prod.corrected,
                       tail_factor=prod.tail_factor)
    except SpecdetError as exc:
        payload.update(product_raw=None, product_corrected=None,
                       tail_factor=None, product_error=str(exc))
    if args.format == "csv":
        print("n,lambda,est_error")
        for k, lam in enumerate(spec.lambdas, start=1):
            print(f"{k},{_r(lam)},{_r(spec.est_error)}")
        if payload["product_corrected"] is not None:
            print(f"# product_raw={_r(payload['product_raw'])}")
            print(f"# product_corrected="
                  f"{_r(payload['product_corrected'])}")
    else:
        _emit(payload, args)
    if args.out:
        _write_table(args.out, "n,lambda,est_error",
                     ((k, lam, spec.est_error)
                      for k, lam in enumerate(spec.lambdas, start=1)))
    return 0


def _sweep_one(q: float, A: float, tol: float, grid_n: int) -> dict:
    if q == 1.0:
        opt = optimal_pulse(A)
        return {"q": 1.0, "H": None, "det": opt.det_max,
                "norm_residual": 0.0}
    sol = solve_extremal(A, q, shoot_tol=tol, grid_n=grid_n)
    return {"q": q, "H": sol.H, "det": sol.det,
            "norm_residual": sol.norm_residual}


def cmd_sweep(args) -> int:
    try:
        qs = sorted({float(tok) for tok in args.q_list.split(",") if tok})
    except ValueError as exc:
        raise InputError(f"bad q list: {exc}") from exc
    if not qs:
        raise InputError("q list is empty")
    if any(q < 1.0 for q in qs):
        raise InputError("every q must be at least 1")
    if args.A <= 0.0:
        raise InputError("A must be positive")
    workers = int(os.environ.get("SPECDET_THREADS", "0") or 0)
    if workers <= 0:
        workers = os.cpu_count() or 1
    with ThreadPoolExecutor(max_workers=min(workers, len(qs))) as pool:
        rows = list(pool.map(
            lambda q: _sweep_one(q, args.A, args.tol, args.grid_n), qs))
    if args.format == "csv":
        print("q,det,H,norm_residual")
        for row in rows:
            h = "" if row["H"] is None else _r(row["H"])
            print(f"{_r(row['q'])},{_r(row['det'])},{h},"
                  f"{_r(row['norm_residual'])}")
    else:
        _emit({"A": args.A, "rows": rows}, args)
    if args.out:
        _write_table(args.out, "q,det",
                     ((row["q"], row["det"]) for row in rows))
    return 0


def cmd_verify(args) -> int:
    from .verify import run_checks
    results = run_checks(names=args.only)
    if args.format == "json":
        payload = {"passed": all(r.passed for r in results),
                   "checks": [{"name": r.name, "passed": r.passed,
                               "detail": r.detail} for r in results]}
        _emit(payload, args)
    else:
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    return 0 if all(r.passed for r in results) else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specdet",
        description="Functional determinants of Schrodinger operators on "
                    "[0,1]: propagation, extremal potentials, spectra.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="json"):
        p.add_argument("--format", choices=("json", "csv"),
                       default=fmt_default)
        p.add_argument("--out", default=None,
                       help="also write the tabular artifact to this path")

    p_det = sub.add_parser("det", help="determinant of a potential file")
    p_det.add_argument("--potential", required=True)
    p_det.add_argument("--tol", type=float, default=1e-10)
    common(p_det)
    p_det.set_defaults(func=cmd_det)

    p_opt = sub.add_parser("optimize",
                           help="extremal potential for given q and A")
    p_opt.add_argument("--q", type=float, required=True)
    p_opt.add_argument("--A", type=float, required=True)
    p_opt.add_argument("--tol", type=float, default=1e-10)
    p_opt.add_argument("--grid-n", type=int, default=4097)
    p_opt.add_argument("--verify-cross", action="store_true",
                       help="for q=2, cross-check the closed form against "
                            "shooting")
    common(p_opt)
    p_opt.set_defaults(func=cmd_optimize)

    p_spec = sub.add_parser("spectrum",
                            help="Dirichlet eigenvalues and regularized "
                                 "product")
    p_spec.add_argument("--potential", required=True)
    p_spec.add_argument("--n", type=int, default=200)
    p_spec.add_argument("--mesh", type=int, default=4096)
    p_spec.add_argument("--method",
                        choices=("pruefer-shooting", "fd-matrix"),
                        default="pruefer-shooting")
    common(p_spec)
    p_spec.set_defaults(func=cmd_spectrum)

    p_sweep = sub.add_parser("sweep",
                             help="extremal determinants across a q list")
    p_sweep.add_argument("--A", type=float, required=True)
    p_sweep.add_argument("--q-list", required=True,
                         help="comma-separated q values, each >= 1")
    p_sweep.add_argument("--tol", type=float, default=1e-10)
    p_sweep.add_argument("--grid-n", type=int, default=4097)
    common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_ver = sub.add_parser("verify", help="run the acceptance checks")
    p_ver.add_argument("--only", default=None,
                       help="comma-separated check names to run")
    common(p_ver, fmt_default="text")
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecdetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
