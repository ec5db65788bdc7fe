"""Command-line entry point.

Reads a JSON job description (see docs/schema.md), runs the requested
computation and emits a machine-readable report on stdout or to --out.
Exit codes: 0 success, 2 config/schema violation, 3 mathematical
precondition failure (typed error in the report), 4 internal invariant
breach.  With a fixed seed the report is byte-identical across runs except
for the "timings" section.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import bench as bench_mod
from . import kernels
from .curves import HyperellipticCurve, curve_from_json, random_curve
from .errors import PadicError
from .ode import (GenericSeriesH, OdeProblem, diff_solve, naive_solve,
                  required_precision)
from .padic import PadicContext
from .pipeline import (RationalRepresentation, degree_bounds,
                       reconstruct_representation, run_multiplication,
                       run_supplied, verify_representation)
from .linalg import SeriesVector
from .series import TruncSeries


class SchemaError(Exception):
    pass


def _require(cfg, key, types, what=""):
    if key not in cfg:
        raise SchemaError(f"missing required field '{key}' {what}")
    v = cfg[key]
    if types is not None and not isinstance(v, types):
        raise SchemaError(f"field '{key}' must be {types}, got {type(v).__name__}")
    return v


_REQUIRED = object()


def _int_field(cfg, key, default=_REQUIRED, minimum=None):
    if key not in cfg or cfg[key] is None:
        if default is _REQUIRED:
            raise SchemaError(f"missing required integer field '{key}'")
        return default
    try:
        v = int(cfg[key])
    except (TypeError, ValueError):
        raise SchemaError(f"field '{key}' must be an integer")
    if minimum is not None and v < minimum:
        raise SchemaError(f"field '{key}' must be >= {minimum}")
    return v


def _series_json(series_list):
    return [s.to_json() for s in series_list]


def _cmd_solve_ode(cfg, opts):
    p = _int_field(cfg, "p", minimum=2)
    N = _int_field(cfg, "N", default=1, minimum=1)
    n = opts.order if opts.order is not None else _int_field(cfg, "n", minimum=1)
    g = _int_field(cfg, "g", minimum=1)
    fmat = _require(cfg, "f", list, "(g x g matrix of coefficient arrays)")
    Gdata = _require(cfg, "G", list, "(g coefficient arrays)")
    if len(fmat) != g or any(len(row) != g for row in fmat):
        raise SchemaError("'f' must be a g x g matrix of coefficient arrays")
    if len(Gdata) != g:
        raise SchemaError("'G' must have g entries")
    M = opts.precision if opts.precision is not None else \
        _int_field(cfg, "precision", default=required_precision(p, N, n))
    ctx = PadicContext(p, M)
    from .polys import poly_from_json
    H = GenericSeriesH(ctx, [[poly_from_json(ctx, f) for f in row] for row in fmat])
    G = SeriesVector([TruncSeries.from_coeff_list(ctx, [int(v) for v in arr], n)
                      for arr in Gdata])
    t0 = time.perf_counter()
    prob = OdeProblem(G=G, H=H, g=g, n=n, N=N)
    X, hinv = diff_solve(prob)
    t_solve = time.perf_counter() - t0
    outputs = {"x": _series_json(X.entries)}
    if cfg.get("compare_naive"):
        Xn = naive_solve(prob)
        outputs["naive_agrees_mod_pN"] = bool(X.eq_mod(Xn, N))
    params = {"p": p, "N": N, "n": n, "g": g, "M": M}
    return params, outputs, None, {"solve": t_solve}


def _cmd_mult_ell(cfg, opts):
    p = _int_field(cfg, "p", minimum=2)
    g = _int_field(cfg, "g", minimum=1)
    ell = _int_field(cfg, "ell", minimum=1)
    N = _int_field(cfg, "N", default=1, minimum=1)
    seed = opts.seed if opts.seed is not None else _int_field(cfg, "seed", default=0)
    trials = opts.trials if opts.trials is not None else _int_field(cfg, "trials", default=50)
    order = opts.order if opts.order is not None else _int_field(cfg, "order", default=None)
    precision = opts.precision if opts.precision is not None else \
        _int_field(cfg, "precision", default=None)
    t0 = time.perf_counter()
    prob, solved, rep, ver = run_multiplication(
        p=p, g=g, ell=ell, seed=seed, N=N, order=order, precision=precision,
        fast=opts.fast_gcd, trials=trials)
    total = time.perf_counter() - t0
    bounds = degree_bounds("mult", g, ell, 2 * g + 1)
    params = {"p": p, "g": g, "ell": ell, "N": N, "seed": seed, "n": prob.n,
              "M": prob.ctx.M, "sigma_bound": bounds.sigma, "rho_bounds": bounds.rho,
              "fast_gcd": opts.fast_gcd, "trials": trials}
    outputs = {
        "curve": {"f": [str(int(c)) for c in prob.curve1.f[:, 0]]},
        "base_point": [str(int(prob.Q.x.coeffs[0])), str(int(prob.Q.y.coeffs[0]))],
        "representation": rep.to_json(),
    }
    return params, outputs, ver, {"total": total}


def _cmd_isogeny(cfg, opts):
    p = _int_field(cfg, "p", minimum=2)
    N = _int_field(cfg, "N", default=1, minimum=1)
    ell = _int_field(cfg, "ell", minimum=1)
    seed = opts.seed if opts.seed is not None else _int_field(cfg, "seed", default=0)
    curve = _require(cfg, "curve", dict)
    codomain = _require(cfg, "codomain", dict)
    matrix = _require(cfg, "norm_matrix", list)
    base_point = _require(cfg, "base_point", list)
    initial_points = cfg.get("initial_points")
    initial_divisor = cfg.get("initial_divisor")
    if initial_points is None and initial_divisor is None:
        raise SchemaError("one of 'initial_points' or 'initial_divisor' is required")
    order = opts.order if opts.order is not None else _int_field(cfg, "order", default=None)
    precision = opts.precision if opts.precision is not None else \
        _int_field(cfg, "precision", default=None)
    t0 = time.perf_counter()
    prob, solved, rep = run_supplied(
        seed=seed, fast=opts.fast_gcd,
        p=p, N=N, curve1_f=_require(curve, "f", list),
        curve2_f=_require(codomain, "f", list),
        norm_matrix=matrix, base_point=base_point,
        initial_points=initial_points, initial_divisor=initial_divisor,
        ell=ell, order=order, precision=precision,
        transpose_G=bool(cfg.get("transpose_G", False)))
    total = time.perf_counter() - t0
    params = {"p": p, "N": N, "ell": ell, "seed": seed, "n": prob.n,
              "M": prob.ctx.M, "fast_gcd": opts.fast_gcd,
              "transpose_G": bool(cfg.get("transpose_G", False))}
    outputs = {
        "x_series": _series_json(solved.x),
        "y_series": _series_json(solved.y),
        "v_series": solved.v.to_json(),
        "representation": rep.to_json(),
    }
    return params, outputs, None, {"total": total}


def _cmd_verify(cfg, opts):
    trials = opts.trials if opts.trials is not None else _int_field(cfg, "trials", default=50)
    seed = opts.seed if opts.seed is not None else _int_field(cfg, "seed", default=0)
    if "report" in cfg:
        with open(cfg["report"]) as fh:
            rep_data = json.load(fh)["outputs"]["representation"]
    elif "representation" in cfg:
        rep_data = cfg["representation"]
    else:
        raise SchemaError("verify needs 'report' (path) or an inline 'representation'")
    rep = RationalRepresentation.from_json(rep_data)
    if rep.mode != "mult":
        raise SchemaError("only multiplication-mode representations can be verified")
    res = PadicContext(rep.p, 1)
    curve = HyperellipticCurve(res, [int(c) for c in rep.curve_f])
    t0 = time.perf_counter()
    ver = verify_representation(rep, curve, rep.ell, trials,
                                np.random.default_rng(seed))
    total = time.perf_counter() - t0
    params = {"p": rep.p, "g": rep.g, "ell": rep.ell, "trials": trials, "seed": seed}
    return params, {}, ver, {"total": total}


def _cmd_bench(cfg, opts):
    suite = cfg.get("suite", "all")
    if suite not in ("all", "solver", "pade", "lanes"):
        raise SchemaError("bench suite must be one of all/solver/pade/lanes")
    kw = {}
    for key in ("solver", "pade", "lanes"):
        if key in cfg:
            sub = dict(cfg[key])
            if "sizes" in sub:
                sub["sizes"] = tuple(int(v) for v in sub["sizes"])
            kw[key] = sub
    t0 = time.perf_counter()
    results = bench_mod.run_bench(suite, **kw)
    total = time.perf_counter() - t0
    return ({"suite": suite, "kernel_lane": kernels.active_lane()},
            {"results": results}, None, {"total": total})


_COMMANDS = {
    "solve-ode": _cmd_solve_ode,
    "mult-ell": _cmd_mult_ell,
    "isogeny": _cmd_isogeny,
    "verify": _cmd_verify,
    "bench": _cmd_bench,
}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="padiciso",
        description="p-adic differential solver and isogeny rational representations")
    ap.add_argument("--config", required=True, help="path to the JSON job description")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--seed", type=int, default=None, help="override the config seed")
    ap.add_argument("--order", type=int, default=None, help="override the series order n")
    ap.add_argument("--precision", type=int, default=None,
                    help="override the working precision M")
    gcd = ap.add_mutually_exclusive_group()
    gcd.add_argument("--fast-gcd", dest="fast_gcd", action="store_true", default=True,
                     help="use half-gcd reconstruction (default)")
    gcd.add_argument("--naive-gcd", dest="fast_gcd", action="store_false",
                     help="use the plain partial extended Euclid")
    ap.add_argument("--trials", type=int, default=None,
                    help="override the verification trial count")
    return ap


def main(argv=None) -> int:
    opts = build_parser().parse_args(argv)
    report = {"command": None}
    try:
        with open(opts.config) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise SchemaError("config must be a JSON object")
        command = _require(cfg, "command", str)
        report["command"] = command
        if command not in _COMMANDS:
            raise SchemaError(f"unknown command {command!r}; "
                              f"expected one of {sorted(_COMMANDS)}")
    except (OSError, json.JSONDecodeError, SchemaError) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        _emit(report, opts)
        return 2
    try:
        params, outputs, verification, timings = _COMMANDS[command](cfg, opts)
    except SchemaError as exc:
        report["error"] = {"type": "SchemaError", "message": str(exc)}
        _emit(report, opts)
        return 2
    except (PadicError, ValueError) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        _emit(report, opts)
        return 3
    except Exception as exc:   # invariant breach
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        _emit(report, opts)
        return 4
    report.update({"params": params, "outputs": outputs,
                   "verification": verification, "timings": timings})
    _emit(report, opts)
    return 0


def _emit(report, opts):
    text = json.dumps(report, indent=2, sort_keys=True)
    if opts.out:
        with open(opts.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


if __name__ == "__main__":
    sys.exit(main())
