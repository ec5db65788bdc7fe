"""Benchmarks: solver scaling in the series order, half-gcd vs plain Euclid
reconstruction, and the numba vs numpy kernel lanes.

These back the `bench` CLI command and the performance-trend assertions of
the acceptance suite (wall-clock trends, not absolute timings).
"""

from __future__ import annotations

import gc
import time

import numpy as np

from . import kernels
from .ode import OdeProblem, diff_solve, random_integral_problem, required_precision
from .padic import PadicContext
from .reconstruct import expand_fraction, pade_reconstruct
from .series import TruncSeries


def _best_of(fn, repeats):
    best = float("inf")
    out = None
    enabled = gc.isenabled()
    for _ in range(max(1, repeats)):
        gc.collect()
        gc.disable()
        try:
            t0 = time.perf_counter()
            out = fn()
            best = min(best, time.perf_counter() - t0)
        finally:
            if enabled:
                gc.enable()
    return best, out


def bench_solver_scaling(sizes=(256, 512, 1024, 2048), p=7, g=2, seed=0, repeats=2):
    """diff_solve wall-clock across series orders at fixed (g, p, N=1).

    One integral problem at the largest order is generated and truncated, so
    every row solves a prefix of the same system.
    """
    kernels.warmup()
    rng = np.random.default_rng(seed)
    nmax = max(sizes)
    ctx = PadicContext(p, required_precision(p, 1, nmax))
    prob, _ = random_integral_problem(ctx, g, nmax, rng)
    # warm the JIT, the twiddle caches and the allocator at full size
    diff_solve(OdeProblem(G=prob.G, H=prob.H, g=g, n=nmax, N=1))
    order = sorted(sizes)
    best = {n: float("inf") for n in order}
    enabled = gc.isenabled()
    for _ in range(max(1, repeats)):
        for n in order:        # interleaved so drift hits every size alike
            sub = OdeProblem(G=prob.G.truncate(n), H=prob.H, g=g, n=n, N=1)
            gc.collect()
            gc.disable()
            try:
                t0 = time.perf_counter()
                diff_solve(sub)
                best[n] = min(best[n], time.perf_counter() - t0)
            finally:
                if enabled:
                    gc.enable()
    rows = [{"n": n, "seconds": best[n]} for n in order]
    return {"task": "solver-scaling", "p": p, "g": g, "M": ctx.M, "rows": rows}


def bench_pade(sizes=(1024, 4096), p=19, seed=0, repeats=2):
    """Half-gcd vs plain partial-Euclid reconstruction of an (n/2-1, n/2-1)
    fraction from n series coefficients over F_p."""
    kernels.warmup()
    rows = []
    rng = np.random.default_rng(seed)
    ctx = PadicContext(p, 1)
    for n in sorted(sizes):
        b = n // 2 - 1
        num = rng.integers(0, p, (b + 1, 1)).astype(np.int64)
        den = rng.integers(0, p, (b + 1, 1)).astype(np.int64)
        num[b, 0] = max(1, num[b, 0])
        den[b, 0] = max(1, den[b, 0])
        den[0, 0] = 1
        s = expand_fraction(ctx, num, den, n)
        fast_s, out_f = _best_of(lambda: pade_reconstruct(s, b, b, fast=True), repeats)
        slow_s, out_s = _best_of(lambda: pade_reconstruct(s, b, b, fast=False), repeats)
        assert np.array_equal(out_f[0], out_s[0]) and np.array_equal(out_f[1], out_s[1])
        rows.append({"n": n, "halfgcd_seconds": fast_s, "euclid_seconds": slow_s})
    return {"task": "pade", "p": p, "rows": rows}


def bench_lanes(sizes=(1024, 8192, 65536), modulus=(1 << 31) - 1, seed=0, repeats=3):
    """NTT convolution throughput of the two kernel lanes on identical
    inputs (outputs asserted bit-equal)."""
    rng = np.random.default_rng(seed)
    rows = []
    lanes = {}
    for name in ("numba", "numpy"):
        try:
            lanes[name] = kernels.get_backend(name)
            lanes[name].warmup()
        except ImportError:
            pass
    for n in sorted(sizes):
        a = rng.integers(0, modulus, n).astype(np.int64)
        b = rng.integers(0, modulus, n).astype(np.int64)
        row = {"n": n}
        outs = {}
        for name, mod in lanes.items():
            secs, out = _best_of(lambda m=mod: m.ntt_conv(a, b, modulus), repeats)
            row[f"{name}_seconds"] = secs
            outs[name] = out
        if len(outs) == 2:
            assert np.array_equal(outs["numba"], outs["numpy"])
        rows.append(row)
    return {"task": "lanes", "active_lane": kernels.active_lane(), "rows": rows}


def run_bench(suite="all", **kw):
    out = []
    if suite in ("all", "solver"):
        out.append(bench_solver_scaling(**kw.get("solver", {})))
    if suite in ("all", "pade"):
        out.append(bench_pade(**kw.get("pade", {})))
    if suite in ("all", "lanes"):
        out.append(bench_lanes(**kw.get("lanes", {})))
    return out
