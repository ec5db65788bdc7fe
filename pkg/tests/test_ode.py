"""The Newton solver and its term-by-term oracle."""

from fractions import Fraction

import numpy as np
import pytest

from padiciso import polys as P
from padiciso.errors import DivisionPrecisionError, NotInvertibleError
from padiciso.linalg import SeriesVector
from padiciso.ode import (GenericSeriesH, HyperellipticH, OdeProblem,
                          diff_solve, naive_solve, random_integral_problem,
                          required_precision)
from padiciso.padic import PadicContext
from padiciso.series import TruncSeries, derivative


def test_required_precision_examples():
    assert required_precision(19, 1, 110) == 2
    assert required_precision(5, 3, 1) == 3
    assert required_precision(2, 1, 10) == 6
    assert required_precision(3, 1, 10) == 4
    assert required_precision(7, 2, 2048) == 5
    with pytest.raises(ValueError):
        required_precision(5, 0, 3)


def _closed_form_problem():
    # (1 + x) x' = 1, x(0) = 0  =>  x = sqrt(1 + 2t) - 1
    ctx = PadicContext(5, 4)
    H = GenericSeriesH(ctx, [[P.as_poly(ctx, [1, 1])]])
    G = SeriesVector([TruncSeries.from_coeff_list(ctx, [1], 5)])
    return OdeProblem(G=G, H=H, g=1, n=5, N=3), ctx


def test_closed_form_g1():
    prob, ctx = _closed_form_problem()
    X, hinv = diff_solve(prob)
    m = 5 ** 4
    want = [Fraction(0), Fraction(1), Fraction(-1, 2), Fraction(1, 2),
            Fraction(-5, 8), Fraction(7, 8)]     # binomial series of sqrt(1+2t) - 1
    got = [int(c) for c in X[0].coeffs[:, 0]]
    for k, w in enumerate(want):
        assert got[k] == (w.numerator % m) * pow(w.denominator, -1, m) % m
    assert all(a.coeffs.shape == b.coeffs.shape and (a.coeffs == b.coeffs).all()
               for a, b in zip(X.entries, naive_solve(prob).entries))
    assert hinv.order == 3      # ceil(n/2)


def test_zero_rhs():
    prob, ctx = _closed_form_problem()
    prob0 = OdeProblem(G=SeriesVector.zero(ctx, 1, 5), H=prob.H, g=1, n=5, N=3)
    X, _ = diff_solve(prob0)
    assert all(e.is_zero() for e in X.entries)
    assert all(e.is_zero() for e in naive_solve(prob0).entries)


def test_non_invertible_head_rejected():
    ctx = PadicContext(5, 3)
    H = GenericSeriesH(ctx, [[P.as_poly(ctx, [5, 1])]])   # f(0) = 5, not a unit
    G = SeriesVector([TruncSeries.from_coeff_list(ctx, [1], 4)])
    with pytest.raises(NotInvertibleError):
        diff_solve(OdeProblem(G=G, H=H, g=1, n=4, N=1))


def test_randomized_solver_suite(rng):
    # diff_solve == naive_solve == true solution mod p^N; residual vanishes
    for _ in range(50):
        p = int(rng.choice([2, 3, 5, 7]))
        g = int(rng.integers(1, 4))
        n = int(rng.integers(1, 100))
        N = int(rng.integers(1, 3))
        ctx = PadicContext(p, required_precision(p, N, n))
        prob, Xtrue = random_integral_problem(ctx, g, n, rng)
        prob.N = N
        X, _ = diff_solve(prob)
        assert X.eq_mod(Xtrue, N)
        assert X.eq_mod(naive_solve(prob), N)
        res = prob.G.truncate(n) - prob.H.evaluate(X.truncate(n)) * X.map(derivative)
        q = p ** N
        for e in res.entries:
            assert not (e.coeffs % q).any()


def test_perturbation_stability(rng):
    # coefficients of G perturbed at valuation >= V move X by valuation
    # >= V - floor(log_p n); p >= 5
    for _ in range(30):
        p = int(rng.choice([5, 7]))
        g = int(rng.integers(1, 3))
        n = int(rng.integers(2, 80))
        logn = 0
        q = p
        while q <= n:
            q *= p
            logn += 1
        M = 2 + logn + int(rng.integers(1, 3))
        V = int(rng.integers(logn + 1, M))
        ctx = PadicContext(p, M)
        prob, _ = random_integral_problem(ctx, g, n, rng)
        X, _ = diff_solve(prob)
        pv = p ** V
        delta = [TruncSeries(ctx, rng.integers(0, ctx.modulus // pv + 1, (n, 1)).astype(np.int64) * pv % ctx.modulus)
                 for _ in range(g)]
        G2 = SeriesVector([a + d for a, d in zip(prob.G.entries, delta)])
        X2, _ = diff_solve(OdeProblem(G=G2, H=prob.H, g=g, n=n, N=1))
        bound = p ** (V - logn)
        for a, b in zip(X.entries, X2.entries):
            diff = (a.coeffs - b.coeffs) % ctx.modulus
            assert not (diff % bound).any(), (p, n, V, logn)


def test_hyperelliptic_evaluator_consistency(rng):
    # HyperellipticH head and evaluate(0) agree; y0 mismatch rejected
    ctx = PadicContext(7, 3)
    from padiciso.curves import random_curve, divisor_from_point, divisor_points, scalar_mul
    C = random_curve(ctx, 2, rng)
    while True:
        try:
            D = scalar_mul(C, 3, divisor_from_point(C, C.random_affine_point(rng)))
            ext, pts = divisor_points(C, D, rng)
            break
        except Exception:
            continue
    from padiciso.curves import embed_poly
    H = HyperellipticH(ext, embed_poly(ctx, ext, C.f), [q.x for q in pts], [q.y for q in pts])
    head = H.head()
    A0 = H.evaluate(SeriesVector.zero(ext, 2, 1))
    for i in range(2):
        for j in range(2):
            assert A0[i, j].coefficient(0) == head[i][j]
    with pytest.raises(ValueError):
        HyperellipticH(ext, embed_poly(ctx, ext, C.f),
                       [q.x for q in pts], [q.y + ext.one() for q in pts])
