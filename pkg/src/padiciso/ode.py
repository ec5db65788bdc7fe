"""Newton solver for first-order systems H(X(t)) . X'(t) = G(t) over O_K.

The doubling recursion produces the unique solution with X(0) = 0 modulo
(p^M, t^{n+1}) together with a running inverse of H(X); the term-by-term
`naive_solve` recurrence serves as an independent oracle.  Working at

    M = required_precision(p, N, n)

guarantees N correct digits in every coefficient despite the divisions
performed by the integrations (at most floor(log_p n) digits are lost).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotInvertibleError
from .linalg import SeriesMatrix, SeriesVector, gauss_jordan_inverse, inverse_newton_step
from .padic import PadicContext, PadicElement
from .polys import as_poly, pshift
from .series import (TruncSeries, compose, derivative, divide_row_by_int,
                     integrate, newton_inverse, newton_sqrt)


def required_precision(p: int, N: int, n: int) -> int:
    """Working precision that guarantees N correct digits at t-order n."""
    if N < 1 or n < 1:
        raise ValueError("N and n must be positive")
    logn = 0
    q = p
    while q <= n:
        q *= p
        logn += 1
    if p == 2:
        base = max(N, 3)
    elif p == 3:
        base = max(N, 2)
    else:
        base = N
    return base + logn


class GenericSeriesH:
    """H(X)_{ij} = f_ij(x_j(t)) for a g x g matrix f of exact polynomials.

    Entry (i, j) composes with the j-th unknown.  This column convention is
    forced by the Newton step: the identity (H(X) h)' = H(X) h' + dH(h) X'
    that makes the update exact holds exactly when entry (i, j) is a
    function of x_j, as it is for the Jacobian system x_j^{i-1}/y_j.
    """

    def __init__(self, ctx: PadicContext, fmat):
        self.ctx = ctx
        self.g = len(fmat)
        self.fmat = [[as_poly(ctx, f) for f in row] for row in fmat]

    def head(self):
        return [[PadicElement(self.ctx, f[0].copy()) if f.shape[0] else self.ctx.zero()
                 for f in row] for row in self.fmat]

    def evaluate(self, X: SeriesVector) -> SeriesMatrix:
        rows = []
        for i in range(self.g):
            rows.append([compose(self.fmat[i][j], X[j]) for j in range(self.g)])
        return SeriesMatrix(rows)


class HyperellipticH:
    """H(X)_{ij} = (x0_j + chi_j(t))^{i-1} / y_j(t) with
    y_j = sqrt(f2(x0_j + chi_j)), y_j(0) = y0_j; the column index selects
    the unknown, matching the Jacobian differential system."""

    def __init__(self, ctx: PadicContext, f2, x0, y0):
        self.ctx = ctx
        self.g = len(x0)
        self.x0 = list(x0)
        self.y0 = list(y0)
        f2 = as_poly(ctx, f2)
        self.shifted = [pshift(ctx, f2, xj) for xj in self.x0]
        for j in range(self.g):
            if not self.y0[j].is_unit():
                raise NotInvertibleError("Weierstrass support: y_j(0) is not a unit")
            if self.y0[j] * self.y0[j] != PadicElement(ctx, self.shifted[j][0].copy()):
                raise ValueError("y0_j^2 != f2(x0_j): inconsistent initial data")

    def head(self):
        rows = []
        for i in range(self.g):
            row = []
            for j in range(self.g):
                acc = self.y0[j].inverse()
                for _ in range(i):
                    acc = acc * self.x0[j]
                row.append(acc)
            rows.append(row)
        return rows

    def evaluate(self, X: SeriesVector) -> SeriesMatrix:
        g = self.g
        cols = []
        for j in range(g):
            chi = X[j]
            w = compose(self.shifted[j], chi)
            yj = newton_sqrt(w, self.y0[j])
            zj = newton_inverse(yj)
            sj = chi + TruncSeries.constant(self.x0[j], chi.order)
            col = [zj]
            for _ in range(1, g):
                col.append(col[-1] * sj)
            cols.append(col)
        return SeriesMatrix([[cols[j][i] for j in range(g)] for i in range(g)])


@dataclass
class OdeProblem:
    """Inputs of the solver; G and the evaluator share one context, and the
    unique solution through 0 is assumed integral (violations surface as
    DivisionPrecisionError at runtime)."""
    G: SeriesVector
    H: object
    g: int
    n: int
    N: int = 1


def diff_solve(prob: OdeProblem):
    """Newton doubling solver.

    Returns (X mod t^{n+1}, Hinv mod t^{max(1, ceil(n/2))}); X is correct
    modulo p^N when the context precision is required_precision(p, N, n).
    """
    G = prob.G
    if G.order < prob.n:
        raise ValueError(f"G must be known mod t^{prob.n}, have t^{G.order}")
    X, Hinv = _diff_solve_rec(G, prob.H, prob.n)
    return X, Hinv.truncate(max(1, (prob.n + 1) // 2))


def _diff_solve_rec(G: SeriesVector, H, n: int):
    ctx = G.ctx
    g = G.g
    if n == 0:
        X = SeriesVector.zero(ctx, g, 1)
        H0 = SeriesMatrix.from_constant(gauss_jordan_inverse(H.head()), 1)
        return X, H0
    m = n // 2
    Xm, Hm = _diff_solve_rec(G, H, m)
    A = H.evaluate(Xm.pad_to(n))               # H_f(X_m) mod t^n
    Hn = inverse_newton_step(Hm, A.truncate(m + 1), m)
    e = G.truncate(n) - A * Xm.pad_to(n + 1).map(derivative)
    I = e.map(integrate)                       # vanishes mod t^{m+1}
    # the unknown tail of Hn only feeds t-degrees >= 2m+2 > n
    X = Xm.pad_to(n + 1) + Hn.pad_to(n + 1) * I
    return X, Hn


def naive_solve(prob: OdeProblem) -> SeriesVector:
    """Term-by-term oracle: coefficient k+1 is solved from coefficient k of
    H(X) X' = G using only the constant-matrix inverse (quadratic cost)."""
    ctx = prob.G.ctx
    g = prob.g
    n = prob.n
    A0inv = gauss_jordan_inverse(prob.H.head())
    coeffs = [np.zeros((g, ctx.d), np.int64)]    # X_0 = 0
    m = ctx.modulus
    for k in range(n):
        X = SeriesVector([TruncSeries(ctx, np.array([row[i] for row in coeffs]))
                          for i in range(g)])
        A = prob.H.evaluate(X)                   # order k+1
        # X' with the unknown top coefficient zeroed: picks up every term of
        # (A X')_k except A_0 (k+1) X_{k+1}
        Xp = X.pad_to(k + 2).map(derivative)
        P = A * Xp.truncate(k + 1)
        rhs = np.zeros((g, ctx.d), np.int64)
        for i in range(g):
            gk = prob.G[i].coeffs[k] if k < prob.G[i].order else np.zeros(ctx.d, np.int64)
            rhs[i] = (gk - P[i].coeffs[k]) % m
        nxt = np.zeros((g, ctx.d), np.int64)
        for i in range(g):
            acc = ctx.zero()
            for j in range(g):
                acc = acc + A0inv[i][j] * PadicElement(ctx, rhs[j])
            nxt[i] = divide_row_by_int(ctx, acc.coeffs, k + 1,
                                       f"solving the t^{k + 1} coefficient")
        coeffs.append(nxt)
    return SeriesVector([TruncSeries(ctx, np.array([row[i] for row in coeffs]))
                         for i in range(g)])


def random_integral_problem(ctx: PadicContext, g: int, n: int, rng,
                            deg: int = 3, entry_bound: int = 64):
    """Reverse-engineered random problem with a known integral solution.

    Draws an integral X with X(0) = 0 and a polynomial matrix f with
    H_f(0) invertible, then computes G = H_f(X) . X' exactly (only ring
    multiplications, so G is the reduction of an integral series).  Returns
    (problem, X).  Used by tests and benchmarks.
    """
    bound = min(entry_bound, ctx.modulus)
    while True:
        fmat = [[rng.integers(0, bound, (int(rng.integers(1, deg + 2)), 1)).astype(np.int64)
                 for _ in range(g)] for _ in range(g)]
        H = GenericSeriesH(ctx, [[as_poly(ctx, f) for f in row] for row in fmat])
        try:
            gauss_jordan_inverse(H.head())
            break
        except NotInvertibleError:
            continue
    xs = []
    for _ in range(g):
        xc = rng.integers(0, bound, (n + 1, ctx.d)).astype(np.int64) % ctx.modulus
        xc[0] = 0
        xs.append(TruncSeries(ctx, xc))
    X = SeriesVector(xs)
    G = H.evaluate(X.truncate(n)) * X.map(derivative)
    return OdeProblem(G=G, H=H, g=g, n=n, N=1), X
