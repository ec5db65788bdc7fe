"""Vectors and matrices of truncated series; exact Gauss-Jordan over O_K.

Matrix entries share one context and one order.  Inversion of constant
matrices pivots on the first unit entry in each column, so it never divides
by a non-unit; series-matrix inverses are maintained by the Newton doubling
step used inside the differential-equation solver.
"""

from __future__ import annotations

from .errors import NotInvertibleError
from .padic import PadicContext, PadicElement
from .series import TruncSeries


class SeriesVector:
    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = list(entries)
        ctx = self.entries[0].ctx
        n = self.entries[0].order
        for e in self.entries[1:]:
            ctx._check_same(e.ctx)
            if e.order != n:
                raise ValueError("vector entries must share one order")

    @classmethod
    def zero(cls, ctx, g, order):
        return cls([TruncSeries.zero(ctx, order) for _ in range(g)])

    @property
    def g(self):
        return len(self.entries)

    @property
    def ctx(self):
        return self.entries[0].ctx

    @property
    def order(self):
        return self.entries[0].order

    def __getitem__(self, i):
        return self.entries[i]

    def __add__(self, other):
        return SeriesVector([a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return SeriesVector([a - b for a, b in zip(self.entries, other.entries)])

    def truncate(self, n):
        return SeriesVector([e.truncate(n) for e in self.entries])

    def pad_to(self, n):
        return SeriesVector([e.pad_to(n) for e in self.entries])

    def map(self, f):
        return SeriesVector([f(e) for e in self.entries])

    def eq_mod(self, other, pk, n=None):
        return all(a.eq_mod(b, pk, n) for a, b in zip(self.entries, other.entries))


class SeriesMatrix:
    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = [list(r) for r in rows]
        ctx = self.rows[0][0].ctx
        n = self.rows[0][0].order
        for r in self.rows:
            if len(r) != len(self.rows):
                raise ValueError("matrix must be square")
            for e in r:
                ctx._check_same(e.ctx)
                if e.order != n:
                    raise ValueError("matrix entries must share one order")

    @classmethod
    def identity(cls, ctx, g, order):
        rows = []
        for i in range(g):
            row = []
            for j in range(g):
                s = TruncSeries.zero(ctx, order)
                if i == j and order > 0:
                    s.coeffs[0] = ctx.one().coeffs
                row.append(s)
            rows.append(row)
        return cls(rows)

    @classmethod
    def from_constant(cls, grid, order):
        """Lift a g x g grid of PadicElements to a series matrix."""
        return cls([[TruncSeries.constant(e, order) for e in row] for row in grid])

    @property
    def g(self):
        return len(self.rows)

    @property
    def ctx(self):
        return self.rows[0][0].ctx

    @property
    def order(self):
        return self.rows[0][0].order

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other):
        return SeriesMatrix([[a + b for a, b in zip(r1, r2)]
                             for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return SeriesMatrix([[a - b for a, b in zip(r1, r2)]
                             for r1, r2 in zip(self.rows, other.rows)])

    def __mul__(self, other):
        if isinstance(other, SeriesMatrix):
            g = self.g
            out = []
            for i in range(g):
                row = []
                for j in range(g):
                    acc = self.rows[i][0] * other.rows[0][j]
                    for k in range(1, g):
                        acc = acc + self.rows[i][k] * other.rows[k][j]
                    row.append(acc)
                out.append(row)
            return SeriesMatrix(out)
        if isinstance(other, SeriesVector):
            g = self.g
            out = []
            for i in range(g):
                acc = self.rows[i][0] * other.entries[0]
                for k in range(1, g):
                    acc = acc + self.rows[i][k] * other.entries[k]
                out.append(acc)
            return SeriesVector(out)
        return NotImplemented

    def scale2(self):
        """2*A, used by the inverse Newton update."""
        two = self.ctx.element(2)
        return SeriesMatrix([[e.scale(two) for e in r] for r in self.rows])

    def truncate(self, n):
        return SeriesMatrix([[e.truncate(n) for e in r] for r in self.rows])

    def pad_to(self, n):
        return SeriesMatrix([[e.pad_to(n) for e in r] for r in self.rows])

    def constant_term(self):
        return [[e.coefficient(0) for e in r] for r in self.rows]


def gauss_jordan_inverse(A):
    """Inverse of an invertible constant matrix over O_K.

    Accepts a g x g grid of PadicElements or an order-1 SeriesMatrix and
    returns the same kind.  Each column pivots on the first unit entry;
    raises NotInvertibleError when a column has none (det not a unit).
    """
    if isinstance(A, SeriesMatrix):
        inv = gauss_jordan_inverse(A.constant_term())
        return SeriesMatrix.from_constant(inv, A.order)
    g = len(A)
    ctx = A[0][0].ctx
    work = [[e for e in row] for row in A]
    out = [[ctx.one() if i == j else ctx.zero() for j in range(g)] for i in range(g)]
    for col in range(g):
        piv = None
        for r in range(col, g):
            if work[r][col].is_unit():
                piv = r
                break
        if piv is None:
            raise NotInvertibleError(f"no unit pivot in column {col}")
        if piv != col:
            work[piv], work[col] = work[col], work[piv]
            out[piv], out[col] = out[col], out[piv]
        inv = work[col][col].inverse()
        work[col] = [e * inv for e in work[col]]
        out[col] = [e * inv for e in out[col]]
        for r in range(g):
            if r == col:
                continue
            f = work[r][col]
            if f.is_zero():
                continue
            work[r] = [a - f * b for a, b in zip(work[r], work[col])]
            out[r] = [a - f * b for a, b in zip(out[r], out[col])]
    return out


def inverse_newton_step(Hm: SeriesMatrix, A: SeriesMatrix, m: int) -> SeriesMatrix:
    """One Newton doubling for the series-matrix inverse:
    H_n = 2 H_m - H_m A H_m mod t^{m+1}, valid when H_m A = I mod
    t^{ceil((m+1)/2)}."""
    n = m + 1
    Hm = Hm.pad_to(n).truncate(n)
    A = A.truncate(n).pad_to(n)
    return Hm.scale2() - Hm * (A * Hm)
