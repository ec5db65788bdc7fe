"""Truncated power series over a PadicContext.

A TruncSeries of order n is known modulo t^n and stores an (n, d) int64
coefficient block.  Arithmetic between two series first truncates to the
smaller order.  Integration is the only operation that loses p-adic
precision (it divides by the integers 1..n under the fixed-point rule).
"""

from __future__ import annotations

import numpy as np

from .errors import DivisionPrecisionError, NotInvertibleError, PadicError
from .padic import PadicContext, PadicElement, int_valuation
from .polys import ring_conv


class SquareRootError(PadicError):
    """newton_sqrt preconditions failed (p = 2, or y0^2 != a(0))."""


class TruncSeries:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: PadicContext, coeffs: np.ndarray):
        self.ctx = ctx
        self.coeffs = coeffs

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ctx, order: int) -> "TruncSeries":
        return cls(ctx, np.zeros((order, ctx.d), np.int64))

    @classmethod
    def constant(cls, elt: PadicElement, order: int) -> "TruncSeries":
        out = np.zeros((order, elt.ctx.d), np.int64)
        if order > 0:
            out[0] = elt.coeffs
        return cls(elt.ctx, out)

    @classmethod
    def from_poly(cls, ctx, poly: np.ndarray, order: int) -> "TruncSeries":
        out = np.zeros((order, ctx.d), np.int64)
        k = min(order, poly.shape[0])
        out[:k] = poly[:k]
        return cls(ctx, out)

    @classmethod
    def from_coeff_list(cls, ctx, values, order=None) -> "TruncSeries":
        rows = [ctx.element(v).coeffs for v in values]
        if order is None:
            order = len(rows)
        out = np.zeros((order, ctx.d), np.int64)
        for k, row in enumerate(rows[:order]):
            out[k] = row
        return cls(ctx, out)

    @classmethod
    def random(cls, ctx, order: int, rng) -> "TruncSeries":
        return cls(ctx, rng.integers(0, ctx.modulus, (order, ctx.d)).astype(np.int64))

    # -- basics ------------------------------------------------------------

    @property
    def order(self) -> int:
        return self.coeffs.shape[0]

    def coefficient(self, k: int) -> PadicElement:
        if k >= self.order:
            raise IndexError(f"series only known mod t^{self.order}")
        return PadicElement(self.ctx, self.coeffs[k].copy())

    def truncate(self, n: int) -> "TruncSeries":
        if n >= self.order:
            return self
        return TruncSeries(self.ctx, self.coeffs[:n])

    def pad_to(self, n: int) -> "TruncSeries":
        """Extend with zero coefficients, i.e. reinterpret the known prefix
        as an exact polynomial.  Only meaningful where the caller knows the
        tail (Newton steps do)."""
        if n <= self.order:
            return self
        out = np.zeros((n, self.ctx.d), np.int64)
        out[:self.order] = self.coeffs
        return TruncSeries(self.ctx, out)

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by t^k."""
        out = np.zeros((self.order + k, self.ctx.d), np.int64)
        out[k:] = self.coeffs
        return TruncSeries(self.ctx, out)

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def t_valuation(self) -> int:
        for k in range(self.order):
            if self.coeffs[k].any():
                return k
        return self.order

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        self.ctx._check_same(other.ctx)
        return (self.order == other.order
                and bool(np.array_equal(self.coeffs, other.coeffs)))

    def eq_mod(self, other: "TruncSeries", pk: int, n=None) -> bool:
        """Equality of coefficients mod p^k up to order n (default: min order)."""
        if n is None:
            n = min(self.order, other.order)
        q = self.ctx.p ** pk
        return bool(np.array_equal(self.coeffs[:n] % q, other.coeffs[:n] % q))

    # -- ring ops ----------------------------------------------------------

    def _common(self, other):
        self.ctx._check_same(other.ctx)
        n = min(self.order, other.order)
        return n

    def __add__(self, other):
        n = self._common(other)
        return TruncSeries(self.ctx, (self.coeffs[:n] + other.coeffs[:n]) % self.ctx.modulus)

    def __sub__(self, other):
        n = self._common(other)
        return TruncSeries(self.ctx, (self.coeffs[:n] - other.coeffs[:n]) % self.ctx.modulus)

    def __neg__(self):
        return TruncSeries(self.ctx, (-self.coeffs) % self.ctx.modulus)

    def __mul__(self, other):
        n = self._common(other)
        prod = ring_conv(self.ctx, self.coeffs[:n], other.coeffs[:n])
        return TruncSeries(self.ctx, prod[:n])

    def scale(self, elt: PadicElement) -> "TruncSeries":
        self.ctx._check_same(elt.ctx)
        if self.ctx.d == 1:
            return TruncSeries(self.ctx, self.coeffs * elt.coeffs[0] % self.ctx.modulus)
        prod = ring_conv(self.ctx, self.coeffs, elt.coeffs[None, :])
        return TruncSeries(self.ctx, prod[:self.order])

    # -- precision / context moves ------------------------------------------

    def to_precision(self, M2: int) -> "TruncSeries":
        ctx2 = self.ctx.with_precision(M2)
        return TruncSeries(ctx2, self.coeffs % ctx2.modulus)

    def residue(self) -> "TruncSeries":
        return self.to_precision(1)

    def embed(self, ext_ctx: PadicContext) -> "TruncSeries":
        if self.ctx.d != 1:
            raise ValueError("embed expects a base-context series")
        if ext_ctx.d == 1:
            ext_ctx._check_same(self.ctx)
            return self
        out = np.zeros((self.order, ext_ctx.d), np.int64)
        out[:, 0] = self.coeffs[:, 0]
        return TruncSeries(ext_ctx, out)

    def to_json(self):
        if self.ctx.d == 1:
            return [str(int(c)) for c in self.coeffs[:, 0]]
        return [[str(int(v)) for v in row] for row in self.coeffs]

    def __repr__(self):
        head = ", ".join(repr(list(map(int, r)) if self.ctx.d > 1 else int(r[0]))
                         for r in self.coeffs[:6])
        more = ", ..." if self.order > 6 else ""
        return f"TruncSeries([{head}{more}] mod t^{self.order}, p={self.ctx.p}^{self.ctx.M})"


# ---------------------------------------------------------------------------
# operations


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a * b


def derivative(a: TruncSeries) -> TruncSeries:
    """Termwise derivative; order drops by one; no p-adic loss."""
    if a.order < 1:
        raise ValueError("derivative needs order >= 1")
    mult = np.arange(1, a.order, dtype=np.int64)[:, None]
    return TruncSeries(a.ctx, a.coeffs[1:] * mult % a.ctx.modulus)


def divide_row_by_int(ctx: PadicContext, row: np.ndarray, n: int, what: str = "division") -> np.ndarray:
    """Fixed-point division of a coefficient vector by the integer n."""
    p, M, m = ctx.p, ctx.M, ctx.modulus
    if not row.any():
        return np.zeros_like(row)
    c = n % m
    if c == 0:
        raise DivisionPrecisionError(f"{what} by an exact zero ({n} = 0 mod p^M)")
    v = int_valuation(c, p, M)
    if v == 0:
        return row * pow(c, -1, m) % m
    pv = p ** v
    if (row % pv).any():
        raise DivisionPrecisionError(f"{what} by p^{v}: insufficient valuation")
    pMr = p ** (M - v)
    inv = pow(c // pv, -1, pMr)
    return (row // pv) % pMr * inv % pMr  # zero-padded lift


def integrate(a: TruncSeries) -> TruncSeries:
    """Antiderivative with zero constant term; order grows by one.

    Coefficient k is divided by k+1 under the fixed-point rule; this is the
    sole source of p-adic precision loss (at most floor(log_p order) digits).
    """
    ctx = a.ctx
    out = np.zeros((a.order + 1, ctx.d), np.int64)
    for k in range(a.order):
        row = a.coeffs[k]
        if not row.any():
            continue
        out[k + 1] = divide_row_by_int(ctx, row, k + 1,
                                       f"integration of the t^{k} coefficient")
    return TruncSeries(ctx, out)


def compose(f_poly: np.ndarray, x: TruncSeries) -> TruncSeries:
    """f(x(t)) mod t^order for an exact polynomial f (Horner).

    x must have zero constant term so the composition is well defined.
    """
    if x.order > 0 and x.coeffs[0].any():
        raise ValueError("inner series must have zero constant term")
    ctx = x.ctx
    n = x.order
    acc = TruncSeries.zero(ctx, n)
    for k in range(f_poly.shape[0] - 1, -1, -1):
        acc = acc * x
        if n > 0:
            acc.coeffs[0] = (acc.coeffs[0] + f_poly[k]) % ctx.modulus
    return acc


def newton_inverse(a: TruncSeries) -> TruncSeries:
    """Multiplicative inverse mod t^order; a(0) must be a unit.

    Doubling iteration b <- b(2 - ab); no p-adic precision loss.
    """
    if a.order < 1:
        raise ValueError("inverse needs order >= 1")
    ctx = a.ctx
    m = ctx.modulus
    a0 = a.coefficient(0)
    if not a0.is_unit():
        raise NotInvertibleError("series head is not a unit")
    b = a0.inverse().coeffs[None, :]
    k = 1
    n = a.order
    while k < n:
        k = min(2 * k, n)
        ab = ring_conv(ctx, a.coeffs[:k], b)[:k]
        corr = (-ab) % m
        corr[0, 0] = (corr[0, 0] + 2) % m
        b = ring_conv(ctx, b, corr)[:k]
    return TruncSeries(ctx, b)


def newton_sqrt(a: TruncSeries, y0: PadicElement) -> TruncSeries:
    """Square root of a with chosen head: y^2 = a mod t^order, y(0) = y0.

    Requires p odd, y0 a unit, and y0^2 = a(0) exactly in the context.
    Iteration y <- (y + a/y)/2; division by 2 is exact, so no p-adic loss.
    """
    ctx = a.ctx
    a.ctx._check_same(y0.ctx)
    if ctx.p == 2:
        raise SquareRootError("square roots over Q_2 are not supported")
    if not y0.is_unit():
        raise SquareRootError("initial value must be a unit")
    if y0 * y0 != a.coefficient(0):
        raise SquareRootError("y0^2 does not match the constant term")
    inv2 = ctx.element(2).inverse()
    y = TruncSeries.constant(y0, 1)
    k = 1
    n = a.order
    while k < n:
        k = min(2 * k, n)
        ypad = y.pad_to(k)
        z = newton_inverse(ypad)
        y = (ypad + a.truncate(k) * z).scale(inv2)
    return y


def series_div(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """a / b for unit-head b."""
    n = min(a.order, b.order)
    return a.truncate(n) * newton_inverse(b.truncate(n))
