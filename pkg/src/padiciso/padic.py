"""Fixed-point arithmetic in O_K / p^M O_K for K an unramified extension of Q_p.

An element is the canonical representative of a class in
(Z/p^M)[x]/(ext_modulus): a vector of d integers in [0, p^M).  All operations
are exact in that quotient ring; division follows the fixed-point rule
(raise when v_p(denominator) > v_p(numerator), zero-pad the lifted quotient).

Only unramified extensions are supported, and p^M must stay below 2**31 so
the int64 kernel lanes never overflow.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import ContextMismatchError, DivisionPrecisionError, NotInvertibleError

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all 64-bit integers."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def int_valuation(c: int, p: int, cap: int) -> int:
    """v_p of an integer representative, capped at `cap` (v_p(0) = cap)."""
    if c == 0:
        return cap
    v = 0
    while c % p == 0 and v < cap:
        c //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# small polynomial helpers over F_p (1-D int64 arrays, low degree first)

def _fp_trim(a):
    n = a.shape[0]
    while n > 0 and a[n - 1] == 0:
        n -= 1
    return a[:n]


def _fp_mul(a, b, p):
    return kernels.conv_mod(a, b, p)


def _fp_divmod(a, b, p):
    b = _fp_trim(b)
    if b.shape[0] == 0:
        raise ZeroDivisionError("polynomial division by zero")
    a = _fp_trim(a).copy()
    db = b.shape[0] - 1
    inv_lc = pow(int(b[db]), -1, p)
    q = np.zeros(max(a.shape[0] - db, 0), np.int64)
    for i in range(a.shape[0] - 1 - db, -1, -1):
        c = a[i + db] * inv_lc % p
        if c:
            q[i] = c
            a[i:i + db + 1] = (a[i:i + db + 1] - c * b) % p
    return q, _fp_trim(a)


def _fp_gcd(a, b, p):
    a, b = _fp_trim(a), _fp_trim(b)
    while b.shape[0]:
        a, b = b, _fp_divmod(a, b, p)[1]
    if a.shape[0]:
        a = a * pow(int(a[-1]), -1, p) % p
    return a


def _fp_xgcd(a, b, p):
    """(g, u, v) with u*a + v*b = g, g monic."""
    r0, r1 = _fp_trim(a), _fp_trim(b)
    u0 = np.array([1], np.int64)
    u1 = np.zeros(0, np.int64)
    v0 = np.zeros(0, np.int64)
    v1 = np.array([1], np.int64)
    while r1.shape[0]:
        q, r = _fp_divmod(r0, r1, p)
        r0, r1 = r1, r
        u0, u1 = u1, _fp_sub(u0, _fp_mul(q, u1, p), p)
        v0, v1 = v1, _fp_sub(v0, _fp_mul(q, v1, p), p)
    if r0.shape[0]:
        c = pow(int(r0[-1]), -1, p)
        r0 = r0 * c % p
        u0 = u0 * c % p
        v0 = v0 * c % p
    return r0, u0, v0


def _fp_sub(a, b, p):
    n = max(a.shape[0], b.shape[0])
    out = np.zeros(n, np.int64)
    out[:a.shape[0]] = a
    out[:b.shape[0]] = (out[:b.shape[0]] - b) % p
    return _fp_trim(out)


def _fp_pow_mod(a, e, mod, p):
    r = np.array([1], np.int64)
    a = _fp_divmod(a, mod, p)[1]
    while e > 0:
        if e & 1:
            r = _fp_divmod(_fp_mul(r, a, p), mod, p)[1]
        a = _fp_divmod(_fp_mul(a, a, p), mod, p)[1]
        e >>= 1
    return r


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_mod_p(f, p: int) -> bool:
    """Rabin irreducibility test for a polynomial over F_p (int64 coeffs)."""
    f = _fp_trim(np.asarray(f, np.int64) % p)
    d = f.shape[0] - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    x = np.array([0, 1], np.int64)
    xq = _fp_pow_mod(x, p ** d, f, p)
    if _fp_sub(xq, x, p).shape[0]:
        return False
    for q in _prime_factors(d):
        xe = _fp_pow_mod(x, p ** (d // q), f, p)
        if _fp_gcd(_fp_sub(xe, x, p), f, p).shape[0] != 1:
            return False
    return True


def find_irreducible(p: int, d: int) -> np.ndarray:
    """First monic irreducible of degree d over F_p in a fixed enumeration."""
    if d == 1:
        return np.array([0, 1], np.int64)
    k = 0
    while True:
        coeffs = np.zeros(d + 1, np.int64)
        coeffs[d] = 1
        v, i = k, 0
        while v:
            coeffs[i] = v % p
            v //= p
            i += 1
        if is_irreducible_mod_p(coeffs, p):
            return coeffs
        k += 1


# ---------------------------------------------------------------------------


class PadicContext:
    """The ring (Z/p^M)[x]/(ext_modulus); immutable after construction."""

    def __init__(self, p: int, M: int, d: int = 1, ext_modulus=None, check: bool = True):
        if check and not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if M < 1 or d < 1:
            raise ValueError("M and d must be positive")
        modulus = p ** M
        if modulus > kernels.MAX_MODULUS:
            raise ValueError(
                f"p^M = {modulus} exceeds the int64 kernel limit {kernels.MAX_MODULUS}")
        self.p = p
        self.M = M
        self.d = d
        self.modulus = modulus
        if d == 1:
            self.ext_modulus = None
            self._red = None
        else:
            if ext_modulus is None:
                ext_modulus = find_irreducible(p, d)  # zero-padded lift
            ext_modulus = np.asarray(ext_modulus, np.int64) % modulus
            if ext_modulus.shape[0] != d + 1 or ext_modulus[-1] != 1:
                raise ValueError("ext_modulus must be monic of degree d")
            if check and not is_irreducible_mod_p(ext_modulus, p):
                raise ValueError("ext_modulus is reducible modulo p")
            self.ext_modulus = ext_modulus
            self._red = self._reduction_rows()
        self._residue = None
        self._precision_cache = {}

    def _reduction_rows(self):
        # row k: x^{d+k} reduced to degree < d
        d, m = self.d, self.modulus
        rows = np.zeros((max(d - 1, 1), d), np.int64)
        rows[0] = (-self.ext_modulus[:d]) % m
        for k in range(1, d - 1):
            shifted = np.zeros(d, np.int64)
            shifted[1:] = rows[k - 1][:d - 1]
            top = rows[k - 1][d - 1]
            rows[k] = (shifted + top * rows[0]) % m
        return rows

    # -- constructors ------------------------------------------------------

    def element(self, value) -> "PadicElement":
        if isinstance(value, PadicElement):
            self._check_same(value.ctx)
            return value
        if isinstance(value, (int, np.integer)):
            coeffs = np.zeros(self.d, np.int64)
            coeffs[0] = int(value) % self.modulus
            return PadicElement(self, coeffs)
        coeffs = np.asarray([int(v) % self.modulus for v in value], np.int64)
        if coeffs.shape[0] != self.d:
            raise ValueError(f"expected {self.d} coefficients, got {coeffs.shape[0]}")
        return PadicElement(self, coeffs)

    def zero(self) -> "PadicElement":
        return PadicElement(self, np.zeros(self.d, np.int64))

    def one(self) -> "PadicElement":
        return self.element(1)

    def random_element(self, rng) -> "PadicElement":
        return PadicElement(self, rng.integers(0, self.modulus, self.d).astype(np.int64))

    def residue(self) -> "PadicContext":
        """The residue field F_{p^d} (precision M = 1)."""
        if self._residue is None:
            self._residue = self.with_precision(1) if self.M > 1 else self
        return self._residue

    def with_precision(self, M2: int) -> "PadicContext":
        if M2 == self.M:
            return self
        ctx = self._precision_cache.get(M2)
        if ctx is None:
            ext = None
            if self.d > 1:
                ext = self.ext_modulus % self.p ** min(M2, self.M)
            ctx = PadicContext(self.p, M2, self.d, ext, check=False)
            self._precision_cache[M2] = ctx
        return ctx

    def extension(self, d: int, ext_modulus=None) -> "PadicContext":
        if self.d != 1:
            raise ValueError("extensions are built over the base (d = 1) context")
        if d == 1:
            return self
        return PadicContext(self.p, self.M, d, ext_modulus, check=ext_modulus is not None)

    def embed(self, elt: "PadicElement") -> "PadicElement":
        """Embed an element of the base (d=1) context with equal p, M."""
        if elt.ctx.d != 1 or elt.ctx.p != self.p or elt.ctx.M != self.M:
            raise ContextMismatchError("embedding requires the base context at equal precision")
        coeffs = np.zeros(self.d, np.int64)
        coeffs[0] = elt.coeffs[0]
        return PadicElement(self, coeffs)

    # -- ring internals ----------------------------------------------------

    def _check_same(self, other: "PadicContext"):
        if self is other:
            return
        if not (self.p == other.p and self.M == other.M and self.d == other.d
                and (self.d == 1 or np.array_equal(self.ext_modulus, other.ext_modulus))):
            raise ContextMismatchError(
                f"context mismatch: (p={self.p},M={self.M},d={self.d}) vs "
                f"(p={other.p},M={other.M},d={other.d})")

    def _fold(self, conv: np.ndarray) -> np.ndarray:
        """Reduce x-degree of a (n, 2d-1) convolution block to (n, d)."""
        d, m = self.d, self.modulus
        if conv.ndim == 1:
            conv = conv[None, :]
        out = conv[:, :d] % m
        for k in range(d, conv.shape[1]):
            out = (out + conv[:, k:k + 1] * self._red[k - d]) % m
        return out

    def _mul_coeffs(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product of two degree-<d coefficient vectors in this ring."""
        m = self.modulus
        if self.d == 1:
            return (x * y) % m
        conv = kernels.conv_schoolbook(x, y, m)
        full = np.zeros(2 * self.d - 1, np.int64)
        full[:conv.shape[0]] = conv
        return self._fold(full[None, :])[0]

    def _valuation_coeffs(self, coeffs: np.ndarray) -> int:
        v = self.M
        for c in coeffs:
            if c:
                v = min(v, int_valuation(int(c), self.p, self.M))
                if v == 0:
                    return 0
        return v

    def _inv_unit_coeffs(self, coeffs: np.ndarray, M: int) -> np.ndarray:
        """Inverse of a unit, computed mod p^M (M <= self.M), zero-lifted."""
        p = self.p
        pM = p ** M
        if self.d == 1:
            return np.array([pow(int(coeffs[0]), -1, pM)], np.int64)
        # invert in F_{p^d} then Hensel-lift the inverse
        fbar = self.ext_modulus % p
        g, u, _ = _fp_xgcd(_fp_trim(coeffs % p), fbar, p)
        if g.shape[0] != 1:
            raise NotInvertibleError("element is not a unit")
        z = np.zeros(self.d, np.int64)
        z[:u.shape[0]] = u
        k = 1
        sub = PadicContext(p, M, self.d, self.ext_modulus % pM, check=False) if M != self.M else self
        while k < M:
            k = min(2 * k, M)
            az = sub._mul_coeffs(coeffs % pM, z)
            two_minus = (-az) % pM
            two_minus[0] = (two_minus[0] + 2) % pM
            z = sub._mul_coeffs(z, two_minus)
        return z % pM

    def __eq__(self, other):
        if not isinstance(other, PadicContext):
            return NotImplemented
        try:
            self._check_same(other)
            return True
        except ContextMismatchError:
            return False

    def __repr__(self):
        if self.d == 1:
            return f"PadicContext(p={self.p}, M={self.M})"
        return f"PadicContext(p={self.p}, M={self.M}, d={self.d})"


class PadicElement:
    """Canonical representative a + O(p^M) with a in (Z/p^M)[x]/(ext_modulus)."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: PadicContext, coeffs: np.ndarray):
        self.ctx = ctx
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, PadicElement):
            self.ctx._check_same(other.ctx)
            return other
        if isinstance(other, (int, np.integer)):
            return self.ctx.element(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PadicElement(self.ctx, (self.coeffs + o.coeffs) % self.ctx.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PadicElement(self.ctx, (self.coeffs - o.coeffs) % self.ctx.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PadicElement(self.ctx, (o.coeffs - self.coeffs) % self.ctx.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PadicElement(self.ctx, self.ctx._mul_coeffs(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __neg__(self):
        return PadicElement(self.ctx, (-self.coeffs) % self.ctx.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return divide(self, o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return divide(o, self)

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = self.ctx.element(int(other))
        if not isinstance(other, PadicElement):
            return NotImplemented
        self.ctx._check_same(other.ctx)
        return bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.M, self.ctx.d, self.coeffs.tobytes()))

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def valuation(self) -> int:
        """min_i v_p(coeff_i); equals M for the zero class."""
        return self.ctx._valuation_coeffs(self.coeffs)

    def inverse(self) -> "PadicElement":
        if not self.is_unit():
            raise NotInvertibleError("cannot invert a non-unit")
        return PadicElement(self.ctx, self.ctx._inv_unit_coeffs(self.coeffs, self.ctx.M))

    def reduce_lift(self, targetM: int) -> "PadicElement":
        """Truncate digits (targetM < M) or zero-pad upper digits (targetM > M)."""
        ctx2 = self.ctx.with_precision(targetM)
        if targetM < self.ctx.M:
            return PadicElement(ctx2, self.coeffs % ctx2.modulus)
        return PadicElement(ctx2, self.coeffs.copy())

    def residue(self) -> "PadicElement":
        return self.reduce_lift(1)

    def lift_int(self) -> int:
        if self.ctx.d != 1:
            raise ValueError("lift_int requires d = 1")
        return int(self.coeffs[0])

    def to_json(self):
        return [str(int(c)) for c in self.coeffs]

    def __repr__(self):
        if self.ctx.d == 1:
            return f"{int(self.coeffs[0])} + O({self.ctx.p}^{self.ctx.M})"
        return f"{list(map(int, self.coeffs))} + O({self.ctx.p}^{self.ctx.M})"


def arith(a: PadicElement, b: PadicElement, kind: str) -> PadicElement:
    """Exact ring operation; `kind` is one of add/sub/mul."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown operation {kind!r}")


def divide(a: PadicElement, b: PadicElement) -> PadicElement:
    """Fixed-point division.

    Returns 0 when a = 0 in the context; raises DivisionPrecisionError when
    v_p(b) > v_p(a); otherwise cancels p^{v_p(b)}, inverts the remaining unit
    modulo p^{M - v_p(b)} and zero-pads the result (the canonical choice
    among the valid representatives).
    """
    a.ctx._check_same(b.ctx)
    ctx = a.ctx
    if a.is_zero():
        return ctx.zero()
    vb = b.valuation()
    if vb > a.valuation():
        raise DivisionPrecisionError(
            f"division impossible: v_p(denominator) = {vb} exceeds v_p(numerator)")
    if vb == 0:
        inv = ctx._inv_unit_coeffs(b.coeffs, ctx.M)
        return PadicElement(ctx, ctx._mul_coeffs(a.coeffs, inv))
    pv = ctx.p ** vb
    Mr = ctx.M - vb
    pMr = ctx.p ** Mr
    ared = (a.coeffs // pv) % pMr
    bred = b.coeffs // pv
    inv = ctx._inv_unit_coeffs(bred % pMr, Mr)
    sub = ctx.with_precision(Mr)
    z = sub._mul_coeffs(ared, inv)
    out = np.zeros(ctx.d, np.int64)
    out[:] = z  # zero-padded lift
    return PadicElement(ctx, out)


def divide_by_int(a: PadicElement, n: int) -> PadicElement:
    return divide(a, a.ctx.element(n))
