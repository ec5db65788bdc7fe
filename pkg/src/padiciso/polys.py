"""Univariate polynomials over a PadicContext.

A polynomial is an int64 array of shape (len, d): row k holds the degree-<d
coefficient vector of X^k.  The zero polynomial has zero rows.  Functions are
free-standing and take the context first; divisions by non-unit leading
coefficients raise NonUnitInversionError (over a residue field, M = 1, every
nonzero leading coefficient is a unit).
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import NonUnitInversionError
from .padic import PadicContext, PadicElement


def as_poly(ctx: PadicContext, coeffs) -> np.ndarray:
    """Build a polynomial from ints, PadicElements, or a raw array."""
    if isinstance(coeffs, np.ndarray) and coeffs.ndim == 2:
        return ptrim(coeffs % ctx.modulus)
    rows = []
    for c in coeffs:
        if isinstance(c, PadicElement):
            ctx._check_same(c.ctx)
            rows.append(c.coeffs)
        else:
            row = np.zeros(ctx.d, np.int64)
            row[0] = int(c) % ctx.modulus
            rows.append(row)
    if not rows:
        return pzero(ctx)
    return ptrim(np.array(rows, np.int64) % ctx.modulus)


def ptrim(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    if n == 0 or a[n - 1].any():
        return a
    nz = np.flatnonzero(a.any(axis=1))
    return a[:nz[-1] + 1] if nz.size else a[:0]


def pzero(ctx) -> np.ndarray:
    return np.zeros((0, ctx.d), np.int64)


def pone(ctx) -> np.ndarray:
    return as_poly(ctx, [1])


def pX(ctx) -> np.ndarray:
    return as_poly(ctx, [0, 1])


def pconst(ctx, elt: PadicElement) -> np.ndarray:
    return ptrim(elt.coeffs[None, :].copy())


def pdeg(a: np.ndarray) -> int:
    return a.shape[0] - 1


def pcoeff(ctx, a: np.ndarray, k: int) -> PadicElement:
    if k >= a.shape[0]:
        return ctx.zero()
    return PadicElement(ctx, a[k].copy())


def plc(ctx, a: np.ndarray) -> PadicElement:
    if a.shape[0] == 0:
        return ctx.zero()
    return PadicElement(ctx, a[-1].copy())


def padd(ctx, a, b) -> np.ndarray:
    m = ctx.modulus
    if a.shape[0] < b.shape[0]:
        a, b = b, a
    out = a.copy()
    out[:b.shape[0]] = (out[:b.shape[0]] + b) % m
    return ptrim(out)


def psub(ctx, a, b) -> np.ndarray:
    m = ctx.modulus
    n = max(a.shape[0], b.shape[0])
    out = np.zeros((n, ctx.d), np.int64)
    out[:a.shape[0]] = a
    out[:b.shape[0]] = (out[:b.shape[0]] - b) % m
    return ptrim(out)


def pneg(ctx, a) -> np.ndarray:
    return (-a) % ctx.modulus


def ring_conv(ctx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Coefficient-array product: convolution in the main variable combined
    with reduction by the extension modulus.  Shared by polynomials and
    truncated series."""
    m = ctx.modulus
    la, lb = a.shape[0], b.shape[0]
    if la == 0 or lb == 0:
        return np.zeros((0, ctx.d), np.int64)
    if ctx.d == 1:
        return kernels.conv_mod(np.ascontiguousarray(a[:, 0]),
                                np.ascontiguousarray(b[:, 0]), m)[:, None]
    acc = np.zeros((la + lb - 1, 2 * ctx.d - 1), np.int64)
    for i in range(ctx.d):
        ai = np.ascontiguousarray(a[:, i])
        if not ai.any():
            continue
        for j in range(ctx.d):
            bj = np.ascontiguousarray(b[:, j])
            if not bj.any():
                continue
            acc[:, i + j] += kernels.conv_mod(ai, bj, m)
    acc %= m
    return ctx._fold(acc)


def pmul(ctx, a, b) -> np.ndarray:
    return ptrim(ring_conv(ctx, a, b))


def pscale(ctx, a, elt: PadicElement) -> np.ndarray:
    return pmul(ctx, a, pconst(ctx, elt))


def pdivmod(ctx, a, b):
    """Long division; the leading coefficient of b must be a unit."""
    b = ptrim(b)
    if b.shape[0] == 0:
        raise ZeroDivisionError("polynomial division by zero")
    lc = plc(ctx, b)
    if not lc.is_unit():
        raise NonUnitInversionError("non-unit leading coefficient in division")
    a = ptrim(a).copy()
    db = b.shape[0] - 1
    if a.shape[0] - 1 < db:
        return pzero(ctx), a
    inv = lc.inverse()
    m = ctx.modulus
    if ctx.d == 1:
        # lean scalar path: the quotient step needs no extension folding
        a1 = a[:, 0]
        b1 = b[:, 0]
        invl = int(inv.coeffs[0])
        q1 = np.zeros(a.shape[0] - db, np.int64)
        for i in range(a.shape[0] - 1 - db, -1, -1):
            top = a1[i + db]
            if not top:
                continue
            c = top * invl % m
            q1[i] = c
            a1[i:i + db + 1] = (a1[i:i + db + 1] - c * b1) % m
        return ptrim(q1[:, None]), ptrim(a)
    q = np.zeros((a.shape[0] - db, ctx.d), np.int64)
    for i in range(a.shape[0] - 1 - db, -1, -1):
        if not a[i + db].any():
            continue
        c = ctx._mul_coeffs(a[i + db], inv.coeffs)
        q[i] = c
        cb = ring_conv(ctx, b, c[None, :])
        a[i:i + db + 1] = (a[i:i + db + 1] - cb) % m
    return ptrim(q), ptrim(a)


def pmod(ctx, a, b):
    return pdivmod(ctx, a, b)[1]


def pmonic(ctx, a):
    a = ptrim(a)
    if a.shape[0] == 0:
        return a
    lc = plc(ctx, a)
    if not lc.is_unit():
        raise NonUnitInversionError("non-unit leading coefficient")
    return pscale(ctx, a, lc.inverse())


def pgcd(ctx, a, b):
    """Monic gcd (Euclid); requires unit leading coefficients along the way."""
    a, b = ptrim(a), ptrim(b)
    while b.shape[0]:
        a, b = b, pmod(ctx, a, b)
    if a.shape[0]:
        a = pmonic(ctx, a)
    return a


def pxgcd(ctx, a, b):
    """(g, u, v) with u*a + v*b = g and g monic (or zero)."""
    r0, r1 = ptrim(a), ptrim(b)
    u0, u1 = pone(ctx), pzero(ctx)
    v0, v1 = pzero(ctx), pone(ctx)
    while r1.shape[0]:
        q, r = pdivmod(ctx, r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, psub(ctx, u0, pmul(ctx, q, u1))
        v0, v1 = v1, psub(ctx, v0, pmul(ctx, q, v1))
    if r0.shape[0]:
        c = plc(ctx, r0).inverse()
        r0, u0, v0 = pscale(ctx, r0, c), pscale(ctx, u0, c), pscale(ctx, v0, c)
    return r0, u0, v0


def peval(ctx, a, x: PadicElement) -> PadicElement:
    """Horner evaluation."""
    acc = ctx.zero()
    for k in range(a.shape[0] - 1, -1, -1):
        acc = acc * x + PadicElement(ctx, a[k])
    return acc


def pderiv(ctx, a) -> np.ndarray:
    if a.shape[0] <= 1:
        return pzero(ctx)
    mult = np.arange(1, a.shape[0], dtype=np.int64)[:, None]
    return ptrim(a[1:] * mult % ctx.modulus)


def pshift(ctx, a, c: PadicElement) -> np.ndarray:
    """Taylor shift a(X + c), by Horner in (X + c)."""
    xc = as_poly(ctx, [c, ctx.one()])
    out = pzero(ctx)
    for k in range(a.shape[0] - 1, -1, -1):
        out = padd(ctx, pmul(ctx, out, xc), a[k:k + 1])
    return out


def ppow_mod(ctx, a, e: int, mod) -> np.ndarray:
    r = pone(ctx)
    a = pmod(ctx, a, mod)
    while e > 0:
        if e & 1:
            r = pmod(ctx, pmul(ctx, r, a), mod)
        a = pmod(ctx, pmul(ctx, a, a), mod)
        e >>= 1
    return r


def pinterp(ctx, xs, ys) -> np.ndarray:
    """Lagrange interpolation; the node differences must be units."""
    out = pzero(ctx)
    for j, (xj, yj) in enumerate(zip(xs, ys)):
        num = pone(ctx)
        den = ctx.one()
        for i, xi in enumerate(xs):
            if i == j:
                continue
            num = pmul(ctx, num, as_poly(ctx, [-xi, ctx.one()]))
            den = den * (xj - xi)
        if not den.is_unit():
            raise NonUnitInversionError("repeated or congruent interpolation nodes")
        out = padd(ctx, out, pscale(ctx, num, yj / den))
    return out


def is_squarefree(ctx, a) -> bool:
    """Squarefree test over a residue field (M = 1)."""
    g = pgcd(ctx, a, pderiv(ctx, a))
    return pdeg(g) == 0


def roots_split(ctx, f, rng) -> list:
    """All roots of a squarefree, completely-split f over F_{p^d} (M = 1),
    by Cantor-Zassenhaus splitting with gcd(f, (X+delta)^((q-1)/2) - 1);
    p must be odd.  Deterministic for a fixed rng state."""
    if ctx.M != 1:
        raise ValueError("roots_split works over residue fields")
    if ctx.p == 2:
        raise ValueError("p = 2 not supported")
    f = pmonic(ctx, ptrim(f))
    q = ctx.p ** ctx.d
    roots = []
    stack = [f]
    while stack:
        g = stack.pop()
        dg = pdeg(g)
        if dg == 0:
            continue
        if dg == 1:
            roots.append(-pcoeff(ctx, g, 0))
            continue
        while True:
            delta = ctx.random_element(rng)
            w = ppow_mod(ctx, as_poly(ctx, [delta, ctx.one()]), (q - 1) // 2, g)
            w = psub(ctx, w, pone(ctx))
            h = pgcd(ctx, w, g)
            if 0 < pdeg(h) < dg:
                stack.append(h)
                stack.append(pdivmod(ctx, g, h)[0])
                break
    roots.sort(key=lambda e: tuple(int(c) for c in e.coeffs))
    return roots


def factor_squarefree(ctx, f, rng) -> list:
    """Monic irreducible factors of a squarefree f over F_{p^d} (M = 1),
    p odd: distinct-degree splitting followed by Cantor-Zassenhaus
    equal-degree splitting.  Deterministic for a fixed rng state."""
    if ctx.M != 1:
        raise ValueError("factorization runs over residue fields")
    if ctx.p == 2:
        raise ValueError("p = 2 not supported")
    q = ctx.p ** ctx.d
    factors = []
    rem = pmonic(ctx, ptrim(f))
    h = pX(ctx)
    k = 0
    while pdeg(rem) > 0:
        k += 1
        if 2 * k > pdeg(rem):
            factors.append(rem)
            break
        h = ppow_mod(ctx, h, q, rem)
        gk = pgcd(ctx, psub(ctx, h, pX(ctx)), rem)
        if pdeg(gk) > 0:
            stack = [gk]
            while stack:
                a = stack.pop()
                if pdeg(a) == k:
                    factors.append(a)
                    continue
                while True:
                    rpoly = ptrim(rng.integers(0, ctx.modulus,
                                               (pdeg(a), ctx.d)).astype(np.int64))
                    if rpoly.shape[0] == 0:
                        continue
                    w = ppow_mod(ctx, rpoly, (q ** k - 1) // 2, a)
                    w = psub(ctx, w, pone(ctx))
                    dd = pgcd(ctx, w, a)
                    if 0 < pdeg(dd) < pdeg(a):
                        stack.append(dd)
                        stack.append(pdivmod(ctx, a, dd)[0])
                        break
            rem = pdivmod(ctx, rem, gk)[0]
            if pdeg(rem) > 0:
                h = pmod(ctx, h, rem)
    factors.sort(key=lambda fp: (pdeg(fp), tuple(int(v) for v in fp.ravel())))
    return factors


def poly_to_json(a: np.ndarray, d: int):
    if d == 1:
        return [str(int(c)) for c in a[:, 0]]
    return [[str(int(v)) for v in row] for row in a]


def poly_from_json(ctx, data) -> np.ndarray:
    rows = []
    for c in data:
        if isinstance(c, (list, tuple)):
            row = [int(v) for v in c]
            row += [0] * (ctx.d - len(row))
        else:
            row = [int(c)] + [0] * (ctx.d - 1)
        rows.append(row)
    if not rows:
        return pzero(ctx)
    return ptrim(np.array(rows, np.int64) % ctx.modulus)
