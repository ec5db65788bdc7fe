"""Rational (Pade) reconstruction over residue fields.

Given s known mod t^n and degree bounds (dN, dD), find coprime N, D with
N/D = s mod t^n, deg N <= dN, deg D <= dD, D(0) = 1.  Two routes with
identical output: a plain partial extended Euclid (quadratic) and a
divide-and-conquer half-gcd (quasi-linear); `fast` selects the route.

The half-gcd follows the classical fast-EEA scheme: the quotients of the
remainder sequence of (r0, r1) down to degree n0 - k depend only on the top
2k+O(1) coefficients, so one can recurse on truncations and stitch the 2x2
quotient matrices together.
"""

from __future__ import annotations

import numpy as np

from .errors import ReconstructionError
from .polys import (as_poly, padd, pdeg, pdivmod, pgcd, pmul, pone, pscale,
                    psub, ptrim, pzero, pcoeff)
from .series import TruncSeries

# extra top coefficients kept beyond the textbook truncation bound
_MARGIN = 2
# below this sub-problem size the iterative matrix EEA takes over
_BASE_K = 64


def _identity(ctx):
    one = pone(ctx)
    zero = pzero(ctx)
    return [[one, zero], [zero, one]]


def _mat_mul(ctx, A, B):
    return [
        [padd(ctx, pmul(ctx, A[0][0], B[0][0]), pmul(ctx, A[0][1], B[1][0])),
         padd(ctx, pmul(ctx, A[0][0], B[0][1]), pmul(ctx, A[0][1], B[1][1]))],
        [padd(ctx, pmul(ctx, A[1][0], B[0][0]), pmul(ctx, A[1][1], B[1][0])),
         padd(ctx, pmul(ctx, A[1][0], B[0][1]), pmul(ctx, A[1][1], B[1][1]))],
    ]


def _mat_apply(ctx, A, r0, r1):
    a = padd(ctx, pmul(ctx, A[0][0], r0), pmul(ctx, A[0][1], r1))
    b = padd(ctx, pmul(ctx, A[1][0], r0), pmul(ctx, A[1][1], r1))
    return a, b


def _eea_matrix_iter(ctx, r0, r1, k):
    """Quotient matrix M with M (r0, r1)^T = (r_h, r_{h+1})^T,
    h = max{j : deg r_j >= deg r0 - k}; plain iteration."""
    if ctx.d == 1:
        return _eea_matrix_iter_d1(ctx, r0, r1, k)
    n0 = pdeg(r0)
    M = _identity(ctx)
    while r1.shape[0] and (n0 - pdeg(r1)) <= k:
        q, r = pdivmod(ctx, r0, r1)
        r0, r1 = r1, r
        row0 = M[1]
        row1 = [psub(ctx, M[0][0], pmul(ctx, q, M[1][0])),
                psub(ctx, M[0][1], pmul(ctx, q, M[1][1]))]
        M = [row0, row1]
    return M


def _trim1(a):
    n = a.shape[0]
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n]


def _sub_poly1(a, b, m):
    if a.shape[0] >= b.shape[0]:
        out = a.copy()
        out[:b.shape[0]] = (out[:b.shape[0]] - b) % m
    else:
        out = (-b) % m
        out[:a.shape[0]] = (out[:a.shape[0]] + a) % m
    return _trim1(out)


def _eea_matrix_iter_d1(ctx, r0, r1, k):
    """Base-case EEA on flat int64 arrays (residue fields with d = 1)."""
    from . import kernels
    m = ctx.modulus
    a = _trim1(np.ascontiguousarray(r0[:, 0]))
    b = _trim1(np.ascontiguousarray(r1[:, 0]))
    n0 = a.shape[0] - 1
    one = np.ones(1, np.int64)
    empty = np.zeros(0, np.int64)
    M = [[one, empty], [empty, one]]
    while b.shape[0] and (n0 - (b.shape[0] - 1)) <= k:
        # in-place long division a = q*b + r
        db = b.shape[0] - 1
        invl = pow(int(b[db]), -1, m)
        rr = a.copy()
        q = np.zeros(a.shape[0] - db, np.int64)
        for i in range(a.shape[0] - 1 - db, -1, -1):
            top = rr[i + db]
            if top:
                c = top * invl % m
                q[i] = c
                rr[i:i + db + 1] = (rr[i:i + db + 1] - c * b) % m
        a, b = b, _trim1(rr[:db])
        row0 = M[1]
        row1 = [_sub_poly1(M[0][0], kernels.conv_mod(q, M[1][0], m), m),
                _sub_poly1(M[0][1], kernels.conv_mod(q, M[1][1], m), m)]
        M = [row0, row1]
    return [[e[:, None] for e in row] for row in M]


def _fast_eea(ctx, r0, r1, k):
    """Same contract as _eea_matrix_iter, divide-and-conquer."""
    n0 = pdeg(r0)
    if r1.shape[0] == 0 or k < n0 - pdeg(r1):
        return _identity(ctx)
    if k <= _BASE_K or n0 <= 2 * _BASE_K:
        return _eea_matrix_iter(ctx, r0, r1, k)
    d = (k + 1) // 2
    cut1 = max(0, n0 - 2 * (d - 1) - _MARGIN)
    M1 = _fast_eea(ctx, ptrim(r0[cut1:]), ptrim(r1[cut1:]), d - 1)
    a, b = _mat_apply(ctx, M1, r0, r1)
    if b.shape[0] == 0 or k < n0 - pdeg(b):
        return M1
    q, r = pdivmod(ctx, a, b)
    a, b = b, r
    Q = [[pzero(ctx), pone(ctx)], [pone(ctx), (-q) % ctx.modulus]]
    M = _mat_mul(ctx, Q, M1)
    k2 = k - (n0 - pdeg(a))
    if b.shape[0] == 0 or k2 < pdeg(a) - pdeg(b):
        return M
    cut2 = max(0, pdeg(a) - 2 * k2 - _MARGIN)
    M2 = _fast_eea(ctx, ptrim(a[cut2:]), ptrim(b[cut2:]), k2)
    return _mat_mul(ctx, M2, M)


def _euclid_until(ctx, r0, r1, stop):
    """(first remainder of degree <= stop, its cofactor w.r.t. r1)."""
    v0, v1 = pzero(ctx), pone(ctx)
    while pdeg(r1) > stop:
        q, r = pdivmod(ctx, r0, r1)
        r0, r1 = r1, r
        v0, v1 = v1, psub(ctx, v0, pmul(ctx, q, v1))
    return r1, v1


def _halfgcd_until(ctx, r0, r1, stop):
    if pdeg(r1) <= stop:
        return r1, pone(ctx)
    k = pdeg(r0) - stop - 1
    M = _fast_eea(ctx, r0, r1, k)
    b = padd(ctx, pmul(ctx, M[1][0], r0), pmul(ctx, M[1][1], r1))
    return b, M[1][1]


def pade_reconstruct(s, dN: int, dD: int, fast: bool = True, ctx=None):
    """Reconstruct (N, D) with N/D = s mod t^n, deg N <= dN, deg D <= dD.

    s is a TruncSeries over a residue field (M = 1) or a raw coefficient
    block with `ctx` given.  D is normalized to D(0) = 1 and gcd(N, D) = 1.
    Raises ReconstructionError when no such fraction exists.
    """
    if isinstance(s, TruncSeries):
        ctx = s.ctx
        coeffs = s.coeffs
    else:
        coeffs = np.asarray(s)
        if coeffs.ndim == 1:
            coeffs = coeffs[:, None]
    if ctx.M != 1:
        raise ValueError("reconstruction runs over a residue field (M = 1)")
    n = coeffs.shape[0]
    if dN < 0 or dD < 0 or n < dN + dD + 1:
        raise ValueError(f"need series order >= dN + dD + 1 = {dN + dD + 1}, have {n}")
    svec = ptrim(coeffs % ctx.modulus)
    tn = np.zeros((n + 1, ctx.d), np.int64)
    tn[n, 0] = 1
    if fast:
        N, D = _halfgcd_until(ctx, tn, svec, dN)
    else:
        N, D = _euclid_until(ctx, tn, svec, dN)
    if D.shape[0] == 0:
        raise ReconstructionError("no rational fraction at the given bounds")
    d0 = pcoeff(ctx, D, 0)
    if d0.is_zero():
        raise ReconstructionError("denominator vanishes at t = 0")
    # gcd(N, D) divides t^n (adjacent Euclid cofactors have determinant +-1),
    # so D(0) != 0 already makes the pair coprime
    inv = d0.inverse()
    N = pscale(ctx, N, inv)
    D = pscale(ctx, D, inv)
    if pdeg(N) > dN or pdeg(D) > dD:
        raise ReconstructionError(
            f"degrees ({pdeg(N)}, {pdeg(D)}) exceed the bounds ({dN}, {dD})")
    check = pmul(ctx, D, svec)
    check = check[:n] if check.shape[0] >= n else check
    want = np.zeros((n, ctx.d), np.int64)
    want[:min(n, N.shape[0])] = N[:n]
    got = np.zeros((n, ctx.d), np.int64)
    got[:check.shape[0]] = check
    if not np.array_equal(got, want):
        raise ReconstructionError("candidate fraction does not match the series")
    return N, D


def expand_fraction(ctx, N, D, n: int) -> TruncSeries:
    """Series of N/D mod t^n (D(0) must be a unit); test/bench helper."""
    from .series import newton_inverse
    ds = TruncSeries.from_poly(ctx, D, n)
    ns = TruncSeries.from_poly(ctx, N, n)
    return ns * newton_inverse(ds)
