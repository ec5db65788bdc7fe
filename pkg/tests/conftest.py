"""Shared helpers: an independent Mumford-arithmetic oracle over the series
ring F_p[[t]] (polynomials in X with truncated-series coefficients), used to
cross-check the differential-equation route end to end."""

import numpy as np
import pytest

from padiciso.padic import PadicContext
from padiciso.series import TruncSeries, newton_inverse


def strim(c):
    while c and c[-1].is_zero():
        c.pop()
    return c


def sadd(a, b):
    out = []
    for k in range(max(len(a), len(b))):
        if k < len(a) and k < len(b):
            out.append(a[k] + b[k])
        elif k < len(a):
            out.append(a[k])
        else:
            out.append(b[k])
    return strim(out)


def sneg(a):
    return [-c for c in a]


def ssub(a, b):
    return sadd(a, sneg(b))


def smul(a, b, zero):
    if not a or not b:
        return []
    out = [zero for _ in range(len(a) + len(b) - 1)]
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return strim(out)


def sdivmod(a, b, zero):
    b = strim(list(b))
    r = strim(list(a))
    linv = newton_inverse(b[-1])
    q = [zero] * max(len(r) - len(b) + 1, 0)
    while len(r) >= len(b):
        c = r[-1] * linv
        k = len(r) - len(b)
        q[k] = q[k] + c
        for i in range(len(b)):
            r[k + i] = r[k + i] - c * b[i]
        r.pop()
        strim(r)
    return strim(q), strim(r)


def smonic(a):
    linv = newton_inverse(a[-1])
    return [c * linv for c in a]


def _sxgcd_cofactor(r0, r1, zero, one):
    """(gcd normalized to 1, cofactor of r1); generic inputs only."""
    v0, v1 = [], [one]
    while r1:
        q, r = sdivmod(r0, r1, zero)
        r0, r1 = r1, r
        v0, v1 = v1, ssub(v0, smul(q, v1, zero))
    assert len(r0) == 1, "series-ring gcd is not constant (non-generic input)"
    c = newton_inverse(r0[0])
    return [x * c for x in v0]


def series_cantor_add(f, D1, D2, zero, one, g):
    """Cantor addition over F_p[[t]]; requires coprime U's (generic)."""
    U1, V1 = D1
    U2, V2 = D2
    if len(U1) == 1:
        return D2
    if len(U2) == 1:
        return D1
    e2 = _sxgcd_cofactor(list(U1), list(U2), zero, one)
    e1, rr = sdivmod(ssub([one], smul(e2, U2, zero)), U1, zero)
    assert not rr
    U = smul(U1, U2, zero)
    W = sadd(smul(smul(e1, U1, zero), V2, zero), smul(smul(e2, U2, zero), V1, zero))
    V = sdivmod(W, U, zero)[1]
    return _series_reduce(f, U, V, zero, g)


def series_cantor_double(f, D, zero, one, g):
    U, V = D
    twoV = [c + c for c in V]
    c2 = _sxgcd_cofactor(list(U), list(twoV), zero, one)
    c1, rr = sdivmod(ssub([one], smul(c2, twoV, zero)), U, zero)
    assert not rr
    Unew = smul(U, U, zero)
    W = sadd(smul(smul(c1, U, zero), V, zero),
             smul(c2, sadd(smul(V, V, zero), f), zero))
    V2 = sdivmod(W, Unew, zero)[1]
    return _series_reduce(f, Unew, V2, zero, g)


def _series_reduce(f, U, V, zero, g):
    while len(U) - 1 > g:
        U2, r = sdivmod(ssub(f, smul(V, V, zero)), U, zero)
        assert not r
        U2 = smonic(U2)
        V = sdivmod(sneg(V), U2, zero)[1]
        U = U2
    return smonic(U), V


def series_cantor_scalar(f, D, ell, zero, one, g):
    """[ell] D by signed NAF double-and-add over the series ring (the same
    support-overlap constraint as the ring path: never add [m]D to D for
    m < 4)."""
    naf = []
    k = ell
    while k:
        if k & 1:
            r = 2 - (k % 4)
            naf.append(r)
            k -= r
        else:
            naf.append(0)
        k >>= 1
    acc = ([one], [])
    neg = (D[0], sneg(D[1]))
    for digit in reversed(naf):
        if len(acc[0]) > 1:
            acc = series_cantor_double(f, acc, zero, one, g)
        if digit == 1:
            acc = series_cantor_add(f, acc, D, zero, one, g)
        elif digit == -1:
            acc = series_cantor_add(f, acc, neg, zero, one, g)
    return acc


def formal_image_divisor(prob, order):
    """(U(X,t), V(X,t)) of [ell]([Q(t) - inf]) + T over F_p[[t]]/(t^order),
    computed purely with Jacobian arithmetic: the independent oracle for the
    solver + symmetric-series route."""
    from padiciso import polys as P
    from padiciso.series import newton_sqrt

    p = prob.ctx.p
    res = PadicContext(p, 1)
    zero = TruncSeries.zero(res, order)
    one = TruncSeries.constant(res.one(), order)
    fser = [TruncSeries.constant(res.element(int(c)), order)
            for c in prob.curve1.f[:, 0]]
    uQ = res.element(int(prob.Q.x.coeffs[0]))
    f1s = P.pshift(res, P.as_poly(res, prob.curve1.f % p), uQ)
    vt = newton_sqrt(TruncSeries.from_poly(res, f1s, order),
                     res.element(int(prob.Q.y.coeffs[0]) % p))
    uQt = TruncSeries.from_coeff_list(res, [int(prob.Q.x.coeffs[0]), 1], order)
    D = ([-uQt, one], [vt])
    D = series_cantor_scalar(fser, D, prob.ell, zero, one, prob.curve1.g)
    if prob.torsion_shift is not None:
        Ut = [TruncSeries.constant(res.element(int(c)), order)
              for c in prob.torsion_shift.U[:, 0]]
        D = series_cantor_add(fser, D, (Ut, []), zero, one, prob.curve1.g)
    return D


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
