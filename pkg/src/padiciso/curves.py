"""Hyperelliptic curves y^2 = f(x) over p-adic or residue-field coefficients.

Mumford-coordinate divisor arithmetic (Cantor's composition/reduction, cf.
Cohen & Frey, Handbook of elliptic and hyperelliptic curve cryptography,
ch. 14), scalar multiplication, Hensel lifting of points and simple roots,
and extraction of the g support points of a divisor over an unramified
extension.  Jacobian arithmetic requires an odd-degree model; even-degree
curves are accepted as codomain curves for series work only.
"""

from __future__ import annotations

import numpy as np

from .errors import (DegreeError, NonUnitInversionError, NotInvertibleError,
                     RepeatedRootError, WeierstrassError)
from .padic import PadicContext, PadicElement
from .polys import (as_poly, is_squarefree, padd, pcoeff, pdeg, pderiv,
                    pdivmod, peval, pgcd, pmod, pmonic, pmul, pneg, pone,
                    poly_from_json, poly_to_json, ppow_mod, pscale, psub,
                    ptrim, pxgcd, pzero, roots_split, pX)


def sqrt_mod_p(a: int, p: int):
    """Tonelli-Shanks; returns a square root of a mod p, or None."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t = t * c % p
        r = r * b % p
    return r


class HyperellipticCurve:
    """y^2 = f(x) with unit leading coefficient and good reduction
    (f squarefree of full degree mod p); p odd."""

    def __init__(self, ctx: PadicContext, f, check: bool = True):
        if ctx.d != 1:
            raise ValueError("curves live over the base (d = 1) context")
        if ctx.p == 2:
            raise ValueError("characteristic 2 is not supported")
        self.ctx = ctx
        self.f = as_poly(ctx, f)
        deg = pdeg(self.f)
        if deg < 3:
            raise ValueError("deg f must be at least 3")
        self.g = (deg - 1) // 2
        self.odd_model = deg == 2 * self.g + 1
        if check:
            res = ctx.residue()
            fbar = as_poly(res, self.f % ctx.p)
            if pdeg(fbar) != deg:
                raise ValueError("leading coefficient is not a unit")
            if not is_squarefree(res, fbar):
                raise ValueError("disc(f) is not a unit (bad reduction)")

    def f_at(self, x: PadicElement) -> PadicElement:
        if x.ctx is self.ctx or x.ctx == self.ctx:
            return peval(self.ctx, self.f, x)
        # evaluation over an extension of the same (p, M)
        ext = x.ctx
        fext = embed_poly(self.ctx, ext, self.f)
        return peval(ext, fext, x)

    def reduce_mod_p(self) -> "HyperellipticCurve":
        res = self.ctx.residue()
        return HyperellipticCurve(res, self.f % self.ctx.p, check=False)

    def lift_to(self, M: int) -> "HyperellipticCurve":
        """Zero-padded coefficient lift (any lift is valid for the
        multiplication map)."""
        ctx2 = self.ctx.with_precision(M)
        return HyperellipticCurve(ctx2, self.f % ctx2.modulus, check=False)

    def random_affine_point(self, rng, avoid_weierstrass: bool = True):
        """Uniform-ish affine point: random x in F_p with f(x) a square,
        Hensel-lifted to the working precision; y-sign taken from rng."""
        p = self.ctx.p
        for _ in range(40 * p):
            x0 = int(rng.integers(0, p))
            fx = peval(self.ctx.residue(), as_poly(self.ctx.residue(), self.f % p),
                       self.ctx.residue().element(x0)).lift_int()
            if fx == 0:
                if avoid_weierstrass:
                    continue
                return CurvePoint(self.ctx.element(x0), self.ctx.zero())
            r = sqrt_mod_p(fx, p)
            if r is None:
                continue
            if int(rng.integers(0, 2)):
                r = (-r) % p
            x = self.ctx.element(x0)
            y = hensel_lift_point(self, x, self.ctx.residue().element(r)).y
            return CurvePoint(x, y)
        raise WeierstrassError("no suitable affine point found")

    def to_json(self):
        return {"f": poly_to_json(self.f, 1)}

    def __repr__(self):
        return f"HyperellipticCurve(g={self.g}, p={self.ctx.p}, M={self.ctx.M})"


class CurvePoint:
    __slots__ = ("x", "y", "infinite")

    def __init__(self, x=None, y=None, infinite: bool = False):
        self.x = x
        self.y = y
        self.infinite = infinite

    @classmethod
    def infinity(cls):
        return cls(infinite=True)

    def __repr__(self):
        if self.infinite:
            return "CurvePoint(inf)"
        return f"CurvePoint({self.x!r}, {self.y!r})"


class MumfordDivisor:
    """Reduced pair (U, V): U monic, deg U <= g, V^2 = f mod U (exact)."""

    __slots__ = ("curve", "U", "V")

    def __init__(self, curve: HyperellipticCurve, U, V, check: bool = True):
        ctx = curve.ctx
        self.curve = curve
        self.U = as_poly(ctx, U)
        self.V = as_poly(ctx, V)
        if check:
            if pdeg(self.U) > curve.g:
                raise DegreeError("deg U exceeds the genus")
            if self.U.shape[0] == 0 or not pcoeff(ctx, self.U, pdeg(self.U)) == ctx.one():
                raise ValueError("U must be monic")
            r = pmod(ctx, psub(ctx, pmul(ctx, self.V, self.V), curve.f), self.U)
            if r.shape[0]:
                raise ValueError("V^2 != f mod U")

    @classmethod
    def identity(cls, curve):
        return cls(curve, pone(curve.ctx), pzero(curve.ctx), check=False)

    def is_identity(self) -> bool:
        return pdeg(self.U) == 0

    def __eq__(self, other):
        return (isinstance(other, MumfordDivisor)
                and bool(np.array_equal(self.U, other.U))
                and bool(np.array_equal(self.V, other.V)))

    def negate(self) -> "MumfordDivisor":
        ctx = self.curve.ctx
        return MumfordDivisor(self.curve, self.U,
                              pmod(ctx, pneg(ctx, self.V), self.U), check=False)

    def reduce_mod_p(self) -> "MumfordDivisor":
        c2 = self.curve.reduce_mod_p()
        p = self.curve.ctx.p
        return MumfordDivisor(c2, self.U % p, self.V % p, check=False)

    def to_json(self):
        return {"u": poly_to_json(self.U, 1), "v": poly_to_json(self.V, 1)}

    def __repr__(self):
        return f"MumfordDivisor(U deg {pdeg(self.U)}, V deg {pdeg(self.V)})"


def divisor_from_point(curve: HyperellipticCurve, Q: CurvePoint) -> MumfordDivisor:
    """The class [Q - infinity] = (X - x_Q, y_Q); odd-degree model only."""
    if not curve.odd_model:
        raise ValueError("Jacobian arithmetic needs an odd-degree model")
    if Q.infinite:
        raise ValueError("Q must be affine")
    ctx = curve.ctx
    return MumfordDivisor(curve, as_poly(ctx, [-Q.x, ctx.one()]), as_poly(ctx, [Q.y]))


def _inv_mod_monic(ctx: PadicContext, A, B):
    """Inverse of A modulo a monic B over Z/p^M, by a mod-p field xgcd
    followed by Newton lifting; requires gcd(A, B) = 1 mod p.  All interior
    divisions are by the monic B, so nothing fragile is inverted."""
    res = ctx.residue()
    g, u, _ = pxgcd(res, as_poly(res, A % ctx.p), as_poly(res, B % ctx.p))
    if pdeg(g) != 0:
        raise NonUnitInversionError("operands share a root modulo p")
    w = as_poly(ctx, u % ctx.modulus)   # zero-padded lift
    two = ctx.element(2)
    for _ in range(ctx.M.bit_length() + 1):
        aw = pmod(ctx, pmul(ctx, A, w), B)
        corr = psub(ctx, pscale(ctx, pone(ctx), two), aw)
        w = pmod(ctx, pmul(ctx, w, corr), B)
    if not np.array_equal(pmod(ctx, pmul(ctx, A, w), B), pone(ctx)):
        raise NonUnitInversionError("Bezout lift failed to converge")
    return w


def _reduce_mumford(curve, U, V):
    """Cantor reduction of a semi-reduced (U, V); U must stay monic after
    each exact division, otherwise the configuration is non-generic."""
    ctx = curve.ctx
    while pdeg(U) > curve.g:
        U2, r = pdivmod(ctx, psub(ctx, curve.f, pmul(ctx, V, V)), U)
        if r.shape[0]:
            raise NonUnitInversionError("reduction: U does not divide f - V^2")
        U2 = pmonic(ctx, U2)
        V = pmod(ctx, pneg(ctx, V), U2)
        U = U2
    U = pmonic(ctx, U)
    return MumfordDivisor(curve, U, pmod(ctx, V, U), check=False)


def cantor_add(curve: HyperellipticCurve, D1: MumfordDivisor, D2: MumfordDivisor) -> MumfordDivisor:
    """Composition + reduction on Mumford representatives.

    Over a residue field the classical algorithm handles every input.  Over
    a p-adic ring the two generic branches (coprime supports mod p, and
    doubling away from the 2-torsion) are computed with Hensel-lifted
    Bezout inverses; anything else raises NonUnitInversionError and the
    caller re-randomizes its base point.
    """
    if not curve.odd_model:
        raise ValueError("Jacobian arithmetic needs an odd-degree model")
    ctx = curve.ctx
    if D1.is_identity():
        return D2
    if D2.is_identity():
        return D1
    if ctx.M == 1:
        return _cantor_field(curve, D1, D2)
    try:
        if np.array_equal(D1.U, D2.U):
            if psub(ctx, D1.V, D2.V).shape[0] == 0:
                # doubling: d = gcd(U, 2V) must be 1 mod p
                U1, V1 = D1.U, D1.V
                twoV = pscale(ctx, V1, ctx.element(2))
                c2 = _inv_mod_monic(ctx, twoV, U1)
                c1, r = pdivmod(ctx, psub(ctx, pone(ctx), pmul(ctx, c2, twoV)), U1)
                if r.shape[0]:
                    raise NonUnitInversionError("doubling: inexact Bezout division")
                U = pmul(ctx, U1, U1)
                W = padd(ctx, pmul(ctx, pmul(ctx, c1, U1), V1),
                         pmul(ctx, c2, padd(ctx, pmul(ctx, V1, V1), curve.f)))
                return _reduce_mumford(curve, U, pmod(ctx, W, U))
            if padd(ctx, D1.V, D2.V).shape[0] == 0:
                return MumfordDivisor.identity(curve)
            raise NonUnitInversionError("partial support cancellation")
        # generic addition: U1, U2 coprime mod p
        e1 = _inv_mod_monic(ctx, D1.U, D2.U)
        e2, r = pdivmod(ctx, psub(ctx, pone(ctx), pmul(ctx, e1, D1.U)), D2.U)
        if r.shape[0]:
            raise NonUnitInversionError("addition: inexact Bezout division")
        U = pmul(ctx, D1.U, D2.U)
        W = padd(ctx, pmul(ctx, pmul(ctx, e1, D1.U), D2.V),
                 pmul(ctx, pmul(ctx, e2, D2.U), D1.V))
        return _reduce_mumford(curve, U, pmod(ctx, W, U))
    except (NotInvertibleError, NonUnitInversionError) as exc:
        raise NonUnitInversionError(f"non-generic Jacobian addition: {exc}") from exc


def _cantor_field(curve, D1, D2):
    ctx = curve.ctx
    d1, e1, e2 = pxgcd(ctx, D1.U, D2.U)
    vsum = padd(ctx, D1.V, D2.V)
    if vsum.shape[0] == 0:
        d, c1, c2 = d1, pone(ctx), pzero(ctx)
    else:
        d, c1, c2 = pxgcd(ctx, d1, vsum)
    s1 = pmul(ctx, c1, e1)
    s2 = pmul(ctx, c1, e2)
    s3 = c2
    dd = pmul(ctx, d, d)
    U, r = pdivmod(ctx, pmul(ctx, D1.U, D2.U), dd)
    assert not r.shape[0]
    W = padd(ctx, pmul(ctx, pmul(ctx, s1, D1.U), D2.V),
             pmul(ctx, pmul(ctx, s2, D2.U), D1.V))
    W = padd(ctx, W, pmul(ctx, s3, padd(ctx, pmul(ctx, D1.V, D2.V), curve.f)))
    V, r = pdivmod(ctx, W, d)
    assert not r.shape[0]
    return _reduce_mumford(curve, U, pmod(ctx, V, U))


def scalar_mul(curve: HyperellipticCurve, ell: int, D: MumfordDivisor) -> MumfordDivisor:
    """[ell] D by signed (non-adjacent form) double-and-add.

    The NAF chain never adds [m] D for m < 4 to D, which matters over
    p-adic rings: [2] D and D share support, so the generic addition
    branch would reject the plain binary chain (e.g. for ell = 3)."""
    if ell < 0:
        return scalar_mul(curve, -ell, D.negate())
    if ell == 0:
        return MumfordDivisor.identity(curve)
    naf = []
    k = ell
    while k:
        if k & 1:
            r = 2 - (k % 4)      # +-1, keeping the next bit clear
            naf.append(r)
            k -= r
        else:
            naf.append(0)
        k >>= 1
    acc = MumfordDivisor.identity(curve)
    negD = D.negate()
    for digit in reversed(naf):
        acc = cantor_add(curve, acc, acc)
        if digit == 1:
            acc = cantor_add(curve, acc, D)
        elif digit == -1:
            acc = cantor_add(curve, acc, negD)
    return acc


def hensel_lift_point(curve: HyperellipticCurve, x0: PadicElement,
                      y0_residue: PadicElement) -> CurvePoint:
    """The unique y with y^2 = f(x0) at full precision and y = y0 mod p.

    y0 must be a nonzero residue (a simple root of Y^2 - f(x0) mod p)."""
    ctx = curve.ctx
    if y0_residue.is_zero():
        raise WeierstrassError("Weierstrass point: no unique lift of y = 0")
    fx = curve.f_at(x0)
    y = ctx.element(int(y0_residue.coeffs[0]))
    inv2 = ctx.element(2).inverse()
    for _ in range(max(1, ctx.M.bit_length() + 1)):
        y = (y + fx / y) * inv2
    if y * y != fx:
        raise WeierstrassError("Hensel iteration failed to converge")
    return CurvePoint(x0, y)


def _lcm(values):
    out = 1
    for v in values:
        a, b = out, v
        while b:
            a, b = b, a % b
        out = out * v // a
    return out


def _factor_degrees(res_ctx, ubar) -> list:
    """Degrees (with multiplicity) of the irreducible factors of a
    squarefree ubar over F_p, by distinct-degree splitting."""
    degs = []
    rem = pmonic(res_ctx, ubar)
    h = pX(res_ctx)
    k = 0
    p = res_ctx.p
    while pdeg(rem) > 0:
        k += 1
        if 2 * k > pdeg(rem):
            degs.append(pdeg(rem))
            break
        h = ppow_mod(res_ctx, h, p, rem)
        gk = pgcd(res_ctx, psub(res_ctx, h, pX(res_ctx)), rem)
        if pdeg(gk) > 0:
            degs.extend([k] * (pdeg(gk) // k))
            rem = pdivmod(res_ctx, rem, gk)[0]
            h = pmod(res_ctx, h, rem) if pdeg(rem) > 0 else h
    return degs


def embed_poly(base_ctx: PadicContext, ext_ctx: PadicContext, poly: np.ndarray) -> np.ndarray:
    if ext_ctx.d == 1:
        return poly
    out = np.zeros((poly.shape[0], ext_ctx.d), np.int64)
    out[:, 0] = poly[:, 0]
    return out


def divisor_points(curve: HyperellipticCurve, D: MumfordDivisor, rng=None):
    """The g support points of a weight-g divisor, over the minimal
    unramified extension F_{p^d} lifted to the working precision.

    Requires deg U = g, U squarefree mod p, and no Weierstrass support.
    Returns (ext_ctx, [CurvePoint]) with points sorted canonically.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    ctx = curve.ctx
    g = curve.g
    if pdeg(D.U) != g:
        raise DegreeError(f"divisor has weight {pdeg(D.U)} < genus {g}")
    res = ctx.residue()
    ubar = as_poly(res, D.U % ctx.p)
    if pdeg(ubar) != g:
        raise RepeatedRootError("U degenerates mod p")
    if not is_squarefree(res, ubar):
        raise RepeatedRootError("U mod p is not squarefree")
    fbar = as_poly(res, curve.f % ctx.p)
    if pdeg(pgcd(res, ubar, fbar)) > 0:
        raise WeierstrassError("divisor support touches a Weierstrass point")
    d = _lcm(_factor_degrees(res, ubar))
    ext = ctx.extension(d)
    ext_res = ext.residue()
    roots = roots_split(ext_res, embed_poly(res, ext_res, ubar), rng)
    if len(roots) != g:
        raise RepeatedRootError("root extraction did not split U")
    Uext = embed_poly(ctx, ext, D.U)
    Uprime = pderiv(ext, Uext)
    Vext = embed_poly(ctx, ext, D.V)
    points = []
    for r in roots:
        x = PadicElement(ext, np.array(r.coeffs, np.int64))  # zero-padded lift
        for _ in range(max(1, ctx.M.bit_length() + 1)):
            x = x - peval(ext, Uext, x) / peval(ext, Uprime, x)
        if not peval(ext, Uext, x).is_zero():
            raise RepeatedRootError("Hensel root refinement failed")
        y = peval(ext, Vext, x)
        if not y.is_unit():
            raise WeierstrassError("support point has non-unit y")
        points.append(CurvePoint(x, y))
    points.sort(key=lambda P: tuple(int(c) for c in P.x.coeffs))
    return ext, points


def hensel_lift_factor(ctx: PadicContext, f, factor_bar) -> np.ndarray:
    """Lift a monic factor of f mod p to a monic exact factor of f over
    Z/p^M (requires gcd(factor, cofactor) = 1 mod p, true for squarefree f).

    Newton update u <- u + (f mod u) * (f quo u)^{-1} mod u."""
    u = as_poly(ctx, np.asarray(factor_bar) % ctx.modulus)
    if pdeg(u) == 0:
        return u
    for _ in range(ctx.M.bit_length() + 1):
        q, r = pdivmod(ctx, f, u)
        if r.shape[0] == 0:
            break
        w = _inv_mod_monic(ctx, q, u)
        u = padd(ctx, u, pmod(ctx, pmul(ctx, r, w), u))
    if pmod(ctx, f, u).shape[0]:
        raise NonUnitInversionError("factor lift failed to converge")
    return u


def random_curve(ctx: PadicContext, g: int, rng) -> HyperellipticCurve:
    """Random monic odd-degree curve with good reduction, coefficients
    drawn mod p and zero-lifted."""
    p = ctx.p
    while True:
        coeffs = [int(rng.integers(0, p)) for _ in range(2 * g + 1)] + [1]
        try:
            return HyperellipticCurve(ctx, coeffs)
        except ValueError:
            continue


def curve_from_json(ctx: PadicContext, data) -> HyperellipticCurve:
    return HyperellipticCurve(ctx, poly_from_json(ctx, data["f"]))


def divisor_from_json(curve: HyperellipticCurve, data) -> MumfordDivisor:
    ctx = curve.ctx
    return MumfordDivisor(curve, poly_from_json(ctx, data["u"]),
                          poly_from_json(ctx, data["v"]))
