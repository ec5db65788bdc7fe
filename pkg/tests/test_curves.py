"""Hyperelliptic curves, Cantor arithmetic, Hensel lifting, divisor support."""

import numpy as np
import pytest

from padiciso import polys as P
from padiciso.curves import (CurvePoint, HyperellipticCurve, MumfordDivisor,
                             cantor_add, divisor_from_point, divisor_points,
                             embed_poly, hensel_lift_factor, hensel_lift_point,
                             random_curve, scalar_mul, sqrt_mod_p)
from padiciso.errors import (DegreeError, NonUnitInversionError,
                             RepeatedRootError, WeierstrassError)
from padiciso.padic import PadicContext

C1_COEFFS = [17, 5, 3, 11, 16, 1]
C2_COEFFS = [0, -68, 2546, -100, -176, 2]


def test_sqrt_mod_p(rng):
    for p in (3, 7, 19, 101, 10007):
        for _ in range(40):
            a = int(rng.integers(0, p))
            r = sqrt_mod_p(a, p)
            if r is None:
                assert pow(a, (p - 1) // 2, p) == p - 1
            else:
                assert r * r % p == a


def test_curve_validation():
    ctx = PadicContext(19, 2)
    C = HyperellipticCurve(ctx, C1_COEFFS)
    assert C.g == 2 and C.odd_model
    with pytest.raises(ValueError):
        HyperellipticCurve(ctx, [0, 0, 0, 1, 0, 19])      # non-unit lead
    with pytest.raises(ValueError):
        HyperellipticCurve(ctx, [0, 0, 1, 1])             # x^3 + x^2: disc = 0
    with pytest.raises(ValueError):
        HyperellipticCurve(PadicContext(2, 3), [1, 1, 0, 1])


def test_hensel_lift_point_examples():
    ctx = PadicContext(19, 2)
    C1 = HyperellipticCurve(ctx, C1_COEFFS)
    res = ctx.residue()
    assert hensel_lift_point(C1, ctx.element(0), res.element(13)).y.lift_int() == 146
    assert hensel_lift_point(C1, ctx.element(0), res.element(6)).y.lift_int() == 215
    for x0 in range(1, 19):    # first x whose f-value is a nonzero square
        fx = P.peval(res, P.as_poly(res, C1.f % 19), res.element(x0)).lift_int()
        r = sqrt_mod_p(fx, 19)
        if fx and r is not None:
            break
    pt = hensel_lift_point(C1, ctx.element(x0), res.element(r))
    assert pt.y * pt.y == C1.f_at(pt.x)
    with pytest.raises(WeierstrassError):
        hensel_lift_point(C1, ctx.element(0), res.zero())


def test_divisor_from_point():
    ctx = PadicContext(19, 2)
    C1 = HyperellipticCurve(ctx, C1_COEFFS)
    Q = CurvePoint(ctx.element(0), ctx.element(146))
    D = divisor_from_point(C1, Q)
    assert D.U.tolist() == [[0], [1]] and D.V.tolist() == [[146]]
    assert cantor_add(C1, D, D.negate()).is_identity()
    with pytest.raises(ValueError):
        divisor_from_point(C1, CurvePoint.infinity())


def test_weierstrass_divisor_is_two_torsion(rng):
    # (X - w, 0) for a root w of f doubles to the identity
    res = PadicContext(7, 1)
    while True:
        C = random_curve(res, 2, rng)
        roots = [x for x in range(7)
                 if P.peval(res, C.f, res.element(x)).is_zero()]
        if roots:
            break
    DW = MumfordDivisor(C, P.as_poly(res, [-roots[0], 1]), P.pzero(res))
    assert cantor_add(C, DW, DW).is_identity()


def test_cantor_field_properties(rng):
    f7 = PadicContext(7, 1)
    C = random_curve(f7, 2, rng)
    I = MumfordDivisor.identity(C)
    for _ in range(100):
        D1 = divisor_from_point(C, C.random_affine_point(rng))
        D2 = divisor_from_point(C, C.random_affine_point(rng))
        D3 = divisor_from_point(C, C.random_affine_point(rng))
        assert cantor_add(C, D1, I) == D1
        assert cantor_add(C, D1, D1.negate()) == I
        assert cantor_add(C, cantor_add(C, D1, D2), D3) == \
            cantor_add(C, D1, cantor_add(C, D2, D3))


def test_scalar_mul_examples(rng):
    f7 = PadicContext(7, 1)
    C = random_curve(f7, 2, rng)
    I = MumfordDivisor.identity(C)
    for _ in range(50):
        D = divisor_from_point(C, C.random_affine_point(rng))
        assert scalar_mul(C, 1, D) == D
        assert scalar_mul(C, 0, D) == I
        acc = I
        for k in range(5):
            assert scalar_mul(C, k, D) == acc
            acc = cantor_add(C, acc, D)
        l1, l2 = int(rng.integers(0, 9)), int(rng.integers(0, 9))
        assert scalar_mul(C, l1 + l2, D) == \
            cantor_add(C, scalar_mul(C, l1, D), scalar_mul(C, l2, D))


def test_padic_cantor_reduction_compatibility(rng):
    for (p, M, g) in [(7, 3, 2), (11, 2, 3), (5, 4, 2)]:
        ctx = PadicContext(p, M)
        C = random_curve(ctx, g, rng)
        Cbar = C.reduce_mod_p()
        done = 0
        attempts = 0
        while done < 25 and attempts < 400:
            attempts += 1
            D1 = divisor_from_point(C, C.random_affine_point(rng))
            D2 = divisor_from_point(C, C.random_affine_point(rng))
            try:
                S = scalar_mul(C, 3, cantor_add(C, D1, D2))
            except NonUnitInversionError:
                continue
            MumfordDivisor(C, S.U, S.V)     # V^2 = f mod U holds exactly
            Sbar = scalar_mul(Cbar, 3, cantor_add(Cbar, D1.reduce_mod_p(),
                                                  D2.reduce_mod_p()))
            assert Sbar == S.reduce_mod_p()
            done += 1
        assert done >= 15


def test_divisor_points_golden_data():
    ctx = PadicContext(19, 2)
    C2 = HyperellipticCurve(ctx, C2_COEFFS)
    x1, y1 = ctx.element(-36), ctx.element(-13)
    x2, y2 = ctx.element(-129), ctx.element(-47)
    U = P.pmul(ctx, P.as_poly(ctx, [-x1, ctx.one()]), P.as_poly(ctx, [-x2, ctx.one()]))
    V = P.pinterp(ctx, [x1, x2], [y1, y2])
    D = MumfordDivisor(C2, U, V)            # validates the printed data exactly
    ext, pts = divisor_points(C2, D)
    assert ext.d == 1
    got = sorted((int(q.x.coeffs[0]), int(q.y.coeffs[0])) for q in pts)
    assert got == sorted([(325, 348), (232, 314)])


def test_divisor_points_repeated_root():
    ctx = PadicContext(7, 3)
    C = random_curve(ctx, 2, np.random.default_rng(5))
    Q = C.random_affine_point(np.random.default_rng(6))
    D2 = cantor_add(C, divisor_from_point(C, Q), divisor_from_point(C, Q))
    with pytest.raises(RepeatedRootError):
        divisor_points(C, D2)
    with pytest.raises(DegreeError):
        divisor_points(C, divisor_from_point(C, Q))


def test_divisor_points_extension_lift(rng):
    ctx = PadicContext(5, 3)
    C = random_curve(ctx, 2, rng)
    found = 0
    attempts = 0
    seen_ext = False
    while found < 20 and attempts < 2000:
        attempts += 1
        try:
            D = scalar_mul(C, 3, divisor_from_point(C, C.random_affine_point(rng)))
            if P.pdeg(D.U) != 2:
                continue
            ext, pts = divisor_points(C, D, rng)
        except (RepeatedRootError, WeierstrassError, NonUnitInversionError):
            continue
        prod = P.pone(ext)
        for q in pts:
            prod = P.pmul(ext, prod, P.as_poly(ext, [-q.x, ext.one()]))
        assert np.array_equal(prod, embed_poly(ctx, ext, D.U))
        fe = embed_poly(ctx, ext, C.f)
        for q in pts:
            assert P.peval(ext, fe, q.x) == q.y * q.y
            assert q.y.is_unit()
        # reduction mod p recovers the factorization of U mod p
        resd = ext.residue()
        for q in pts:
            root = q.x.reduce_lift(1)
            assert P.peval(resd, embed_poly(ctx.residue(), resd,
                                            P.as_poly(ctx.residue(), D.U % 5)), root).is_zero()
        seen_ext = seen_ext or ext.d > 1
        found += 1
    assert found == 20 and seen_ext


def test_factorization_and_lift(rng):
    res = PadicContext(7, 1)
    ctx = PadicContext(7, 4)
    for _ in range(40):
        C = random_curve(ctx, 2, rng)
        fbar = P.as_poly(res, C.f % 7)
        factors = P.factor_squarefree(res, fbar, rng)
        prod = P.pone(res)
        for f in factors:
            from padiciso.padic import is_irreducible_mod_p
            assert is_irreducible_mod_p(np.ascontiguousarray(f[:, 0]), 7)
            prod = P.pmul(res, prod, f)
        assert np.array_equal(prod, P.pmonic(res, fbar))
        # Hensel-lift the first factor and check exact divisibility
        u = hensel_lift_factor(ctx, C.f, factors[0])
        assert P.pmod(ctx, C.f, u).shape[0] == 0
        assert np.array_equal(u % 7, P.ptrim(factors[0] % 7))
