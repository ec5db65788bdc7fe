"""Fixed-point ring arithmetic: worked examples and randomized ring laws."""

import numpy as np
import pytest

from padiciso.errors import ContextMismatchError, DivisionPrecisionError, NotInvertibleError
from padiciso.padic import (PadicContext, arith, divide, find_irreducible,
                            is_irreducible_mod_p, is_prime)


def test_context_construction():
    ctx = PadicContext(19, 2)
    assert ctx.modulus == 361
    assert PadicContext(7, 1).modulus == 7
    ext = PadicContext(7, 3).extension(2)
    assert ext.d == 2 and ext.modulus == 343
    with pytest.raises(ValueError):
        PadicContext(15, 2)
    with pytest.raises(ValueError):
        PadicContext(7, 0)
    with pytest.raises(ValueError):
        PadicContext(2, 40)   # beyond the int64 kernel limit
    # supplied reducible modulus is rejected: x^2 - 1 = (x-1)(x+1)
    with pytest.raises(ValueError):
        PadicContext(7, 2, 2, ext_modulus=[7 * 7 - 1, 0, 1])


def test_generated_modulus_is_irreducible_by_exhaustion():
    # degree-2 modulus over F_7: irreducible iff it has no root
    ext = PadicContext(7, 3).extension(2)
    f = ext.ext_modulus % 7
    assert all((f[0] + f[1] * x + f[2] * x * x) % 7 != 0 for x in range(7))
    assert is_irreducible_mod_p(f, 7)


def test_arith_examples():
    ctx = PadicContext(19, 2)
    v = ctx.element(146)
    assert arith(v, v, "mul").lift_int() == 17      # v_Q^2 = f1(0)
    a = ctx.element(123)
    assert arith(a, ctx.zero(), "add") == a
    c7 = PadicContext(7, 3)
    assert (c7.element(342) * c7.element(2)).lift_int() == 341


def test_division_examples_and_exhaustive_oracle():
    ctx = PadicContext(19, 2)
    z = divide(ctx.element(38), ctx.element(19))
    # every valid representative, by exhaustion; the canonical one zero-pads
    valid = [c for c in range(361) if (19 * c) % 361 == 38]
    assert z.lift_int() in valid and z.lift_int() == min(valid) == 2
    assert divide(ctx.zero(), ctx.element(19)).is_zero()
    with pytest.raises(DivisionPrecisionError):
        divide(ctx.one(), ctx.element(19))


def test_valuation_examples():
    ctx = PadicContext(19, 2)
    assert ctx.element(38).valuation() == 1
    assert ctx.zero().valuation() == 2
    ext = PadicContext(7, 2).extension(2)
    assert ext.element([14, 3]).valuation() == 0
    assert ext.element([14, 7]).valuation() == 1


def test_reduce_lift_examples():
    ctx = PadicContext(19, 2)
    assert ctx.element(340).reduce_lift(1).lift_int() == 17
    assert ctx.residue().element(17).reduce_lift(2).lift_int() == 17


def test_context_mismatch():
    a = PadicContext(7, 2).element(3)
    b = PadicContext(7, 3).element(3)
    with pytest.raises(ContextMismatchError):
        a + b


@pytest.mark.parametrize("p,M,d", [(3, 4, 1), (5, 3, 2), (7, 2, 3),
                                   (19, 2, 1), (2, 6, 1), (11, 1, 2)])
def test_ring_laws_randomized(p, M, d, rng):
    base = PadicContext(p, M)
    ctx = base.extension(d) if d > 1 else base
    for _ in range(120):
        a, b, c = (ctx.random_element(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert (a * b).valuation() == min(a.valuation() + b.valuation(), M)
        try:
            z = divide(a, b)
            assert b * z == a          # division contract, exact
        except DivisionPrecisionError:
            assert b.valuation() > a.valuation()
        if b.is_unit():
            assert b * b.inverse() == ctx.one()


def test_reduce_lift_roundtrip_property(rng):
    ctx = PadicContext(5, 4).extension(2)
    for _ in range(1000):
        a = ctx.random_element(rng)
        low = a.reduce_lift(1).reduce_lift(4)
        assert np.array_equal(low.coeffs % 5, a.coeffs % 5)
        assert np.array_equal(a.reduce_lift(2).reduce_lift(4).coeffs % 25,
                              a.coeffs % 25)


def test_is_prime():
    assert all(is_prime(p) for p in (2, 3, 5, 19, 101, 2**31 - 1))
    assert not any(is_prime(n) for n in (0, 1, 4, 361, 561, 2**31 - 3))


def test_find_irreducible_deterministic():
    f1 = find_irreducible(11, 3)
    f2 = find_irreducible(11, 3)
    assert np.array_equal(f1, f2)
    assert is_irreducible_mod_p(f1, 11)
