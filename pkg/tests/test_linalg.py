"""Series matrices, exact Gauss-Jordan over O_K, Newton inverse updates."""

import numpy as np
import pytest

from padiciso.errors import NotInvertibleError
from padiciso.linalg import (SeriesMatrix, SeriesVector, gauss_jordan_inverse,
                             inverse_newton_step)
from padiciso.padic import PadicContext, PadicElement
from padiciso.series import TruncSeries


def test_identity_inverse():
    ctx = PadicContext(7, 3)
    I = SeriesMatrix.identity(ctx, 3, 1)
    inv = gauss_jordan_inverse(I)
    assert all(inv[i, j] == I[i, j] for i in range(3) for j in range(3))


def test_gauss_jordan_randomized(rng):
    ctx = PadicContext(7, 3)
    done = 0
    while done < 200:
        g = int(rng.integers(1, 5))
        A = [[ctx.random_element(rng) for _ in range(g)] for _ in range(g)]
        try:
            inv = gauss_jordan_inverse(A)
        except NotInvertibleError:
            continue
        for i in range(g):
            for j in range(g):
                acc = ctx.zero()
                for k in range(g):
                    acc = acc + A[i][k] * inv[k][j]
                assert acc == (ctx.one() if i == j else ctx.zero())
        done += 1


def test_gauss_jordan_rejects_non_unit_determinant():
    ctx = PadicContext(7, 3)
    with pytest.raises(NotInvertibleError):
        gauss_jordan_inverse([[ctx.element(7), ctx.zero()],
                              [ctx.zero(), ctx.one()]])


def test_gauss_jordan_only_inverts_units(rng, monkeypatch):
    # instrumentation: every element inversion during elimination hits a unit
    ctx = PadicContext(5, 3)
    calls = []
    orig = PadicElement.inverse

    def spy(self):
        calls.append(self.valuation())
        return orig(self)

    monkeypatch.setattr(PadicElement, "inverse", spy)
    done = 0
    while done < 50:
        g = int(rng.integers(1, 4))
        A = [[ctx.random_element(rng) for _ in range(g)] for _ in range(g)]
        try:
            gauss_jordan_inverse(A)
            done += 1
        except NotInvertibleError:
            continue
    assert calls and all(v == 0 for v in calls)


def test_matrix_vector_associativity(rng):
    f7 = PadicContext(7, 1)
    for _ in range(100):
        A = SeriesMatrix([[TruncSeries.random(f7, 5, rng) for _ in range(3)]
                          for _ in range(3)])
        B = SeriesMatrix([[TruncSeries.random(f7, 5, rng) for _ in range(3)]
                          for _ in range(3)])
        v = SeriesVector([TruncSeries.random(f7, 5, rng) for _ in range(3)])
        lhs = (A * B) * v
        rhs = A * (B * v)
        assert all(x == y for x, y in zip(lhs.entries, rhs.entries))


def test_normalization_matrix_times_identity():
    c19 = PadicContext(19, 2)
    Mn = SeriesMatrix.from_constant([[c19.element(95), c19.element(233)],
                                     [c19.element(155), c19.element(228)]], 1)
    I = SeriesMatrix.identity(c19, 2, 1)
    prod = Mn * I
    assert all(prod[i, j] == Mn[i, j] for i in range(2) for j in range(2))


def test_inverse_newton_step_fixed_point(rng):
    ctx = PadicContext(7, 3)
    while True:
        A = [[ctx.random_element(rng) for _ in range(2)] for _ in range(2)]
        try:
            Ainv = gauss_jordan_inverse(A)
            break
        except NotInvertibleError:
            continue
    Am = SeriesMatrix.from_constant(A, 1)
    Hm = SeriesMatrix.from_constant(Ainv, 1)
    out = inverse_newton_step(Hm, Am, 0)
    assert all(out[i, j] == Hm[i, j] for i in range(2) for j in range(2))


def test_inverse_newton_step_first_order(rng):
    # A = I + tB, H = I mod t  ->  step gives I - tB mod t^2
    ctx = PadicContext(5, 3)
    B = [[ctx.random_element(rng) for _ in range(2)] for _ in range(2)]
    rows = []
    for i in range(2):
        row = []
        for j in range(2):
            s = TruncSeries.zero(ctx, 2)
            if i == j:
                s.coeffs[0, 0] = 1
            s.coeffs[1] = B[i][j].coeffs
            row.append(s)
        rows.append(row)
    A = SeriesMatrix(rows)
    H0 = SeriesMatrix.identity(ctx, 2, 1)
    H1 = inverse_newton_step(H0, A, 1)
    for i in range(2):
        for j in range(2):
            want = TruncSeries.zero(ctx, 2)
            if i == j:
                want.coeffs[0, 0] = 1
            want.coeffs[1] = (-B[i][j]).coeffs
            assert H1[i, j] == want


def test_doubling_chain_reaches_order_16(rng):
    ctx = PadicContext(7, 3)
    done = 0
    while done < 40:
        g = int(rng.integers(1, 4))
        A = SeriesMatrix([[TruncSeries.random(ctx, 16, rng) for _ in range(g)]
                          for _ in range(g)])
        try:
            H = SeriesMatrix.from_constant(gauss_jordan_inverse(A.constant_term()), 1)
        except NotInvertibleError:
            continue
        n = 0
        while n < 15:
            m = min(2 * n + 1, 15)
            H = inverse_newton_step(H, A, m)
            n = m
        prod = H * A
        for i in range(g):
            for j in range(g):
                want = TruncSeries.zero(ctx, 16)
                if i == j:
                    want.coeffs[0, 0] = 1
                assert prod[i, j] == want
        done += 1
