from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hexstable.scalars import QuadComplex, QuadScalar, RadicandMismatch, format_scalar, qsqrt, quad_sign, to_float

from conftest import small_fraction


def test_quad_sign_examples():
    assert quad_sign(QuadScalar(0, 0, 2)) == 0
    assert quad_sign(QuadScalar(-3, 2, 4)) == 1
    assert quad_sign(QuadScalar(5, -3, 3)) == -1
    assert quad_sign(Fraction(-1, 7)) == -1


def test_field_examples():
    assert QuadScalar(1, 1, 2) * QuadScalar(1, -1, 2) == -1
    assert QuadScalar(0, 1, 7) ** 2 == 7
    x = QuadScalar(3, 2, 5)
    assert x / x == 1


def test_perfect_square_radicand_collapses():
    assert QuadScalar(-3, 2, 4) == 1
    assert QuadScalar(0, 1, Fraction(9, 4)) == Fraction(3, 2)


def test_to_float_examples():
    assert to_float(QuadScalar(1, 1, 2)) == pytest.approx(1 + math.sqrt(2), rel=1e-15)
    assert to_float(QuadScalar(-4, 0, 3)) == -4.0
    assert to_float(QuadScalar(5, -3, 3)) == pytest.approx(5 - 3 * math.sqrt(3), rel=1e-14)


def test_mixed_radicands_rejected():
    with pytest.raises(RadicandMismatch):
        QuadScalar(0, 1, 2) + QuadScalar(0, 1, 3)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QuadScalar(1, 1, 2) / QuadScalar(0, 0, 2)
    with pytest.raises(ZeroDivisionError):
        QuadComplex(1, 1) / QuadComplex(0, 0)


def test_qsqrt_rationals():
    assert qsqrt(Fraction(9, 4)) == Fraction(3, 2)
    r = qsqrt(Fraction(8))
    assert r * r == 8
    assert quad_sign(r) == 1


def test_format_scalar():
    assert format_scalar(Fraction(-3, 2)) == "-3/2"
    assert format_scalar(QuadScalar(1, -1, 2)) == "1-sqrt(2)"
    assert format_scalar(QuadScalar(0, Fraction(1, 2), 3)) == "1/2*sqrt(3)"
    assert format_scalar(QuadComplex(0, 1)) == "(1)*i"


def _quad(rng: random.Random, d: int) -> QuadScalar:
    return QuadScalar(Fraction(rng.randint(-20, 20), rng.randint(1, 5)), Fraction(rng.randint(-20, 20), rng.randint(1, 5)), d)


def test_sign_is_multiplicative():
    rng = random.Random(1)
    for _ in range(1000):
        d = rng.choice([2, 3, 5, 6, 7, 10])
        x, y = _quad(rng, d), _quad(rng, d)
        assert quad_sign(x * y) == quad_sign(x) * quad_sign(y)


def test_sign_matches_float():
    rng = random.Random(2)
    for _ in range(1000):
        x = _quad(rng, rng.choice([2, 3, 5, 11]))
        f = to_float(x)
        if abs(f) > 1e-9:
            assert quad_sign(x) == (1 if f > 0 else -1)


@given(
    st.tuples(small_fraction, small_fraction, small_fraction, small_fraction),
    st.tuples(small_fraction, small_fraction, small_fraction, small_fraction),
)
def test_complex_add_sub_roundtrip(p, q):
    x = QuadComplex(QuadScalar(p[0], p[1], 3), QuadScalar(p[2], p[3], 3))
    y = QuadComplex(QuadScalar(q[0], q[1], 3), QuadScalar(q[2], q[3], 3))
    assert (x + y) - y == x
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()


@given(small_fraction, small_fraction)
def test_complex_inverse(a, b):
    z = QuadComplex(QuadScalar(a, b, 2), QuadScalar(b, a, 2))
    if z:
        assert z * z.inverse() == 1
