from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given

from conftest import forms
from hexstable.exterior import e
from hexstable.syntax import ParseError, format_poly, parse_form, parse_scalar, parse_template


def test_form_literals():
    f = parse_form("-e125 - 1/2*e146 + 3*e236")
    assert f == -e(1, 2, 5) - e(1, 4, 6).scale(Fraction(1, 2)) + e(2, 3, 6).scale(3)


def test_unsorted_monomial_sign():
    assert parse_form("e21") == -e(1, 2)
    assert parse_form("e132") == -e(1, 2, 3)


def test_repeated_index_rejected():
    with pytest.raises(ParseError, match="repeated index"):
        parse_form("e11", degree=2)


def test_zero_literal():
    assert not parse_form("0", degree=2)


def test_parameters_stay_symbolic():
    tpl = parse_template("b*e35 - 2*b*e45")
    assert tpl.params == {"b"}
    assert tpl.bind({"b": Fraction(-1)}) == -e(3, 5) + e(4, 5).scale(2)


@pytest.mark.parametrize(
    "text, column",
    [("e12+", 5), ("e17", 1), ("e12 + e345", 7), ("2*", 3), ("e12 + (b", 9)],
)
def test_errors_are_positioned(text, column):
    with pytest.raises(ParseError) as info:
        parse_form(text)
    if column is not None:
        assert f"column {column}" in str(info.value)


def test_scalars():
    assert parse_scalar("-3/4") == Fraction(-3, 4)
    assert parse_scalar("7") == 7


@given(forms(3))
def test_print_parse_roundtrip(f):
    assert parse_form(str(f), degree=3) == f


def test_template_roundtrip():
    tpl = parse_template("(b+1)*e12 - c*e34")
    assert str(tpl) == "(1 + b)*e12 - c*e34"
    assert parse_template(str(tpl)) == tpl
    ((_, coef), _) = tpl.coefficients
    assert format_poly(coef) == "1 + b"
