from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy as sp

import oracle
from hexstable import catalog as cat
from hexstable.exterior import Form, e, wedge
from hexstable.liealg import (
    ParameterOutOfRange,
    betti,
    center,
    closed_form_basis,
    derived_subalgebra,
    format_document,
    lower_central_series,
    nilpotency_step,
    parse_document,
    parse_structure_equations,
    sanity,
)
from hexstable.linalg import span_dim
from hexstable.syntax import ParseError, parse_form


def _same_span(got, want):
    return span_dim(got) == span_dim(want) == span_dim(list(got) + list(want))


def unit(k):
    return [Fraction(int(i == k - 1)) for i in range(6)]


def test_parse_examples():
    g = parse_structure_equations("(0,0,0,e12,e13,e23)")
    assert g.de[3] == e(1, 2) and g.de[4] == e(1, 3) and g.de[5] == e(2, 3)
    assert all(not x for x in parse_structure_equations("(0,0,0,0,0,0)").de)
    a = parse_structure_equations("(e15,-e25,b*e35,-b*e45,0,0)").substitute(b=-1)
    assert a.de == cat.catalog_lookup("A5,7(-1,b,-b)+R").algebra.substitute(b=-1).de


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_structure_equations("(0,0,0,e12)")
    with pytest.raises(ParseError):
        parse_structure_equations("(0,0,0,e17,0,0)")
    with pytest.raises(ParseError):
        parse_document("algebra h\nd e4 = e12\nd e4 = e13\n")


def test_document_line_form_matches_tuple():
    doc = parse_document(
        "algebra g = (0,0,0,e12,e13,e23)\n"
        "algebra h\n"
        "d e4 = e12\n"
        "d e5 = e13  # comment\n"
        "d e6 = e23\n"
        "form w : 2 = -e16 + e25 - e34\n"
    )
    assert doc.algebras["g"].de == doc.algebras["h"].de
    assert doc.forms["w"].bind() == parse_form("-e16+e25-e34")


def test_document_ranges():
    doc = parse_document("algebra a(b) = (e15,-e25,b*e35,-b*e45,0,0)\nrange b : -1 <= b < 0\n")
    g = doc.algebras["a"]
    assert g.substitute(b=Fraction(-1, 2)).de[2] == e(3, 5).scale(Fraction(-1, 2))
    with pytest.raises(ParameterOutOfRange):
        g.substitute(b=0)


def test_differential_examples():
    g24 = cat.nilpotent(24).algebra
    assert g24.d(e(4)) == e(1, 2)
    assert g24.d(e(5, 6)) == e(1, 3, 6) - e(2, 3, 5)
    g18 = cat.nilpotent(18).algebra
    assert g18.d(e(5, 6)) == parse_form("e136 - e246 - e145 - e235")


def test_differential_matches_oracle():
    rng = random.Random(7)
    for i in (6, 18, 24, 27):
        g = cat.nilpotent(i).algebra
        structure = [oracle.from_form(f) for f in g.de]
        a = Form(3, {m: Fraction(rng.randint(-3, 3)) for m in range(64) if bin(m).count("1") == 3})
        got = {k: sp.Rational(v.numerator, v.denominator) for k, v in g.d(a).terms()}
        assert got == oracle.d(structure, oracle.from_form(a))


def test_sanity_examples():
    s = sanity(cat.nilpotent(24).algebra)
    assert s.jacobi and s.unimodular
    assert not sanity(parse_structure_equations("(e45,0,0,e23,0,0)")).jacobi
    s = sanity(cat.catalog_lookup("e(1,1)+e(1,1)").algebra)
    assert s.jacobi and s.unimodular


def test_every_catalog_entry_is_a_unimodular_lie_algebra():
    for entry in cat.catalog().values():
        g = entry.algebra.at_sample()
        s = sanity(g)
        assert s.jacobi and s.unimodular, entry.name


def test_center_examples():
    assert _same_span(center(cat.nilpotent(24).algebra), [unit(4), unit(5), unit(6)])
    assert span_dim(center(cat.nilpotent(34).algebra)) == 6
    assert _same_span(center(cat.nilpotent(3).algebra), [unit(6)])


def test_derived_examples():
    assert _same_span(derived_subalgebra(cat.nilpotent(24).algebra), [unit(4), unit(5), unit(6)])
    assert not derived_subalgebra(cat.nilpotent(34).algebra)
    assert _same_span(derived_subalgebra(cat.nilpotent(33).algebra), [unit(6)])


def test_lower_central_series():
    assert nilpotency_step(cat.nilpotent(27).algebra) == 3
    assert nilpotency_step(cat.nilpotent(24).algebra) == 2
    assert lower_central_series(cat.nilpotent(34).algebra) == [6, 0]
    assert nilpotency_step(cat.catalog_lookup("e(1,1)+e(1,1)").algebra) is None


def test_betti_examples():
    assert betti(cat.nilpotent(24).algebra)[0] == 3
    assert betti(cat.nilpotent(25).algebra)[1] == 6
    assert betti(cat.nilpotent(27).algebra)[1] == 7
    assert betti(cat.nilpotent(34).algebra) == (6, 15)


def test_b1_matches_table_for_all_nilpotent():
    for i in range(1, 35):
        entry = cat.nilpotent(i)
        assert betti(entry.algebra)[0] == entry.b1, entry.name


def test_closed_form_basis():
    assert len(closed_form_basis(cat.nilpotent(34).algebra, 3)) == 20
    basis = closed_form_basis(cat.nilpotent(24).algebra, 1)
    vecs = [f.to_vector() for f in basis]
    assert _same_span(vecs, [unit(1), unit(2), unit(3)])
    g18 = cat.nilpotent(18).algebra
    b3 = closed_form_basis(g18, 3)
    assert all(not g18.d(f) for f in b3)
    rank_d3 = sp.Matrix([g18.d(Form(3, {m: 1})).to_vector() for m in range(64) if bin(m).count("1") == 3]).rank()
    assert len(b3) == 20 - rank_d3


def test_print_parse_roundtrip():
    for entry in cat.catalog().values():
        g = entry.algebra
        if not g.free_params:
            assert parse_structure_equations(g.to_text()).de == g.de
        doc = parse_document(format_document(g))
        (h,) = doc.algebras.values()
        assert h.structure == g.structure
        assert h.ranges == g.ranges


def test_antiderivation_random_pairs():
    rng = random.Random(11)
    for i in (4, 13, 25):
        g = cat.nilpotent(i).algebra
        for _ in range(40):
            da, db = rng.choice([(1, 1), (1, 2), (2, 2), (2, 3), (1, 4)])
            a = Form(da, {m: Fraction(rng.randint(-2, 2)) for m in range(64) if bin(m).count("1") == da})
            b = Form(db, {m: Fraction(rng.randint(-2, 2)) for m in range(64) if bin(m).count("1") == db})
            assert g.d(wedge(a, b)) == wedge(g.d(a), b) + wedge(a, g.d(b)).scale((-1) ** da)
