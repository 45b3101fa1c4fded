from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy as sp

import oracle
from hexstable import catalog as cat
from hexstable.exterior import DIM, VOLUME, Form, pullback, volume_ratio, wedge, wedge_all
from hexstable.liealg import closed_form_basis, random_combination
from hexstable.linalg import identity, matmul
from hexstable.scalars import QuadComplex, to_float
from hexstable.stable import (
    NotDefinite,
    NotStable,
    almost_complex,
    coframe_from_indices,
    complex_coframe,
    hitchin_lambda,
    is_type,
    k_endomorphism,
    model_form,
    type_components,
    u_filtration,
    valid_coframes,
)
from hexstable.syntax import parse_form

RHO0 = model_form()
OMEGA0 = parse_form("e12+e34+e56")


def _random_rational_3form(rng):
    return Form(3, {m: Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for m in range(64) if bin(m).count("1") == 3})


def _random_definite(rng):
    while True:
        rho = _random_rational_3form(rng)
        try:
            return rho, almost_complex(rho)
        except (NotStable, NotDefinite):
            pass


def _sym(m) -> sp.Matrix:
    return sp.Matrix([[sp.nsimplify(str(x)) if not isinstance(x, Fraction) else sp.Rational(x.numerator, x.denominator) for x in row] for row in m])


def test_k_examples():
    assert all(not x for row in k_endomorphism(parse_form("e123")) for x in row)
    k = k_endomorphism(RHO0)
    assert matmul(k, k) == [[-4 * x for x in row] for row in identity()]
    k2 = k_endomorphism(RHO0.scale(2))
    assert k2 == [[4 * x for x in row] for row in k]


def test_k_matches_oracle():
    rng = random.Random(8)
    for _ in range(4):
        rho = _random_rational_3form(rng)
        assert _sym(k_endomorphism(rho)) == oracle.k_matrix(oracle.from_form(rho))
        assert sp.Rational(str(hitchin_lambda(rho))) == oracle.hitchin_lambda(oracle.from_form(rho))


def test_k_defining_identity():
    rng = random.Random(9)
    rho = _random_rational_3form(rng)
    k = k_endomorphism(rho)
    from hexstable.exterior import contract

    for j in range(DIM):
        five = wedge(contract(j + 1, rho), rho)
        for i in range(DIM):
            assert volume_ratio(wedge(Form(1, {1 << i: 1}), five)) == k[i][j]


def test_lambda_examples():
    assert hitchin_lambda(RHO0) == -4
    assert hitchin_lambda(cat.nilpotent(18).algebra.d(parse_form("e56"))) == -4
    assert hitchin_lambda(cat.nilpotent(5).algebra.d(parse_form("e56"))) == 1


def test_lambda_sign_ignores_volume_scale():
    rho = RHO0 + parse_form("e123")
    assert hitchin_lambda(rho, VOLUME.scale(3)) * 9 == hitchin_lambda(rho)


def test_almost_complex_examples():
    t = almost_complex(RHO0)
    assert t.rho_hat == parse_form("e136+e145+e235-e246")
    for s in (2, -1, Fraction(1, 3)):
        assert almost_complex(RHO0.scale(s)).J == t.J
    with pytest.raises(NotStable):
        almost_complex(parse_form("e123"))
    with pytest.raises(NotDefinite):
        almost_complex(parse_form("e123+e456"))


def test_j_squares_to_minus_identity_exactly():
    rng = random.Random(10)
    for _ in range(10):
        _, t = _random_definite(rng)
        assert matmul(t.J, t.J) == [[-x for x in row] for row in identity()]


def test_rho_hat_matches_oracle():
    rng = random.Random(12)
    _, t = _random_definite(rng)
    want = oracle.to_float_dict(oracle.rho_hat(oracle.from_form(t.rho)))
    got = {k: to_float(v) for k, v in t.rho_hat.terms()}
    assert set(got) == set(want)
    assert all(abs(got[k] - want[k]) < 1e-12 for k in got)


def test_hat_examples():
    t = almost_complex(RHO0)
    assert almost_complex(t.rho_hat).rho_hat == -RHO0
    assert volume_ratio(wedge(RHO0, t.rho_hat)) == 4
    assert wedge(RHO0, t.rho_hat).scale(Fraction(3, 2)) == wedge_all(OMEGA0, OMEGA0, OMEGA0)


def test_coframe_examples():
    assert complex_coframe(almost_complex(RHO0)).indices == (1, 3, 5)
    exact = cat.nilpotent(18).algebra.d(parse_form("e56"))
    assert complex_coframe(almost_complex(exact)).indices == (1, 3, 5)
    rng = random.Random(13)
    for _ in range(5):
        _, t = _random_definite(rng)
        cf = complex_coframe(t)
        vol = wedge_all(*(cf.xi(j) for j in range(3)), *(cf.xibar(j) for j in range(3)))
        assert vol


def test_invalid_coframe_rejected():
    t = almost_complex(RHO0)
    with pytest.raises(ValueError):
        coframe_from_indices(t, (1, 2, 3))
    assert (1, 3, 5) in valid_coframes(t)


def test_type_examples():
    t = almost_complex(RHO0)
    assert set(type_components(t, OMEGA0)) == {(1, 1)}
    assert is_type(t, OMEGA0, (1, 1))
    psi = RHO0.map(lambda x: QuadComplex(x)) + t.rho_hat.map(lambda x: QuadComplex(0, x))
    assert set(type_components(t, psi)) == {(3, 0)}
    g = cat.nilpotent(24).algebra
    rng = random.Random(14)
    basis = closed_form_basis(g, 3)
    done = 0
    while done < 3:
        rho = random_combination(basis, rng)
        try:
            tt = almost_complex(rho)
        except (NotStable, NotDefinite):
            continue
        assert set(type_components(tt, g.d(tt.rho_hat))) <= {(2, 2)}
        done += 1


def test_type_pieces_sum_and_are_eigenforms():
    rng = random.Random(15)
    _, t = _random_definite(rng)
    a = _random_rational_3form(rng)
    comps = type_components(t, a)
    total = Form(3, {})
    for piece in comps.values():
        total = total + piece
    assert total.map(lambda x: x.re if isinstance(x, QuadComplex) else x) == a
    for (p, q), piece in comps.items():
        factor = QuadComplex(0, 1) ** ((p - q) % 4)
        assert pullback(t.J, piece) == piece.scale(factor)


def test_u_filtration_examples():
    omega, rho = cat.nilpotent(21).forms()
    assert u_filtration(almost_complex(rho))[1] == 2
    omega, rho = cat.nilpotent(11).forms()
    dims = u_filtration(almost_complex(rho))
    assert dims[2] == dims[3]
    dims = u_filtration(almost_complex(RHO0))
    assert dims[4] == 4
    assert all(x % 2 == 0 for x in dims) and dims == sorted(dims) and dims[5] == 6
