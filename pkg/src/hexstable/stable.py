"""Stable 3-forms: the endomorphism K, the quartic invariant lambda, the induced
almost complex structure J, the hat form, (1,0)-coframes and type splittings.

Conventions. The reference volume is nu = e^{123456}. Column j of K is the
vector w with ``alpha ^ (iota_{e_j} rho) ^ rho = alpha(w) nu``. For lambda < 0,
``J = -K / sqrt(-lambda)`` and ``rho_hat = J^* rho = rho(J., J., J.)``. A matrix
acts on 1-forms by ``(J^* e^k) = sum_l J[k][l] e^l`` (row k).
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .exterior import (
    BASIS,
    DIM,
    TOP,
    VOLUME,
    WEDGE_SIGN,
    Form,
    covector,
    pullback,
    zero,
)
from .scalars import QuadComplex, is_exact, qsqrt, quad_sign, to_float

FLOAT_TOL = 1e-9


class NotStable(ArithmeticError):
    """lambda(rho) = 0."""


class NotDefinite(ArithmeticError):
    """lambda(rho) > 0: the form is stable but induces a paracomplex structure."""


def _k_terms() -> dict[tuple[int, int], list[tuple[int, int, int]]]:
    """For each (i, j): (A, B, sign) with e^i ^ (iota_{e_j} e^A) ^ e^B = sign * nu."""
    terms: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
    threes = BASIS[3]
    for j in range(DIM):
        bj = 1 << j
        for a in threes:
            if not a & bj:
                continue
            s1 = -1 if bin(a & (bj - 1)).count("1") & 1 else 1
            rest = a ^ bj
            for b in threes:
                if rest & b:
                    continue
                s2 = WEDGE_SIGN[rest][b]
                miss = TOP ^ (rest | b)
                i = miss.bit_length() - 1
                s3 = WEDGE_SIGN[miss][rest | b]
                terms.setdefault((i, j), []).append((a, b, s1 * s2 * s3))
    return terms


_K_TERMS = _k_terms()


def k_endomorphism(rho: Form, nu: Form = VOLUME) -> list[list]:
    """The matrix K with K[i][j] = coefficient of e^i ^ (iota_{e_j} rho) ^ rho over nu."""
    if rho.degree != 3:
        raise ValueError("k_endomorphism needs a 3-form")
    vol = nu.top()
    if not vol:
        raise ZeroDivisionError("reference volume is zero")
    c = dict(rho.items())
    zero_ = Fraction(0) if rho.is_exact() else 0.0
    k = [[zero_] * DIM for _ in range(DIM)]
    for (i, j), lst in _K_TERMS.items():
        total = zero_
        for a, b, s in lst:
            xa = c.get(a)
            if xa is None:
                continue
            xb = c.get(b)
            if xb is None:
                continue
            term = xa * xb
            total = total + term if s > 0 else total - term
        k[i][j] = total / vol if vol != 1 else total
    return k


def hitchin_lambda(rho: Form, nu: Form = VOLUME):
    """lambda(rho) = Tr(K^2) / 6."""
    k = k_endomorphism(rho, nu)
    tr = sum((k[i][j] * k[j][i] for i in range(DIM) for j in range(DIM)), Fraction(0))
    return tr / 6


@dataclass(frozen=True)
class DefiniteTriple:
    """A definite 3-form with its K, lambda, J = kappa*K (kappa = -1/sqrt(-lambda)) and rho_hat."""

    rho: Form
    K: tuple[tuple, ...]
    lam: object
    kappa: object
    J: tuple[tuple, ...]
    rho_hat: Form

    @property
    def exact(self) -> bool:
        return is_exact(self.lam)

    def pull(self, a: Form) -> Form:
        """J^* a, computed as kappa^deg * K^* a so exact data stays in few radicals."""
        if a.degree == 0 or not a:
            return a
        factor = self.kappa ** a.degree
        return pullback(self.K, a).scale(factor)

    def jstar(self, alpha: Form) -> Form:
        """J^* on a 1-form: (J^* alpha)(v) = alpha(J v)."""
        vec = alpha.to_vector(Fraction(0) if self.exact else 0.0)
        return covector([sum((vec[k] * self.J[k][l] for k in range(DIM)), Fraction(0)) for l in range(DIM)])

    def apply(self, v: Sequence) -> list:
        """J v for a vector of components."""
        return [sum((self.J[i][j] * v[j] for j in range(DIM)), Fraction(0)) for i in range(DIM)]


def almost_complex(rho: Form, tol: float = FLOAT_TOL) -> DefiniteTriple:
    """The almost complex structure induced by a definite 3-form."""
    k = k_endomorphism(rho)
    lam = sum((k[i][j] * k[j][i] for i in range(DIM) for j in range(DIM)), Fraction(0)) / 6
    if rho.is_exact():
        sgn = quad_sign(lam)
        if sgn == 0:
            raise NotStable("lambda(rho) = 0")
        if sgn > 0:
            raise NotDefinite(f"lambda(rho) = {lam} > 0")
        s = qsqrt(-lam)
    else:
        lam = float(to_float(lam))
        if abs(lam) <= tol:
            raise NotStable(f"lambda(rho) = {lam} is numerically zero")
        if lam > 0:
            raise NotDefinite(f"lambda(rho) = {lam} > 0")
        s = qsqrt(-lam)
    kappa = -1 / s
    j = tuple(tuple(kappa * x for x in row) for row in k)
    kt = tuple(tuple(row) for row in k)
    rho_hat = pullback(kt, rho).scale(kappa**3)
    return DefiniteTriple(rho, kt, lam, kappa, j, rho_hat)


def hat(triple: DefiniteTriple) -> Form:
    return triple.rho_hat


@dataclass(frozen=True)
class ComplexCoframe:
    """xi^j = a_j - i b_j with a_j = e^{k_j} and b_j = J^* e^{k_j}."""

    indices: tuple[int, int, int]
    a: tuple[Form, Form, Form]
    b: tuple[Form, Form, Form]

    @property
    def exact(self) -> bool:
        return all(f.is_exact() for f in self.b)

    def xi(self, j: int) -> Form:
        return _complex_form(self.a[j], self.b[j], -1, self.exact)

    def xibar(self, j: int) -> Form:
        return _complex_form(self.a[j], self.b[j], 1, self.exact)

    def real_basis(self) -> list[Form]:
        """(a_1, b_1, a_2, b_2, a_3, b_3)."""
        return [f for pair in zip(self.a, self.b) for f in pair]


def _complex_form(re: Form, im: Form, sign: int, exact: bool) -> Form:
    out = {}
    for m in BASIS[1]:
        x, y = re[m], im[m]
        if not x and not y:
            continue
        out[m] = QuadComplex(x, sign * y) if exact else complex(to_float(x), sign * to_float(y))
    return Form(1, out)


def _row_form(triple: DefiniteTriple, k: int) -> Form:
    return covector(triple.J[k - 1])


def coframe_from_indices(triple: DefiniteTriple, indices: Sequence[int]) -> ComplexCoframe:
    """Coframe built from the given indices; raises ValueError if they are dependent."""
    ks = tuple(indices)
    if len(ks) != 3:
        raise ValueError("need three indices")
    rows = []
    for k in ks:
        rows.append(_unit_row(k))
        rows.append(list(triple.J[k - 1]))
    if linalg.rank(rows) != DIM:
        raise ValueError(f"indices {ks} do not give a (1,0)-coframe")
    a = tuple(covector(_unit_row(k)) for k in ks)
    b = tuple(_row_form(triple, k) for k in ks)
    return ComplexCoframe(ks, a, b)  # type: ignore[arg-type]


def _unit_row(k: int) -> list[Fraction]:
    return [Fraction(int(l == k - 1)) for l in range(DIM)]


def complex_coframe(triple: DefiniteTriple) -> ComplexCoframe:
    """Greedy: the lexicographically smallest k1 < k2 < k3 with independent zeta^k."""
    span: list[list] = []
    chosen: list[int] = []
    for k in range(1, DIM + 1):
        cand = span + [_unit_row(k)]
        if linalg.rank(cand) > len(span):
            span = cand + [list(triple.J[k - 1])]
            chosen.append(k)
            if len(chosen) == 3:
                break
    return coframe_from_indices(triple, chosen)


def valid_coframes(triple: DefiniteTriple) -> list[tuple[int, int, int]]:
    """Every index triple that yields a coframe."""
    import itertools

    out = []
    for ks in itertools.combinations(range(1, DIM + 1), 3):
        try:
            coframe_from_indices(triple, ks)
        except ValueError:
            continue
        out.append(ks)
    return out


def _basis_change(coframe: ComplexCoframe):
    """(P, Q): theta = P e and e = Q theta with theta = (xi^1..3, xibar^1..3)."""
    exact = coframe.exact
    theta = [coframe.xi(j) for j in range(3)] + [coframe.xibar(j) for j in range(3)]
    zero_ = Fraction(0) if exact else 0j
    p = [[t[1 << l] if t[1 << l] else zero_ for l in range(DIM)] for t in theta]
    # real basis R e = (a1, b1, a2, b2, a3, b3); a = (xi + xibar)/2, b = i (xi - xibar)/2
    r = [f.to_vector(Fraction(0) if exact else 0.0) for f in coframe.real_basis()]
    rinv = linalg.inverse(r)
    half = Fraction(1, 2) if exact else 0.5
    ihalf = QuadComplex(0, Fraction(1, 2)) if exact else 0.5j
    q = []
    for l in range(DIM):
        row = [zero_] * DIM
        for j in range(3):
            ca = rinv[l][2 * j]
            cb = rinv[l][2 * j + 1]
            row[j] = row[j] + ca * half + cb * ihalf
            row[j + 3] = row[j + 3] + ca * half - cb * ihalf
        q.append(row)
    return p, q


def type_components(triple: DefiniteTriple, a: Form, coframe: ComplexCoframe | None = None) -> dict[tuple[int, int], Form]:
    """Split a (real or complex) form into its (p, q) pieces with respect to J."""
    coframe = coframe or complex_coframe(triple)
    p, q = _basis_change(coframe)
    in_theta = pullback(q, a)
    buckets: dict[tuple[int, int], dict[int, object]] = {}
    for m, c in in_theta.items():
        pq = (bin(m & 0b000111).count("1"), bin(m & 0b111000).count("1"))
        buckets.setdefault(pq, {})[m] = c
    out = {}
    for pq, coeffs in buckets.items():
        piece = pullback(p, Form(a.degree, coeffs))
        if piece:
            out[pq] = piece
    return out


def is_type(triple: DefiniteTriple, a: Form, pq: tuple[int, int], tol: float = 0.0) -> bool:
    comps = type_components(triple, a)
    return all(k == pq or v.is_zero(tol) for k, v in comps.items())


def u_filtration(triple: DefiniteTriple, flag: Sequence[Form] | None = None) -> list[int]:
    """dims of U_j = V_j cap J^*V_j for V_j = span(alpha^1..alpha^j), j = 1..6."""
    if flag is None:
        flag = [covector(_unit_row(k)) for k in range(1, DIM + 1)]
    zero_ = Fraction(0) if triple.exact else 0.0
    vs = [f.to_vector(zero_) for f in flag]
    js = [triple.jstar(f).to_vector(zero_) for f in flag]
    dims = []
    for j in range(1, DIM + 1):
        dims.append(linalg.intersection_dim(vs[:j], js[:j]))
    return dims


def model_form() -> Form:
    """e^135 - e^146 - e^236 - e^245, the model definite 3-form."""
    from .syntax import parse_form

    return parse_form("e135-e146-e236-e245")


__all__ = [
    "ComplexCoframe",
    "DefiniteTriple",
    "NotDefinite",
    "NotStable",
    "almost_complex",
    "coframe_from_indices",
    "complex_coframe",
    "hat",
    "hitchin_lambda",
    "is_type",
    "k_endomorphism",
    "model_form",
    "type_components",
    "u_filtration",
    "valid_coframes",
    "zero",
]
