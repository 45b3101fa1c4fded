"""Alternating forms on a fixed 6-dimensional space with dual basis e1..e6.

A :class:`Form` stores its coefficients in a dict keyed by 6-bit masks; bit
``i-1`` set means ``e^i`` occurs. Increasing index order is implied by the mask,
so ``e^{135}`` is the mask ``0b010101``.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Mapping, Sequence
from fractions import Fraction

import numpy as np

from .linalg import FLOAT_TOL, SingularMatrix, solve
from .scalars import QuadComplex, format_scalar, is_exact, to_float

DIM = 6
TOP = (1 << DIM) - 1


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        if not 1 <= i <= DIM:
            raise ValueError(f"index {i} out of range 1..{DIM}")
        bit = 1 << (i - 1)
        if m & bit:
            raise ValueError(f"repeated index {i}")
        m |= bit
    return m


def indices_of(mask: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(DIM) if mask >> i & 1)


def degree_of(mask: int) -> int:
    return bin(mask).count("1")


BASIS: dict[int, list[int]] = {
    k: [mask_of(c) for c in itertools.combinations(range(1, DIM + 1), k)] for k in range(DIM + 1)
}
POSITION: dict[int, int] = {m: i for k in BASIS for i, m in enumerate(BASIS[k])}


def _make_sign_table() -> list[list[int]]:
    table = [[0] * 64 for _ in range(64)]
    for a in range(64):
        for b in range(64):
            if a & b:
                continue
            # inversions: pairs (i in a, j in b) with i > j
            inv = 0
            for j in range(DIM):
                if b >> j & 1:
                    inv += degree_of(a >> (j + 1))
            table[a][b] = -1 if inv & 1 else 1
    return table


WEDGE_SIGN = _make_sign_table()


def _prune(coeffs: Mapping[int, object]) -> dict[int, object]:
    return {m: c for m, c in coeffs.items() if c}


class Form:
    """A homogeneous alternating form of fixed degree."""

    __slots__ = ("degree", "_c")

    def __init__(self, degree: int, coeffs: Mapping[int, object] | None = None) -> None:
        if not 0 <= degree <= DIM:
            raise ValueError(f"degree {degree} out of range")
        self.degree = degree
        c = _prune(coeffs or {})
        for m in c:
            if degree_of(m) != degree:
                raise ValueError(f"mask {indices_of(m)} does not have degree {degree}")
        self._c = c

    @classmethod
    def _trusted(cls, degree: int, coeffs: dict[int, object]) -> Form:
        obj = object.__new__(cls)
        obj.degree = degree
        obj._c = coeffs
        return obj

    @classmethod
    def from_terms(cls, degree: int, terms: Mapping[tuple[int, ...], object]) -> Form:
        acc: dict[int, object] = {}
        for idx, c in terms.items():
            sign = _sort_sign(idx)
            if sign == 0:
                continue
            m = mask_of(idx)
            acc[m] = acc.get(m, 0) + sign * c
        return cls(degree, acc)

    @classmethod
    def from_vector(cls, degree: int, vec: Sequence) -> Form:
        return cls(degree, {m: x for m, x in zip(BASIS[degree], vec)})

    def to_vector(self, zero=Fraction(0)) -> list:
        return [self._c.get(m, zero) for m in BASIS[self.degree]]

    def items(self):
        return self._c.items()

    def terms(self) -> list[tuple[tuple[int, ...], object]]:
        return [(indices_of(m), self._c[m]) for m in BASIS[self.degree] if m in self._c]

    @property
    def coefficients(self) -> dict[tuple[int, ...], object]:
        return dict(self.terms())

    def __getitem__(self, key) -> object:
        m = key if isinstance(key, int) else mask_of(key)
        return self._c.get(m, 0)

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_zero(self, tol: float = 0.0) -> bool:
        if not tol:
            return not self._c
        return self.norm_inf() <= tol

    def norm_inf(self) -> float:
        return max((abs(to_float(c)) for c in self._c.values()), default=0.0)

    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self._c.values())

    def _check(self, other: Form) -> None:
        if not isinstance(other, Form):
            raise TypeError(f"expected Form, got {type(other).__name__}")
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch {self.degree} vs {other.degree}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        c = dict(self._c)
        for m, x in other._c.items():
            c[m] = c[m] + x if m in c else x
        return Form._trusted(self.degree, _prune(c))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        c = dict(self._c)
        for m, x in other._c.items():
            c[m] = c[m] - x if m in c else -x
        return Form._trusted(self.degree, _prune(c))

    def __neg__(self) -> Form:
        return Form._trusted(self.degree, {m: -x for m, x in self._c.items()})

    def scale(self, s) -> Form:
        if not s:
            return Form._trusted(self.degree, {})
        return Form._trusted(self.degree, _prune({m: s * x for m, x in self._c.items()}))

    def __mul__(self, other):
        if isinstance(other, Form):
            return wedge(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, s) -> Form:
        return Form._trusted(self.degree, _prune({m: x / s for m, x in self._c.items()}))

    def __pow__(self, n: int) -> Form:
        result = Form(0, {0: Fraction(1)})
        for _ in range(n):
            result = wedge(result, self)
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self._c
        if not isinstance(other, Form):
            return NotImplemented
        return self.degree == other.degree and self._c == other._c

    def __hash__(self) -> int:
        return hash((self.degree, frozenset(self._c.items())))

    def map(self, fn: Callable[[object], object]) -> Form:
        return Form._trusted(self.degree, _prune({m: fn(x) for m, x in self._c.items()}))

    def conjugate(self) -> Form:
        return self.map(lambda x: x.conjugate())

    @property
    def real(self) -> Form:
        return self.map(lambda x: x.real)

    @property
    def imag(self) -> Form:
        return self.map(lambda x: x.imag)

    def to_float(self) -> Form:
        return self.map(to_float)

    def top(self):
        """Coefficient on e^{123456} of a 6-form."""
        if self.degree != DIM:
            raise ValueError("top() needs a 6-form")
        return self._c.get(TOP, 0)

    def wedge(self, other: Form) -> Form:
        return wedge(self, other)

    def __repr__(self) -> str:
        return f"Form({self.degree}, {format_form(self)!r})"

    def __str__(self) -> str:
        return format_form(self)


def _sort_sign(idx: Sequence[int]) -> int:
    if len(set(idx)) != len(idx):
        return 0
    inv = sum(1 for a, b in itertools.combinations(idx, 2) if a > b)
    return -1 if inv & 1 else 1


def zero(degree: int) -> Form:
    return Form._trusted(degree, {})


def one() -> Form:
    return Form._trusted(0, {0: Fraction(1)})


def monomial(indices: Sequence[int], coef=1) -> Form:
    """``coef * e^{i1} ^ ... ^ e^{ik}`` for indices in any order."""
    return Form.from_terms(len(indices), {tuple(indices): Fraction(coef) if isinstance(coef, int) else coef})


def e(*indices: int) -> Form:
    return monomial(indices)


def covector(values: Sequence) -> Form:
    """The 1-form sum_l values[l] e^{l+1}."""
    return Form(1, {1 << l: x for l, x in enumerate(values)})


VOLUME = e(1, 2, 3, 4, 5, 6)


def wedge(a: Form, b: Form) -> Form:
    deg = a.degree + b.degree
    if deg > DIM:
        raise ValueError(f"wedge degree {deg} exceeds {DIM}")
    out: dict[int, object] = {}
    for ma, xa in a._c.items():
        row = WEDGE_SIGN[ma]
        for mb, xb in b._c.items():
            s = row[mb]
            if not s:
                continue
            m = ma | mb
            val = xa * xb
            if s < 0:
                val = -val
            out[m] = out[m] + val if m in out else val
    return Form._trusted(deg, _prune(out))


def wedge_all(*forms: Form) -> Form:
    result = one()
    for f in forms:
        result = wedge(result, f)
    return result


def contract(v, a: Form) -> Form:
    """Interior product; ``v`` is a basis index 1..6 or a sequence of 6 components."""
    if a.degree == 0:
        raise ValueError("cannot contract a 0-form")
    if isinstance(v, int):
        bit = 1 << (v - 1)
        out = {}
        for m, x in a._c.items():
            if m & bit:
                pos = degree_of(m & (bit - 1))
                out[m ^ bit] = -x if pos & 1 else x
        return Form._trusted(a.degree - 1, out)
    result = zero(a.degree - 1)
    for i, comp in enumerate(v, start=1):
        if comp:
            result = result + contract(i, a).scale(comp)
    return result


def evaluate(a: Form, *vectors: Sequence):
    """a(v1, ..., vk) for component vectors."""
    if len(vectors) != a.degree:
        raise ValueError("argument count does not match degree")
    cur = a
    for v in vectors:
        cur = contract(v, cur)
    return cur[()] if cur else 0


_INDEX_ARRAYS: dict[int, np.ndarray] = {
    k: np.array([[i - 1 for i in indices_of(m)] for m in BASIS[k]], dtype=int).reshape(len(BASIS[k]), k)
    for k in range(DIM + 1)
}


def _minor(t: Sequence[Sequence], rows: tuple[int, ...], cols: tuple[int, ...]):
    k = len(rows)
    if k == 1:
        return t[rows[0]][cols[0]]
    if k == 2:
        r0, r1 = t[rows[0]], t[rows[1]]
        return r0[cols[0]] * r1[cols[1]] - r0[cols[1]] * r1[cols[0]]
    # Laplace expansion along the first row
    first = t[rows[0]]
    total = 0
    for j, c in enumerate(cols):
        x = first[c]
        if x:
            sub = _minor(t, rows[1:], cols[:j] + cols[j + 1 :])
            total = total + x * sub if j % 2 == 0 else total - x * sub
    return total


def pullback(t: Sequence[Sequence], a: Form) -> Form:
    """T*a with (T*a)(v1..vk) = a(Tv1..Tvk); T*e^i = sum_l T[i][l] e^l."""
    k = a.degree
    if k == 0 or not a:
        return a
    floaty = not a.is_exact() or any(not is_exact(x) for row in t for x in row)
    if floaty:
        dtype = complex if _has_complex(t, a) else float
        arr = np.array([[to_float(x) for x in row] for row in t], dtype=dtype)
        src = BASIS[k]
        idx = _INDEX_ARRAYS[k]
        vec = np.array([to_float(a._c.get(m, 0)) for m in src], dtype=dtype)
        # compound matrix C[I, J] = det T[I rows, J cols]
        sub = arr[idx[:, None, :, None], idx[None, :, None, :]]
        comp = np.linalg.det(sub) if k > 1 else sub[:, :, 0, 0]
        out = vec @ comp
        return Form._trusted(k, _prune({m: _py(x) for m, x in zip(BASIS[k], out)}))
    out: dict[int, object] = {}
    cols_all = [indices_of(m) for m in BASIS[k]]
    for ma, xa in a._c.items():
        rows = tuple(i - 1 for i in indices_of(ma))
        for mb, cols in zip(BASIS[k], cols_all):
            val = _minor(t, rows, tuple(c - 1 for c in cols))
            if val:
                val = xa * val
                out[mb] = out[mb] + val if mb in out else val
    return Form._trusted(k, _prune(out))


def _has_complex(t, a: Form) -> bool:
    kinds = (complex, np.complexfloating, QuadComplex)
    return any(isinstance(x, kinds) for row in t for x in row) or any(
        isinstance(x, kinds) for x in a._c.values()
    )


def _py(x):
    if isinstance(x, np.complexfloating):
        return complex(x)
    return float(x)


def lefschetz_matrix(omega: Form) -> list[list]:
    """Matrix of X -> X ^ omega from 2-forms to 4-forms in the lexicographic bases."""
    cols = [wedge(Form._trusted(2, {m: Fraction(1)}), omega) for m in BASIS[2]]
    return [[col._c.get(r, 0) for col in cols] for r in BASIS[4]]


class DegenerateForm(ArithmeticError):
    """A 2-form with vanishing top power where a non-degenerate one is needed."""


def lefschetz_solve(omega: Form, rhs: Form) -> Form:
    """The unique 2-form X with X ^ omega = rhs (omega non-degenerate)."""
    if omega.degree != 2 or rhs.degree != 4:
        raise ValueError("lefschetz_solve expects a 2-form and a 4-form")
    mat = lefschetz_matrix(omega)
    floaty = not omega.is_exact() or not rhs.is_exact()
    if floaty:
        b = np.array([to_float(rhs._c.get(m, 0.0)) for m in BASIS[4]])
        dtype = complex if np.iscomplexobj(b) or _has_complex([], omega) else float
        a = np.array([[to_float(x) for x in row] for row in mat], dtype=dtype)
        try:
            x = np.linalg.solve(a.astype(dtype), b.astype(dtype))
        except np.linalg.LinAlgError as exc:
            raise DegenerateForm("omega is degenerate") from exc
        return Form._trusted(2, _prune({m: _py(v) for m, v in zip(BASIS[2], x)}))
    b = [rhs._c.get(m, Fraction(0)) for m in BASIS[4]]
    try:
        x = solve(mat, b)
    except SingularMatrix as exc:
        raise DegenerateForm("omega is degenerate") from exc
    return Form(2, dict(zip(BASIS[2], x)))


def volume_ratio(a: Form, vol: Form = VOLUME):
    """The scalar c with a = c * vol for top-degree forms."""
    if a.degree != DIM or vol.degree != DIM:
        raise ValueError("volume_ratio expects 6-forms")
    v = vol.top()
    if not v:
        raise ZeroDivisionError("reference volume is zero")
    return a.top() / v


def allclose(a: Form, b: Form, tol: float = FLOAT_TOL) -> bool:
    return (a - b).norm_inf() <= tol


def format_form(a: Form) -> str:
    """Literal syntax ``-e125 - 1/2*e146 + sqrt(5)*e236``; '0' for the zero form."""
    if not a:
        return "0"
    parts: list[str] = []
    for idx, c in a.terms():
        mono = "e" + "".join(map(str, idx)) if idx else "1"
        sign, body = _split_sign(c)
        if body == "1" and idx:
            term = mono
        elif not idx:
            term = body
        else:
            term = f"{body}*{mono}"
        if not parts:
            parts.append(("-" if sign < 0 else "") + term)
        else:
            parts.append(("- " if sign < 0 else "+ ") + term)
    return " ".join(parts)


def _split_sign(c) -> tuple[int, str]:
    if not is_exact(c):
        if isinstance(c, complex):
            return 1, f"({c.real!r}{c.imag:+}j)"
        return (-1, repr(-c)) if c < 0 else (1, repr(c))
    from .scalars import QuadScalar

    if isinstance(c, QuadComplex):
        if c.im:
            return 1, f"({format_scalar(c)})"
        c = c.re
    if isinstance(c, QuadScalar):
        if not c.b:
            c = c.a
        elif not c.a:
            if c.b < 0:
                return -1, format_scalar(-c)
            return 1, format_scalar(c)
        else:
            return 1, f"({format_scalar(c)})"
    q = Fraction(c)
    s = -1 if q < 0 else 1
    return s, format_scalar(abs(q))
