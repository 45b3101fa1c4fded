"""Small dense linear algebra over exact fields, with a numpy route for floats.

Matrices are lists of rows. Entries may be ``Fraction``, ``QuadScalar``,
``QuadComplex`` (exact Gaussian elimination) or Python/numpy floats and complex
numbers (numpy with a tolerance).
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

import numpy as np

from .scalars import is_exact, to_float

FLOAT_TOL = 1e-9


class SingularMatrix(ArithmeticError):
    pass


def _is_float_matrix(rows: Sequence[Sequence]) -> bool:
    for row in rows:
        for x in row:
            if not is_exact(x):
                return True
    return False


def as_array(rows: Sequence[Sequence]) -> np.ndarray:
    """numpy array of mixed exact/float entries; complex dtype only when needed."""
    vals = [[to_float(x) for x in row] for row in rows]
    if any(isinstance(x, complex) for row in vals for x in row):
        return np.array(vals, dtype=complex)
    return np.array(vals, dtype=float)


def _copy(rows: Sequence[Sequence]) -> list[list]:
    return [[x if not isinstance(x, int) else Fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Exact reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    m = _copy(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv if x else x for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y if y else x for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], tol: float = FLOAT_TOL) -> int:
    if not rows or not len(rows[0]):
        return 0
    if _is_float_matrix(rows):
        return int(np.linalg.matrix_rank(as_array(rows), tol=tol))
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of {x : M x = 0}. Exact entries give an exact basis in RREF-dual form."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    if _is_float_matrix(rows):
        a = as_array(rows)
        _, s, vh = np.linalg.svd(a)
        r = int((s > FLOAT_TOL * max(1.0, s[0] if len(s) else 1.0)).sum())
        return [list(v.conj()) for v in vh[r:]]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            if row[f]:
                v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list:
    """Solve the square system ``a x = b``; raises SingularMatrix."""
    n = len(a)
    if _is_float_matrix(a) or _is_float_matrix([b]):
        arr = as_array(a)
        try:
            return list(np.linalg.solve(arr, as_array([b])[0]))
        except np.linalg.LinAlgError as exc:
            raise SingularMatrix(str(exc)) from exc
    aug = [list(row) + [b[i]] for i, row in enumerate(_copy(a))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        raise SingularMatrix("system is singular or inconsistent")
    return [red[i][n] for i in range(n)]


def inverse(a: Sequence[Sequence]) -> list[list]:
    n = len(a)
    if _is_float_matrix(a):
        try:
            return np.linalg.inv(as_array(a)).tolist()
        except np.linalg.LinAlgError as exc:
            raise SingularMatrix(str(exc)) from exc
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(_copy(a))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return [row[n:] for row in red]


def det(a: Sequence[Sequence]):
    """Determinant by exact elimination (cofactor expansion for n <= 3)."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    if n == 3:
        return (
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        )
    if _is_float_matrix(a):
        return np.linalg.det(as_array(a))
    m = _copy(a)
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            result = -result
        piv = m[c][c]
        result = result * piv
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / piv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def identity(n: int = 6) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def span_dim(vectors: Sequence[Sequence]) -> int:
    return rank(vectors) if vectors else 0


def intersection_dim(u: Sequence[Sequence], w: Sequence[Sequence]) -> int:
    """dim(U cap W) = dim U + dim W - dim(U + W)."""
    if not u or not w:
        return 0
    return span_dim(u) + span_dim(w) - span_dim(list(u) + list(w))


def in_span(v: Sequence, basis: Sequence[Sequence]) -> bool:
    if not basis:
        return all(not x for x in v) if not _is_float_matrix([v]) else max(abs(x) for x in v) <= FLOAT_TOL
    return span_dim(list(basis) + [list(v)]) == span_dim(basis)
