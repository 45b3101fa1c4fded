"""Exact scalar tower: rationals, the quadratic field Q(sqrt d), its
complexification, plus helpers that also accept plain floats.

Rationals are :class:`fractions.Fraction`. A :class:`QuadScalar` is
``a + b*sqrt(d)`` with rational ``a, b`` and a positive rational radicand ``d``.
Values with different radicands combine only when the radicands differ by a
rational square; anything else raises :class:`RadicandMismatch`.
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction
from typing import Union

Rational = Fraction

_SMALL_PRIMES: list[int] = []


def _small_primes(limit: int = 1000) -> list[int]:
    if not _SMALL_PRIMES:
        sieve = bytearray([1]) * (limit + 1)
        sieve[0:2] = b"\x00\x00"
        for p in range(2, int(limit**0.5) + 1):
            if sieve[p]:
                sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
        _SMALL_PRIMES.extend(i for i, flag in enumerate(sieve) if flag)
    return _SMALL_PRIMES


class RadicandMismatch(ArithmeticError):
    """Two quadratic scalars live in different fields Q(sqrt d1) != Q(sqrt d2)."""


class NestedRadical(ValueError):
    """A square root of an irrational quadratic scalar was requested."""


def _int_square_root(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    rn = _int_square_root(q.numerator)
    rd = _int_square_root(q.denominator)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


def _normalize_radicand(b: Fraction, d: Fraction) -> tuple[Fraction, Fraction, int]:
    """Rewrite b*sqrt(d) as b'*sqrt(m) with m a positive integer.

    Returns ``(rational_part, b', m)``; when ``d`` is a perfect square the whole
    term is rational and is returned in the first slot with ``b' = 0``.
    """
    if d <= 0:
        raise ValueError(f"radicand must be positive, got {d}")
    # sqrt(p/q) = sqrt(p*q)/q
    n = d.numerator * d.denominator
    b = b / d.denominator
    k = 1
    for p in _small_primes():
        pp = p * p
        if pp > n:
            break
        while n % pp == 0:
            n //= pp
            k *= p
    r = _int_square_root(n)
    if r is not None:
        return b * k * r, Fraction(0), 1
    return Fraction(0), b * k, n


class QuadScalar:
    """Exact element ``a + b*sqrt(d)`` of a real quadratic field."""

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, a=0, b=0, d=1) -> None:
        a = Fraction(a)
        b = Fraction(b)
        d = Fraction(d)
        if b == 0:
            self._a, self._b, self._d = a, b, 1
            return
        extra, b, d = _normalize_radicand(b, d)
        self._a = a + extra
        self._b = b
        self._d = d if b else 1

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, d: int) -> QuadScalar:
        obj = object.__new__(cls)
        obj._a = a
        obj._b = b
        obj._d = d if b else 1
        return obj

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def d(self) -> int:
        return self._d

    # numbers-like protocol shared with Fraction and float
    @property
    def real(self) -> QuadScalar:
        return self

    @property
    def imag(self) -> Fraction:
        return Fraction(0)

    def conjugate(self) -> QuadScalar:
        return self

    def galois(self) -> QuadScalar:
        """The field automorphism sqrt(d) -> -sqrt(d)."""
        return QuadScalar._raw(self._a, -self._b, self._d)

    def is_rational(self) -> bool:
        return self._b == 0

    # coercion
    def _align(self, other) -> tuple[Fraction, Fraction, int] | None:
        """Return ``other`` as (a, b, d) over this value's radicand."""
        if isinstance(other, QuadScalar):
            if other._b == 0:
                return other._a, other._b, self._d
            if self._b == 0 or other._d == self._d:
                return other._a, other._b, other._d
            prod = self._d * other._d
            root = _int_square_root(prod)
            if root is None:
                raise RadicandMismatch(f"sqrt({self._d}) and sqrt({other._d}) do not share a field")
            # sqrt(d2) = root/d1 * sqrt(d1)
            return other._a, other._b * Fraction(root, self._d), self._d
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0), self._d
        return None

    def __add__(self, other):
        o = self._align(other)
        if o is None:
            return NotImplemented
        oa, ob, od = o
        d = self._d if self._b else od
        return QuadScalar._raw(self._a + oa, self._b + ob, d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._align(other)
        if o is None:
            return NotImplemented
        oa, ob, od = o
        d = self._d if self._b else od
        return QuadScalar._raw(self._a - oa, self._b - ob, d)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self) -> QuadScalar:
        return QuadScalar._raw(-self._a, -self._b, self._d)

    def __pos__(self) -> QuadScalar:
        return self

    def __mul__(self, other):
        o = self._align(other)
        if o is None:
            return NotImplemented
        oa, ob, od = o
        a, b = self._a, self._b
        if not ob:
            return QuadScalar._raw(a * oa, b * oa, self._d)
        if not b:
            return QuadScalar._raw(a * oa, a * ob, od)
        return QuadScalar._raw(a * oa + b * ob * od, a * ob + b * oa, od)

    __rmul__ = __mul__

    def inverse(self) -> QuadScalar:
        if not self._b:
            if not self._a:
                raise ZeroDivisionError("division by zero QuadScalar")
            return QuadScalar._raw(1 / self._a, Fraction(0), 1)
        norm = self._a * self._a - self._b * self._b * self._d
        return QuadScalar._raw(self._a / norm, -self._b / norm, self._d)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QuadScalar._raw(self._a / other, self._b / other, self._d)
        if isinstance(other, QuadScalar):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n: int) -> QuadScalar:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadScalar._raw(Fraction(1), Fraction(0), 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and self._a == other
        if isinstance(other, QuadScalar):
            if self._b == 0 and other._b == 0:
                return self._a == other._a
            try:
                o = self._align(other)
            except RadicandMismatch:
                return False
            return self._a == o[0] and self._b == o[1]
        return NotImplemented

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._d))

    def __bool__(self) -> bool:
        return bool(self._a) or bool(self._b)

    def sign(self) -> int:
        return quad_sign(self)

    def __lt__(self, other) -> bool:
        return quad_sign(self - other) < 0

    def __le__(self, other) -> bool:
        return quad_sign(self - other) <= 0

    def __gt__(self, other) -> bool:
        return quad_sign(self - other) > 0

    def __ge__(self, other) -> bool:
        return quad_sign(self - other) >= 0

    def __abs__(self) -> QuadScalar:
        return -self if quad_sign(self) < 0 else self

    def __float__(self) -> float:
        return to_float(self)

    def __repr__(self) -> str:
        return f"QuadScalar({self})"

    def __str__(self) -> str:
        return format_scalar(self)


class QuadComplex:
    """Exact complex number ``re + i*im`` with real and imaginary parts in Q(sqrt d)."""

    __slots__ = ("_re", "_im")

    def __init__(self, re=0, im=0) -> None:
        self._re = _as_real(re)
        self._im = _as_real(im)

    @property
    def re(self):
        return self._re

    @property
    def im(self):
        return self._im

    real = re
    imag = im

    def conjugate(self) -> QuadComplex:
        return QuadComplex(self._re, -self._im)

    def abs2(self):
        return self._re * self._re + self._im * self._im

    @staticmethod
    def _parts(other):
        if isinstance(other, QuadComplex):
            return other._re, other._im
        if isinstance(other, (int, Fraction, QuadScalar)):
            return other, 0
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return QuadComplex(self._re + p[0], self._im + p[1])

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return QuadComplex(self._re - p[0], self._im - p[1])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self) -> QuadComplex:
        return QuadComplex(-self._re, -self._im)

    def __pos__(self) -> QuadComplex:
        return self

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        c, d = p
        a, b = self._re, self._im
        if not d:
            return QuadComplex(a * c, b * c)
        return QuadComplex(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> QuadComplex:
        n = self.abs2()
        if not n:
            raise ZeroDivisionError("division by zero QuadComplex")
        return QuadComplex(self._re / n, -self._im / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, QuadScalar)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return QuadComplex(self._re / other, self._im / other)
        if isinstance(other, QuadComplex):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction, QuadScalar)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n: int) -> QuadComplex:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadComplex(1, 0)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self._re == p[0] and self._im == p[1]

    def __hash__(self) -> int:
        if not self._im:
            return hash(self._re)
        return hash((self._re, self._im))

    def __bool__(self) -> bool:
        return bool(self._re) or bool(self._im)

    def __complex__(self) -> complex:
        return to_float(self)

    def __repr__(self) -> str:
        return f"QuadComplex({self})"

    def __str__(self) -> str:
        return format_scalar(self)


Scalar = Union[int, Fraction, QuadScalar, QuadComplex, float, complex]



def _as_real(x):
    if isinstance(x, QuadScalar):
        return x.a if x.b == 0 else x
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, QuadComplex):
        raise TypeError("expected a real scalar, got QuadComplex")
    raise TypeError(f"unsupported exact scalar {x!r}")


I = QuadComplex(0, 1)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QuadScalar, QuadComplex))


def is_zero(x, tol: float = 0.0) -> bool:
    """Exact zero test for exact scalars; ``|x| <= tol`` for floats."""
    if is_exact(x):
        return not x
    return abs(x) <= tol


def quad_sign(x) -> int:
    """Exact sign of a rational or quadratic scalar (float input: plain sign)."""
    if isinstance(x, QuadScalar):
        sa = (x.a > 0) - (x.a < 0)
        sb = (x.b > 0) - (x.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb if sa == 0 else sa
        lhs = x.a * x.a
        rhs = x.b * x.b * x.d
        if lhs > rhs:
            return sa
        if lhs < rhs:
            return sb
        return 0
    if isinstance(x, QuadComplex):
        raise TypeError("sign of a complex scalar")
    return (x > 0) - (x < 0)


def qsqrt(x):
    """Square root of a non-negative exact rational, as Fraction or QuadScalar.

    Float input yields ``math.sqrt``. Irrational input raises :class:`NestedRadical`.
    """
    if isinstance(x, float):
        return math.sqrt(x)
    if isinstance(x, QuadScalar):
        if x.b:
            raise NestedRadical(f"square root of irrational {x} needs a nested radical")
        x = x.a
    x = Fraction(x)
    if x < 0:
        raise ValueError(f"square root of negative {x}")
    r = rational_sqrt(x)
    if r is not None:
        return r
    return QuadScalar(0, 1, x)


def _quad_to_float(x: QuadScalar) -> float:
    a, b, d = x.a, x.b, x.d
    if not b:
        return float(a)
    root = math.sqrt(d)
    if a and ((a > 0) != (b > 0)):
        # a and b*sqrt(d) nearly cancel: use (a^2 - b^2 d) / (a - b sqrt d)
        num = a * a - b * b * d
        return float(num) / (float(a) - float(b) * root)
    return float(a) + float(b) * root


def to_float(x):
    """Double-precision value of any scalar in the tower (complex if complex)."""
    if isinstance(x, QuadScalar):
        return _quad_to_float(x)
    if isinstance(x, QuadComplex):
        re = to_float(x.re)
        im = to_float(x.im)
        return complex(re, im)
    if isinstance(x, complex):
        return x
    if isinstance(x, numbers.Real):
        return float(x)
    return complex(x)


def _format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    """Exact string ``a+b*sqrt(d)`` (complex: ``(re)+(im)*i``); never a float for exact input."""
    if isinstance(x, QuadComplex):
        re, im = format_scalar(x.re), format_scalar(x.im)
        if not x.im:
            return re
        if not x.re:
            return f"({im})*i"
        return f"({re})+({im})*i"
    if isinstance(x, QuadScalar):
        if not x.b:
            return _format_rational(x.a)
        if x.b == 1:
            rad = f"sqrt({x.d})"
        elif x.b == -1:
            rad = f"-sqrt({x.d})"
        else:
            rad = f"{_format_rational(x.b)}*sqrt({x.d})"
        if not x.a:
            return rad
        sep = "" if rad.startswith("-") else "+"
        return f"{_format_rational(x.a)}{sep}{rad}"
    if isinstance(x, (int, Fraction)):
        return _format_rational(Fraction(x))
    return repr(x)
