"""Tokenizer and parser for form literals such as ``-e125 - 1/2*e146 + b*e236``.

Coefficients are polynomials in named parameters with exact coefficients
(rationals, ``sqrt(N)`` atoms). A parsed literal is a :class:`FormTemplate`;
binding parameter values gives an exterior :class:`~hexstable.exterior.Form`.
"""

from __future__ import annotations

import re
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

from .exterior import DIM, POSITION, Form, indices_of, mask_of
from .scalars import QuadScalar, format_scalar, qsqrt


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None, line: int | None = None) -> None:
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"column {position + 1}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.message = message
        self.position = position
        self.line = line


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<mono>e\d+)(?![A-Za-z_0-9])|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/(),=:<>]=?|\S))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    text = text.replace("−", "-")
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind is None:
            break
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


class Poly:
    """Polynomial in named parameters: {sorted name tuple: exact coefficient}."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[str, ...], object] | None = None) -> None:
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, c) -> Poly:
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> Poly:
        return cls({(name,): Fraction(1)})

    def __add__(self, other: Poly) -> Poly:
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return Poly(out)

    def __neg__(self) -> Poly:
        return Poly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        out: dict[tuple[str, ...], object] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(sorted(k1 + k2))
                out[k] = out[k] + v1 * v2 if k in out else v1 * v2
        return Poly(out)

    def constant(self):
        """The value if the polynomial has no parameters, else None."""
        if not self.terms:
            return Fraction(0)
        if set(self.terms) == {()}:
            return self.terms[()]
        return None

    @property
    def names(self) -> set[str]:
        return {n for k in self.terms for n in k}

    def evaluate(self, values: Mapping[str, object]):
        total = Fraction(0)
        for k, v in self.terms.items():
            term = v
            for n in k:
                if n not in values:
                    raise KeyError(n)
                term = term * values[n]
            total = total + term
        return total

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __str__(self) -> str:
        return format_poly(self)


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    pieces = []
    for k in sorted(p.terms, key=lambda t: (len(t), t)):
        c = p.terms[k]
        body = "*".join(k)
        cs = _coef_text(c)
        if not body:
            piece = cs
        elif c == 1:
            piece = body
        elif c == -1:
            piece = "-" + body
        else:
            piece = f"{cs}*{body}"
        pieces.append(piece)
    out = pieces[0]
    for piece in pieces[1:]:
        out += " - " + piece[1:] if piece.startswith("-") else " + " + piece
    return out


@dataclass(frozen=True)
class FormTemplate:
    """A form literal whose coefficients may mention parameters."""

    degree: int
    coefficients: tuple[tuple[int, Poly], ...]

    @property
    def params(self) -> set[str]:
        out: set[str] = set()
        for _, p in self.coefficients:
            out |= p.names
        return out

    def bind(self, values: Mapping[str, object] | None = None) -> Form:
        values = values or {}
        missing = self.params - set(values)
        if missing:
            raise KeyError(f"unbound parameters: {', '.join(sorted(missing))}")
        return Form(self.degree, {m: p.evaluate(values) for m, p in self.coefficients})

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        pieces: list[tuple[bool, str]] = []
        for m, p in self.coefficients:
            mono = "e" + "".join(map(str, indices_of(m)))
            if len(p.terms) != 1:
                pieces.append((False, f"({format_poly(p)})*{mono}"))
                continue
            ((names, c),) = p.terms.items()
            neg = not (isinstance(c, QuadScalar) and c.a and c.b) and c < 0
            mag = -c if neg else c
            head = [] if mag == 1 else [_coef_text(mag)]
            pieces.append((neg, "*".join(head + list(names) + [mono])))
        neg, body = pieces[0]
        out = ("-" if neg else "") + body
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out


def _coef_text(c) -> str:
    text = format_scalar(c)
    if isinstance(c, QuadScalar) and c.a and c.b:
        return f"({text})"
    return text


def template_from_form(form: Form) -> FormTemplate:
    return FormTemplate(form.degree, tuple((m, Poly.const(c)) for m, c in sorted(form.items(), key=lambda kv: POSITION[kv[0]])))


class _Parser:
    def __init__(self, tokens: list[Token], text: str, line: int | None = None) -> None:
        self.toks = tokens
        self.i = 0
        self.text = text
        self.line = line

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        if tok is None:
            tok = self.peek()
        pos = tok.pos if tok is not None else len(self.text)
        return ParseError(msg, pos, self.line)

    def peek(self, ahead: int = 0) -> Token | None:
        j = self.i + ahead
        return self.toks[j] if j < len(self.toks) else None

    def take(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.kind == "op" and tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok is None or tok.text != text:
            raise self.error(f"expected {text!r}")
        self.i += 1
        return tok

    # scalar expressions
    def expr(self) -> Poly:
        neg = self.accept("-")
        if not neg:
            self.accept("+")
        value = self.product()
        if neg:
            value = -value
        while True:
            if self.accept("+"):
                value = value + self.product()
            elif self.accept("-"):
                value = value - self.product()
            else:
                return value

    def product(self) -> Poly:
        value = self.factor()
        while True:
            tok = self.peek()
            if tok is None or tok.kind != "op":
                return value
            if tok.text == "*":
                nxt = self.peek(1)
                if nxt is not None and nxt.kind == "mono":
                    return value
                self.i += 1
                value = value * self.factor()
            elif tok.text == "/":
                self.i += 1
                tok = self.peek()
                div = self.factor().constant()
                if div is None:
                    raise self.error("division by a parameter is not supported", tok)
                if not div:
                    raise self.error("division by zero", tok)
                value = value * Poly.const(1 / div if isinstance(div, Fraction) else div.inverse())
            else:
                return value

    def factor(self) -> Poly:
        tok = self.peek()
        if tok is None:
            raise self.error("expected a coefficient")
        if tok.kind == "num":
            self.i += 1
            return Poly.const(Fraction(int(tok.text)))
        if tok.kind == "name":
            self.i += 1
            if tok.text == "sqrt":
                self.expect("(")
                inner_tok = self.peek()
                inner = self.expr().constant()
                self.expect(")")
                if inner is None:
                    raise self.error("sqrt of a parameter is not supported", inner_tok)
                try:
                    return Poly.const(qsqrt(inner))
                except ValueError as exc:
                    raise self.error(str(exc), inner_tok) from exc
            return Poly.var(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.i += 1
            value = self.expr()
            self.expect(")")
            return value
        if tok.kind == "op" and tok.text == "-":
            self.i += 1
            return -self.factor()
        raise self.error(f"unexpected token {tok.text!r}")

    # forms
    def monomial(self) -> tuple[int, int]:
        tok = self.take()
        if tok.kind != "mono":
            raise self.error("expected a monomial like e12", tok)
        digits = tok.text[1:]
        idx = [int(ch) for ch in digits]
        if any(not 1 <= i <= DIM for i in idx):
            raise self.error(f"index out of range 1..{DIM} in {tok.text}", tok)
        if len(set(idx)) != len(idx):
            raise self.error(f"repeated index in {tok.text}", tok)
        sign = 1
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                if idx[a] > idx[b]:
                    sign = -sign
        return mask_of(idx), sign

    def form_term(self) -> tuple[int, Poly]:
        tok = self.peek()
        if tok is not None and tok.kind == "mono":
            m, s = self.monomial()
            return m, Poly.const(Fraction(s))
        coef = self.product()
        self.accept("*")
        m, s = self.monomial()
        return m, coef if s > 0 else -coef

    def form(self, degree: int | None = None) -> FormTemplate:
        start = self.peek()
        if start is not None and start.kind == "num" and start.text == "0":
            nxt = self.peek(1)
            if nxt is None or nxt.kind == "op" and nxt.text in (",", ")"):
                self.i += 1
                if degree is None:
                    raise self.error("degree of the zero form is not determined", start)
                return FormTemplate(degree, ())
        terms: dict[int, Poly] = {}
        first = True
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == "op" and tok.text in ("+", "-"):
                self.i += 1
                sign = -1 if tok.text == "-" else 1
            elif first:
                sign = 1
            else:
                break
            first = False
            tok = self.peek()
            m, coef = self.form_term()
            deg = bin(m).count("1")
            if degree is None:
                degree = deg
            elif deg != degree:
                raise self.error(f"term of degree {deg} in a form of degree {degree}", tok)
            if sign < 0:
                coef = -coef
            terms[m] = terms[m] + coef if m in terms else coef
        coeffs = tuple((m, p) for m, p in sorted(terms.items(), key=lambda kv: POSITION[kv[0]]) if p.terms)
        return FormTemplate(degree, coeffs)


def _parser(text: str, line: int | None = None) -> _Parser:
    try:
        toks = tokenize(text)
    except ParseError as exc:
        raise ParseError(exc.message, exc.position, line) from None
    return _Parser(toks, text, line)


def parse_template(text: str, degree: int | None = None, line: int | None = None) -> FormTemplate:
    p = _parser(text, line)
    tpl = p.form(degree)
    if p.peek() is not None:
        raise p.error(f"unexpected token {p.peek().text!r}")
    return tpl


def parse_form(text: str, values: Mapping[str, object] | None = None, degree: int | None = None) -> Form:
    """Parse a form literal; parameters must be bound through ``values``."""
    return parse_template(text, degree).bind(values)


def parse_scalar(text: str):
    p = _parser(text)
    value = p.expr()
    if p.peek() is not None:
        raise p.error(f"unexpected token {p.peek().text!r}")
    c = value.constant()
    if c is None:
        raise ParseError("scalar literal mentions a parameter")
    return c


def make_parser(text: str, line: int | None = None) -> _Parser:
    return _parser(text, line)
