"""Six-dimensional Lie algebras given by their structure equations de^1..de^6.

The Chevalley-Eilenberg differential is the antiderivation extending the
stored 2-forms. Subalgebra data (center, derived algebra, lower central
series) is read off from d alone, so no bracket sign convention is needed:
for the dual basis, ``e^k([x, y]) = -de^k(x, y)``.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .exterior import BASIS, DIM, Form, contract, e, evaluate, indices_of, wedge, zero
from .syntax import FormTemplate, ParseError, Poly, make_parser, template_from_form


class UnboundParameter(ValueError):
    pass


class ParameterOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class ParamRange:
    """Admissible values ``lo (<|<=) x (<|<=) hi`` plus an optional finite set."""

    lo: Fraction | None = None
    lo_strict: bool = False
    hi: Fraction | None = None
    hi_strict: bool = False
    allowed: tuple[Fraction, ...] | None = None

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        if self.allowed is not None and x not in self.allowed:
            return False
        if self.lo is not None and (x < self.lo or (self.lo_strict and x == self.lo)):
            return False
        if self.hi is not None and (x > self.hi or (self.hi_strict and x == self.hi)):
            return False
        return True

    def describe(self, name: str) -> str:
        if self.allowed is not None:
            return f"{name} in {{{', '.join(str(a) for a in self.allowed)}}}"
        parts = []
        if self.lo is not None:
            parts.append(f"{self.lo} {'<' if self.lo_strict else '<='} ")
        parts.append(name)
        if self.hi is not None:
            parts.append(f" {'<' if self.hi_strict else '<='} {self.hi}")
        return "".join(parts)

    def sample(self) -> Fraction:
        """A representative admissible value."""
        if self.allowed:
            return self.allowed[0]
        lo, hi = self.lo, self.hi
        if lo is not None and hi is not None:
            return lo if not self.lo_strict else (hi if not self.hi_strict else (lo + hi) / 2)
        if lo is not None:
            return lo + 1 if self.lo_strict else lo
        if hi is not None:
            return hi - 1 if self.hi_strict else hi
        return Fraction(1)


class LieAlgebra:
    """Structure equations with optional named parameters.

    ``structure[k]`` is the template for ``de^{k+1}``; parameters stay symbolic
    until :meth:`substitute` binds them.
    """

    def __init__(
        self,
        name: str,
        structure: Sequence[FormTemplate],
        params: Sequence[str] = (),
        ranges: Mapping[str, ParamRange] | None = None,
        values: Mapping[str, Fraction] | None = None,
    ) -> None:
        if len(structure) != DIM:
            raise ValueError(f"need {DIM} structure entries, got {len(structure)}")
        for i, tpl in enumerate(structure, start=1):
            if tpl.degree != 2:
                raise ValueError(f"de^{i} must be a 2-form")
        self.name = name
        self.structure = tuple(structure)
        mentioned = set().union(*(t.params for t in self.structure))
        ordered = list(params) + sorted(mentioned - set(params))
        self.params = tuple(ordered)
        self.ranges = dict(ranges or {})
        self.values = {k: Fraction(v) for k, v in (values or {}).items()}
        self._de: tuple[Form, ...] | None = None
        self._dmap: dict[int, tuple[tuple[int, object], ...]] = {}

    @classmethod
    def from_forms(cls, name: str, de: Sequence[Form]) -> LieAlgebra:
        return cls(name, [template_from_form(f) for f in de])

    @property
    def free_params(self) -> tuple[str, ...]:
        return tuple(p for p in self.params if p not in self.values)

    def substitute(self, **values) -> LieAlgebra:
        merged = dict(self.values)
        for k, v in values.items():
            if k not in self.params:
                raise KeyError(f"{self.name} has no parameter {k!r}")
            v = Fraction(v)
            rng = self.ranges.get(k)
            if rng is not None and v not in rng:
                raise ParameterOutOfRange(f"{self.name}: {k} = {v} violates {rng.describe(k)}")
            merged[k] = v
        return LieAlgebra(self.name, self.structure, self.params, self.ranges, merged)

    def at_sample(self) -> LieAlgebra:
        """Bind every free parameter to a representative admissible value."""
        vals = {p: self.ranges[p].sample() if p in self.ranges else Fraction(1) for p in self.free_params}
        return self.substitute(**vals) if vals else self

    @property
    def de(self) -> tuple[Form, ...]:
        if self._de is None:
            if self.free_params:
                raise UnboundParameter(f"{self.name}: unbound parameters {', '.join(self.free_params)}")
            self._de = tuple(t.bind(self.values) for t in self.structure)
        return self._de

    def _d_mask(self, mask: int) -> tuple[tuple[int, object], ...]:
        cached = self._dmap.get(mask)
        if cached is not None:
            return cached
        idx = indices_of(mask)
        if len(idx) == 0:
            out = zero(1)
        elif len(idx) == 1:
            out = self.de[idx[0] - 1]
        else:
            first = e(idx[0])
            rest = Form(len(idx) - 1, {mask ^ (1 << (idx[0] - 1)): Fraction(1)})
            # d(a ^ b) = da ^ b - a ^ db for a 1-form a
            out = wedge(self.de[idx[0] - 1], rest) - wedge(first, self.d(rest))
        terms = tuple((m, _simplify(c)) for m, c in out.items())
        self._dmap[mask] = terms
        return terms

    def d(self, a: Form) -> Form:
        """Chevalley-Eilenberg differential."""
        if a.degree == DIM:
            raise ValueError("d of a 6-form would have degree 7")
        acc: dict[int, object] = {}
        for m, x in a.items():
            for t, c in self._d_mask(m):
                v = c * x
                acc[t] = acc[t] + v if t in acc else v
        return Form(a.degree + 1, acc)

    def bracket(self, x: Sequence, y: Sequence) -> list:
        """[x, y] with e^k([x, y]) = -de^k(x, y)."""
        return [-evaluate(self.de[k], x, y) for k in range(DIM)]

    def d_matrix(self, k: int) -> list[list]:
        """Matrix of d: Lambda^k -> Lambda^{k+1} in lexicographic bases."""
        cols = [self.d(Form(k, {m: Fraction(1)})) for m in BASIS[k]]
        return [[col[r] for col in cols] for r in BASIS[k + 1]]

    def to_text(self) -> str:
        entries = [str(t) for t in self.structure]
        return "(" + ",".join(entries) + ")"

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.structure == other.structure and self.values == other.values

    def __hash__(self) -> int:
        return hash((self.structure, tuple(sorted(self.values.items()))))

    def __repr__(self) -> str:
        vals = "".join(f", {k}={v}" for k, v in self.values.items())
        return f"LieAlgebra({self.name!r}, {self.to_text()!r}{vals})"


def _simplify(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def differential(g: LieAlgebra, a: Form) -> Form:
    return g.d(a)


@dataclass(frozen=True)
class Sanity:
    jacobi: bool
    unimodular: bool


def sanity(g: LieAlgebra) -> Sanity:
    jacobi = all(not g.d(g.de[i]) for i in range(DIM))
    # tr ad_{e_i} = sum_j c_ij^j = -sum_j de^j(e_i, e_j)
    unimodular = True
    for i in range(1, DIM + 1):
        trace = Fraction(0)
        for j in range(1, DIM + 1):
            if i != j:
                trace += _coef2(g.de[j - 1], i, j)
        if trace:
            unimodular = False
    return Sanity(jacobi, unimodular)


def _coef2(f: Form, i: int, j: int):
    """f(e_i, e_j) for a 2-form f."""
    if i < j:
        return f[(i, j)]
    return -f[(j, i)]


def _unit(i: int) -> list[Fraction]:
    return [Fraction(int(k == i)) for k in range(DIM)]


def center(g: LieAlgebra) -> list[list]:
    """Basis of {x : iota_x de^k = 0 for all k}."""
    rows = []
    contracted = [[contract(i, g.de[k]) for i in range(1, DIM + 1)] for k in range(DIM)]
    for k in range(DIM):
        for l in range(1, DIM + 1):
            rows.append([contracted[k][i][(l,)] for i in range(DIM)])
    return linalg.nullspace(rows, DIM)


def closed_one_forms(g: LieAlgebra) -> list[list]:
    return linalg.nullspace(g.d_matrix(1), DIM)


def derived_subalgebra(g: LieAlgebra) -> list[list]:
    """[g, g] as the annihilator of the closed 1-forms."""
    z1 = closed_one_forms(g)
    if not z1:
        return [_unit(i) for i in range(DIM)]
    return linalg.nullspace(z1, DIM)


def _span_basis(vectors: list[list]) -> list[list]:
    if not vectors:
        return []
    red, _ = linalg.rref(vectors)
    return red


def bracket_span(g: LieAlgebra, xs: Sequence[Sequence], ys: Sequence[Sequence]) -> list[list]:
    return _span_basis([g.bracket(x, y) for x in xs for y in ys])


def lower_central_series(g: LieAlgebra) -> list[int]:
    """dims of g, [g,g], [g,[g,g]], ... up to the first repeated dimension."""
    full = [_unit(i) for i in range(DIM)]
    cur = full
    dims = [DIM]
    while True:
        nxt = bracket_span(g, full, cur)
        dims.append(len(nxt))
        if len(nxt) == len(cur) or not nxt:
            return dims
        cur = nxt


def nilpotency_step(g: LieAlgebra) -> int | None:
    """Number of nonzero terms of the lower central series, None if not nilpotent."""
    dims = lower_central_series(g)
    if dims[-1] != 0:
        return None
    return sum(1 for d in dims if d)


def betti(g: LieAlgebra) -> tuple[int, int]:
    r1 = linalg.rank(g.d_matrix(1))
    r2 = linalg.rank(g.d_matrix(2))
    b1 = DIM - r1
    b2 = (len(BASIS[2]) - r2) - r1
    return b1, b2


def closed_form_basis(g: LieAlgebra, k: int) -> list[Form]:
    if k == DIM:
        return [e(*range(1, DIM + 1))]
    kernel = linalg.nullspace(g.d_matrix(k), len(BASIS[k]))
    return [Form.from_vector(k, v) for v in kernel]


def exact_form_basis(g: LieAlgebra, k: int) -> list[Form]:
    """Basis of d(Lambda^{k-1})."""
    if k == 0:
        return []
    images = [g.d(Form(k - 1, {m: Fraction(1)})).to_vector() for m in BASIS[k - 1]]
    return [Form.from_vector(k, v) for v in _span_basis(images)]


def random_combination(basis: Sequence[Form], rng: random.Random, lo: int = -5, hi: int = 5) -> Form:
    if not basis:
        raise ValueError("empty basis")
    while True:
        total = zero(basis[0].degree)
        for b in basis:
            c = rng.randint(lo, hi)
            if c:
                total = total + b.scale(Fraction(c))
        if total:
            return total


def random_closed_form(g: LieAlgebra, k: int, rng: random.Random, lo: int = -5, hi: int = 5) -> Form:
    return random_combination(closed_form_basis(g, k), rng, lo, hi)


def symplectic_triples(g: LieAlgebra) -> list[tuple[int, int, int]]:
    """Index triples (i <= j <= k) of closed 2-forms with b_i ^ b_j ^ b_k != 0.

    The top power of a generic closed 2-form is the cubic polynomial with these
    coefficients, so the list is empty exactly when no closed 2-form is
    non-degenerate.
    """
    basis = closed_form_basis(g, 2)
    out = []
    for i, j, k in itertools.combinations_with_replacement(range(len(basis)), 3):
        if wedge(wedge(basis[i], basis[j]), basis[k]):
            out.append((i, j, k))
    return out


def is_symplectic(g: LieAlgebra) -> bool:
    return bool(symplectic_triples(g))


def symplectic_witness(g: LieAlgebra, rng: random.Random | None = None, tries: int = 200) -> Form | None:
    """A closed 2-form with nonzero top power, or None if none exists."""
    if not is_symplectic(g):
        return None
    rng = rng or random.Random(0)
    basis = closed_form_basis(g, 2)
    for _ in range(tries):
        om = random_combination(basis, rng)
        if wedge(wedge(om, om), om):
            return om
    return None


# ---------------------------------------------------------------------------
# parsing


def _parse_tuple(p, line: int | None = None) -> list[FormTemplate]:
    p.expect("(")
    entries = [p.form(degree=2)]
    while p.accept(","):
        entries.append(p.form(degree=2))
    p.expect(")")
    if len(entries) != DIM:
        raise ParseError(f"structure tuple needs {DIM} entries, got {len(entries)}", None, line)
    return entries


def parse_structure_equations(text: str, name: str = "custom") -> LieAlgebra:
    """Parse a bare tuple ``(0,0,0,e12,e13,e23)`` or a full document with one algebra."""
    stripped = text.strip()
    if stripped.startswith("("):
        p = make_parser(stripped)
        entries = _parse_tuple(p)
        if p.peek() is not None:
            raise p.error(f"unexpected token {p.peek().text!r}")
        return LieAlgebra(name, entries)
    doc = parse_document(text)
    if len(doc.algebras) != 1:
        raise ParseError(f"expected exactly one algebra, found {len(doc.algebras)}")
    return next(iter(doc.algebras.values()))


@dataclass
class Document:
    algebras: dict[str, LieAlgebra] = field(default_factory=dict)
    forms: dict[str, FormTemplate] = field(default_factory=dict)


def _parse_range(p, line: int) -> tuple[str, ParamRange]:
    """``range b : -1 <= b < 0`` or ``range s : s in {-1, 1}``."""
    name_tok = p.take()
    if name_tok.kind != "name":
        raise p.error("expected a parameter name", name_tok)
    name = name_tok.text
    p.expect(":")
    tok = p.peek()
    lo = hi = None
    lo_strict = hi_strict = False
    if tok is not None and tok.kind == "name" and tok.text == name:
        p.take()
        nxt = p.peek()
        if nxt is not None and nxt.kind == "name" and nxt.text == "in":
            p.take()
            p.expect("{")
            vals = [Fraction(p.expr().constant())]
            while p.accept(","):
                vals.append(Fraction(p.expr().constant()))
            p.expect("}")
            return name, ParamRange(allowed=tuple(vals))
        op = p.take().text
        bound = Fraction(p.expr().constant())
        if op in ("<", "<="):
            hi, hi_strict = bound, op == "<"
        elif op in (">", ">="):
            lo, lo_strict = bound, op == ">"
        else:
            raise p.error(f"unknown comparison {op!r}")
        return name, ParamRange(lo, lo_strict, hi, hi_strict)
    lo = Fraction(p.expr().constant())
    op = p.take().text
    if op not in ("<", "<="):
        raise p.error("expected '<' or '<='")
    lo_strict = op == "<"
    got = p.take()
    if got.text != name:
        raise p.error(f"expected {name!r}", got)
    if p.peek() is not None:
        op = p.take().text
        if op not in ("<", "<="):
            raise p.error("expected '<' or '<='")
        hi_strict = op == "<"
        hi = Fraction(p.expr().constant())
    return name, ParamRange(lo, lo_strict, hi, hi_strict)


def parse_document(text: str) -> Document:
    """Line-oriented input: algebra declarations, ``d eK = ...`` lines, forms, ranges."""
    doc = Document()
    current: dict | None = None

    def finish() -> None:
        if current is None:
            return
        entries = current["entries"]
        full = [entries.get(i, FormTemplate(2, ())) for i in range(1, DIM + 1)]
        doc.algebras[current["name"]] = LieAlgebra(current["name"], full, current["params"], current["ranges"])

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        p = make_parser(line, lineno)
        head = p.take()
        if head.kind == "name" and head.text == "algebra":
            finish()
            name_tok = p.take()
            if name_tok.kind not in ("name", "mono"):
                raise p.error("expected an algebra name", name_tok)
            name = name_tok.text
            if name in doc.algebras:
                raise p.error(f"duplicate algebra {name!r}", name_tok)
            params: list[str] = []
            if p.accept("("):
                while True:
                    t = p.take()
                    if t.kind != "name":
                        raise p.error("expected a parameter name", t)
                    params.append(t.text)
                    if not p.accept(","):
                        break
                p.expect(")")
            current = {"name": name, "params": params, "ranges": {}, "entries": {}}
            if p.accept("="):
                current["entries"] = dict(enumerate(_parse_tuple(p, lineno), start=1))
                current["tuple"] = True
        elif head.kind == "name" and head.text == "d":
            if current is None:
                raise p.error("'d' line outside an algebra block", head)
            if current.get("tuple"):
                raise p.error("algebra already defined by a tuple", head)
            mono = p.take()
            if mono.kind != "mono" or len(mono.text) != 2 or not "1" <= mono.text[1] <= str(DIM):
                raise p.error("expected e1..e6", mono)
            k = int(mono.text[1])
            if k in current["entries"]:
                raise p.error(f"duplicate definition of de{k}", mono)
            p.expect("=")
            current["entries"][k] = p.form(degree=2)
        elif head.kind == "name" and head.text == "range":
            if current is None:
                raise p.error("'range' line outside an algebra block", head)
            name, rng = _parse_range(p, lineno)
            current["ranges"][name] = rng
        elif head.kind == "name" and head.text == "form":
            name_tok = p.take()
            if name_tok.kind not in ("name", "mono"):
                raise p.error("expected a form name", name_tok)
            if name_tok.text in doc.forms:
                raise p.error(f"duplicate form {name_tok.text!r}", name_tok)
            p.expect(":")
            deg_tok = p.take()
            if deg_tok.kind != "num" or not 0 <= int(deg_tok.text) <= DIM:
                raise p.error("expected a degree 0..6", deg_tok)
            p.expect("=")
            doc.forms[name_tok.text] = p.form(degree=int(deg_tok.text))
        else:
            raise p.error(f"unknown statement {head.text!r}", head)
        if p.peek() is not None:
            raise p.error(f"unexpected token {p.peek().text!r}")
    finish()
    return doc


def format_document(g: LieAlgebra) -> str:
    params = f"({', '.join(g.params)})" if g.params else ""
    lines = [f"algebra {g.name if g.name.isidentifier() else 'g'}{params} = {g.to_text()}"]
    for name, rng in g.ranges.items():
        lines.append(f"range {name} : {rng.describe(name)}")
    return "\n".join(lines) + "\n"


__all__ = [
    "Document",
    "LieAlgebra",
    "ParamRange",
    "ParameterOutOfRange",
    "Poly",
    "Sanity",
    "UnboundParameter",
    "betti",
    "bracket_span",
    "center",
    "closed_form_basis",
    "closed_one_forms",
    "derived_subalgebra",
    "differential",
    "exact_form_basis",
    "format_document",
    "is_symplectic",
    "lower_central_series",
    "nilpotency_step",
    "parse_document",
    "parse_structure_equations",
    "random_closed_form",
    "random_combination",
    "sanity",
    "symplectic_witness",
]
