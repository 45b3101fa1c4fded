"""Independent brute-force oracle built on sympy.

Forms are dicts mapping sorted 1-based index tuples to sympy numbers. Every
operation goes through determinants or explicit permutation signs, so it
shares no code with the bitmask implementation under test.
"""

from __future__ import annotations

import itertools
import re

import sympy as sp
from sympy.combinatorics import Permutation

TOP = (1, 2, 3, 4, 5, 6)


def perm_sign(p) -> int:
    return Permutation(list(p)).signature()


def parse(text: str) -> dict:
    text = text.replace(" ", "")
    out: dict = {}
    for m in re.finditer(r"([+-]?)([^e+-]*?)\*?e(\d+)", text):
        sign, coef, idx = m.groups()
        c = sp.sympify(coef) if coef else sp.Integer(1)
        if sign == "-":
            c = -c
        key = tuple(int(ch) for ch in idx)
        srt = tuple(sorted(key))
        out[srt] = out.get(srt, 0) + perm_sign([srt.index(x) for x in key]) * c
    return {k: v for k, v in out.items() if v != 0}


def from_form(form) -> dict:
    """Convert a package Form with rational coefficients."""
    return {idx: sp.Rational(c.numerator, c.denominator) for idx, c in form.terms()}


def clean(a: dict) -> dict:
    out = {}
    for k, v in a.items():
        v = sp.nsimplify(sp.expand(v)) if v.is_number else sp.expand(v)
        if v != 0:
            out[k] = v
    return out


def wedge(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            if set(ka) & set(kb):
                continue
            seq = ka + kb
            srt = tuple(sorted(seq))
            out[srt] = out.get(srt, 0) + perm_sign([srt.index(x) for x in seq]) * ca * cb
    return clean(out)


def contract(v, a: dict) -> dict:
    out: dict = {}
    for key, c in a.items():
        for pos, i in enumerate(key):
            if v[i - 1] == 0:
                continue
            rest = key[:pos] + key[pos + 1 :]
            out[rest] = out.get(rest, 0) + (-1) ** pos * v[i - 1] * c
    return clean(out)


def evaluate(a: dict, vecs) -> sp.Expr:
    total = sp.Integer(0)
    for key, c in a.items():
        m = sp.Matrix([[vecs[r][i - 1] for i in key] for r in range(len(vecs))])
        total += c * m.det()
    return sp.expand(total)


def pullback(t: sp.Matrix, a: dict) -> dict:
    """(T^* a)(v_1, ..) = a(T v_1, ..); T acts on column vectors."""
    if not a:
        return {}
    k = len(next(iter(a)))
    out = {}
    for key in itertools.combinations(range(1, 7), k):
        val = evaluate(a, [list(t[:, i - 1]) for i in key])
        if val != 0:
            out[key] = val
    return clean(out)


def d(structure, a: dict) -> dict:
    """Chevalley-Eilenberg differential; structure[k] is de^{k+1} as a dict."""
    out: dict = {}
    for key, c in a.items():
        for pos, i in enumerate(key):
            de = structure[i - 1]
            if not de:
                continue
            left = {key[:pos]: 1}
            right = {key[pos + 1 :]: 1}
            for kk, vv in wedge(wedge(left, de), right).items():
                out[kk] = out.get(kk, 0) + (-1) ** pos * c * vv
    return clean(out)


def k_matrix(rho: dict) -> sp.Matrix:
    k = sp.zeros(6, 6)
    for j in range(6):
        ej = [int(i == j) for i in range(6)]
        five = wedge(contract(ej, rho), rho)
        for i in range(6):
            k[i, j] = wedge({(i + 1,): 1}, five).get(TOP, 0)
    return k


def hitchin_lambda(rho: dict):
    k = k_matrix(rho)
    return sp.nsimplify((k * k).trace() / 6)


def j_matrix(rho: dict) -> sp.Matrix:
    lam = hitchin_lambda(rho)
    return (-k_matrix(rho) / sp.sqrt(-lam)).applyfunc(sp.nsimplify)


def rho_hat(rho: dict) -> dict:
    """rho(J., J., J.) with J acting on vectors."""
    return pullback(j_matrix(rho), rho)


def top(a: dict):
    return a.get(TOP, 0)


def to_float_dict(a: dict) -> dict:
    return {k: complex(sp.N(v)) for k, v in a.items()}
