"""Command-line interface.

Exit codes: 0 success, 1 a requested check failed, 2 bad input, 3 a
mathematical precondition does not hold (degenerate or non-definite data,
missing stored example, parameter out of range).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path

from . import catalog as cat
from .conditions import FLAG_NAMES, NotClosed, NotPositive, classify, taming_check
from .exterior import DegenerateForm, Form, wedge
from .flow import FlowState, flow_integrate
from .liealg import (
    LieAlgebra,
    ParameterOutOfRange,
    UnboundParameter,
    betti,
    parse_document,
    parse_structure_equations,
)
from .scalars import format_scalar
from .stable import NotDefinite, NotStable
from .suites import DEFAULT_SEED, SUITES, jsonable, run_suite, search
from .syntax import ParseError, parse_form, parse_scalar

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_MATH = 0, 1, 2, 3

MATH_ERRORS = (NotStable, NotDefinite, NotClosed, NotPositive, DegenerateForm, ParameterOutOfRange, ZeroDivisionError)


class InputError(Exception):
    pass


class PreconditionError(Exception):
    pass


# ---------------------------------------------------------------- output


class Output:
    def __init__(self, as_json: bool, stream=None) -> None:
        self.as_json = as_json
        self.stream = stream or sys.stdout

    def emit(self, payload: dict, text: str) -> None:
        if self.as_json:
            self.stream.write(json.dumps(jsonable(payload), indent=2) + "\n")
        else:
            self.stream.write(text.rstrip("\n") + "\n")


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, float):
        return f"{x:.6g}"
    if isinstance(x, Form):
        return str(x)
    return format_scalar(x) if x is not None else "-"


# ---------------------------------------------------------------- inputs


def _parse_params(items: Sequence[str] | None) -> dict[str, Fraction]:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise InputError(f"--param expects name=value, got {item!r}")
        name, value = item.split("=", 1)
        try:
            out[name.strip()] = Fraction(parse_scalar(value.strip()))
        except (ParseError, TypeError, ValueError) as exc:
            raise InputError(f"bad parameter value {value!r}: {exc}") from exc
    return out


def _load_document(path: str | None):
    if path is None:
        return None
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_document(text)


def _resolve_algebra(args, doc) -> tuple[LieAlgebra, cat.CatalogEntry | None]:
    name = getattr(args, "algebra", None)
    structure = getattr(args, "structure", None)
    if structure:
        return parse_structure_equations(structure), None
    if doc is not None and doc.algebras:
        if name is None:
            if len(doc.algebras) != 1:
                raise InputError(f"file defines {len(doc.algebras)} algebras; pick one with --algebra")
            return next(iter(doc.algebras.values())), None
        if name in doc.algebras:
            return doc.algebras[name], None
    if name is None:
        raise InputError("no algebra given (use --algebra, --structure or --file)")
    try:
        entry = cat.catalog_lookup(name)
    except KeyError as exc:
        raise InputError(str(exc.args[0]) if exc.args else f"unknown algebra {name!r}") from exc
    return entry.algebra, entry


def _bind(g: LieAlgebra, params: dict[str, Fraction]) -> LieAlgebra:
    if params:
        unknown = set(params) - set(g.free_params)
        if unknown:
            raise InputError(f"{g.name} has no parameter(s) {', '.join(sorted(unknown))}")
        g = g.substitute(**params)
    if g.free_params:
        raise InputError(f"{g.name} has free parameter(s) {', '.join(g.free_params)}; bind them with --param")
    return g


def _form_arg(text: str | None, doc, degree: int) -> Form | None:
    if text is None:
        return None
    if doc is not None and text in doc.forms:
        tpl = doc.forms[text]
        if tpl.degree != degree:
            raise InputError(f"form {text!r} has degree {tpl.degree}, expected {degree}")
        return tpl.bind({})
    return parse_form(text, degree=degree)


def _float_if(form: Form | None, mode: str) -> Form | None:
    return form.to_float() if form is not None and mode == "float" else form


# ---------------------------------------------------------------- catalog


def cmd_catalog(args, out: Output) -> int:
    if args.action == "list":
        rows = cat.entries(args.family)
        payload = {"entries": [_entry_summary(e) for e in rows]}
        lines = [f"{'name':<22} {'family':<10} {'b1':>3}  example  tamed"]
        for e in rows:
            lines.append(
                f"{e.name:<22} {e.family:<10} {e.b1 if e.b1 is not None else '-':>3}  "
                f"{'yes' if e.example else '-':<8} {'yes' if e.tamed else '-'}"
            )
        out.emit(payload, "\n".join(lines))
        return EXIT_OK
    if not args.name:
        raise InputError("catalog show needs an algebra name")
    try:
        e = cat.catalog_lookup(args.name)
    except KeyError as exc:
        raise InputError(str(exc.args[0]) if exc.args else args.name) from exc
    info = _entry_summary(e)
    info.update(
        {
            "parameters": {p: e.algebra.ranges[p].describe(p) if p in e.algebra.ranges else "any" for p in e.algebra.free_params},
            "example": e.example,
            "example_half_flat": e.example_half_flat,
            "tamed_pair": e.tamed,
            "tamed_values": e.tamed_values,
            "metric_obstruction": e.metric_obstruction,
            "notes": list(e.notes),
        }
    )
    lines = [f"{e.name}  ({e.family})", f"  structure: {e.algebra.to_text()}"]
    for k in ("b1", "half_flat", "symplectic", "parameters", "example", "example_half_flat", "tamed_pair", "tamed_values", "metric_obstruction"):
        v = info[k]
        if v not in (None, {}, ()):
            lines.append(f"  {k}: {jsonable(v)}")
    for note in e.notes:
        lines.append(f"  note: {note}")
    out.emit(info, "\n".join(lines))
    return EXIT_OK


def _entry_summary(e: cat.CatalogEntry) -> dict:
    return {
        "name": e.name,
        "family": e.family,
        "structure": e.algebra.to_text(),
        "b1": e.b1,
        "half_flat": e.half_flat,
        "symplectic": e.symplectic,
        "has_example": e.example is not None,
        "has_tamed_pair": e.tamed is not None,
    }


# ---------------------------------------------------------------- verify


def _classification_report(g: LieAlgebra, omega: Form | None, rho: Form, mode: str) -> tuple[dict, object]:
    c = classify(g, _float_if(omega, mode), _float_if(rho, mode))
    cert = {"lambda": c.lam}
    if c.beta is not None:
        cert["beta"] = [list(r) for r in c.beta.matrix]
        cert["beta_coframe"] = list(c.beta.coframe.indices)
        cert["beta_minors"] = {",".join(str(i + 1) for i in k): v for k, v in c.psd.minors.items()}
    if omega is not None:
        cert["nu0"] = c.nu0
        cert["normalization_ratio"] = c.normalization_ratio
        cert["omega_positive"] = c.omega_positive
    return {"flags": c.flags, "certificates": cert}, c


def cmd_verify(args, out: Output) -> int:
    started = time.perf_counter()
    doc = _load_document(args.file)
    g, entry = _resolve_algebra(args, doc)
    params = _parse_params(args.param)
    expectations: dict[str, bool] = {}
    report: dict = {"subject": {"algebra": g.name}}
    if args.table2 or args.tamed:
        if entry is None:
            raise InputError("--table2/--tamed need a catalog algebra")
    if args.tamed:
        if entry.tamed is None:
            raise PreconditionError(f"{entry.name} has no stored tamed pair")
        g = _bind(g, params) if params else entry.algebra_for_pair()
        rho, big_omega = entry.tamed_pair()
        omega = None
    elif args.table2:
        if entry.example is None:
            raise PreconditionError(f"{entry.name} has no stored example structure")
        g = _bind(g, params)
        omega, rho = entry.forms()
        big_omega = None
    else:
        g = _bind(g, params)
        rho = _form_arg(args.rho, doc, 3)
        omega = _form_arg(args.omega, doc, 2)
        big_omega = _form_arg(args.Omega, doc, 2)
        if rho is None:
            raise InputError("verify needs --rho, --table2 or --tamed")
    report["subject"].update({"structure": g.to_text(), "mode": args.mode, "rho": rho})
    if omega is not None:
        report["subject"]["omega"] = omega
    body, c = _classification_report(g, omega, rho, args.mode)
    report.update(body)
    if args.table2:
        for flag in ("closed", "definite", "mean_convex"):
            expectations[flag] = c[flag]
        expectations["half_flat matches table"] = c["half_flat"] == bool(entry.example_half_flat)
    if big_omega is not None:
        report["subject"]["Omega"] = big_omega
        t = taming_check(g, _float_if(rho, args.mode), _float_if(big_omega, args.mode))
        top = wedge(wedge(big_omega, big_omega), big_omega).top()
        report["taming"] = {
            "symplectic": t.symplectic,
            "tames": t.tames,
            "d_Omega11_nonzero": t.d_omega11_nonzero,
            "Omega11": t.omega11,
            "Omega_cubed": top,
            "Omega11_matrix": [list(r) for r in t.matrix.matrix],
        }
        if args.tamed:
            expectations.update({"closed": c["closed"], "symplectic": t.symplectic, "tames": t.tames, "d_Omega11_nonzero": t.d_omega11_nonzero})
    for flag in args.expect or ():
        if flag not in FLAG_NAMES:
            raise InputError(f"unknown flag {flag!r}; choose from {', '.join(FLAG_NAMES)}")
        expectations[flag] = c[flag]
    report["expectations"] = expectations
    ok = all(expectations.values())
    report["passed"] = ok
    out.emit(report, _verify_text(report, time.perf_counter() - started))
    return EXIT_OK if ok else EXIT_FAIL


def _verify_text(report: dict, elapsed: float) -> str:
    s = report["subject"]
    lines = [f"{s['algebra']}  {s['structure']}  [{s['mode']}]"]
    for key in ("omega", "rho", "Omega"):
        if key in s:
            lines.append(f"  {key:<6} = {s[key]}")
    true = [k for k in FLAG_NAMES if report["flags"].get(k)]
    lines.append(f"  flags: {', '.join(true) if true else 'none'}")
    cert = report["certificates"]
    lines.append(f"  lambda = {_fmt(cert['lambda'])}")
    if "beta" in cert:
        lines.append(f"  beta (coframe {cert['beta_coframe']}):")
        for row in cert["beta"]:
            lines.append("    [" + ", ".join(_fmt(x) for x in row) + "]")
    for k in ("nu0", "normalization_ratio"):
        if k in cert:
            lines.append(f"  {k} = {_fmt(cert[k])}")
    if "taming" in report:
        t = report["taming"]
        lines.append(f"  taming: symplectic {_fmt(t['symplectic'])}, tames {_fmt(t['tames'])}, dOmega11 != 0 {_fmt(t['d_Omega11_nonzero'])}")
        lines.append(f"  Omega11 = {t['Omega11']}")
    for k, v in report["expectations"].items():
        lines.append(f"  expect {k}: {'ok' if v else 'FAILED'}")
    lines.append(f"  {'PASS' if report['passed'] else 'FAIL'}  ({elapsed:.2f} s)")
    return "\n".join(lines)


# ---------------------------------------------------------------- suite / search / flow / betti


def cmd_suite(args, out: Output) -> int:
    started = time.perf_counter()
    result = run_suite(args.name, seed=args.seed)
    lines = [f"suite {result.name}: {result.n_passed}/{len(result.checks)} passed"]
    if result.label:
        lines.append(f"  ({result.label})")
    for c in result.checks:
        lines.append(f"  {'ok  ' if c.passed else 'FAIL'} {c.name}")
    lines.append(f"  {time.perf_counter() - started:.2f} s")
    payload = result.to_json()
    payload["seed"] = args.seed
    out.emit(payload, "\n".join(lines))
    return EXIT_OK if result.passed else EXIT_FAIL


def cmd_search(args, out: Output) -> int:
    doc = _load_document(args.file)
    g, _ = _resolve_algebra(args, doc)
    g = _bind(g, _parse_params(args.param))
    if args.samples < 1:
        raise InputError("--samples must be positive")
    res = search(g, args.target, args.samples, args.seed, name=g.name)
    payload = res.to_json(with_records=args.records)
    lines = [
        f"search {args.target} on {g.name}: {len(res.witnesses)} witness(es) in {res.samples} samples (seed {res.seed})",
        "  statistical evidence only",
    ]
    for k, v in sorted(res.certificates.items()):
        lines.append(f"  {k}: {v}")
    for w in res.witnesses:
        lines.append(f"  witness rho = {w['rho']}")
    out.emit(payload, "\n".join(lines))
    return EXIT_OK


def cmd_flow(args, out: Output) -> int:
    doc = _load_document(args.file)
    g, entry = _resolve_algebra(args, doc)
    g = _bind(g, _parse_params(args.param))
    if args.init == "table2":
        if entry is None or entry.example is None:
            raise PreconditionError(f"{g.name} has no stored example structure")
        omega, rho = entry.forms()
    else:
        omega = _form_arg(args.omega or "omega", doc, 2)
        rho = _form_arg(args.rho or "rho", doc, 3)
    if args.dt <= 0 or args.t_end <= 0:
        raise InputError("--dt and --t-end must be positive")
    trace = flow_integrate(g, FlowState.initial(omega, rho), args.t_end, args.dt)
    if not trace.monitors:
        raise PreconditionError(trace.aborted or "initial data is degenerate")
    if args.out:
        trace.write_csv(args.out)
    last = trace.monitors[-1]
    payload = {
        "algebra": g.name,
        "t_end": args.t_end,
        "dt": args.dt,
        "steps": len(trace.states) - 1,
        "final_t": trace.final.t,
        "aborted": trace.aborted,
        "warnings": trace.warnings,
        "final": {
            "nu0": last.nu0,
            "lambda": last.lam,
            "vol_ratio": last.vol_ratio,
            "res_drho": last.res_drho,
            "res_domega2": last.res_domega2,
            "beta_eigenvalues": last.beta_eigenvalues,
            "semi_positive": last.semi_positive,
        },
        "semi_positive_throughout": all(m.semi_positive for m in trace.monitors),
        "label": "numerical observation",
        "csv": args.out,
    }
    lines = [f"flow on {g.name}: {payload['steps']} steps to t = {trace.final.t:.6g}"]
    if trace.aborted:
        lines.append(f"  stopped: {trace.aborted}")
    lines += [f"  warning: {w}" for w in trace.warnings]
    lines.append(f"  nu0 = {last.nu0:.10g}, lambda = {last.lam:.10g}, volume ratio = {last.vol_ratio:.10g}")
    lines.append(f"  beta eigenvalues = [{', '.join(f'{x:.6g}' for x in last.beta_eigenvalues)}]")
    lines.append(f"  mean convex (semi-positive) at every step: {_fmt(payload['semi_positive_throughout'])}")
    if args.out:
        lines.append(f"  trace written to {args.out}")
    out.emit(payload, "\n".join(lines))
    return EXIT_OK


def cmd_betti(args, out: Output) -> int:
    doc = _load_document(args.file)
    g, entry = _resolve_algebra(args, doc)
    g = _bind(g, _parse_params(args.param))
    b1, b2 = betti(g)
    payload = {"algebra": g.name, "b1": b1, "b2": b2}
    text = f"{g.name}: b1 = {b1}, b2 = {b2}"
    if entry is not None and entry.b1 is not None:
        payload["b1_catalog"] = entry.b1
        text += f" (catalog b1 = {entry.b1})"
    out.emit(payload, text)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    parser.add_argument("--seed", type=int, default=d(DEFAULT_SEED), help="random seed")
    parser.add_argument("--mode", choices=("exact", "float"), default=d("exact"), help="arithmetic mode")


def _algebra_args(p: argparse.ArgumentParser, required: bool = False) -> None:
    p.add_argument("--algebra", "-a", required=required, help="catalog name, or a name defined in --file")
    p.add_argument("--structure", help="structure equations, e.g. '(0,0,0,0,e12,e13)'")
    p.add_argument("--file", help="input document with algebras and forms")
    p.add_argument("--param", action="append", metavar="NAME=VALUE", help="bind a parameter")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    parser = argparse.ArgumentParser(prog="hexstable", description="Closed definite 3-forms on six-dimensional Lie algebras.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", parents=[common], help="browse the built-in algebras")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.add_argument("--family", choices=("nilpotent", "solvable"))
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("verify", parents=[common], help="classify one structure")
    _algebra_args(p)
    which = p.add_mutually_exclusive_group()
    which.add_argument("--table2", action="store_true", help="use the stored example structure")
    which.add_argument("--tamed", action="store_true", help="use the stored tamed pair")
    p.add_argument("--omega", help="2-form text, or a form name from --file")
    p.add_argument("--rho", help="3-form text, or a form name from --file")
    p.add_argument("--Omega", help="symplectic candidate 2-form for the taming check")
    p.add_argument("--expect", action="append", metavar="FLAG", help="require a flag (exit 1 otherwise)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("suite", parents=[common], help="run a regression suite")
    p.add_argument("name", choices=tuple(SUITES))
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("search", parents=[common], help="random search for structures")
    _algebra_args(p)
    p.add_argument("--target", choices=("mean-convex", "tamed", "double"), default="mean-convex")
    p.add_argument("--samples", "-n", type=int, default=1000)
    p.add_argument("--records", action="store_true", help="include every per-sample certificate in JSON")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("flow", parents=[common], help="integrate the Hitchin flow")
    _algebra_args(p)
    p.add_argument("--init", choices=("table2", "file"), default="table2")
    p.add_argument("--omega", help="form name in --file (default 'omega')")
    p.add_argument("--rho", help="form name in --file (default 'rho')")
    p.add_argument("--t-end", type=float, default=0.1)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--out", help="CSV trace path")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("betti", parents=[common], help="first and second Betti numbers")
    _algebra_args(p)
    p.set_defaults(func=cmd_betti)
    return parser


def main(argv: Sequence[str] | None = None, stream=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INPUT
    out = Output(args.json, stream)
    err = sys.stderr
    try:
        return args.func(args, out)
    except (InputError, ParseError, UnboundParameter) as exc:
        err.write(f"hexstable: error: {exc}\n")
        return EXIT_INPUT
    except PreconditionError as exc:
        err.write(f"hexstable: error: {exc}\n")
        return EXIT_MATH
    except MATH_ERRORS as exc:
        err.write(f"hexstable: error: {type(exc).__name__}: {exc}\n")
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
