"""Acceptance criteria 1-9. Each test records one PASS/FAIL line; the lines are
printed in the pytest terminal summary, or directly when run as a script."""

from __future__ import annotations

import time

from hexstable import suites as S

SEED = S.DEFAULT_SEED
RESULTS: dict[int, str] = {}


def _record(n: int, ok: bool, text: str) -> bool:
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}"
    print(RESULTS[n])
    return ok


def _failed(checks) -> str:
    bad = [c.name for c in checks if not c.passed]
    return f"; failing: {', '.join(bad)}" if bad else ""


def criterion_1() -> bool:
    start = time.perf_counter()
    r = S.suite_table2(SEED)
    elapsed = time.perf_counter() - start
    ok = r.passed and elapsed <= 10.0
    return _record(1, ok, f"stored examples {r.n_passed}/{len(r.checks)} checks, {elapsed:.2f} s{_failed(r.checks)}")


def criterion_2() -> bool:
    r = S.suite_table3(SEED)
    t = S.suite_transported(SEED)
    note = "; the A5,17(0,0,-1)+R pair is closed only after exchanging e3 and e4" if t.passed else ""
    return _record(2, r.passed, f"tamed pairs as stated {r.n_passed}/{len(r.checks)}{_failed(r.checks)}{note}")


def criterion_3() -> bool:
    r = S.suite_betti(SEED)
    return _record(3, r.passed, f"b1 for 34 nilpotent algebras, b2(g25), b2(g27): {r.n_passed}/{len(r.checks)}{_failed(r.checks)}")


def criterion_4() -> bool:
    r = S.suite_lambda(SEED, n=100)
    parts = [f"{c.name} {c.detail['samples'] - c.detail['mismatches']}/{c.detail['samples']}" for c in r.checks]
    return _record(4, r.passed, "; ".join(parts))


def criterion_5() -> bool:
    r = S.suite_obstructions(SEED, n=100)
    return _record(5, r.passed, f"J e6 in [g,g] and g66 = 0 sweeps, 100 samples each: {r.n_passed}/{len(r.checks)}{_failed(r.checks)}")


def criterion_6() -> bool:
    checks = S.flow_g24_checks(1e-3)
    d = {c.name: c.detail for c in checks}
    text = (
        f"g24 sup error {d['g24 closed form']['form_error']:.1e}, nu0 error {d['g24 closed form']['nu0_error']:.1e}, "
        f"halving ratio {d['g24 RK4 order']['ratio']:.1f}{_failed(checks)}"
    )
    return _record(6, all(c.passed for c in checks[:2]), text)


def criterion_7() -> bool:
    checks = S.flow_g6_checks() + S.flow_g25_checks()
    d = {c.name: c.detail for c in checks}
    text = (
        f"g6 eigenvalue error {d['g6 beta eigenvalues']['max_error']:.1e}, "
        f"min eigenvalue g6 {d['g6 mean convex along the flow']['min_eigenvalue']:.3g}, "
        f"g25 {d['g25 mean convex along the flow']['min_eigenvalue']:.3g}; "
        f"g25 ODE error {d['g25 state follows the reduced ODE']['max_error']:.1e} "
        f"(no eigenvalue formula stated for g25){_failed(checks)}"
    )
    return _record(7, all(c.passed for c in checks), text)


def criterion_8() -> bool:
    r = S.suite_properties(SEED, n=500)
    return _record(8, r.passed, f"7 properties x 500 trials: {r.n_passed}/{len(r.checks)}{_failed(r.checks)}")


def criterion_9() -> bool:
    r = S.suite_evidence(SEED, n=1000)
    counts = []
    for c in r.checks:
        certs = c.detail["certificates"]
        counts.append(f"{c.name} " + ",".join(f"{k}={v}" for k, v in sorted(certs.items())))
    return _record(9, r.passed, f"statistical evidence only; witnesses 0 expected; {'; '.join(counts)}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9]


def test_criterion_1_table2():
    assert criterion_1(), RESULTS[1]


def test_criterion_2_tamed_pairs():
    assert criterion_2(), RESULTS[2]


def test_criterion_3_betti():
    assert criterion_3(), RESULTS[3]


def test_criterion_4_lambda_identities():
    assert criterion_4(), RESULTS[4]


def test_criterion_5_obstruction_sweeps():
    assert criterion_5(), RESULTS[5]


def test_criterion_6_g24_flow():
    assert criterion_6(), RESULTS[6]


def test_criterion_7_g6_g25_flows():
    assert criterion_7(), RESULTS[7]


def test_criterion_8_properties():
    assert criterion_8(), RESULTS[8]


def test_criterion_9_evidence():
    assert criterion_9(), RESULTS[9]


if __name__ == "__main__":
    import sys

    results = [fn() for fn in CRITERIA]
    sys.exit(0 if all(results) else 1)
