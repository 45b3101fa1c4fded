from __future__ import annotations

import random

from hexstable import catalog as cat
from hexstable import suites as S


def test_transported_pair_passes():
    r = S.suite_transported()
    assert r.passed, [c.to_json() for c in r.failures()]


def test_stated_a5_17_pair_fails_only_on_closedness():
    checks = {c.name: c for c in S.suite_table3().checks}
    d = checks["A5,17(0,0,-1)+R"].detail
    assert not d["closed_rho"] and not d["closed_Omega"]
    assert d["lambda"] == -4 and d["Omega11_positive"]
    assert all(c.passed for name, c in checks.items() if name != "A5,17(0,0,-1)+R")


def test_corrected_g1_polynomial_and_vanishing_identities():
    r = S.suite_lambda_extra(n=60)
    assert r.passed, [c.to_json() for c in r.failures()]


def test_stated_g1_polynomial_differs_by_one_term():
    # stated - corrected = 4 p146 p236 (p126 - p125 p146)
    g1 = cat.nilpotent(1).algebra
    basis = S.closed_form_basis(g1, 3)
    rng = random.Random(0)
    for _ in range(30):
        rho = S.random_combination(basis, rng)
        p = lambda s: S._p(rho, s)  # noqa: E731
        diff = S.g1_polynomial_stated(rho) - S.g1_polynomial_corrected(rho)
        assert diff == 4 * p("146") * p("236") * (p("126") - p("125") * p("146"))
        assert S.hitchin_lambda_exact(rho) == S.g1_polynomial_corrected(rho)


def test_center_kernel_and_metric_obstructions():
    r = S.suite_obstructions_extra(n=15)
    assert r.passed, [c.to_json() for c in r.failures()]


def test_flows_suite_half_flat_runs():
    r = S.suite_flows()
    assert r.passed, [c.to_json() for c in r.failures()]
    g7 = next(c for c in r.checks if c.name == "g7 half-flat flow")
    assert g7.detail["exists_until"] < 0.2


def test_double_search_finds_witness_on_g24():
    res = S.search(cat.nilpotent(24).algebra, "double", 200, 1)
    for w in res.witnesses:
        assert w["mode"] == "float"
    assert sum(res.certificates.values()) == 200


def test_pool_map_preserves_order(monkeypatch):
    monkeypatch.setenv("HEXSTABLE_THREADS", "3")
    assert S.pool_map(lambda x: x * x, range(20)) == [x * x for x in range(20)]
    monkeypatch.setenv("HEXSTABLE_THREADS", "1")
    one = S.suite_table2().to_json()
    monkeypatch.setenv("HEXSTABLE_THREADS", "4")
    assert S.suite_table2().to_json() == one


def test_sample_mean_convex():
    rng = random.Random(2)
    rho, t, psd = S.sample_mean_convex(cat.nilpotent(28).algebra, rng)
    assert psd.semi_positive and psd.nonzero
