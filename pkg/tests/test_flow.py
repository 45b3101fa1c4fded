from __future__ import annotations

import csv

import numpy as np
import pytest

from hexstable import catalog as cat
from hexstable.exterior import wedge
from hexstable.flow import (
    CSV_HEADER,
    DegenerateState,
    FlowState,
    flow_integrate,
    flow_monitors,
    flow_rhs,
    ratio_deviation,
    rk4_ode,
    sup_distance,
)
from hexstable.stable import model_form
from hexstable.suites import (
    double_residual,
    g6_ansatz,
    g6_eigenvalues,
    g6_ode,
    g24_closed_form,
    g24_run,
    g25_ansatz,
    g25_ode,
)
from hexstable.syntax import parse_form

OMEGA0 = parse_form("e12+e34+e56")


def test_rhs_solves_the_flow_equations():
    e = cat.nilpotent(24)
    state = FlowState.initial(*e.forms())
    om_dot, rho_dot = flow_rhs(e.algebra, state)
    from hexstable.stable import almost_complex

    drh = e.algebra.d(almost_complex(state.rho).rho_hat)
    assert (wedge(om_dot, state.omega) + drh).norm_inf() < 1e-12
    assert rho_dot == e.algebra.d(state.omega)


def test_rhs_rejects_degenerate_state():
    g = cat.nilpotent(34).algebra
    with pytest.raises(DegenerateState):
        flow_rhs(g, FlowState.initial(OMEGA0, parse_form("e123")))
    with pytest.raises(DegenerateState):
        flow_rhs(g, FlowState.initial(parse_form("e12"), model_form()))


def test_g24_matches_closed_form():
    trace, err, err_nu = g24_run(1e-3)
    assert trace.aborted is None and len(trace.states) == 301
    assert err <= 1e-6 and err_nu <= 1e-6
    assert trace.monitors[0].nu0 == pytest.approx(0.5)
    assert trace.monitors[-1].nu0 == pytest.approx(2.0, rel=1e-8)


def test_g24_closed_form_at_zero_is_table_data():
    omega, rho, nu = g24_closed_form(0.0)
    o0, r0 = cat.nilpotent(24).forms()
    assert sup_distance(omega, o0) == 0 and sup_distance(rho, r0) == 0 and nu == 0.5


def test_rk4_order():
    _, e1, _ = g24_run(1e-2)
    _, e2, _ = g24_run(5e-3)
    assert 8 <= e1 / e2 <= 32


def test_g24_double_and_proportional():
    e = cat.nilpotent(24)
    trace = flow_integrate(e.algebra, FlowState.initial(*e.forms()), 0.3, 1e-2)
    omega0 = e.forms()[0]
    for s in trace.states:
        assert double_residual(e.algebra, s) <= 1e-8
        assert ratio_deviation(s.omega, omega0) <= 1e-8


def test_abelian_flow_is_constant():
    g = cat.nilpotent(34).algebra
    trace = flow_integrate(g, FlowState.initial(OMEGA0, model_form()), 0.05, 1e-2)
    for s in trace.states:
        assert sup_distance(s.omega, OMEGA0) == 0 and sup_distance(s.rho, model_form()) == 0


def test_g6_eigenvalues_follow_reduced_ode():
    e = cat.nilpotent(6)
    trace = flow_integrate(e.algebra, FlowState.initial(*e.forms()), 0.1, 1e-3)
    _, ys = rk4_ode(g6_ode, [1.0, 1.0, 1.0, 0.0], 0.1, 1e-3)
    for s, m, y in zip(trace.states, trace.monitors, ys):
        om, rho = g6_ansatz(y)
        assert sup_distance(s.omega, om) < 1e-6 and sup_distance(s.rho, rho) < 1e-6
        assert np.allclose(m.beta_eigenvalues, g6_eigenvalues(y), atol=1e-5)
        assert min(m.beta_eigenvalues) >= -1e-9


def test_g25_follows_reduced_ode():
    e = cat.nilpotent(25)
    trace = flow_integrate(e.algebra, FlowState.initial(*e.forms()), 0.1, 1e-3)
    _, ys = rk4_ode(g25_ode, [1.0, 1.0, 1.0, 0.0], 0.1, 1e-3)
    for s, m, y in zip(trace.states, trace.monitors, ys):
        om, rho = g25_ansatz(y)
        assert sup_distance(s.omega, om) < 1e-6 and sup_distance(s.rho, rho) < 1e-6
        assert abs(np.sqrt(y[2] - y[3] ** 2) - y[0]) < 1e-9
        assert min(m.beta_eigenvalues) >= -1e-9


def test_half_flat_preserved_and_volume_decreases():
    for e in cat.table2_entries():
        if not e.example_half_flat:
            continue
        trace = flow_integrate(e.algebra, FlowState.initial(*e.forms()), 0.2, 2e-2)
        assert len(trace.states) > 1
        for m in trace.monitors:
            assert m.res_drho <= 1e-8 and m.res_domega2 <= 1e-8, e.name
        for a, b in zip(trace.monitors, trace.monitors[1:]):
            if a.nu0 > 0:
                assert b.vol_ratio < a.vol_ratio, e.name


def test_degeneracy_abort_keeps_partial_trace():
    # the g7 solution leaves the definite locus before t = 0.2
    e = cat.nilpotent(7)
    trace = flow_integrate(e.algebra, FlowState.initial(*e.forms()), 0.25, 1e-2)
    assert trace.aborted is not None and "lambda" in trace.aborted
    assert 0.15 < trace.final.t < 0.2
    assert len(trace.monitors) == len(trace.states)


def test_non_half_flat_start_warns():
    e = cat.nilpotent(3)
    trace = flow_integrate(e.algebra, FlowState.initial(*e.forms()), 0.01, 1e-2)
    assert trace.warnings


def test_csv_export(tmp_path):
    e = cat.nilpotent(24)
    trace = flow_integrate(e.algebra, FlowState.initial(*e.forms()), 0.02, 1e-2)
    path = tmp_path / "trace.csv"
    trace.write_csv(path)
    rows = list(csv.reader(path.open()))
    assert tuple(rows[0]) == CSV_HEADER == ("t", "nu0", "lambda", "vol_ratio", "res_drho", "res_domega2", "beta_min_eig")
    assert len(rows) == 4
    assert float(rows[1][1]) == pytest.approx(0.5)


def test_monitor_fields():
    e = cat.nilpotent(24)
    m = flow_monitors(e.algebra, FlowState.initial(*e.forms()))
    assert m.lam == pytest.approx(-4.0) and m.vol_ratio == pytest.approx(6.0)
    assert m.semi_positive and len(m.beta_minors) == 7
    assert np.allclose(m.beta_eigenvalues, [1, 1, 1])
    assert np.allclose(sorted(m.unitary_eigenvalues), [1, 1, 1])


def test_rk4_ode_exponential():
    ts, ys = rk4_ode(lambda y: -y, [1.0], 1.0, 1e-2)
    assert abs(ys[-1][0] - np.exp(-1)) < 1e-9
    assert ts[-1] == pytest.approx(1.0)
