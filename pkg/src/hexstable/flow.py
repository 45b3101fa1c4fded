"""Hitchin flow for invariant half-flat structures (float mode, fixed-step RK4).

    d/dt rho = d omega,    (d/dt omega) ^ omega = -d rho_hat
"""

from __future__ import annotations

import csv
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .conditions import beta_eigenvalues_unitary, beta_matrix, hermitian_psd
from .exterior import VOLUME, Form, lefschetz_solve, volume_ratio, wedge, wedge_all
from .liealg import LieAlgebra
from .stable import NotDefinite, NotStable, almost_complex, complex_coframe

DEGENERACY_TOL = 1e-9
EIGEN_TOL = 1e-9

CSV_HEADER = ("t", "nu0", "lambda", "vol_ratio", "res_drho", "res_domega2", "beta_min_eig")


class DegenerateState(ArithmeticError):
    """rho stopped being definite or omega became degenerate."""


@dataclass(frozen=True)
class FlowState:
    t: float
    omega: Form
    rho: Form

    @classmethod
    def initial(cls, omega: Form, rho: Form, t: float = 0.0) -> FlowState:
        return cls(float(t), omega.to_float(), rho.to_float())


@dataclass(frozen=True)
class Monitor:
    t: float
    lam: float
    nu0: float
    vol_ratio: float
    res_drho: float
    res_domega2: float
    beta_minors: dict[tuple[int, ...], float]
    beta_eigenvalues: list[float]
    unitary_eigenvalues: list[float]
    semi_positive: bool

    @property
    def beta_min_eig(self) -> float:
        return min(self.beta_eigenvalues)

    def csv_row(self) -> list[str]:
        values = (self.t, self.nu0, self.lam, self.vol_ratio, self.res_drho, self.res_domega2, self.beta_min_eig)
        return [repr(float(v)) for v in values]


@dataclass
class FlowTrace:
    states: list[FlowState] = field(default_factory=list)
    monitors: list[Monitor] = field(default_factory=list)
    aborted: str | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def times(self) -> list[float]:
        return [s.t for s in self.states]

    @property
    def final(self) -> FlowState:
        return self.states[-1]

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for m in self.monitors:
                writer.writerow(m.csv_row())


def _check(rho: Form, omega: Form, tol: float):
    try:
        triple = almost_complex(rho, tol)
    except (NotStable, NotDefinite) as exc:
        raise DegenerateState(str(exc)) from exc
    if triple.lam >= -tol:
        raise DegenerateState(f"lambda(rho) = {triple.lam}")
    vol = wedge_all(omega, omega, omega).top()
    if abs(vol) <= tol:
        raise DegenerateState("omega^3 vanishes")
    return triple


def flow_rhs(g: LieAlgebra, state: FlowState, tol: float = DEGENERACY_TOL) -> tuple[Form, Form]:
    """(d/dt omega, d/dt rho) at the given state; rho_hat is recomputed from rho."""
    triple = _check(state.rho, state.omega, tol)
    drho_hat = g.d(triple.rho_hat)
    return lefschetz_solve(state.omega, -drho_hat), g.d(state.omega)


def _step(g: LieAlgebra, s: FlowState, dt: float, tol: float) -> FlowState:
    def shifted(k_om: Form, k_rho: Form, h: float) -> FlowState:
        return FlowState(s.t + h, s.omega + k_om.scale(h), s.rho + k_rho.scale(h))

    a1, b1 = flow_rhs(g, s, tol)
    a2, b2 = flow_rhs(g, shifted(a1, b1, dt / 2), tol)
    a3, b3 = flow_rhs(g, shifted(a2, b2, dt / 2), tol)
    a4, b4 = flow_rhs(g, shifted(a3, b3, dt), tol)
    w = dt / 6
    omega = s.omega + (a1 + a2.scale(2) + a3.scale(2) + a4).scale(w)
    rho = s.rho + (b1 + b2.scale(2) + b3.scale(2) + b4).scale(w)
    return FlowState(s.t + dt, omega, rho)


def flow_monitors(g: LieAlgebra, state: FlowState, tol: float = DEGENERACY_TOL) -> Monitor:
    """Invariants of the current state; beta is read in the greedy coframe of J."""
    triple = _check(state.rho, state.omega, tol)
    omega = state.omega
    om2 = wedge(omega, omega)
    om3 = wedge(om2, omega)
    drho_hat = g.d(triple.rho_hat)
    nu0 = float(volume_ratio(wedge(drho_hat, omega), om3))
    beta = beta_matrix(drho_hat, complex_coframe(triple))
    psd = hermitian_psd(beta, EIGEN_TOL)
    eig = beta.eigenvalues()
    return Monitor(
        t=state.t,
        lam=float(triple.lam),
        nu0=nu0,
        vol_ratio=float(volume_ratio(om3, VOLUME)),
        res_drho=g.d(state.rho).norm_inf(),
        res_domega2=g.d(om2).norm_inf(),
        beta_minors={k: float(v) for k, v in psd.minors.items()},
        beta_eigenvalues=eig,
        unitary_eigenvalues=beta_eigenvalues_unitary(triple, omega, drho_hat),
        semi_positive=all(e >= -EIGEN_TOL for e in eig),
    )


def flow_integrate(
    g: LieAlgebra,
    initial: FlowState,
    t_end: float,
    dt: float,
    monitor: bool = True,
    tol: float = DEGENERACY_TOL,
    callback: Callable[[FlowState], None] | None = None,
) -> FlowTrace:
    """Classical RK4 from initial.t to t_end. Stops early, keeping the partial trace, on degeneracy."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    trace = FlowTrace()
    state = FlowState.initial(initial.omega, initial.rho, initial.t)
    if g.d(state.rho).norm_inf() > tol or g.d(wedge(state.omega, state.omega)).norm_inf() > tol:
        trace.warnings.append("initial structure is not half-flat")
    n = max(1, int(round((t_end - state.t) / dt)))
    h = (t_end - state.t) / n
    try:
        trace.states.append(state)
        if monitor:
            trace.monitors.append(flow_monitors(g, state, tol))
        for i in range(n):
            state = _step(g, state, h, tol)
            state = FlowState(initial.t + (i + 1) * h, state.omega, state.rho)
            trace.states.append(state)
            if monitor:
                trace.monitors.append(flow_monitors(g, state, tol))
            if callback is not None:
                callback(state)
    except DegenerateState as exc:
        trace.aborted = f"t = {state.t:.6g}: {exc}"
        if len(trace.monitors) > len(trace.states):
            trace.monitors.pop()
    return trace


def rk4_ode(f: Callable[[np.ndarray], np.ndarray], y0, t_end: float, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Fixed-step RK4 for an autonomous ODE system; returns (times, values)."""
    n = max(1, int(round(t_end / dt)))
    h = t_end / n
    y = np.asarray(y0, dtype=float)
    ts = [0.0]
    ys = [y.copy()]
    for i in range(n):
        k1 = f(y)
        k2 = f(y + h / 2 * k1)
        k3 = f(y + h / 2 * k2)
        k4 = f(y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        ts.append((i + 1) * h)
        ys.append(y.copy())
    return np.array(ts), np.array(ys)


def sup_distance(a: Form, b: Form) -> float:
    return (a.to_float() - b.to_float()).norm_inf()


def ratio_deviation(omega_t: Form, omega_0: Form) -> float:
    """Spread of omega_t / omega_0 over the nonzero coefficients of omega_0 (0 iff proportional)."""
    w0 = omega_0.to_float()
    wt = omega_t.to_float()
    scale = None
    dev = 0.0
    for m, c in w0.items():
        r = wt[m] / c
        scale = r if scale is None else scale
        dev = max(dev, abs(r - scale))
    leftover = max((abs(c) for m, c in wt.items() if not w0[m]), default=0.0)
    return max(dev, leftover)


__all__ = [
    "CSV_HEADER",
    "DegenerateState",
    "FlowState",
    "FlowTrace",
    "Monitor",
    "flow_integrate",
    "flow_monitors",
    "flow_rhs",
    "ratio_deviation",
    "rk4_ode",
    "sup_distance",
]
