"""Positivity certificates and SU(3)/SL(3,C)-structure predicates.

Hermitian matrices of forms are read in a (1,0)-coframe xi with
``tau = (i/2)^3 xi^1 ^ xibar^1 ^ xi^2 ^ xibar^2 ^ xi^3 ^ xibar^3``:

* a (2,2)-form gamma has ``beta[m][n] = ratio((i/2) gamma ^ xi^m ^ xibar^n, tau)``;
* a (1,1)-form alpha is written ``alpha = (i/2) sum a[j][k] xi^j ^ xibar^k``.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .exterior import (
    DIM,
    DegenerateForm,
    Form,
    evaluate,
    lefschetz_solve,
    volume_ratio,
    wedge,
    wedge_all,
)
from .liealg import LieAlgebra, center, derived_subalgebra
from .scalars import QuadComplex, is_exact, quad_sign, to_float
from .stable import (
    ComplexCoframe,
    DefiniteTriple,
    almost_complex,
    complex_coframe,
)

FLOAT_TOL = 1e-9


class NotClosed(ValueError):
    """The 3-form is not closed but a closed-structure quantity was requested."""


class NotPositive(ValueError):
    """The (2,2)-form is not positive."""


def _half_i(exact: bool):
    return QuadComplex(0, Fraction(1, 2)) if exact else 0.5j


def _real_part(x):
    if isinstance(x, QuadComplex):
        return x.re
    if isinstance(x, complex):
        return x.real
    return x


@dataclass(frozen=True)
class HermitianForm3:
    """A 3x3 Hermitian matrix together with the coframe it is expressed in."""

    matrix: tuple[tuple, tuple, tuple]
    coframe: ComplexCoframe

    @property
    def exact(self) -> bool:
        return all(is_exact(x) for row in self.matrix for x in row)

    def __getitem__(self, key):
        m, n = key
        return self.matrix[m][n]

    def is_hermitian(self, tol: float = FLOAT_TOL) -> bool:
        for m in range(3):
            for n in range(3):
                diff = self.matrix[m][n] - _conj(self.matrix[n][m])
                if self.exact:
                    if diff:
                        return False
                elif abs(complex(diff)) > tol:
                    return False
        return True

    def is_zero(self, tol: float = 0.0) -> bool:
        if self.exact:
            return not any(x for row in self.matrix for x in row)
        return all(abs(complex(x)) <= tol for row in self.matrix for x in row)

    def principal_minors(self) -> dict[tuple[int, ...], object]:
        """All seven principal minors, keyed by the 0-based index set."""
        out = {}
        for size in (1, 2, 3):
            for idx in itertools.combinations(range(3), size):
                sub = [[self.matrix[i][j] for j in idx] for i in idx]
                out[idx] = _real_part(_det(sub))
        return out

    def eigenvalues(self) -> list[float]:
        return sorted(float(x) for x in np.linalg.eigvalsh(self.to_numpy()))

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(to_float(x)) for x in row] for row in self.matrix])

    def __str__(self) -> str:
        from .scalars import format_scalar

        return "[" + "; ".join(", ".join(format_scalar(x) for x in row) for row in self.matrix) + "]"


def _conj(x):
    return x.conjugate() if hasattr(x, "conjugate") else x


def _det(m: Sequence[Sequence]):
    if len(m) == 1:
        return m[0][0]
    if len(m) == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def coframe_volume(coframe: ComplexCoframe) -> Form:
    """tau = (i/2)^3 xi^1 xibar^1 xi^2 xibar^2 xi^3 xibar^3."""
    h = _half_i(coframe.exact)
    factors = []
    for j in range(3):
        factors.append(wedge(coframe.xi(j), coframe.xibar(j)).scale(h))
    return wedge_all(*factors)


def beta_matrix(gamma: Form, coframe: ComplexCoframe) -> HermitianForm3:
    """Hermitian matrix of a 4-form; the (3,1)+(1,3) part does not contribute."""
    if gamma.degree != 4:
        raise ValueError("beta_matrix needs a 4-form")
    exact = coframe.exact and gamma.is_exact()
    if not exact:
        gamma = gamma.to_float()
    tau = coframe_volume(coframe) if exact else coframe_volume(_float_coframe(coframe))
    cf = coframe if exact else _float_coframe(coframe)
    vol = tau.top()
    if not vol:
        raise DegenerateForm("degenerate coframe")
    h = _half_i(exact)
    rows = []
    for m in range(3):
        gm = wedge(gamma, cf.xi(m))
        rows.append(tuple(wedge(gm, cf.xibar(n)).scale(h).top() / vol for n in range(3)))
    return HermitianForm3(tuple(rows), coframe)  # type: ignore[arg-type]


def _float_coframe(coframe: ComplexCoframe) -> ComplexCoframe:
    if not coframe.exact:
        return coframe
    return ComplexCoframe(
        coframe.indices,
        tuple(f.to_float() for f in coframe.a),  # type: ignore[arg-type]
        tuple(f.to_float() for f in coframe.b),  # type: ignore[arg-type]
    )


@dataclass(frozen=True)
class PSDVerdict:
    semi_positive: bool
    positive: bool
    nonzero: bool
    minors: dict[tuple[int, ...], object] = field(default_factory=dict)

    @property
    def failing_minor(self) -> tuple[tuple[int, ...], object] | None:
        for key, value in self.minors.items():
            if _sign(value, FLOAT_TOL) < 0:
                return key, value
        return None


def _sign(x, tol: float) -> int:
    if is_exact(x):
        return quad_sign(x)
    x = float(x)
    if x > tol:
        return 1
    if x < -tol:
        return -1
    return 0


def hermitian_psd(beta: HermitianForm3, tol: float = FLOAT_TOL) -> PSDVerdict:
    """Exact (or tolerance-based in float mode) semi-definiteness via principal minors."""
    minors = beta.principal_minors()
    signs = {k: _sign(v, tol) for k, v in minors.items()}
    semi = all(s >= 0 for s in signs.values())
    positive = all(signs[k] > 0 for k in ((0,), (0, 1), (0, 1, 2)))
    nonzero = not beta.is_zero(tol if not beta.exact else 0.0)
    return PSDVerdict(semi, positive, nonzero, minors)


def hermitian_matrix_11(triple: DefiniteTriple, alpha: Form, coframe: ComplexCoframe | None = None) -> tuple[HermitianForm3, bool]:
    """(a[j][k], is_11) with alpha = (i/2) sum a[j][k] xi^j ^ xibar^k plus its (2,0)+(0,2) part."""
    from .stable import _basis_change
    from .exterior import pullback

    coframe = coframe or complex_coframe(triple)
    exact = coframe.exact and alpha.is_exact()
    _, q = _basis_change(coframe if exact else _float_coframe(coframe))
    in_theta = pullback(q, alpha if exact else alpha.to_float())
    factor = QuadComplex(0, -2) if exact else -2j
    zero_ = Fraction(0) if exact else 0j
    rows = [[zero_] * 3 for _ in range(3)]
    is_11 = True
    for m, c in in_theta.items():
        bits = [i for i in range(DIM) if m >> i & 1]
        if bits[0] < 3 <= bits[1]:
            rows[bits[0]][bits[1] - 3] = c * factor
        elif exact or abs(complex(c)) > FLOAT_TOL:
            is_11 = False
    return HermitianForm3(tuple(tuple(r) for r in rows), coframe), is_11  # type: ignore[arg-type]


@dataclass(frozen=True)
class Positivity11:
    is_11: bool
    semi: bool
    positive: bool
    matrix: HermitianForm3


def positivity_11(triple: DefiniteTriple, alpha: Form, coframe: ComplexCoframe | None = None, tol: float = FLOAT_TOL) -> Positivity11:
    """Type (1,1) check and (semi-)positivity of the Hermitian matrix of alpha."""
    mat, is_11 = hermitian_matrix_11(triple, alpha, coframe)
    verdict = hermitian_psd(mat, tol)
    return Positivity11(is_11, is_11 and verdict.semi_positive, is_11 and verdict.positive, mat)


def metric_matrix(triple: DefiniteTriple, alpha: Form) -> list[list]:
    """g[r][s] = alpha(e_r, J e_s); symmetric positive definite iff alpha is positive (1,1)."""
    cols = [[triple.J[i][s] for i in range(DIM)] for s in range(DIM)]
    units = [[int(i == r) for i in range(DIM)] for r in range(DIM)]
    return [[evaluate(alpha, units[r], cols[s]) for s in range(DIM)] for r in range(DIM)]


def metric_coefficient(triple: DefiniteTriple, alpha: Form, r: int, s: int | None = None):
    """g_{rs} = alpha(e_r, J e_s) for 1-based indices (s defaults to r)."""
    s = r if s is None else s
    col = [triple.J[i][s - 1] for i in range(DIM)]
    unit = [int(i == r - 1) for i in range(DIM)]
    return evaluate(alpha, unit, col)


@dataclass(frozen=True)
class SU3Structure:
    omega: Form
    triple: DefiniteTriple

    @classmethod
    def from_forms(cls, omega: Form, rho: Form) -> SU3Structure:
        return cls(omega, almost_complex(rho))

    @property
    def rho(self) -> Form:
        return self.triple.rho

    @property
    def rho_hat(self) -> Form:
        return self.triple.rho_hat

    def normalization_ratio(self):
        """rho ^ rho_hat / omega^3; equals 2/3 for a normalized structure."""
        return volume_ratio(wedge(self.rho, self.rho_hat), wedge_all(self.omega, self.omega, self.omega))


@dataclass(frozen=True)
class TorsionData:
    """nu0 and pi0 always; theta = nu0*omega - nu2 and nu2 only for closed rho.

    The remaining torsion components (nu1, nu3, pi1, pi2) are not extracted.
    """

    nu0: object
    pi0: object
    theta: Form | None
    nu2: Form | None


def torsion_scalars(g: LieAlgebra, structure: SU3Structure, with_theta: bool = True) -> TorsionData:
    omega = structure.omega
    om3 = wedge_all(omega, omega, omega)
    drho = g.d(structure.rho)
    drho_hat = g.d(structure.rho_hat)
    nu0 = volume_ratio(wedge(drho_hat, omega), om3)
    pi0 = volume_ratio(wedge(drho, omega), om3)
    theta = nu2 = None
    if with_theta:
        if not _vanishes(drho):
            raise NotClosed("theta is defined for closed rho only")
        theta = lefschetz_solve(omega, drho_hat)
        nu2 = omega.scale(nu0) - theta
    return TorsionData(nu0, pi0, theta, nu2)


def trace(omega: Form, alpha: Form):
    """Tr(alpha) defined by 3 alpha ^ omega^2 = Tr(alpha) omega^3."""
    om2 = wedge(omega, omega)
    return volume_ratio(wedge(alpha, om2), wedge(om2, omega)) * 3


def _vanishes(a: Form, tol: float = FLOAT_TOL) -> bool:
    return a.is_zero(0.0 if a.is_exact() else tol)


FLAG_NAMES = (
    "closed",
    "definite",
    "su3_normalized",
    "half_flat",
    "symplectic",
    "symplectic_half_flat",
    "coupled",
    "double",
    "nearly_kahler",
    "mean_convex",
    "strictly_mean_convex",
)


@dataclass(frozen=True)
class Classification:
    flags: dict[str, bool]
    nu0: object = None
    normalization_ratio: object = None
    lam: object = None
    beta: HermitianForm3 | None = None
    psd: PSDVerdict | None = None
    omega_positive: bool | None = None

    def __getitem__(self, name: str) -> bool:
        return self.flags[name]

    def true_flags(self) -> list[str]:
        return [k for k in FLAG_NAMES if self.flags.get(k)]


def classify(g: LieAlgebra, omega: Form | None, rho: Form, tol: float = FLOAT_TOL) -> Classification:
    """Decide every structure flag. Raises NotDefinite/NotStable if lambda(rho) >= 0.

    ``omega`` may be None for a bare SL(3,C)-structure; omega-dependent flags are then False.
    """
    triple = almost_complex(rho, tol)
    flags = dict.fromkeys(FLAG_NAMES, False)
    flags["definite"] = True
    drho = g.d(rho)
    closed = _vanishes(drho, tol)
    flags["closed"] = closed
    drho_hat = g.d(triple.rho_hat)
    beta = psd = None
    if closed:
        beta = beta_matrix(drho_hat, complex_coframe(triple))
        psd = hermitian_psd(beta, tol)
        flags["mean_convex"] = psd.semi_positive and psd.nonzero
        flags["strictly_mean_convex"] = psd.positive
    if omega is None:
        return Classification(flags, lam=triple.lam, beta=beta, psd=psd)

    structure = SU3Structure(omega, triple)
    om2 = wedge(omega, omega)
    om3 = wedge(om2, omega)
    if _vanishes(om3, tol):
        raise DegenerateForm("omega is degenerate")
    ratio = structure.normalization_ratio()
    pos = positivity_11(triple, omega, tol=tol)
    two_thirds = Fraction(2, 3)
    norm_ok = ratio == two_thirds if is_exact(ratio) else abs(to_float(ratio) - 2 / 3) <= tol
    flags["su3_normalized"] = pos.positive and norm_ok
    domega = g.d(omega)
    nu0 = volume_ratio(wedge(drho_hat, omega), om3)
    nonzero_nu0 = _sign(nu0, tol) != 0
    half_flat = closed and _vanishes(g.d(om2), tol)
    flags["half_flat"] = half_flat
    flags["symplectic"] = _vanishes(domega, tol)
    flags["symplectic_half_flat"] = half_flat and flags["symplectic"]
    coupled_eq = _vanishes(domega + rho.scale(nu0 * Fraction(3, 2) if is_exact(nu0) else 1.5 * to_float(nu0)), tol)
    double_eq = _vanishes(drho_hat - om2.scale(nu0), tol)
    flags["coupled"] = half_flat and nonzero_nu0 and coupled_eq
    flags["double"] = half_flat and nonzero_nu0 and double_eq
    flags["nearly_kahler"] = nonzero_nu0 and coupled_eq and double_eq
    return Classification(flags, nu0, ratio, triple.lam, beta, psd, pos.positive)


@dataclass(frozen=True)
class TamingResult:
    symplectic: bool
    tames: bool
    d_omega11_nonzero: bool
    omega11: Form
    matrix: HermitianForm3


def omega_11(triple: DefiniteTriple, Omega: Form) -> Form:
    """(1,1)-part (Omega + J^* Omega) / 2 of a real 2-form."""
    half = Fraction(1, 2) if Omega.is_exact() and triple.exact else 0.5
    return (Omega + triple.pull(Omega)).scale(half)


def taming_check(g: LieAlgebra, rho: Form, Omega: Form, tol: float = FLOAT_TOL) -> TamingResult:
    triple = almost_complex(rho, tol)
    symplectic = _vanishes(g.d(Omega), tol) and not _vanishes(wedge_all(Omega, Omega, Omega), tol)
    o11 = omega_11(triple, Omega)
    pos = positivity_11(triple, o11, tol=tol)
    return TamingResult(symplectic, pos.positive, not _vanishes(g.d(o11), tol), o11, pos.matrix)


def j_vector(triple: DefiniteTriple, v: Sequence) -> list:
    return [sum((triple.J[i][j] * v[j] for j in range(DIM)), Fraction(0)) for i in range(DIM)]


def j_center_in_derived(g: LieAlgebra, triple: DefiniteTriple) -> int:
    """dim of J(center) cap [g,g], i.e. of the kernel of center -> g/[g,g], z -> J z mod [g,g]."""
    z = center(g)
    der = derived_subalgebra(g)
    if not z or not der:
        return 0
    return linalg.intersection_dim([j_vector(triple, v) for v in z], der)


def efv_obstruction(g: LieAlgebra, triple: DefiniteTriple) -> bool:
    """True when J(center) meets [g,g], which rules out any taming symplectic form."""
    return j_center_in_derived(g, triple) > 0


def je_in_derived(g: LieAlgebra, triple: DefiniteTriple, k: int = 6) -> bool:
    """Whether J e_k lies in [g,g] (1-based k)."""
    der = derived_subalgebra(g)
    v = j_vector(triple, [int(i == k - 1) for i in range(DIM)])
    if not der:
        return all(not x for x in v)
    return linalg.in_span(v, der)


def sqrt_22(triple: DefiniteTriple, gamma: Form, coframe: ComplexCoframe | None = None, tol: float = 1e-8) -> Form:
    """A positive (1,1)-form alpha with alpha ^ alpha = gamma, for gamma positive (2,2).

    beta(gamma) = U diag(b) U^* is diagonal in the coframe zeta = U^* xi, where
    alpha = (i/2) sum a_i zeta^i ^ zetabar^i squares to beta = diag(2 a_j a_k).
    """
    coframe = _float_coframe(coframe or complex_coframe(triple))
    beta = beta_matrix(gamma.to_float(), coframe).to_numpy()
    b, u = np.linalg.eigh(beta)
    if np.any(b <= tol):
        raise NotPositive(f"beta eigenvalues {b.tolist()} are not all positive")
    a = [np.sqrt(b[(i + 1) % 3] * b[(i + 2) % 3] / (2.0 * b[i])) for i in range(3)]
    xi = [np.array(coframe.xi(j).to_vector(0j)) for j in range(3)]
    alpha = np.zeros((DIM, DIM), dtype=complex)
    for i in range(3):
        zeta = sum(np.conj(u[j, i]) * xi[j] for j in range(3))
        alpha += 0.5j * a[i] * (np.outer(zeta, np.conj(zeta)) - np.outer(np.conj(zeta), zeta))
    coeffs = {}
    for r in range(DIM):
        for s in range(r + 1, DIM):
            c = alpha[r, s].real
            if abs(c) > 0:
                coeffs[(1 << r) | (1 << s)] = float(c)
    out = Form(2, coeffs)
    err = (wedge(out, out) - gamma.to_float()).norm_inf()
    if err > tol * max(1.0, gamma.to_float().norm_inf()):
        raise NotPositive(f"square root residual {err:.3e}; gamma may not be of type (2,2)")
    return out


def beta_eigenvalues_unitary(triple: DefiniteTriple, omega: Form, gamma: Form) -> list[float]:
    """Eigenvalues of beta(gamma) in a coframe that is unitary for omega (float).

    These do not depend on the coframe: any two omega-unitary coframes differ
    by a unitary matrix, under which beta changes by unitary congruence.
    """
    coframe = _float_coframe(complex_coframe(triple))
    h, _ = hermitian_matrix_11(triple, omega.to_float(), coframe)
    # omega = (i/2) xi^T H conj(xi); H = L L^* makes zeta = L^T xi unitary
    lower = np.linalg.cholesky(h.to_numpy())
    m = lower.T
    beta = beta_matrix(gamma.to_float(), coframe).to_numpy()
    # for zeta = M xi the matrix becomes M beta M^* / |det M|^2
    b2 = (m @ beta @ m.conj().T) / abs(np.linalg.det(m)) ** 2
    return sorted(float(x) for x in np.linalg.eigvalsh(b2))


def sample_positive_11(triple: DefiniteTriple, rng, semi: bool = False, coframe: ComplexCoframe | None = None) -> Form:
    """A random real (1,1)-form (i/2) sum h_jk xi^j ^ xibar^k with h = A A^* of small integers.

    With ``semi`` the matrix A has rank at most 2, so the form is only semi-positive.
    """
    coframe = coframe or complex_coframe(triple)
    exact = coframe.exact
    cols = 2 if semi else 3
    a = [[QuadComplex(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(cols)] for _ in range(3)]
    h = [[sum((a[j][c] * a[k][c].conjugate() for c in range(cols)), QuadComplex(0)) for k in range(3)] for j in range(3)]
    half_i = _half_i(True)
    total = Form(2, {})
    for j in range(3):
        for k in range(3):
            if not h[j][k]:
                continue
            factor = h[j][k] * half_i
            term = wedge(coframe.xi(j), coframe.xibar(k)).scale(factor if exact else complex(factor))
            total = total + term
    return total.map(lambda x: x.re if isinstance(x, QuadComplex) else complex(x).real)


__all__ = [
    "Classification",
    "FLAG_NAMES",
    "HermitianForm3",
    "NotClosed",
    "NotPositive",
    "PSDVerdict",
    "Positivity11",
    "SU3Structure",
    "TamingResult",
    "TorsionData",
    "beta_eigenvalues_unitary",
    "beta_matrix",
    "classify",
    "coframe_volume",
    "efv_obstruction",
    "hermitian_matrix_11",
    "hermitian_psd",
    "je_in_derived",
    "j_center_in_derived",
    "metric_coefficient",
    "metric_matrix",
    "omega_11",
    "positivity_11",
    "sample_positive_11",
    "sqrt_22",
    "taming_check",
    "torsion_scalars",
    "trace",
]
