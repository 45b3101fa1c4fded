"""Closed definite 3-forms, SU(3)-structures and the Hitchin flow on six-dimensional Lie algebras."""

from __future__ import annotations

from .catalog import catalog_lookup, nilpotent
from .conditions import SU3Structure, beta_matrix, classify, hermitian_psd, taming_check
from .exterior import Form, wedge
from .flow import FlowState, flow_integrate
from .liealg import LieAlgebra, betti, closed_form_basis, parse_document, parse_structure_equations
from .scalars import QuadComplex, QuadScalar
from .stable import almost_complex, complex_coframe, hitchin_lambda, k_endomorphism
from .syntax import parse_form

__version__ = "0.1.0"

__all__ = [
    "Form",
    "FlowState",
    "LieAlgebra",
    "QuadComplex",
    "QuadScalar",
    "SU3Structure",
    "almost_complex",
    "beta_matrix",
    "betti",
    "catalog_lookup",
    "classify",
    "closed_form_basis",
    "complex_coframe",
    "flow_integrate",
    "hermitian_psd",
    "hitchin_lambda",
    "k_endomorphism",
    "nilpotent",
    "parse_document",
    "parse_form",
    "parse_structure_equations",
    "taming_check",
    "wedge",
]
