"""Exact symbolic engine for the tautological bimodule over M_n and CP^{n-1}.

Coefficients are Gaussian rationals, forms live in the exterior algebra on
dv_i, dcv_i modulo the relation ideal, and every identity is decided by exact
linear algebra.
"""

from __future__ import annotations

from .forms import Form, d, del_, delbar, format_form, parse_form, pi_pq, star_form, wedge
from .matrix_calculus import MatTensor, d_uni, parse_tensor, uni_basis, uni_product
from .relations import DEFAULT_SLACK, ideal_member, is_zero, simplify
from .scalars import GaussianRational, ScalarPoly, parse_poly, poly_normal_form

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_SLACK", "Form", "GaussianRational", "MatTensor", "ScalarPoly", "d", "d_uni", "del_",
    "delbar", "format_form", "ideal_member", "is_zero", "parse_form", "parse_poly", "parse_tensor",
    "pi_pq", "poly_normal_form", "simplify", "star_form", "uni_basis", "uni_product", "wedge",
]
