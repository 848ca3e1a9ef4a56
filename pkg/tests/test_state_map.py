from __future__ import annotations

from itertools import product

import pytest

from stateforms.bimodule import example_G, gamma_from_G, gamma_simple
from stateforms.forms import Form, d, format_form, pi_pq, star_form, wedge
from stateforms.matrix_calculus import MatTensor, d_uni, elementary, identity, parse_tensor, uni_basis, unit
from stateforms.relations import ideal_member, is_zero
from stateforms.state_map import (
    StateMapContext,
    correction_check,
    d_cochain_check,
    d_cochain_defect,
    dbar_cochain_check,
    defect_formula,
    phi0,
    phi_definitional,
    phi_forms,
)


def test_phi0_on_units_and_identity():
    n = 3
    for a, b in product(range(n), repeat=2):
        mat = [[1 if (r, c) == (a, b) else 0 for c in range(n)] for r in range(n)]
        assert phi0(mat) == Form.v(n, a + 1) * Form.cv(n, b + 1)
    assert phi0([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == Form.const(n, 1)


def test_phi0_of_hermitian_matrix_is_real():
    a = [[2, 1], [1, -3]]
    assert star_form(phi0(a)) == phi0(a)


def test_phi_forms_degree_zero_matches_phi0():
    g = gamma_simple(2)
    assert format_form(phi_forms(g, parse_tensor("E[1,2]", 2))) == "v1*cv2"
    assert phi_forms(g, identity(2)) == Form.const(2, 1)


def test_context_invariants():
    ctx = StateMapContext(gamma_simple(3))
    assert ctx.e.comps[0] == Form.cv(3, 1)


@pytest.mark.parametrize("n", [2, 3])
def test_closed_phi_agrees_with_definition(n):
    for g in (gamma_simple(n), gamma_from_G(example_G(n))):
        for xi in uni_basis(1, n):
            assert is_zero(phi_forms(g, xi) - phi_definitional(g, xi))


def test_two_tensor_value():
    n = 2
    g = gamma_simple(n)
    for a, b, s, t in product(range(n), repeat=4):
        xi = MatTensor(n, 2, {(a, b, s, t): 1})
        v, cv = Form.v, Form.cv
        inner = -(cv(n, t + 1) * v(n, s + 1) * Form.dcv(n, b + 1)) + cv(n, t + 1) * cv(n, b + 1) * Form.dv(n, s + 1)
        if b == s:
            inner = inner + Form.dcv(n, t + 1)
        assert is_zero(phi_forms(g, xi) - v(n, a + 1) * inner)


@pytest.mark.parametrize("n", [2, 3])
def test_degree_zero_cochain_identity(n):
    g = gamma_simple(n)
    for a, b in product(range(1, n + 1), repeat=2):
        x = unit(n, a, b)
        assert is_zero(d(phi_forms(g, x)) - phi_forms(g, d_uni(x)))


@pytest.mark.parametrize("n", [2, 3])
def test_defect_matches_closed_form(n):
    g = gamma_simple(n)
    for a, b, r, t in product(range(n), repeat=4):
        xi = MatTensor(n, 2, {(a, b, r, t): 1})
        dfc = d_cochain_defect(g, xi)
        assert is_zero(dfc - defect_formula(n, a, b, r, t))
        assert is_zero(pi_pq(dfc, 0, 2))


def test_defect_formula_text():
    n = 3
    expected = Form.v(n, 1) * Form.cv(n, 1) * wedge(Form.dcv(n, 1), Form.dv(n, 2))
    assert defect_formula(n, 0, 0, 1, 0) == expected


def test_defect_is_certified_nonzero_at_n3():
    f = defect_formula(3, 0, 0, 1, 0)
    assert not ideal_member(f, 2)
    assert not ideal_member(f, 3)


def test_defect_collapses_at_n2():
    # every 2-form lies in the ideal at n = 2
    assert all(ideal_member(defect_formula(2, a, b, r, t), 2)
               for a, b, r, t in product(range(2), repeat=4))


@pytest.mark.parametrize("n,m_max", [(2, 3), (3, 2)])
def test_correction_and_dbar_sweeps(n, m_max):
    g = gamma_simple(n)
    assert correction_check(g, m_max) == []
    assert dbar_cochain_check(g, m_max) == []


def test_full_d_fails_at_n3_with_witness():
    failures = d_cochain_check(gamma_simple(3), 2)
    assert failures
    assert failures[0].xi and failures[0].lhs and failures[0].rhs


def test_full_d_sweep_passes_at_n2_because_two_forms_collapse():
    assert d_cochain_check(gamma_simple(2), 3) == []
