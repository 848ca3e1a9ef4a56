from __future__ import annotations

import random
from itertools import product

import pytest

from stateforms.bimodule import (
    EFormElement,
    S_derivative_residual,
    S_hat,
    S_product_residual,
    X_tensor,
    curvature_R_E,
    example_G,
    gamma_from_G,
    gamma_hermitian_counterexample,
    gamma_simple,
    generator,
    inner,
    ip_preservation_check,
    ksgns_failures,
    ksgns_inner,
    nabla_E,
    nabla_E_higher,
    row_complement,
    sigma_hat,
    validate_gamma,
    vacuum,
)
from stateforms.forms import Form, d, format_form, parse_form, pi_pq, wedge
from stateforms.matrix_calculus import d_uni, uni_basis, uni_product
from stateforms.relations import is_zero
from stateforms.sampling import random_grade_form, random_section
from stateforms.state_map import phi0


@pytest.fixture(scope="module", params=[2, 3])
def n(request):
    return request.param


def test_simple_gamma_component_text():
    g = gamma_simple(2)
    assert format_form(g[(0, 0, 0, 0)]) == "v1*dcv1+-v1*v1*cv1*dcv1+v1*cv1*cv1*dv1"
    assert g[(0, 0, 0, 0)] == parse_form("v1*dcv1-v1*v1*cv1*dcv1+v1*cv1*cv1*dv1", 2)


def test_zero_G_reproduces_simple(n):
    a, b = gamma_simple(n), gamma_from_G(example_G(n).zero(n))
    assert all(a[k] == b[k] for k in a.indices())


def test_example_G_is_valid_and_nontrivial(n):
    G = example_G(n)
    assert not G.violations()
    assert any(G[p, i].terms for p, i in product(range(n), repeat=2))
    assert not validate_gamma(gamma_from_G(G))


def test_invalid_G_rejected():
    with pytest.raises(ValueError):
        gamma_from_G(example_G(2, hermitian=True))


def test_inner_product_preservation(n):
    assert ip_preservation_check(gamma_simple(n))
    assert ip_preservation_check(gamma_from_G(example_G(n)))
    assert not ip_preservation_check(gamma_hermitian_counterexample(n))


def test_vacuum_is_flat(n):
    for g in (gamma_simple(n), gamma_from_G(example_G(n))):
        assert nabla_E(g, vacuum(n)).is_zero(2)


def test_inner_on_generators(n):
    for s, t, i, j in product(range(n), repeat=4):
        expected = Form.v(n, t + 1) * Form.cv(n, j + 1) if s == i else Form(n)
        assert inner(generator(n, s, t), generator(n, i, j)) == expected
    e = vacuum(n)
    assert inner(e, e) == Form.const(n, 1)
    a = [[(r + 2 * c) % 3 for c in range(n)] for r in range(n)]
    assert inner(e, e.left_action(a)) == phi0(a)


def test_right_leibniz(n):
    rng = random.Random(n)
    g = gamma_from_G(example_G(n))
    for _ in range(10):
        x = generator(n, rng.randrange(n), rng.randrange(n))
        f = random_grade_form(rng, n, 0)
        assert (nabla_E(g, x.wedge_right(f)) - x.wedge_right(d(f)) - nabla_E(g, x).wedge_right(f)).is_zero(2)


def test_curvature_of_simple_connection(n):
    g = gamma_simple(n)
    for i, j in product(range(n), repeat=2):
        expected = EFormElement(tuple(Form.cv(n, j + 1) * wedge(Form.dcv(n, p + 1), Form.dv(n, i + 1))
                                      for p in range(n)), 2)
        assert (curvature_R_E(g, generator(n, i, j)) - expected).is_zero(2)


def test_higher_connection_squares_to_curvature():
    n = 3
    g = gamma_simple(n)
    conn = g.connection()
    x = generator(n, 0, 1)
    xi = Form.v(n, 2) * Form.cv(n, 3) * Form.dcv(n, 1)
    lhs = nabla_E_higher(g, nabla_E_higher(g, x.wedge_right(xi)))
    assert (lhs - conn.curvature(x).wedge_right(xi)).is_zero(2)
    assert nabla_E_higher(g, EFormElement.zero(n, 1)).is_zero(0)


class TestXTensor:
    def test_no_02_part(self, n):
        X = X_tensor(gamma_simple(n))
        assert all(is_zero(pi_pq(x, 0, 2)) for x in X.values())

    def test_contracted_form(self, n):
        X = X_tensor(gamma_simple(n))
        for p, i, j in product(range(n), repeat=3):
            acc = Form(n)
            for q in range(n):
                acc = acc + Form.cv(n, q + 1) * X[(p, q, i, j)]
            assert is_zero(acc - Form.cv(n, j + 1) * wedge(Form.dcv(n, p + 1), Form.dv(n, i + 1)))

    def test_individual_components_differ_at_n3(self):
        # only the contraction with cv_q is determined; single components carry a (2,0) part
        X = X_tensor(gamma_simple(3))
        bad = [k for k, x in X.items()
               if not is_zero(x - (wedge(Form.dcv(3, k[0] + 1), Form.dv(3, k[2] + 1)) if k[1] == k[3] else Form(3)))]
        assert bad
        assert any(not is_zero(pi_pq(X[k], 2, 0)) for k in bad)


class TestExtendedSigma:
    def test_sigma_is_left_linear_in_xi(self):
        n = 2
        g = gamma_simple(n)
        e = generator(n, 1, 0)
        xi = uni_basis(1, n)[3]
        unit_left = uni_basis(0, n)[1]
        lhs = sigma_hat(g, uni_product(unit_left, xi), e)
        a, b = next(iter(unit_left.terms))
        assert (lhs - sigma_hat(g, xi, e).unit_action(a, b)).is_zero(2)

    def test_S_has_no_0m_part(self):
        g = gamma_simple(3)
        for xi in uni_basis(1, 3)[:20]:
            for i, j in product(range(3), repeat=2):
                assert S_hat(g, xi, generator(3, i, j)).project(0, 2).is_zero(2)


def _mutated_product(g, xi, kappa, e):
    lhs = S_hat(g, uni_product(xi, kappa), e)
    first = sigma_hat(g, xi, S_hat(g, kappa, e))
    second = S_hat(g, xi, sigma_hat(g, kappa, e))
    return lhs - (first + second if kappa.degree % 2 else first - second)


def _mutated_derivative(g, xi, e):
    conn = g.connection()
    lhs = conn.apply_higher(S_hat(g, xi, e)) - S_hat(g, d_uni(xi), e)
    rhs = sigma_hat(g, xi, conn.curvature(e)) + conn.curvature_apply(sigma_hat(g, xi, e))
    return lhs - (-rhs if xi.degree % 2 else rhs)


@pytest.fixture(scope="module")
def cases():
    rng = random.Random(4)
    ones = uni_basis(1, 4)
    gens = [generator(4, i, j) for i, j in product(range(4), repeat=2)]
    return [(rng.choice(ones), rng.choice(ones), rng.choice(gens)) for _ in range(16)]


@pytest.mark.slow
class TestProductAndDerivativeRulesAtN4:
    """At n <= 3 every three-form collapses, so these rules only bite from n = 4."""

    N = 4

    def test_product_rule(self, cases):
        g = gamma_simple(self.N)
        for xi, kappa, e in cases:
            assert S_product_residual(g, xi, kappa, e).is_zero(2)

    def test_product_rule_sign_is_detected(self, cases):
        g = gamma_simple(self.N)
        assert any(not _mutated_product(g, xi, kappa, e).is_zero(2) for xi, kappa, e in cases)

    def test_derivative_rule(self, cases):
        g = gamma_simple(self.N)
        for xi, _, e in cases[:6]:
            assert S_derivative_residual(g, xi, e).is_zero(2)

    def test_derivative_rule_sign_is_detected(self, cases):
        g = gamma_simple(self.N)
        assert any(not _mutated_derivative(g, xi, e).is_zero(2) for xi, _, e in cases[:6])


class TestKSGNS:
    def test_random_sections(self, n):
        rng = random.Random(11 + n)
        sections = [random_section(rng, n) for _ in range(20)]
        assert ksgns_failures(sections) == []

    def test_complement_is_null(self, n):
        rng = random.Random(n)
        c, r = random_section(rng, n)
        rc = row_complement(r)
        assert not ksgns_inner(c, rc, c, rc).terms
        assert any(x.terms for x in rc)
