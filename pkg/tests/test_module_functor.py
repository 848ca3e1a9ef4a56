from __future__ import annotations

import json
from itertools import product

import pytest

from stateforms import module_functor as mf
from stateforms.bimodule import EFormElement, gamma_simple
from stateforms.forms import Form, pi_pq, wedge
from stateforms.relations import is_zero


@pytest.fixture(scope="module", params=[2, 3])
def n(request):
    return request.param


def modules(n):
    fund = mf.fundamental(n)
    return [fund, mf.direct_sum(fund, fund)]


def test_flags():
    fund = mf.fundamental(3)
    assert fund.trace_condition() and fund.is_representation()
    bad = mf.non_representation_example()
    assert bad.trace_condition() and not bad.is_representation()
    tw = mf.twisted_fundamental(3)
    assert tw.trace_condition() and not tw.is_representation()


def test_builtin_names():
    assert mf.builtin_module("sum", 2).dim == 4
    assert mf.builtin_module("counterexample", 2).dim == 1
    assert mf.builtin_module("counterexample", 3).name == "twisted"
    with pytest.raises(ValueError):
        mf.builtin_module("nope", 2)
    with pytest.raises(ValueError):
        mf.builtin_module("non_representation", 3)


def test_load_module(tmp_path):
    path = tmp_path / "rank_one.json"
    path.write_text(json.dumps({"n": 2, "dim": 1, "L": [[[["1"]], [["1/2"]]], [[["2"]], [["0"]]]]}))
    mod = mf.load_module(path)
    assert mod.trace_condition() and mod.name == "rank_one"
    path.write_text(json.dumps({"n": 2, "dim": 1, "L": [[[["1"]]]]}))
    with pytest.raises(ValueError):
        mf.load_module(path)


def test_right_leibniz_and_kernel(n):
    for mod in modules(n):
        assert mf.leibniz_failures(mod) == []
        assert mf.kernel_failures(mod) == []


def test_S_shape_and_curvature(n):
    for mod in modules(n):
        for w, i in product(range(mod.dim), range(n)):
            assert mf.S_coefficients(mod, w, i) == mf.S_formula(mod, w, i)
            assert mf.curvature_F(mod, w, i) == mf.curvature_F_formula(mod, w, i)


def test_trace_condition_enforced():
    fund = mf.fundamental(2)
    doubled = mf.LeftModule(2, 2, {k: tuple(tuple(2 * x for x in r) for r in m) for k, m in fund.L.items()})
    with pytest.raises(ValueError):
        mf.nabla_F_basis(doubled, 0, 0)
    with pytest.raises(ValueError):
        mf.tensor_connection(doubled, gamma_simple(2))


def test_tensor_connection_via_full_chain(n):
    mod = mf.fundamental(n)
    g = gamma_simple(n)
    conn = mf.tensor_connection(mod, g)
    for w, a, i, j in product(range(mod.dim), range(n), range(n), range(n)):
        chain = mf.chain_connection(mod, g, w, a, i, j)
        expected = conn.apply(conn.generator(w, j)) if a == i else EFormElement.zero(n, 1, mod.dim)
        assert (chain - expected).is_zero(2)
        assert mf.discarded_terms(mod, g, w, a, i, j).is_zero(2)


def test_split_reproduces_connection(n):
    mod = mf.fundamental(n)
    g = gamma_simple(n)
    conn = mf.tensor_connection(mod, g)
    dpart, bpart = mf.split_del_delbar(mod, g)
    for key, val in conn.gens.items():
        assert (dpart.gens[key] + bpart.gens[key] - val).is_zero(2)
        assert (bpart.gens[key] - val.project(0, 1)).is_zero(2)


def test_delbar_on_fundamental_n2():
    n = 2
    mod = mf.fundamental(n)
    _, bpart = mf.split_del_delbar(mod, gamma_simple(n))
    # w = h_1, j = 1: sum_q cv_q v_q dcv_1 on slot 1, minus L_pr(h_1) cv_1 v_r dcv_p
    got = bpart.gens[(0, 0)]
    expected = [Form.dcv(n, 1), Form(n)]
    for p in range(n):
        expected[p] = expected[p] - wedge(Form.cv(n, 1) * Form.v(n, 1), Form.dcv(n, p + 1))
    assert (got - EFormElement(tuple(expected), 1)).is_zero(2)


def test_representations_are_holomorphic(n):
    g = gamma_simple(n)
    for mod in modules(n):
        assert all(v.is_zero(2) for v in mf.pi02_curvature(mod, g).values())
        _, bpart = mf.split_del_delbar(mod, g)
        assert mf.holomorphic_failures(bpart) == []
    assert mf.bundle_E_holomorphic_failures(g) == []


def test_three_term_formula_matches_direct(n):
    g = gamma_simple(n)
    for mod in (mf.fundamental(n), mf.counterexample_module(n)):
        direct = mf.pi02_curvature(mod, g)
        for w, t, i, j in product(range(mod.dim), range(n), range(n), range(n)):
            expected = direct[(w, j)] if t == i else EFormElement.zero(n, 2, mod.dim)
            assert (mf.pi02_formula_collapsed(mod, n, w, t, i, j) - expected).is_zero(2)


def test_twisted_module_is_not_holomorphic():
    n = 3
    g = gamma_simple(n)
    mod = mf.twisted_fundamental(n)
    assert any(not v.is_zero(2) for v in mf.pi02_curvature(mod, g).values())
    _, bpart = mf.split_del_delbar(mod, g)
    assert mf.holomorphic_failures(bpart)


def test_rank_one_counterexample_collapses_at_n2():
    g = gamma_simple(2)
    assert all(v.is_zero(2) for v in mf.pi02_curvature(mf.non_representation_example(), g).values())


def test_sigma02_expansion(n):
    g = gamma_simple(n)
    for key in product(range(n), repeat=6):
        assert (mf.sigma02_two_form(g, *key) - mf.sigma02_formula(n, *key)).is_zero(2)


def test_curvature_decomposition_two_lifts():
    n = 2
    mod = mf.fundamental(n)
    g = gamma_simple(n)
    for w, j in product(range(mod.dim), range(n)):
        direct = mf.tensor_curvature_direct(mod, g, w, 0, 0, j)
        for i in range(n):
            assert (mf.tensor_curvature_lifted(mod, g, w, i, i, j) - direct).is_zero(2)


def test_functor_squares(n):
    g = gamma_simple(n)
    fund = mf.fundamental(n)
    double = mf.direct_sum(fund, fund)
    ident = [[int(r == c) for c in range(n)] for r in range(n)]
    assert mf.functor_failures(ident, fund, fund, g) == []
    assert mf.functor_failures(mf.inclusion(fund, 2 * n, 0), fund, double, g) == []
    assert mf.functor_failures(mf.inclusion(fund, 2 * n, n), fund, double, g) == []


def test_non_intertwiner_rejected():
    fund = mf.fundamental(2)
    with pytest.raises(mf.IntertwinerError, match="L_"):
        mf.check_intertwiner([[1, 0], [0, 0]], fund, fund)
