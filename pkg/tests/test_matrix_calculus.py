from __future__ import annotations

import random

import pytest

from stateforms.kernels import Echelon
from stateforms.matrix_calculus import (
    MatTensor,
    d_uni,
    d_uni_0,
    elementary,
    format_tensor,
    from_matrix,
    identity,
    is_universal_form,
    parse_tensor,
    uni_basis,
    uni_product,
    unit,
)


def E(*pairs, n=2):
    return elementary(n, pairs)


def test_d_of_matrix_unit():
    assert d_uni_0(unit(2, 1, 2)) == MatTensor(2, 2, {(0, 0, 0, 1): 1, (1, 1, 0, 1): 1,
                                                      (0, 1, 0, 0): -1, (0, 1, 1, 1): -1})


def test_d_of_identity_vanishes():
    assert not d_uni_0(identity(2))


def test_d_of_diagonal():
    # eight elementary terms before cancellation, two after
    a = from_matrix([[1, 0], [0, 2]])
    one = identity(2)
    left = {(c, c) + k: v for c in range(2) for k, v in a.terms.items()}
    right = {k + (c, c): v for c in range(2) for k, v in a.terms.items()}
    assert len(left) + len(right) == 8
    assert d_uni_0(a) == MatTensor(2, 2, {(0, 0, 1, 1): 1, (1, 1, 0, 0): -1})
    assert one.k == 1


def test_d_of_two_tensor():
    one = identity(2)
    x = E((1, 1), (1, 2))
    expected = MatTensor(2, 3, {})
    for c in range(2):
        expected = expected + MatTensor(2, 3, {(c, c, 0, 0, 0, 1): 1})
        expected = expected - MatTensor(2, 3, {(0, 0, c, c, 0, 1): 1})
        expected = expected + MatTensor(2, 3, {(0, 0, 0, 1, c, c): 1})
    assert d_uni(x) == expected
    assert one == identity(2)


def test_d_squared_on_random_tensors():
    rng = random.Random(0)
    for _ in range(30):
        k = rng.randint(1, 3)
        terms = {tuple(rng.randrange(3) for _ in range(2 * k)): rng.randint(-3, 3) for _ in range(4)}
        assert not d_uni(d_uni(MatTensor(3, k, terms)))


def test_junction_product():
    assert uni_product(E((1, 1), (1, 2)), E((2, 2), (2, 1))) == E((1, 1), (1, 2), (2, 1))
    assert not uni_product(E((1, 1), (1, 2)), E((1, 1), (2, 2)))
    x = E((1, 1), (1, 2))
    assert uni_product(x, identity(2)) == x


def test_universal_form_membership():
    assert is_universal_form(d_uni_0(unit(2, 1, 2)))
    assert not is_universal_form(E((1, 1), (1, 1)))
    assert is_universal_form(E((1, 2), (1, 2)))


@pytest.mark.parametrize("m,n", [(0, 2), (1, 2), (2, 2), (0, 3), (1, 3)])
def test_basis_dimensions(m, n):
    basis = uni_basis(m, n)
    expected = n * n * (n * n - 1) ** m
    assert len(basis) == expected
    assert all(is_universal_form(x) for x in basis)
    cols = sorted({k for x in basis for k in x.terms})
    idx = {c: i for i, c in enumerate(cols)}
    rows = [[0] * len(cols) for _ in basis]
    for r, x in enumerate(basis):
        for k, c in x.terms.items():
            rows[r][idx[k]] = int(c)
    assert Echelon(rows, ncols=len(cols)).rank == expected


def test_graded_leibniz():
    forms = uni_basis(1, 2)[:6] + uni_basis(0, 2)
    for x in forms:
        for y in forms:
            sign = -1 if x.degree % 2 else 1
            assert d_uni(uni_product(x, y)) == uni_product(d_uni(x), y) + uni_product(x, d_uni(y)).scale(sign)


@pytest.mark.parametrize("text", ["E[1,2]", "E[1,1](x)E[2,1]", "1/2*E[1,2](x)E[2,2]+-E[2,1](x)E[1,1]"])
def test_text_round_trip(text):
    x = parse_tensor(text, 2)
    assert format_tensor(parse_tensor(format_tensor(x), 2)) == format_tensor(x)
