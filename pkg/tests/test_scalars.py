from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stateforms.scalars import (
    MIXED,
    GaussianRational,
    ScalarPoly,
    conj,
    format_poly,
    format_scalar,
    grade,
    parse_poly,
    parse_scalar,
    poly_normal_form,
    scalar,
    star_scalar,
)

I = GaussianRational(0, 1)


def P(text: str, n: int) -> ScalarPoly:
    return parse_poly(text, n)


class TestGaussianRational:
    def test_real_values_collapse_to_rationals(self):
        assert scalar(GaussianRational(Fraction(3, 4), 0)) == Fraction(3, 4)
        assert isinstance(scalar(GaussianRational(2, 0)), (int, Fraction))

    def test_field_operations_are_exact(self):
        z = GaussianRational(Fraction(1, 3), Fraction(-2, 5))
        assert z * z.inverse() == 1
        assert (z + z.conjugate()) == Fraction(2, 3)
        assert I * I == -1

    def test_inverse_of_zero_is_rejected(self):
        with pytest.raises(ZeroDivisionError):
            GaussianRational(0, 0).inverse()

    @pytest.mark.parametrize("text", ["3", "-1/2", "1/2+3/4*i", "-i", "2*i", "-5/3-1/7*i"])
    def test_text_round_trip(self, text):
        z = parse_scalar(text)
        assert parse_scalar(format_scalar(z)) == z


class TestNormalForm:
    def test_sphere_pair_reduces(self):
        assert P("v2*cv2", 2) == P("1-v1*cv1", 2)

    def test_sphere_relation_is_one(self):
        assert P("v1*cv1+v2*cv2", 2) == ScalarPoly.const(2, 1)
        assert P("v1*cv1+v2*cv2+v3*cv3", 3) == ScalarPoly.const(3, 1)

    def test_n3_substitution(self):
        assert P("v3*cv3*v1", 3) == P("v1-v1*v1*cv1-v1*v2*cv2", 3)

    def test_canonical_monomials_only(self):
        p = P("v2*v2*cv2*cv2*cv1", 2)
        assert all(min(m[1], m[3]) == 0 for m in p.terms)

    def test_normal_form_from_raw_dict(self):
        raw = {(0, 1, 0, 1): 1, (1, 0, 1, 0): 1}
        assert poly_normal_form(2, raw) == ScalarPoly.const(2, 1)


class TestGradeAndStar:
    def test_grade_zero_monomial(self):
        assert grade(P("v1*cv2*cv3*v4", 4)) == 0

    def test_grade_of_single_conjugate(self):
        assert grade(P("cv1", 2)) == -1

    def test_mixed_grade(self):
        assert grade(P("v1+cv1", 2)) == MIXED

    def test_star_swaps_generators(self):
        assert star_scalar(P("v1*cv2", 2)) == P("v2*cv1", 2)

    def test_star_is_antilinear(self):
        assert star_scalar(P("i*v1", 2)) == P("-i*cv1", 2)

    def test_conj_of_rational_is_identity(self):
        assert conj(Fraction(2, 3)) == Fraction(2, 3)


coeff = st.builds(lambda a, b, c: GaussianRational(Fraction(a, b), c),
                  st.integers(-4, 4), st.integers(1, 4), st.integers(-2, 2))


@st.composite
def polys(draw, n=3):
    terms = {}
    for _ in range(draw(st.integers(1, 4))):
        mono = tuple(draw(st.integers(0, 2)) for _ in range(2 * n))
        terms[mono] = draw(coeff)
    return ScalarPoly(n, terms)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_laws(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_star_is_multiplicative_involution(p, q):
    assert star_scalar(star_scalar(p)) == p
    assert star_scalar(p * q) == star_scalar(p) * star_scalar(q)


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_grade_is_additive(p, q):
    gp, gq = grade(p), grade(q)
    if gp in (None, MIXED) or gq in (None, MIXED) or (p * q).is_zero():
        return
    assert grade(p * q) == gp + gq


@settings(max_examples=60, deadline=None)
@given(polys())
def test_text_round_trip_is_exact(p):
    text = format_poly(p)
    assert parse_poly(text, p.n) == p
    assert format_poly(parse_poly(text, p.n)) == text
