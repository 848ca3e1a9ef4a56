"""Seeded random objects for property sweeps."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .forms import Form
from .scalars import GaussianRational, Scalar, ScalarPoly, scalar


def random_scalar(rng: random.Random, complex_rate: float = 0.25) -> Scalar:
    re = Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2, 3)))
    if rng.random() < complex_rate:
        return scalar(GaussianRational(re, Fraction(rng.randint(-2, 2))))
    return scalar(re)


def random_monomial(rng: random.Random, n: int, max_degree: int) -> tuple:
    expo = [0] * (2 * n)
    for _ in range(rng.randint(0, max_degree)):
        expo[rng.randrange(2 * n)] += 1
    return tuple(expo)


def random_poly(rng: random.Random, n: int, max_degree: int = 2, terms: int = 3) -> ScalarPoly:
    raw = {}
    for _ in range(rng.randint(1, terms)):
        m = random_monomial(rng, n, max_degree)
        raw[m] = raw.get(m, 0) + random_scalar(rng)
    return ScalarPoly(n, raw)


def random_wedge(rng: random.Random, n: int, degree: int) -> tuple:
    return tuple(sorted(rng.sample(range(2 * n), degree)))


def random_form(rng: random.Random, n: int, max_degree: int = 2, coef_degree: int = 2,
                terms: int = 3, degree: int | None = None) -> Form:
    """Sum of a few terms of a fixed form degree (random unless given)."""
    k = rng.randint(0, max_degree) if degree is None else degree
    raw = {}
    for _ in range(rng.randint(1, terms)):
        key = (random_wedge(rng, n, k), random_monomial(rng, n, coef_degree))
        raw[key] = raw.get(key, 0) + random_scalar(rng)
    return Form(n, raw)


def random_grade_form(rng: random.Random, n: int, grade: int, degree: int = 0, coef_degree: int = 2,
                      terms: int = 3) -> Form:
    """Random form whose every term has the given U(1) grade (v, dv count +1; cv, dcv count -1)."""
    raw = {}
    for _ in range(rng.randint(1, terms)):
        w = random_wedge(rng, n, degree)
        wg = sum(1 if g >= n else -1 for g in w)
        need = grade - wg
        base = rng.randint(0, coef_degree)
        a = max(0, need) + base
        b = max(0, -need) + base
        expo = [0] * (2 * n)
        for _ in range(a):
            expo[rng.randrange(n)] += 1
        for _ in range(b):
            expo[n + rng.randrange(n)] += 1
        key = (w, tuple(expo))
        raw[key] = raw.get(key, 0) + random_scalar(rng)
    return Form(n, raw)


def random_column(rng: random.Random, n: int) -> list:
    return [random_scalar(rng) for _ in range(n)]


def random_section(rng: random.Random, n: int, coef_degree: int = 2) -> tuple[list, list[Form]]:
    """A constant column and a row of polynomial functions."""
    row = [Form.from_poly(random_poly(rng, n, coef_degree)) for _ in range(n)]
    return random_column(rng, n), row


def all_wedges(n: int, degree: int):
    return list(combinations(range(2 * n), degree))
