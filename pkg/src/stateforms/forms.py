"""Differential forms on projective space in homogeneous coordinates.

A :class:`Form` is a finite sum ``c * m * w`` where ``c`` is a scalar, ``m`` a
sphere-reduced coefficient monomial and ``w`` a wedge monomial in the 1-forms
``dv_i`` and ``dcv_i`` (the differential of the conjugate coordinate).

Wedge monomials are sorted tuples of generator codes: ``dcv_i`` has code
``i - 1`` and ``dv_i`` has code ``n + i - 1``, so antiholomorphic generators
come first.  Forms are compared syntactically with ``==``; equality in the
quotient by the relation ideal is :func:`stateforms.relations.is_zero`.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable

from .scalars import (
    GaussianRational,
    ScalarPoly,
    Scalar,
    conj,
    format_monomial,
    format_scalar,
    mono_grade,
    mono_mul,
    mono_order_key,
    parse_factors,
    scalar,
    sphere_reduce,
    split_terms,
    star_monomial,
)

Wedge = tuple


# ---------------------------------------------------------------- wedge monomials

def holo_code(n: int, i: int) -> int:
    return n + i - 1


def antiholo_code(n: int, i: int) -> int:
    return i - 1


def bidegree(w: Wedge, n: int) -> tuple[int, int]:
    p = sum(1 for g in w if g >= n)
    return p, len(w) - p


def wedge_weight(w: Wedge, n: int) -> tuple:
    """Torus weight of a wedge monomial: dv_i counts +e_i, dcv_i counts -e_i."""
    out = [0] * n
    for g in w:
        if g >= n:
            out[g - n] += 1
        else:
            out[g] -= 1
    return tuple(out)


@lru_cache(maxsize=1 << 16)
def merge(w1: Wedge, w2: Wedge) -> tuple[Wedge | None, int]:
    """Product of two sorted wedge monomials: (sorted result, sign) or (None, 0)."""
    if not w1:
        return w2, 1
    if not w2:
        return w1, 1
    if set(w1) & set(w2):
        return None, 0
    inv = 0
    for y in w2:
        for x in w1:
            if x > y:
                inv += 1
    return tuple(sorted(w1 + w2)), (-1 if inv & 1 else 1)


def sort_wedge(gens: Iterable[int]) -> tuple[Wedge | None, int]:
    """Sort an arbitrary generator list, returning (sorted, sign) or (None, 0)."""
    gens = list(gens)
    if len(set(gens)) != len(gens):
        return None, 0
    sign = 1
    for i in range(len(gens)):
        for j in range(len(gens) - 1 - i):
            if gens[j] > gens[j + 1]:
                gens[j], gens[j + 1] = gens[j + 1], gens[j]
                sign = -sign
    return tuple(gens), sign


def format_wedge(w: Wedge, n: int) -> str:
    names = [f"dv{g - n + 1}" if g >= n else f"dcv{g + 1}" for g in w]
    return "^".join(names)


# ---------------------------------------------------------------- forms

class Form:
    """Element of the free exterior algebra over the sphere-reduced coefficient ring."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None, *, reduced: bool = False):
        self.n = n
        if not terms:
            self.terms = {}
        elif reduced:
            self.terms = {k: c for k, c in terms.items() if c != 0}
        else:
            acc: dict = {}
            for (w, m), c in terms.items():
                c = scalar(c)
                if c == 0:
                    continue
                w, s = sort_wedge(w)
                if w is None:
                    continue
                for mm, k in sphere_reduce(tuple(m)):
                    key = (w, mm)
                    acc[key] = acc.get(key, 0) + s * k * c
            self.terms = {k: c for k, c in acc.items() if c != 0}

    # ---- constructors
    @classmethod
    def zero(cls, n: int) -> Form:
        return cls(n)

    @classmethod
    def const(cls, n: int, c=1) -> Form:
        c = scalar(c)
        return cls(n, {((), (0,) * (2 * n)): c}, reduced=True)

    @classmethod
    def from_poly(cls, p: ScalarPoly) -> Form:
        return cls(p.n, {((), m): c for m, c in p.terms.items()}, reduced=True)

    @classmethod
    def v(cls, n: int, i: int) -> Form:
        return cls.from_poly(ScalarPoly.var(n, i))

    @classmethod
    def cv(cls, n: int, i: int) -> Form:
        return cls.from_poly(ScalarPoly.var(n, i, conjugate=True))

    @classmethod
    def dv(cls, n: int, i: int) -> Form:
        return cls(n, {((holo_code(n, i),), (0,) * (2 * n)): 1}, reduced=True)

    @classmethod
    def dcv(cls, n: int, i: int) -> Form:
        return cls(n, {((antiholo_code(n, i),), (0,) * (2 * n)): 1}, reduced=True)

    # ---- arithmetic
    def _coerce(self, other) -> Form | None:
        if isinstance(other, Form):
            if other.n != self.n:
                raise ValueError("mismatched ambient dimension")
            return other
        if isinstance(other, ScalarPoly):
            if other.n != self.n:
                raise ValueError("mismatched ambient dimension")
            return Form.from_poly(other)
        if isinstance(other, (int, GaussianRational)) or type(other).__name__ == "Fraction":
            return Form.const(self.n, other) if other != 0 else Form(self.n)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, c in o.terms.items():
            out[k] = out.get(k, 0) + c
        return Form(self.n, out, reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return Form(self.n, {k: -c for k, c in self.terms.items()}, reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Wedge product (scalars and polynomials act as 0-forms)."""
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return wedge(self, o)

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return wedge(o, self)

    def scale(self, c: Scalar) -> Form:
        c = scalar(c)
        if c == 0:
            return Form(self.n)
        return Form(self.n, {k: c * x for k, x in self.terms.items()}, reduced=True)

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, Form) else other
        if o is None:
            return NotImplemented
        return self.n == o.n and self.terms == o.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # ---- structure
    def degrees(self) -> set[int]:
        return {len(w) for w, _ in self.terms}

    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError("form has mixed degree")
        return ds.pop() if ds else 0

    def bidegrees(self) -> set[tuple[int, int]]:
        return {bidegree(w, self.n) for w, _ in self.terms}

    def grades(self) -> set[int]:
        n = self.n
        return {mono_grade(m) + bidegree(w, n)[0] - bidegree(w, n)[1] for w, m in self.terms}

    def coefficient(self, w: Wedge) -> ScalarPoly:
        return ScalarPoly(self.n, {m: c for (ww, m), c in self.terms.items() if ww == w}, reduced=True)

    def sorted_terms(self) -> list:
        n = self.n
        return sorted(self.terms.items(),
                      key=lambda t: (bidegree(t[0][0], n), t[0][0], mono_order_key(t[0][1])))

    def __str__(self):
        return format_form(self)

    def __repr__(self):
        return f"Form(n={self.n}, {format_form(self)!r})"


def form_grade(a: Form):
    """Common U(1) grade (None for zero, 'mixed' if several)."""
    g = a.grades()
    if not g:
        return None
    return g.pop() if len(g) == 1 else "mixed"


def wedge(a: Form, b: Form) -> Form:
    if a.n != b.n:
        raise ValueError("mismatched ambient dimension")
    out: dict = {}
    for (w1, m1), c1 in a.terms.items():
        for (w2, m2), c2 in b.terms.items():
            w, s = merge(w1, w2)
            if s == 0:
                continue
            c = c1 * c2 if s > 0 else -(c1 * c2)
            for m, k in mono_mul(m1, m2):
                key = (w, m)
                out[key] = out.get(key, 0) + k * c
    return Form(a.n, out, reduced=True)


def wedge_all(forms: Iterable[Form], n: int) -> Form:
    out = Form.const(n, 1)
    for f in forms:
        out = wedge(out, f)
    return out


@lru_cache(maxsize=1 << 16)
def _d_term(w: Wedge, m: tuple) -> tuple:
    """d(m * w) = dm ^ w as ((wedge, monomial, int), ...); m is canonical."""
    n = len(m) // 2
    out = []
    for idx, e in enumerate(m):
        if e == 0:
            continue
        g = holo_code(n, idx + 1) if idx < n else antiholo_code(n, idx - n + 1)
        ww, s = merge((g,), w)
        if s == 0:
            continue
        mm = list(m)
        mm[idx] -= 1
        out.append((ww, tuple(mm), s * e))
    return tuple(out)


def d(a: Form) -> Form:
    """Exterior derivative acting on coefficients (d of each generator is zero)."""
    out: dict = {}
    for (w, m), c in a.terms.items():
        for ww, mm, k in _d_term(w, m):
            key = (ww, mm)
            out[key] = out.get(key, 0) + k * c
    return Form(a.n, out, reduced=True)


def pi_pq(a: Form, p: int, q: int) -> Form:
    n = a.n
    return Form(n, {k: c for k, c in a.terms.items() if bidegree(k[0], n) == (p, q)}, reduced=True)


def _homogeneous_bidegree(a: Form) -> tuple[int, int] | None:
    bd = a.bidegrees()
    if len(bd) > 1:
        raise ValueError(f"form is not bihomogeneous: bidegrees {sorted(bd)}")
    return bd.pop() if bd else None


def del_(a: Form) -> Form:
    bd = _homogeneous_bidegree(a)
    if bd is None:
        return Form(a.n)
    return pi_pq(d(a), bd[0] + 1, bd[1])


def delbar(a: Form) -> Form:
    bd = _homogeneous_bidegree(a)
    if bd is None:
        return Form(a.n)
    return pi_pq(d(a), bd[0], bd[1] + 1)


@lru_cache(maxsize=1 << 14)
def _star_wedge(w: Wedge, n: int) -> tuple[Wedge, int]:
    conj_gens = [g - n if g >= n else g + n for g in w]
    ww, s = sort_wedge(conj_gens)
    return ww, s


def star_form(a: Form) -> Form:
    """Antilinear involution: v <-> cv, dv <-> dcv, conjugate coefficients.

    Each generator is conjugated in place and the result re-sorted, so
    ``(dv1^dcv2)* = dcv1^dv2`` and ``star(star(a)) == a``.
    """
    n = a.n
    out: dict = {}
    for (w, m), c in a.terms.items():
        ww, s = _star_wedge(w, n)
        for mm, k in sphere_reduce(star_monomial(m)):
            key = (ww, mm)
            out[key] = out.get(key, 0) + s * k * conj(c)
    return Form(n, out, reduced=True)


# ---------------------------------------------------------------- named forms

def theta(n: int) -> Form:
    """sum_i cv_i dv_i."""
    return sum((Form.cv(n, i) * Form.dv(n, i) for i in range(1, n + 1)), Form(n))


def theta_bar(n: int) -> Form:
    """sum_i v_i dcv_i."""
    return sum((Form.v(n, i) * Form.dcv(n, i) for i in range(1, n + 1)), Form(n))


def omega(n: int) -> Form:
    """sum_i dv_i ^ dcv_i."""
    return sum((Form.dv(n, i) * Form.dcv(n, i) for i in range(1, n + 1)), Form(n))


def sphere(n: int) -> Form:
    """sum_i v_i cv_i without reduction (a raw representative of 1)."""
    return Form(n, {((), tuple(1 if j in (i, n + i) else 0 for j in range(2 * n))): 1
                    for i in range(n)}, reduced=True)


# ---------------------------------------------------------------- text

def format_form(a: Form) -> str:
    if not a.terms:
        return "0"
    n = a.n
    parts = []
    for (w, m), c in a.sorted_terms():
        factors = "*".join(s for s in (format_monomial(m), format_wedge(w, n)) if s)
        if not factors:
            parts.append(format_scalar(c))
        elif c == 1:
            parts.append(factors)
        elif c == -1:
            parts.append("-" + factors)
        else:
            parts.append(f"{format_scalar(c)}*{factors}")
    return "+".join(parts)


_WEDGE_GEN = re.compile(r"^d(c?)v(\d+)$")


def _parse_wedge(text: str, n: int) -> list[int]:
    gens = []
    for g in text.split("^"):
        mt = _WEDGE_GEN.match(g)
        if not mt:
            raise ValueError(f"bad wedge generator {g!r}")
        i = int(mt.group(2))
        if not 1 <= i <= n:
            raise ValueError(f"generator {g!r} out of range for n={n}")
        gens.append(antiholo_code(n, i) if mt.group(1) else holo_code(n, i))
    return gens


def parse_form(text: str, n: int) -> Form:
    """Inverse of :func:`format_form`; wedge factors may appear unsorted."""
    if text.strip() == "0":
        return Form(n)
    raw: dict = {}
    for t in split_terms(text):
        c, expo, other = parse_factors(t, n)
        gens: list[int] = []
        for f in other:
            gens.extend(_parse_wedge(f, n))
        w, s = sort_wedge(gens)
        if w is None:
            continue
        key = (w, tuple(expo))
        raw[key] = raw.get(key, 0) + s * c
    return Form(n, raw)
