"""Gaussian rationals and polynomials on the unit sphere.

Coefficients are kept as plain ``int`` or ``Fraction`` whenever they are real,
and as :class:`GaussianRational` only when the imaginary part is nonzero.
All arithmetic is exact.

A polynomial in ``v_1..v_n`` and ``cv_1..cv_n`` (the conjugates) is stored
sparsely as ``{monomial: coefficient}`` where a monomial is the exponent tuple
``(alpha_1..alpha_n, beta_1..beta_n)``.  Stored monomials are always reduced
by ``v_n cv_n -> 1 - sum_{i<n} v_i cv_i``, which makes the representation
canonical in the quotient ring.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator, Union

Rational = Union[int, Fraction]


def _rat(x) -> Rational:
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        return _rat(Fraction(x.strip()))
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use Fraction or str")
    return _rat(Fraction(x))


class GaussianRational:
    """Complex number with exact rational parts.  Never constructed with im == 0
    by the arithmetic below; use :func:`scalar` for normalisation."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _rat(re)
        self.im = _rat(im)

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return _mk(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return _mk(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return _mk(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return _mk(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return _mk(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return _mk(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return _mk(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)
        if isinstance(other, (int, Fraction)):
            return _mk(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self):
        den = self.re * self.re + self.im * self.im
        if den == 0:
            raise ZeroDivisionError("inverse of zero")
        return _mk(Fraction(self.re, 1) / den, Fraction(-self.im, 1) / den)

    def __truediv__(self, other):
        return self * inverse(other)

    def __rtruediv__(self, other):
        return other * self.inverse()

    def conjugate(self):
        return _mk(self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[int, Fraction, GaussianRational]

I_UNIT = GaussianRational(0, 1)


def _mk(re, im):
    re = _rat(re)
    im = _rat(im)
    if im == 0:
        return re
    return GaussianRational(re, im)


def scalar(x) -> Scalar:
    """Normalise ``x`` (int, Fraction, str, GaussianRational) to a canonical scalar."""
    if isinstance(x, GaussianRational):
        return _mk(x.re, x.im)
    if isinstance(x, str):
        return parse_scalar(x)
    return _rat(x)


def inverse(x: Scalar) -> Scalar:
    if isinstance(x, GaussianRational):
        return x.inverse()
    if x == 0:
        raise ZeroDivisionError("inverse of zero")
    return _rat(Fraction(1) / x)


def conj(x: Scalar) -> Scalar:
    return x.conjugate() if isinstance(x, GaussianRational) else x


def real_part(x: Scalar) -> Rational:
    return x.re if isinstance(x, GaussianRational) else x


def imag_part(x: Scalar) -> Rational:
    return x.im if isinstance(x, GaussianRational) else 0


# ---------------------------------------------------------------- text forms

def _fmt_rat(r: Rational) -> str:
    return str(r)


def format_scalar(x: Scalar) -> str:
    """``3``, ``-1/2``, ``i``, ``-3/2*i``, ``(1/2+3*i)``."""
    re, im = real_part(x), imag_part(x)
    if im == 0:
        return _fmt_rat(re)
    if im == 1:
        ims = "i"
    elif im == -1:
        ims = "-i"
    else:
        ims = f"{_fmt_rat(im)}*i"
    if re == 0:
        return ims
    sep = "" if ims.startswith("-") else "+"
    return f"({_fmt_rat(re)}{sep}{ims})"


_RAT_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_scalar(text: str) -> Scalar:
    """Inverse of :func:`format_scalar` (also accepts ``a+b*i`` without parentheses)."""
    s = text.strip().replace(" ", "")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s:
        raise ValueError("empty scalar")
    if not s.endswith("i"):
        if not _RAT_RE.match(s):
            raise ValueError(f"bad scalar {text!r}")
        return _rat(Fraction(s))
    # split off the imaginary part at the last sign not at position 0
    body = s[:-1]
    if body.endswith("*"):
        body = body[:-1]
    cut = max(body.rfind("+"), body.rfind("-"))
    re_s, im_s = (body[:cut], body[cut:]) if cut > 0 else ("", body)
    if im_s in ("", "+"):
        im = 1
    elif im_s == "-":
        im = -1
    elif _RAT_RE.match(im_s):
        im = Fraction(im_s)
    else:
        raise ValueError(f"bad scalar {text!r}")
    re_v = Fraction(re_s) if re_s else 0
    if re_s and not _RAT_RE.match(re_s):
        raise ValueError(f"bad scalar {text!r}")
    return _mk(re_v, im)


# ---------------------------------------------------------------- monomials

Monomial = tuple  # (alpha_1..alpha_n, beta_1..beta_n)


def alpha(m: Monomial) -> tuple:
    return m[: len(m) // 2]


def beta(m: Monomial) -> tuple:
    return m[len(m) // 2:]


def mono_grade(m: Monomial) -> int:
    n = len(m) // 2
    return sum(m[:n]) - sum(m[n:])


def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_order_key(m: Monomial) -> tuple:
    """Degree first, then lexicographically larger exponents of v1, v2, ... first."""
    return (sum(m), tuple(-e for e in m))


def compositions(total: int, parts: int) -> Iterator[tuple]:
    """All tuples of ``parts`` non-negative integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def multinomial(ks: Iterable[int]) -> int:
    ks = tuple(ks)
    out = factorial(sum(ks))
    for k in ks:
        out //= factorial(k)
    return out


@lru_cache(maxsize=None)
def sphere_reduce(m: Monomial) -> tuple:
    """Canonical expansion of one monomial: tuple of ``(monomial, int)`` pairs.

    ``(v_n cv_n)^k`` is replaced by ``(1 - sum_{i<n} v_i cv_i)^k`` expanded with
    the multinomial theorem; the output never contains ``v_n cv_n``.
    """
    n = len(m) // 2
    k = min(m[n - 1], m[2 * n - 1])
    if k == 0:
        return ((m, 1),)
    base = list(m)
    base[n - 1] -= k
    base[2 * n - 1] -= k
    out = []
    for c in compositions(k, n):
        # c[0] copies of 1, c[i] copies of -v_i cv_i for i = 1..n-1
        coef = multinomial(c) * (-1) ** (k - c[0])
        e = base[:]
        for i in range(1, n):
            e[i - 1] += c[i]
            e[n + i - 1] += c[i]
        out.append((tuple(e), coef))
    return tuple(out)


@lru_cache(maxsize=1 << 18)
def mono_mul(m1: Monomial, m2: Monomial) -> tuple:
    return sphere_reduce(tuple(a + b for a, b in zip(m1, m2)))


def _var_index(name: str, n: int) -> int:
    if name.startswith("cv"):
        i = int(name[2:])
        off = n
    elif name.startswith("v"):
        i = int(name[1:])
        off = 0
    else:
        raise ValueError(f"unknown variable {name!r}")
    if not 1 <= i <= n:
        raise ValueError(f"variable {name!r} out of range for n={n}")
    return off + i - 1


def format_monomial(m: Monomial) -> str:
    n = len(m) // 2
    parts = []
    for i in range(n):
        parts.extend([f"v{i + 1}"] * m[i])
    for i in range(n):
        parts.extend([f"cv{i + 1}"] * m[n + i])
    return "*".join(parts)


def format_term(c: Scalar, factors: str) -> str:
    """Coefficient times a factor string, with 1 and -1 elided."""
    if not factors:
        return format_scalar(c)
    if c == 1:
        return factors
    if c == -1:
        return "-" + factors
    return f"{format_scalar(c)}*{factors}"


def split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside parentheses and brackets."""
    out, depth, cur, i = [], 0, [], 0
    while i < len(text):
        ch = text[i]
        if depth == 0 and text.startswith(sep, i):
            out.append("".join(cur))
            cur = []
            i += len(sep)
            continue
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        cur.append(ch)
        i += 1
    out.append("".join(cur))
    return out


def split_terms(text: str) -> list[str]:
    """Split a sum on top-level ``+`` and on ``-`` that starts a new term."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty expression")
    terms = []
    for chunk in split_top(s, "+"):
        parts = split_top(chunk, "-")
        head, tail = parts[0], parts[1:]
        # a '-' right after an operator belongs to the factor that follows it
        while tail and (head == "" or head[-1] in "*^/"):
            head = head + "-" + tail.pop(0)
        terms.append(head)
        for piece in tail:
            if terms[-1] and terms[-1][-1] in "*^/":
                terms[-1] += "-" + piece
            else:
                terms.append("-" + piece)
    if any(t in ("", "-") for t in terms):
        raise ValueError(f"malformed sum {text!r}")
    return terms


# ---------------------------------------------------------------- polynomials

class ScalarPoly:
    """Element of C[v, cv]/(sum v_i cv_i - 1) in canonical form."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None, *, reduced: bool = False):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        if not terms:
            self.terms = {}
        elif reduced:
            self.terms = {m: c for m, c in terms.items() if c != 0}
        else:
            acc: dict = {}
            for m, c in terms.items():
                if len(m) != 2 * n:
                    raise ValueError("monomial length does not match n")
                c = scalar(c)
                if c == 0:
                    continue
                for mm, k in sphere_reduce(tuple(m)):
                    acc[mm] = acc.get(mm, 0) + k * c
            self.terms = {m: c for m, c in acc.items() if c != 0}

    # constructors
    @classmethod
    def const(cls, n: int, c=1) -> ScalarPoly:
        c = scalar(c)
        return cls(n, {(0,) * (2 * n): c} if c != 0 else {}, reduced=True)

    @classmethod
    def var(cls, n: int, i: int, conjugate: bool = False) -> ScalarPoly:
        e = [0] * (2 * n)
        e[(n if conjugate else 0) + i - 1] = 1
        return cls(n, {tuple(e): 1})

    def __add__(self, other):
        other = _as_poly(other, self.n)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return ScalarPoly(self.n, out, reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return ScalarPoly(self.n, {m: -c for m, c in self.terms.items()}, reduced=True)

    def __sub__(self, other):
        other = _as_poly(other, self.n)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_poly(other, self.n)
        if other is None:
            return NotImplemented
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c = c1 * c2
                for m, k in mono_mul(m1, m2):
                    out[m] = out.get(m, 0) + k * c
        return ScalarPoly(self.n, out, reduced=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = ScalarPoly.const(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = _as_poly(other, getattr(self, "n", 1))
        if other is None:
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: mono_order_key(t[0]))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"ScalarPoly(n={self.n}, {format_poly(self)!r})"


def _as_poly(x, n: int) -> ScalarPoly | None:
    if isinstance(x, ScalarPoly):
        if x.n != n:
            raise ValueError("mismatched ambient dimension")
        return x
    if isinstance(x, (int, Fraction, GaussianRational)):
        return ScalarPoly.const(n, x)
    return None


MIXED = "mixed"


def poly_normal_form(n: int, raw: dict) -> ScalarPoly:
    """Canonical representative of a raw ``{exponent tuple: coefficient}`` polynomial."""
    return ScalarPoly(n, raw)


def grade(p: ScalarPoly) -> int | str | None:
    """Common U(1) grade of all monomials, :data:`MIXED`, or ``None`` for zero."""
    grades = {mono_grade(m) for m in p.terms}
    if not grades:
        return None
    if len(grades) > 1:
        return MIXED
    return grades.pop()


def star_monomial(m: Monomial) -> Monomial:
    n = len(m) // 2
    return m[n:] + m[:n]


def star_scalar(p: ScalarPoly) -> ScalarPoly:
    """Antilinear involution v_i <-> cv_i."""
    return ScalarPoly(p.n, {star_monomial(m): conj(c) for m, c in p.terms.items()}, reduced=True)


def format_poly(p: ScalarPoly) -> str:
    if not p.terms:
        return "0"
    return "+".join(format_term(c, format_monomial(m)) for m, c in p.sorted_terms())


def parse_factors(term: str, n: int) -> tuple[Scalar, list, list[str]]:
    """Split one product term into (coefficient, monomial exponents, other factors)."""
    coef: Scalar = 1
    s = term
    if s.startswith("-"):
        coef = -1
        s = s[1:]
    expo = [0] * (2 * n)
    other = []
    for f in split_top(s, "*"):
        if not f:
            raise ValueError(f"malformed term {term!r}")
        if f == "i":
            coef = coef * I_UNIT
        elif f.startswith("(") or _RAT_RE.match(f):
            coef = coef * parse_scalar(f)
        elif re.fullmatch(r"c?v\d+", f):
            expo[_var_index(f, n)] += 1
        else:
            other.append(f)
    return scalar(coef), expo, other


def parse_poly(text: str, n: int) -> ScalarPoly:
    if text.strip() == "0":
        return ScalarPoly(n)
    raw: dict = {}
    for t in split_terms(text):
        c, expo, other = parse_factors(t, n)
        if other:
            raise ValueError(f"unexpected factor(s) {other} in polynomial")
        key = tuple(expo)
        raw[key] = raw.get(key, 0) + c
    return ScalarPoly(n, raw)
