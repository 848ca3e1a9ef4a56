"""Universal differential calculus on M_n(C) inside tensor powers of M_n(C).

A :class:`MatTensor` of length ``k`` is a sparse combination of elementary
tensors ``E[a1,b1] (x) ... (x) E[ak,bk]``; keys are flat 0-based tuples
``(a1, b1, ..., ak, bk)``.  Degree-``m`` universal forms are the length
``m + 1`` tensors killed by every neighbouring multiplication.
"""

from __future__ import annotations

import re
from itertools import product
from typing import Iterable, Sequence

from .scalars import Scalar, format_scalar, parse_factors, scalar, split_terms, split_top


class MatTensor:
    __slots__ = ("n", "k", "terms")

    def __init__(self, n: int, k: int, terms: dict | None = None):
        if k < 1:
            raise ValueError("tensor length must be at least 1")
        self.n = n
        self.k = k
        out = {}
        for key, c in (terms or {}).items():
            if len(key) != 2 * k:
                raise ValueError("key length does not match tensor length")
            c = scalar(c)
            if c != 0:
                out[tuple(key)] = c
        self.terms = out

    @classmethod
    def _raw(cls, n: int, k: int, terms: dict) -> MatTensor:
        obj = cls.__new__(cls)
        obj.n, obj.k = n, k
        obj.terms = {key: c for key, c in terms.items() if c != 0}
        return obj

    def __add__(self, other: MatTensor) -> MatTensor:
        _check(self, other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + c
        return MatTensor._raw(self.n, self.k, out)

    def __neg__(self) -> MatTensor:
        return MatTensor._raw(self.n, self.k, {key: -c for key, c in self.terms.items()})

    def __sub__(self, other: MatTensor) -> MatTensor:
        return self + (-other)

    def scale(self, c: Scalar) -> MatTensor:
        c = scalar(c)
        return MatTensor._raw(self.n, self.k, {key: c * x for key, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, MatTensor):
            return uni_product(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, MatTensor):
            return NotImplemented
        return (self.n, self.k, self.terms) == (other.n, other.k, other.terms)

    def __hash__(self):
        return hash((self.n, self.k, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self) -> int:
        """Form degree: tensor length minus one."""
        return self.k - 1

    def __str__(self):
        return format_tensor(self)

    def __repr__(self):
        return f"MatTensor(n={self.n}, {format_tensor(self)!r})"


def _check(x: MatTensor, y: MatTensor) -> None:
    if x.n != y.n or x.k != y.k:
        raise ValueError("mismatched tensors")


def zero(n: int, k: int) -> MatTensor:
    return MatTensor._raw(n, k, {})


def unit(n: int, a: int, b: int) -> MatTensor:
    """Matrix unit E[a,b] (1-based indices) as a length-1 tensor."""
    if not (1 <= a <= n and 1 <= b <= n):
        raise ValueError("matrix unit index out of range")
    return MatTensor._raw(n, 1, {(a - 1, b - 1): 1})


def elementary(n: int, pairs: Sequence[tuple[int, int]]) -> MatTensor:
    """E[a1,b1] (x) ... with 1-based index pairs."""
    key = tuple(x - 1 for ab in pairs for x in ab)
    return MatTensor._raw(n, len(pairs), {key: 1})


def identity(n: int) -> MatTensor:
    return MatTensor._raw(n, 1, {(c, c): 1 for c in range(n)})


def from_matrix(mat: Sequence[Sequence]) -> MatTensor:
    n = len(mat)
    return MatTensor(n, 1, {(a, b): mat[a][b] for a in range(n) for b in range(n)})


def to_matrix(x: MatTensor) -> list[list]:
    if x.k != 1:
        raise ValueError("not a matrix")
    out = [[0] * x.n for _ in range(x.n)]
    for (a, b), c in x.terms.items():
        out[a][b] = c
    return out


def tensor(x: MatTensor, y: MatTensor) -> MatTensor:
    """Plain tensor product (concatenation of factors)."""
    if x.n != y.n:
        raise ValueError("mismatched n")
    out = {}
    for k1, c1 in x.terms.items():
        for k2, c2 in y.terms.items():
            out[k1 + k2] = c1 * c2
    return MatTensor._raw(x.n, x.k + y.k, out)


def as_tensor(a, n: int | None = None) -> MatTensor:
    if isinstance(a, MatTensor):
        return a
    return from_matrix(a)


def d_uni_0(a) -> MatTensor:
    """d a = 1 (x) a - a (x) 1."""
    x = as_tensor(a)
    if x.k != 1:
        raise ValueError("d_uni_0 takes a matrix")
    return d_uni(x)


def d_uni(x: MatTensor) -> MatTensor:
    """Alternating unit insertion: sum_i (-1)^i (... (x) 1 at slot i (x) ...)."""
    n, k = x.n, x.k
    out: dict = {}
    for key, c in x.terms.items():
        for i in range(k + 1):
            sgn = c if i % 2 == 0 else -c
            for e in range(n):
                nk = key[: 2 * i] + (e, e) + key[2 * i:]
                out[nk] = out.get(nk, 0) + sgn
    return MatTensor._raw(n, k + 1, out)


def uni_product(x: MatTensor, y: MatTensor) -> MatTensor:
    """Junction product: last factor of x times first factor of y."""
    if x.n != y.n:
        raise ValueError("mismatched n")
    out: dict = {}
    for k1, c1 in x.terms.items():
        a, b = k1[-2], k1[-1]
        for k2, c2 in y.terms.items():
            if b != k2[0]:
                continue
            nk = k1[:-2] + (a, k2[1]) + k2[2:]
            out[nk] = out.get(nk, 0) + c1 * c2
    return MatTensor._raw(x.n, x.k + y.k - 1, out)


def mult_map(x: MatTensor, pos: int) -> MatTensor:
    """Multiply factors ``pos`` and ``pos + 1`` (0-based)."""
    if not 0 <= pos < x.k - 1:
        raise ValueError("position out of range")
    out: dict = {}
    for key, c in x.terms.items():
        if key[2 * pos + 1] != key[2 * pos + 2]:
            continue
        nk = key[: 2 * pos] + (key[2 * pos], key[2 * pos + 3]) + key[2 * pos + 4:]
        out[nk] = out.get(nk, 0) + c
    return MatTensor._raw(x.n, x.k - 1, out)


def is_universal_form(x: MatTensor) -> bool:
    return all(not mult_map(x, pos) for pos in range(x.k - 1))


def left_mul(a, x: MatTensor) -> MatTensor:
    return uni_product(as_tensor(a), x)


def right_mul(x: MatTensor, a) -> MatTensor:
    return uni_product(x, as_tensor(a))


def _units(n: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(n) for b in range(n)]


def uni_basis_factored(m: int, n: int) -> list[tuple[tuple[int, int], tuple]]:
    """Index data ``(a0, (x1, ..., xm))`` of the basis ``E_a0 dE_x1 ... dE_xm``.

    Each ``x`` runs over matrix units other than ``E[n,n]``; since the units
    without ``E[n,n]`` together with the identity span M_n and ``d(1) = 0``,
    these ``n^2 (n^2 - 1)^m`` products form a basis of the degree-``m``
    universal forms.
    """
    units = _units(n)
    last = (n - 1, n - 1)
    xs = [u for u in units if u != last]
    return [(a0, tail) for a0 in units for tail in product(xs, repeat=m)]


def basis_element(n: int, a0: tuple[int, int], tail: Iterable[tuple[int, int]]) -> MatTensor:
    out = MatTensor._raw(n, 1, {a0: 1})
    for x in tail:
        out = uni_product(out, d_uni(MatTensor._raw(n, 1, {x: 1})))
    return out


def uni_basis(m: int, n: int, cap: int = 200000) -> list[MatTensor]:
    """Basis of degree-``m`` universal forms (length ``m + 1`` tensors)."""
    size = n * n * (n * n - 1) ** m
    if size > cap:
        from .relations import ResourceCapError
        raise ResourceCapError(f"universal basis of size {size} exceeds cap {cap}")
    return [basis_element(n, a0, tail) for a0, tail in uni_basis_factored(m, n)]


# ---------------------------------------------------------------- text

def format_tensor(x: MatTensor) -> str:
    if not x.terms:
        return "0"
    parts = []
    for key in sorted(x.terms):
        c = x.terms[key]
        atoms = "(x)".join(f"E[{key[2 * i] + 1},{key[2 * i + 1] + 1}]" for i in range(x.k))
        if c == 1:
            parts.append(atoms)
        elif c == -1:
            parts.append("-" + atoms)
        else:
            parts.append(f"{format_scalar(c)}*{atoms}")
    return "+".join(parts)


_ATOM = re.compile(r"^E\[(\d+),(\d+)\]$")


def parse_tensor(text: str, n: int) -> MatTensor:
    s = text.replace(" ", "")
    if s == "0":
        raise ValueError("cannot infer tensor length from 0")
    out: dict = {}
    k = None
    for term in split_terms(s):
        c, expo, other = parse_factors(term, n)
        if any(expo) or len(other) != 1:
            raise ValueError(f"bad tensor term {term!r}")
        atoms = split_top(other[0], "(x)")
        key = []
        for atom in atoms:
            mt = _ATOM.match(atom)
            if not mt:
                raise ValueError(f"bad matrix unit {atom!r}")
            a, b = int(mt.group(1)), int(mt.group(2))
            if not (1 <= a <= n and 1 <= b <= n):
                raise ValueError(f"matrix unit {atom!r} out of range for n={n}")
            key += [a - 1, b - 1]
        if k is None:
            k = len(atoms)
        elif k != len(atoms):
            raise ValueError("terms of different tensor length")
        out[tuple(key)] = out.get(tuple(key), 0) + c
    return MatTensor(n, k, out)
