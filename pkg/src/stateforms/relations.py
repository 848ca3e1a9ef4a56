"""Membership in the relation ideal generated by theta, theta_bar and omega.

The quotient ring is handled by homogenisation.  Write ``s = sum v_i cv_i``.
Working in the free polynomial exterior algebra ``P`` (no sphere reduction),
the ideal ``I = (theta, theta_bar, omega)`` is homogeneous for

* form bidegree ``(p, q)``,
* coefficient bidegree ``(deg_v, deg_cv)``,
* torus weight ``w`` in ``Z^n`` (``v_i``, ``dv_i`` weigh ``+e_i``;
  ``cv_i``, ``dcv_i`` weigh ``-e_i``),

and ``s`` has weight zero.  A form ``a`` lies in ``I + (s - 1)P`` exactly when
its homogenisation ``a_h`` (every term padded with powers of ``s`` to a common
coefficient degree) satisfies ``s^k a_h in I`` for some ``k``.  The ``slack``
parameter bounds ``k``; membership is monotone in it.

For fixed grading data the relevant piece of ``I`` is spanned by finitely many
integer rows ``monomial * wedge * rho``, which are row-reduced once and cached
in a :class:`RelationBasis`.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm

import numpy as np

from .forms import Form, bidegree, merge, wedge_weight
from .kernels import Echelon
from .scalars import compositions, imag_part, multinomial, real_part, scalar, sphere_reduce

DEFAULT_SLACK = 2
DEFAULT_COLUMN_CAP = 20000


class ResourceCapError(RuntimeError):
    """A relation component exceeded the configured size cap."""


@dataclass(frozen=True)
class ComponentKey:
    n: int
    p: int
    q: int
    deg_v: int
    deg_cv: int
    weight: tuple


def _wedges(n: int, p: int, q: int):
    for anti in combinations(range(n), q):
        for holo in combinations(range(n, 2 * n), p):
            yield anti + holo


def _monomials(n: int, deg_v: int, deg_cv: int, u: tuple):
    """Unreduced monomials with |alpha| = deg_v, |beta| = deg_cv and alpha - beta = u."""
    lower = [max(0, -x) for x in u]
    free = deg_cv - sum(lower)
    if free < 0 or deg_v - deg_cv != sum(u):
        return
    for extra in compositions(free, n):
        b = tuple(lo + e for lo, e in zip(lower, extra))
        a = tuple(bb + x for bb, x in zip(b, u))
        yield a + b


def component_columns(key: ComponentKey) -> list[tuple]:
    n = key.n
    cols = []
    for w in _wedges(n, key.p, key.q):
        ww = wedge_weight(w, n)
        u = tuple(x - y for x, y in zip(key.weight, ww))
        for m in _monomials(n, key.deg_v, key.deg_cv, u):
            cols.append((w, m))
    return cols


def _unit(n: int, idx: int) -> tuple:
    e = [0] * (2 * n)
    e[idx] = 1
    return tuple(e)


def _relation_rows(key: ComponentKey, index: dict) -> list[dict]:
    """Rows m*w*rho for rho in theta, theta_bar, omega landing in this component."""
    n, p, q, a, b, wt = key.n, key.p, key.q, key.deg_v, key.deg_cv, key.weight
    rows = []

    def emit(mult_key, gens):
        # gens: list of (coefficient monomial, wedge) making up rho
        if min(mult_key.p, mult_key.q, mult_key.deg_v, mult_key.deg_cv) < 0:
            return
        for w, m in component_columns(mult_key):
            row: dict = {}
            for gm, gw in gens:
                ww, s = merge(gw, w)
                if s == 0:
                    continue
                col = index[(ww, tuple(x + y for x, y in zip(m, gm)))]
                row[col] = row.get(col, 0) + s
            row = {c: v for c, v in row.items() if v}
            if row:
                rows.append(row)

    zero = (0,) * (2 * n)
    theta = [(_unit(n, n + i), (n + i,)) for i in range(n)]
    theta_bar = [(_unit(n, i), (i,)) for i in range(n)]
    omega_gens = []
    for i in range(n):
        w, s = merge((n + i,), (i,))
        omega_gens.append((zero, w, s))
    emit(ComponentKey(n, p - 1, q, a, b - 1, wt), theta)
    emit(ComponentKey(n, p, q - 1, a - 1, b, wt), theta_bar)
    # omega generators carry a sign from sorting dv_i ^ dcv_i
    if p >= 1 and q >= 1:
        mk = ComponentKey(n, p - 1, q - 1, a, b, wt)
        for w, m in component_columns(mk):
            row = {}
            for gm, gw, gs in omega_gens:
                ww, s = merge(gw, w)
                if s == 0:
                    continue
                col = index[(ww, m)]
                row[col] = row.get(col, 0) + s * gs
            row = {c: v for c, v in row.items() if v}
            if row:
                rows.append(row)
    return rows


class Component:
    """Row-reduced span of the ideal inside one finite graded piece."""

    def __init__(self, key: ComponentKey):
        self.key = key
        self.columns = component_columns(key)
        self.index = {c: i for i, c in enumerate(self.columns)}
        rows = _relation_rows(key, self.index)
        self.nrows = len(rows)
        mat = np.zeros((len(rows), len(self.columns)), dtype=object)
        for r, row in enumerate(rows):
            for c, v in row.items():
                mat[r, c] = v
        self.echelon = Echelon(mat, ncols=len(self.columns))

    @property
    def rank(self) -> int:
        return self.echelon.rank

    @property
    def reversed_echelon(self) -> Echelon:
        """Echelon of the same span with the column order reversed.

        Pivots then fall on the highest-index wedges, so normal forms keep the
        low-index ones; used only for display representatives.
        """
        ech = getattr(self, "_reversed", None)
        if ech is None:
            rows = np.asarray(self.echelon.rows, dtype=object)
            ech = Echelon(rows[:, ::-1] if rows.size else rows, ncols=len(self.columns))
            self._reversed = ech
        return ech

    def contains(self, vec) -> bool:
        return self.echelon.contains(vec)


@dataclass
class RelationBasis:
    """Thread-safe compute-once memo of :class:`Component` objects."""

    column_cap: int = DEFAULT_COLUMN_CAP
    _entries: dict = field(default_factory=dict)
    _pending: dict = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def component(self, key: ComponentKey) -> Component:
        with self._lock:
            comp = self._entries.get(key)
            if comp is not None:
                return comp
            ev = self._pending.get(key)
            owner = ev is None
            if owner:
                ev = self._pending[key] = threading.Event()
        if not owner:
            ev.wait()
            comp = self._entries.get(key)
            if comp is None:
                raise ResourceCapError(f"component {key} could not be built")
            return comp
        try:
            ncols = len(component_columns(key))
            if ncols > self.column_cap:
                raise ResourceCapError(
                    f"relation component {key} has {ncols} columns (cap {self.column_cap})")
            comp = Component(key)
            with self._lock:
                self._entries[key] = comp
            return comp
        finally:
            with self._lock:
                self._pending.pop(key, None)
            ev.set()

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()

    def stats(self) -> list[dict]:
        with self._lock:
            items = sorted(self._entries.items(), key=lambda kv: repr(kv[0]))
        return [
            {"n": k.n, "bidegree": [k.p, k.q], "coefficient_degree": [k.deg_v, k.deg_cv],
             "weight": list(k.weight), "columns": len(c.columns), "rows": c.nrows,
             "rank": c.rank, "backend": c.echelon.backend}
            for k, c in items
        ]

    def stats_json(self) -> str:
        return json.dumps(self.stats(), indent=2)


_DEFAULT_BASIS = RelationBasis()


def default_basis() -> RelationBasis:
    return _DEFAULT_BASIS


# ---------------------------------------------------------------- homogenisation

_S_POWERS: dict = {}


def s_power(n: int, j: int) -> tuple:
    """Unreduced expansion of (sum v_i cv_i)^j as ((monomial, int), ...)."""
    key = (n, j)
    out = _S_POWERS.get(key)
    if out is None:
        out = tuple((c + c, multinomial(c)) for c in compositions(j, n))
        _S_POWERS[key] = out
    return out


def _groups(a: Form) -> dict:
    """Split terms by (p, q, torus weight)."""
    n = a.n
    groups: dict = {}
    for (w, m), c in a.terms.items():
        p, q = bidegree(w, n)
        wt = tuple(x + y for x, y in zip(wedge_weight(w, n), (m[i] - m[n + i] for i in range(n))))
        groups.setdefault((p, q, wt), []).append((w, m, c))
    return groups


def _homogenise(n: int, terms: list, extra: int) -> tuple[int, int, dict]:
    """Pad every term to the top coefficient degree, then multiply by s^extra."""
    top = max(sum(m) for _, m, _ in terms)
    out: dict = {}
    deg_v = deg_cv = None
    for w, m, c in terms:
        j = (top - sum(m)) // 2 + extra
        for sm, k in s_power(n, j):
            mm = tuple(x + y for x, y in zip(m, sm))
            key = (w, mm)
            out[key] = out.get(key, 0) + k * c
        dv = sum(m[:n]) + j
        deg_v, deg_cv = dv, sum(m[n:]) + j
    return deg_v, deg_cv, out


def _integer_parts(vec: list) -> list[list[int]]:
    """Split a scalar vector into integer-scaled real and imaginary vectors."""
    out = []
    for part in (real_part, imag_part):
        vals = [Fraction(part(x)) for x in vec]
        if not any(vals):
            continue
        den = lcm(*(v.denominator for v in vals))
        out.append([int(v * den) for v in vals])
    return out


def ideal_member(a: Form, slack: int = DEFAULT_SLACK, basis: RelationBasis | None = None) -> bool:
    """True iff ``a`` is certified to lie in the relation ideal with saturation power <= slack."""
    if slack < 0:
        raise ValueError("slack must be non-negative")
    basis = basis or _DEFAULT_BASIS
    n = a.n
    for (p, q, wt), terms in sorted(_groups(a).items()):
        if not _group_member(n, p, q, wt, terms, slack, basis):
            return False
    return True


def _group_member(n, p, q, wt, terms, slack, basis) -> bool:
    for k in range(slack + 1):
        dv, dcv, vec = _homogenise(n, terms, k)
        comp = basis.component(ComponentKey(n, p, q, dv, dcv, wt))
        dense = [0] * len(comp.columns)
        for key, c in vec.items():
            dense[comp.index[key]] = c
        if all(comp.contains(part) for part in _integer_parts(dense)):
            return True
    return False


def is_zero(a: Form, slack: int = DEFAULT_SLACK, basis: RelationBasis | None = None) -> bool:
    return ideal_member(a, slack, basis)


def equivalent(a: Form, b: Form, slack: int = DEFAULT_SLACK, basis: RelationBasis | None = None) -> bool:
    return ideal_member(a - b, slack, basis)


def reduce_unhomogenised(n: int, vec: dict) -> Form:
    """Sphere-reduce a dict {(wedge, raw monomial): scalar} back to a Form."""
    return Form(n, vec)


def _normal_form(comp: Component, dense: list) -> list:
    """The unique coset representative with zeros in every pivot column
    (columns taken in reversed order)."""
    vec = [scalar(x) for x in reversed(dense)]
    ech = comp.reversed_echelon
    for row, c in zip(ech.rows, ech.pivots):
        f = vec[c]
        if f == 0:
            continue
        p = int(row[c])
        for j in range(c, len(vec)):
            r = int(row[j])
            if r:
                vec[j] = scalar(vec[j] - f * Fraction(r, p))
    return vec[::-1]


def simplify(a: Form, slack: int = DEFAULT_SLACK, basis: RelationBasis | None = None) -> Form:
    """Deterministic representative of ``a`` modulo the ideal.

    Zero when membership is certified at ``slack``; otherwise each graded piece
    is replaced by its echelon remainder at the lowest homogenisation degree.
    """
    if ideal_member(a, slack, basis):
        return Form(a.n)
    basis = basis or _DEFAULT_BASIS
    n = a.n
    out: dict = {}
    for (p, q, wt), terms in sorted(_groups(a).items()):
        dv, dcv, vec = _homogenise(n, terms, 0)
        comp = basis.component(ComponentKey(n, p, q, dv, dcv, wt))
        dense = [0] * len(comp.columns)
        for key, c in vec.items():
            dense[comp.index[key]] = c
        for col, c in zip(comp.columns, _normal_form(comp, dense)):
            if c != 0:
                out[col] = out.get(col, 0) + c
    return reduce_unhomogenised(n, out)
