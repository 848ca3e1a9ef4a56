"""The bimodule E = Col^n (x) C_{-1} over projective space and its connections.

Indices are 0-based throughout this module.  An element of ``E (x) Omega^k``
is a vector of ``rank`` grade -1 forms of degree ``k``; component ``p`` is the
coefficient of the basis column ``h_p``.  The generator ``h_i (x) cv_j`` is the
vector with ``cv_j`` in slot ``i``.

Every element decomposes as ``x = sum_{p,j} (h_p (x) cv_j) . (v_j x_p)`` because
``sum_j cv_j v_j = 1``; right connections are evaluated through this
decomposition and the right Leibniz rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Sequence

from .forms import Form, d, form_grade, pi_pq, star_form, wedge
from .matrix_calculus import MatTensor, d_uni, uni_product, unit
from .relations import DEFAULT_SLACK, is_zero
from .scalars import ScalarPoly, Scalar, conj, scalar, star_scalar


# ---------------------------------------------------------------- elements

@dataclass(frozen=True, eq=False)
class EFormElement:
    """Vector of forms: an element of (line-bundle module) (x) Omega^k."""

    comps: tuple
    k: int

    def __post_init__(self):
        if not self.comps:
            raise ValueError("empty element")
        n = self.comps[0].n
        if any(c.n != n for c in self.comps):
            raise ValueError("mismatched ambient dimension")

    @property
    def n(self) -> int:
        return self.comps[0].n

    @property
    def rank(self) -> int:
        return len(self.comps)

    @classmethod
    def zero(cls, n: int, k: int = 0, rank: int | None = None) -> EFormElement:
        return cls(tuple(Form(n) for _ in range(n if rank is None else rank)), k)

    @classmethod
    def of(cls, comps: Sequence[Form], k: int | None = None) -> EFormElement:
        comps = tuple(comps)
        if k is None:
            ds = set()
            for c in comps:
                ds |= c.degrees()
            if len(ds) > 1:
                raise ValueError("components have mixed degree")
            k = ds.pop() if ds else 0
        return cls(comps, k)

    def __add__(self, other: EFormElement) -> EFormElement:
        self._check(other)
        return EFormElement(tuple(a + b for a, b in zip(self.comps, other.comps)), max(self.k, other.k))

    def __sub__(self, other: EFormElement) -> EFormElement:
        self._check(other)
        return EFormElement(tuple(a - b for a, b in zip(self.comps, other.comps)), max(self.k, other.k))

    def __neg__(self) -> EFormElement:
        return EFormElement(tuple(-a for a in self.comps), self.k)

    def _check(self, other):
        if self.rank != other.rank or self.n != other.n:
            raise ValueError("mismatched elements")

    def scale(self, c: Scalar) -> EFormElement:
        return EFormElement(tuple(a.scale(c) for a in self.comps), self.k)

    def wedge_right(self, f: Form) -> EFormElement:
        """x . f (the form f multiplies on the right)."""
        kf = f.degree() if f.terms else 0
        return EFormElement(tuple(wedge(a, f) for a in self.comps), self.k + kf)

    def left_action(self, mat: Sequence[Sequence]) -> EFormElement:
        """Matrix acting on the column index."""
        n = self.n
        out = []
        for p in range(self.rank):
            acc = Form(n)
            for i in range(self.rank):
                c = scalar(mat[p][i])
                if c != 0:
                    acc = acc + self.comps[i].scale(c)
            out.append(acc)
        return EFormElement(tuple(out), self.k)

    def unit_action(self, r: int, t: int) -> EFormElement:
        """Action of the matrix unit E_{rt}: moves slot t to slot r."""
        out = [Form(self.n) for _ in range(self.rank)]
        out[r] = self.comps[t]
        return EFormElement(tuple(out), self.k)

    def project(self, p: int, q: int) -> EFormElement:
        return EFormElement(tuple(pi_pq(a, p, q) for a in self.comps), self.k)

    def is_zero(self, slack: int = DEFAULT_SLACK) -> bool:
        return all(is_zero(a, slack) for a in self.comps)

    def syntactically_zero(self) -> bool:
        return not any(a.terms for a in self.comps)

    def __eq__(self, other):
        if not isinstance(other, EFormElement):
            return NotImplemented
        return self.k == other.k and self.comps == other.comps

    def __hash__(self):
        return hash((self.k, self.comps))

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.comps) + "]"


def generator(n: int, i: int, j: int, rank: int | None = None) -> EFormElement:
    """h_i (x) cv_j."""
    rank = n if rank is None else rank
    comps = [Form(n) for _ in range(rank)]
    comps[i] = Form.cv(n, j + 1)
    return EFormElement(tuple(comps), 0)


def vacuum(n: int) -> EFormElement:
    """sum_i h_i (x) cv_i, the image of the identity."""
    return EFormElement(tuple(Form.cv(n, i + 1) for i in range(n)), 0)


def decompose(y: EFormElement) -> list[tuple[int, int, Form]]:
    """Pieces (p, j, f) with y = sum (h_p (x) cv_j) . f and f of grade 0."""
    n = y.n
    out = []
    for p, comp in enumerate(y.comps):
        if not comp.terms:
            continue
        for j in range(n):
            f = wedge(Form.v(n, j + 1), comp)
            if f.terms:
                out.append((p, j, f))
    return out


def check_grade(y: EFormElement, expected: int = -1) -> None:
    for c in y.comps:
        g = form_grade(c)
        if g is not None and g != expected:
            raise ValueError(f"component has grade {g}, expected {expected}")


def inner(x: EFormElement, y: EFormElement) -> Form:
    """<xbar, y> = sum_i star(x_i) y_i (x of degree 0)."""
    if x.rank != y.rank:
        raise ValueError("mismatched ranks")
    out = Form(x.n)
    for a, b in zip(x.comps, y.comps):
        if a.terms and b.terms:
            out = out + wedge(star_form(a), b)
    return out


# ---------------------------------------------------------------- connections

class RightConnection:
    """A right connection given on generators w_p (x) cv_j of a rank-r module.

    ``gens[(p, j)]`` is the value of the connection on the generator, an
    element of degree 1.  Everything else follows from right Leibniz.
    """

    def __init__(self, n: int, rank: int, gens: dict):
        self.n = n
        self.rank = rank
        self.gens = gens

    def generator(self, p: int, j: int) -> EFormElement:
        return generator(self.n, p, j, self.rank)

    def apply(self, x: EFormElement) -> EFormElement:
        """Right connection on a degree-0 element."""
        if x.k != 0:
            raise ValueError("apply takes a degree-0 element; use apply_higher")
        check_grade(x)
        return self.apply_higher(x)

    def apply_higher(self, y: EFormElement) -> EFormElement:
        """nabla^{[k]}(e (x) xi) = nabla(e) ^ xi + e (x) d xi."""
        return self.from_pieces(decompose(y), y.k)

    def from_pieces(self, pieces: Iterable[tuple[int, int, Form]], k: int | None = None) -> EFormElement:
        """Evaluate on sum_pieces (w_p (x) cv_j) . f via right Leibniz."""
        n = self.n
        comps = [Form(n) for _ in range(self.rank)]
        deg = 0
        for p, j, f in pieces:
            if not f.terms:
                continue
            deg = max(deg, f.degree())
            g = self.gens[(p, j)]
            for a in range(self.rank):
                if g.comps[a].terms:
                    comps[a] = comps[a] + wedge(g.comps[a], f)
            comps[p] = comps[p] + wedge(Form.cv(n, j + 1), d(f))
        return EFormElement(tuple(comps), (deg if k is None else k) + 1)

    def curvature(self, x: EFormElement) -> EFormElement:
        return self.apply_higher(self.apply(x))

    def curvature_apply(self, y: EFormElement) -> EFormElement:
        """(R ^ id)(y) for y of any degree, through the decomposition of y."""
        out = EFormElement.zero(self.n, y.k + 2, self.rank)
        for p, j, f in decompose(y):
            out = out + self.curvature(self.generator(p, j)).wedge_right(f)
        return out


# ---------------------------------------------------------------- Christoffel data

@dataclass(eq=False)
class GammaField:
    """n^4 one-forms Gamma^{pq}_{ij}, keyed by 0-based (p, q, i, j)."""

    n: int
    table: dict
    label: str = "custom"
    _cache: dict = field(default_factory=dict, repr=False)

    def __getitem__(self, key: tuple) -> Form:
        return self.table[key]

    def indices(self):
        return product(range(self.n), repeat=4)

    def connection(self) -> RightConnection:
        conn = self._cache.get("connection")
        if conn is None:
            n = self.n
            gens = {}
            for i, j in product(range(n), repeat=2):
                comps = []
                for p in range(n):
                    acc = Form(n)
                    for q in range(n):
                        g = self.table[(p, q, i, j)]
                        if g.terms:
                            acc = acc + wedge(Form.cv(n, q + 1), g)
                    comps.append(acc)
                gens[(i, j)] = EFormElement(tuple(comps), 1)
            conn = RightConnection(n, n, gens)
            self._cache["connection"] = conn
        return conn


@dataclass(eq=False)
class GMatrix:
    """n x n one-forms G_{pi} parametrising the connection family."""

    n: int
    entries: tuple  # row-major tuple of tuples of Forms

    def __getitem__(self, key: tuple) -> Form:
        p, i = key
        return self.entries[p][i]

    @classmethod
    def zero(cls, n: int) -> GMatrix:
        return cls(n, tuple(tuple(Form(n) for _ in range(n)) for _ in range(n)))

    def violations(self, slack: int = DEFAULT_SLACK) -> list[str]:
        """Failed invariants: anti-Hermitian and orthogonal to the conjugate coordinates."""
        n = self.n
        out = []
        for p, i in product(range(n), repeat=2):
            g = self.entries[p][i]
            if g.terms and (g.degrees() != {1} or form_grade(g) != 0):
                out.append(f"G[{p + 1},{i + 1}] is not a grade-0 one-form")
            if not is_zero(star_form(self.entries[i][p]) + g, slack):
                out.append(f"G*[{p + 1},{i + 1}] != -G[{p + 1},{i + 1}]")
        for p in range(n):
            s = Form(n)
            for i in range(n):
                s = s + wedge(Form.cv(n, i + 1), self.entries[p][i])
            if not is_zero(s, slack):
                out.append(f"sum_i G[{p + 1},i] cv_i != 0")
        return out


def _kron(a: int, b: int) -> int:
    return 1 if a == b else 0


def gamma_from_G(G: GMatrix, validate: bool = True, label: str | None = None) -> GammaField:
    """Gamma^{pq}_{rs} = v_q C^p_{rs},  C^p_{rs} = delta_{pr} dcv_s + D_{pr} cv_s,
    D_{pr} = -v_r dcv_p + cv_p dv_r + G_{pr}."""
    n = G.n
    if validate:
        bad = G.violations()
        if bad:
            raise ValueError("invalid G: " + "; ".join(bad))
    v = [Form.v(n, i + 1) for i in range(n)]
    cv = [Form.cv(n, i + 1) for i in range(n)]
    dv = [Form.dv(n, i + 1) for i in range(n)]
    dcv = [Form.dcv(n, i + 1) for i in range(n)]
    D = {(p, r): -wedge(v[r], dcv[p]) + wedge(cv[p], dv[r]) + G[p, r]
         for p, r in product(range(n), repeat=2)}
    C = {}
    for p, r, s in product(range(n), repeat=3):
        c = wedge(D[(p, r)], cv[s])
        if p == r:
            c = c + dcv[s]
        C[(p, r, s)] = c
    table = {(p, q, r, s): wedge(v[q], C[(p, r, s)]) for p, q, r, s in product(range(n), repeat=4)}
    return GammaField(n, table, label or "from_G")


def gamma_C(gamma: GammaField) -> dict:
    """C^p_{rs} = sum_j cv_j Gamma^{pj}_{rs}."""
    n = gamma.n
    out = {}
    for p, r, s in product(range(n), repeat=3):
        acc = Form(n)
        for j in range(n):
            acc = acc + wedge(Form.cv(n, j + 1), gamma[(p, j, r, s)])
        out[(p, r, s)] = acc
    return out


def gamma_simple(n: int) -> GammaField:
    """Gamma^{pq}_{rs} = v_q (delta_{pr} dcv_s - cv_s v_r dcv_p + cv_s cv_p dv_r)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    table = {}
    for p, q, r, s in product(range(n), repeat=4):
        f = -wedge(Form.cv(n, s + 1) * Form.v(n, r + 1), Form.dcv(n, p + 1)) \
            + wedge(Form.cv(n, s + 1) * Form.cv(n, p + 1), Form.dv(n, r + 1))
        if p == r:
            f = f + Form.dcv(n, s + 1)
        table[(p, q, r, s)] = wedge(Form.v(n, q + 1), f)
    return GammaField(n, table, "simple")


def example_G(n: int, hermitian: bool = False) -> GMatrix:
    """G_{pi} = (delta_{pi} - cv_p v_i) eta for a fixed grade-0 one-form eta.

    With ``hermitian=False`` eta is anti-Hermitian, giving a valid nonzero G;
    ``hermitian=True`` flips the symmetry and breaks metric compatibility.
    """
    v1, v2 = Form.v(n, 1), Form.v(n, 2)
    c1, c2 = Form.cv(n, 1), Form.cv(n, 2)
    a = wedge(c1, Form.dv(n, 2))
    b = wedge(v1, Form.dcv(n, 2))
    if hermitian:
        eta = a + b
    else:
        eta = a - b + (a + b).scale(scalar("i"))
    entries = []
    for p in range(n):
        row = []
        for i in range(n):
            proj = Form.const(n, _kron(p, i)) - wedge(Form.cv(n, p + 1), Form.v(n, i + 1))
            row.append(wedge(proj, eta))
        entries.append(tuple(row))
    return GMatrix(n, tuple(entries))


def gamma_example(n: int) -> GammaField:
    return gamma_from_G(example_G(n), label="example_G")


def gamma_hermitian_counterexample(n: int) -> GammaField:
    return gamma_from_G(example_G(n, hermitian=True), validate=False, label="hermitian_G")


def validate_gamma(gamma: GammaField, slack: int = DEFAULT_SLACK) -> list[str]:
    """Failures of the gauge condition and of the right-connection condition."""
    out = []
    for key in gamma.indices():
        if not is_zero(gauge_defect(gamma, *key), slack):
            out.append(f"gauge{tuple(x + 1 for x in key)}")
    n = gamma.n
    for p, q, i, k in product(range(n), repeat=4):
        if not is_zero(right_connection_defect(gamma, p, q, i, k), slack):
            out.append(f"right-connection{(p + 1, q + 1, i + 1, k + 1)}")
    return out


# ---------------------------------------------------------------- identity defects

def _Q(n: int, i: int, j: int) -> Form:
    return wedge(Form.v(n, i + 1), Form.cv(n, j + 1))


def gauge_defect(gamma: GammaField, p: int, q: int, i: int, j: int) -> Form:
    """Gamma^{pq}_{ij} - sum_s Q_{qs} Gamma^{ps}_{ij}."""
    n = gamma.n
    acc = gamma[(p, q, i, j)]
    for s in range(n):
        acc = acc - wedge(_Q(n, q, s), gamma[(p, s, i, j)])
    return acc


def right_connection_defect(gamma: GammaField, p: int, q: int, i: int, k: int) -> Form:
    """sum_j Gamma^{pq}_{ij} (delta_{jk} - Q_{jk}) - delta_{pi} sum_j Q_{qj} dQ_{jk}."""
    n = gamma.n
    acc = Form(n)
    for j in range(n):
        acc = acc + wedge(gamma[(p, q, i, j)], Form.const(n, _kron(j, k)) - _Q(n, j, k))
        if p == i:
            acc = acc - wedge(_Q(n, q, j), d(_Q(n, j, k)))
    return acc


def nabla_E(gamma: GammaField, x: EFormElement) -> EFormElement:
    return gamma.connection().apply(x)


def nabla_E_higher(gamma: GammaField, y: EFormElement) -> EFormElement:
    if y.k < 1:
        raise ValueError("nabla_E_higher takes degree >= 1; use nabla_E")
    return gamma.connection().apply_higher(y)


def nabla_E_decomposed(gamma: GammaField, pieces: Iterable[tuple[int, int, Form]]) -> EFormElement:
    """Connection on an explicitly decomposed element sum (h_p (x) cv_j) . f."""
    return gamma.connection().from_pieces(list(pieces), 0)


def ip_defect(gamma: GammaField, s: int, t: int, i: int, j: int) -> Form:
    """delta_{is} d(v_t cv_j) - sum_{pq} [delta_{sp} v_t cv_q Gamma^{pq}_{ij}
    + (Gamma^{pq}_{st})^* delta_{pi} v_q cv_j]."""
    n = gamma.n
    acc = d(_Q(n, t, j)) if i == s else Form(n)
    for q in range(n):
        acc = acc - wedge(_Q(n, t, q), gamma[(s, q, i, j)])
        acc = acc - wedge(star_form(gamma[(i, q, s, t)]), _Q(n, q, j))
    return acc


def ip_preservation_check(gamma: GammaField, slack: int = DEFAULT_SLACK) -> bool:
    return all(is_zero(ip_defect(gamma, *key), slack) for key in gamma.indices())


def vacuum_defect(gamma: GammaField, p: int, q: int) -> Form:
    """sum_i Gamma^{pq}_{ii}."""
    n = gamma.n
    acc = Form(n)
    for i in range(n):
        acc = acc + gamma[(p, q, i, i)]
    return acc


# ---------------------------------------------------------------- curvature

def X_tensor(gamma: GammaField) -> dict:
    """X^{pq}_{ij} = d Gamma^{pq}_{ij} + sum_{st} Gamma^{pq}_{st} ^ Gamma^{st}_{ij}."""
    X = gamma._cache.get("X")
    if X is None:
        n = gamma.n
        X = {}
        for p, q, i, j in gamma.indices():
            acc = d(gamma[(p, q, i, j)])
            for s, t in product(range(n), repeat=2):
                acc = acc + wedge(gamma[(p, q, s, t)], gamma[(s, t, i, j)])
            X[(p, q, i, j)] = acc
        gamma._cache["X"] = X
    return X


def curvature_on_generator(gamma: GammaField, i: int, j: int) -> EFormElement:
    """R_E(h_i (x) cv_j) = sum h_p (x) cv_q (x) X^{pq}_{ij}."""
    n = gamma.n
    X = X_tensor(gamma)
    comps = []
    for p in range(n):
        acc = Form(n)
        for q in range(n):
            acc = acc + wedge(Form.cv(n, q + 1), X[(p, q, i, j)])
        comps.append(acc)
    return EFormElement(tuple(comps), 2)


def curvature_R_E(gamma: GammaField, x: EFormElement) -> EFormElement:
    """Curvature through the X tensor and right linearity."""
    out = EFormElement.zero(gamma.n, 2)
    for p, j, f in decompose(x):
        out = out + curvature_on_generator(gamma, p, j).wedge_right(f)
    return out


def curvature_direct(gamma: GammaField, x: EFormElement) -> EFormElement:
    """nabla^{[1]} nabla x."""
    return gamma.connection().curvature(x)


def left_defect_formula(gamma: GammaField, r: int, t: int, i: int, j: int) -> EFormElement:
    """delta_{ti} h_p cv_q X^{pq}_{rj} - delta_{tp} h_r cv_q X^{pq}_{ij}."""
    n = gamma.n
    X = X_tensor(gamma)
    comps = [Form(n) for _ in range(n)]
    for p, q in product(range(n), repeat=2):
        cq = Form.cv(n, q + 1)
        if t == i:
            comps[p] = comps[p] + wedge(cq, X[(p, q, r, j)])
        if t == p:
            comps[r] = comps[r] - wedge(cq, X[(p, q, i, j)])
    return EFormElement(tuple(comps), 2)


# ---------------------------------------------------------------- extended sigma and S

def _chain(gamma: GammaField, pairs: tuple, j: int) -> tuple:
    """T(q) = sum Gamma^{b1 q}_{a2 q2} ^ ... ^ Gamma^{b q'}_{a j} for each first index q."""
    cache = gamma._cache.setdefault("chain", {})
    key = (pairs, j)
    hit = cache.get(key)
    if hit is not None:
        return hit
    n = gamma.n
    if not pairs:
        out = tuple(Form.const(n, 1) if q == j else Form(n) for q in range(n))
    else:
        b, a = pairs[0]
        rest = _chain(gamma, pairs[1:], j)
        out = []
        for q in range(n):
            acc = Form(n)
            for q2 in range(n):
                if rest[q2].terms:
                    g = gamma[(b, q, a, q2)]
                    if g.terms:
                        acc = acc + wedge(g, rest[q2])
            out.append(acc)
        out = tuple(out)
    cache[key] = out
    return out


def _s_chain(gamma: GammaField, pairs: tuple, j: int) -> tuple:
    """Like :func:`_chain` with exactly one Gamma replaced by X, signed by the
    number of factors to its right."""
    cache = gamma._cache.setdefault("s_chain", {})
    key = (pairs, j)
    hit = cache.get(key)
    if hit is not None:
        return hit
    n = gamma.n
    if not pairs:
        out = tuple(Form(n) for _ in range(n))
    else:
        X = X_tensor(gamma)
        b, a = pairs[0]
        rest_s = _s_chain(gamma, pairs[1:], j)
        rest_t = _chain(gamma, pairs[1:], j)
        sign = -1 if (len(pairs) - 1) % 2 else 1
        out = []
        for q in range(n):
            acc = Form(n)
            for q2 in range(n):
                if rest_s[q2].terms and gamma[(b, q, a, q2)].terms:
                    acc = acc + wedge(gamma[(b, q, a, q2)], rest_s[q2])
                if rest_t[q2].terms and X[(b, q, a, q2)].terms:
                    term = wedge(X[(b, q, a, q2)], rest_t[q2])
                    acc = acc + term if sign > 0 else acc - term
            out.append(acc)
        out = tuple(out)
    cache[key] = out
    return out


def _pairs(key: tuple) -> tuple:
    m = len(key) // 2
    return tuple((key[2 * l + 1], key[2 * l + 2]) for l in range(m - 1))


def _elementary_map(gamma: GammaField, key: tuple, i: int, j: int, chain: Callable) -> Form | None:
    """Component a_1 of the closed formula on E_key (x) h_i (x) cv_j (None if zero)."""
    if key[-1] != i:
        return None
    n = gamma.n
    T = chain(gamma, _pairs(key), j)
    acc = Form(n)
    for q in range(n):
        if T[q].terms:
            acc = acc + wedge(Form.cv(n, q + 1), T[q])
    return acc


def _apply_closed(gamma: GammaField, xi: MatTensor, y: EFormElement, chain: Callable, extra: int) -> EFormElement:
    n = gamma.n
    comps = [Form(n) for _ in range(n)]
    for p, j, f in decompose(y):
        for key, c in xi.terms.items():
            val = _elementary_map(gamma, key, p, j, chain)
            if val is None or not val.terms:
                continue
            a1 = key[0]
            comps[a1] = comps[a1] + wedge(val, f).scale(c)
    return EFormElement(tuple(comps), xi.k - 1 + extra + y.k)


def sigma_hat(gamma: GammaField, xi: MatTensor, x: EFormElement) -> EFormElement:
    """Closed-formula extension of sigma_E to M_n^{(x) m} (x) E; x may have any degree
    (then the result is (sigma ^ id)(xi (x) x))."""
    return _apply_closed(gamma, xi, x, _chain, 0)


def S_hat(gamma: GammaField, xi: MatTensor, x: EFormElement) -> EFormElement:
    """Closed formula for S_E: alternating sum with one X factor per term."""
    return _apply_closed(gamma, xi, x, _s_chain, 1)


def sigma_one(gamma: GammaField, a: tuple, y: EFormElement) -> EFormElement:
    """(sigma ^ id)(dE_a (x) y) computed from the connection alone:
    sigma(dE_a (x) g) = nabla(E_a g) - E_a nabla(g)."""
    conn = gamma.connection()
    r, t = a
    out = EFormElement.zero(gamma.n, y.k + 1)
    for p, j, f in decompose(y):
        g = conn.generator(p, j)
        val = conn.apply(g.unit_action(r, t)) - conn.apply(g).unit_action(r, t)
        out = out + val.wedge_right(f)
    return out


def sigma_recursive(gamma: GammaField, a0: tuple, tail: Sequence[tuple], x: EFormElement) -> EFormElement:
    """sigma on E_{a0} dE_{x1} ... dE_{xm} (x) x by repeated first-order sigma."""
    y = x
    for a in reversed(tuple(tail)):
        y = sigma_one(gamma, a, y)
    return y.unit_action(*a0)


def S_definitional(gamma: GammaField, xi: MatTensor, x: EFormElement) -> EFormElement:
    """(sigma ^ id)(xi (x) nabla e) - (-1)^|xi| nabla sigma(xi (x) e) + (-1)^|xi| sigma(d xi (x) e)."""
    conn = gamma.connection()
    sgn = -1 if xi.degree % 2 else 1
    first = sigma_hat(gamma, xi, conn.apply(x))
    mid = conn.apply_higher(sigma_hat(gamma, xi, x))
    last = sigma_hat(gamma, d_uni(xi), x)
    out = first - mid if sgn > 0 else first + mid
    return out + last if sgn > 0 else out - last


def S_on_d_unit(gamma: GammaField, r: int, t: int, x: EFormElement) -> EFormElement:
    """R(E_rt x) - E_rt R(x)."""
    return curvature_direct(gamma, x.unit_action(r, t)) - curvature_direct(gamma, x).unit_action(r, t)


def pairing(e: EFormElement, y: EFormElement) -> Form:
    """(<,> (x) id)(ebar (x) y) for e of degree 0."""
    return inner(e, y)


# ---------------------------------------------------------------- identity residuals
# Each function returns lhs - rhs of an identity; the identity holds iff the
# residual vanishes modulo the relation ideal.

def _du(n: int, r: int, t: int) -> MatTensor:
    return d_uni(unit(n, r + 1, t + 1))


def left_unit(n: int, u: int, w: int, xi: MatTensor) -> MatTensor:
    """E_uw . xi in the universal calculus."""
    return uni_product(unit(n, u + 1, w + 1), xi)


def curvature_left_defect_residual(gamma: GammaField, r: int, t: int, e: EFormElement) -> EFormElement:
    """R(a e) - a R(e) against (sigma ^ id)(da (x) nabla e) + nabla^{[1]} sigma(da (x) e), a = E_rt."""
    conn = gamma.connection()
    n = gamma.n
    da = _du(n, r, t)
    lhs = conn.curvature(e.unit_action(r, t)) - conn.curvature(e).unit_action(r, t)
    rhs = sigma_hat(gamma, da, conn.apply(e)) + conn.apply_higher(sigma_hat(gamma, da, e))
    return lhs - rhs


def curvature_two_sided_residual(gamma: GammaField, u: int, w: int, r: int, t: int,
                                 e: EFormElement) -> EFormElement:
    """c R(a e) - c a R(e) with c = E_uw, a = E_rt, against the three-term right side."""
    conn = gamma.connection()
    n = gamma.n
    da = _du(n, r, t)
    c_da = left_unit(n, u, w, da)
    lhs = (conn.curvature(e.unit_action(r, t)).unit_action(u, w)
           - conn.curvature(e).unit_action(r, t).unit_action(u, w))
    rhs = (sigma_hat(gamma, c_da, conn.apply(e))
           + conn.apply_higher(sigma_hat(gamma, c_da, e))
           - sigma_hat(gamma, _du(n, u, w), sigma_hat(gamma, da, e)))
    return lhs - rhs


def sigma_from_connection_residual(gamma: GammaField, s: int, t: int, i: int, j: int) -> EFormElement:
    """Closed sigma(dE_st (x) h_i cv_j) against nabla(E_st e) - E_st nabla(e)."""
    e = generator(gamma.n, i, j)
    return sigma_hat(gamma, _du(gamma.n, s, t), e) - sigma_one(gamma, (s, t), e)


def sigma_index_formula(gamma: GammaField, s: int, t: int, i: int, j: int) -> EFormElement:
    """(delta_ti h_p delta_sr - delta_tp h_s delta_ri) (x) cv_q (x) Gamma^{pq}_{rj}."""
    n = gamma.n
    comps = [Form(n) for _ in range(n)]
    for p, q in product(range(n), repeat=2):
        cq = Form.cv(n, q + 1)
        if t == i:
            comps[p] = comps[p] + wedge(cq, gamma[(p, q, s, j)])
        if t == p:
            comps[s] = comps[s] - wedge(cq, gamma[(p, q, i, j)])
    return EFormElement(tuple(comps), 1)


def S_left_multiple_residual(gamma: GammaField, a: int, b: int, r: int, t: int,
                             i: int, j: int) -> EFormElement:
    """E_ab S(dE_rt (x) e) against S_hat((E_ab (x) E_rt - delta_br E_at (x) 1) (x) e)."""
    n = gamma.n
    e = generator(n, i, j)
    terms = {(a, b, r, t): 1}
    if b == r:
        for c in range(n):
            key = (a, t, c, c)
            terms[key] = terms.get(key, 0) - 1
    xi = MatTensor(n, 2, terms)
    return S_on_d_unit(gamma, r, t, e).unit_action(a, b) - S_hat(gamma, xi, e)


def S_exact_residual(gamma: GammaField, r: int, t: int, e: EFormElement) -> EFormElement:
    """S(dE_rt (x) e) = R(E_rt e) - E_rt R(e), with S from its closed formula."""
    return S_hat(gamma, _du(gamma.n, r, t), e) - S_on_d_unit(gamma, r, t, e)


def S_product_residual(gamma: GammaField, xi: MatTensor, kappa: MatTensor, e: EFormElement) -> EFormElement:
    """S(xi ^ kappa (x) e) against (sigma ^ id)(id (x) S) + (-1)^|kappa| (S ^ id)(id (x) sigma)."""
    lhs = S_hat(gamma, uni_product(xi, kappa), e)
    first = sigma_hat(gamma, xi, S_hat(gamma, kappa, e))
    second = S_hat(gamma, xi, sigma_hat(gamma, kappa, e))
    rhs = first - second if kappa.degree % 2 else first + second
    return lhs - rhs


def S_derivative_residual(gamma: GammaField, xi: MatTensor, e: EFormElement) -> EFormElement:
    """nabla S(xi (x) e) - S(d xi (x) e) against the curvature commutator form."""
    conn = gamma.connection()
    lhs = conn.apply_higher(S_hat(gamma, xi, e)) - S_hat(gamma, d_uni(xi), e)
    commutator = sigma_hat(gamma, xi, conn.curvature(e)) - conn.curvature_apply(sigma_hat(gamma, xi, e))
    rhs = commutator - S_hat(gamma, xi, conn.apply(e))
    if xi.degree % 2:
        rhs = -rhs
    return lhs - rhs


# ---------------------------------------------------------------- Col (x) Row-valued sections

def ksgns_inner(c1: Sequence, r1: Sequence[Form], c2: Sequence, r2: Sequence[Form]) -> Form:
    """<c1 (x) r1, c2 (x) r2> = (v r1^*) (c1^* c2) (r2 v^*) for constant columns c and
    row-vector valued functions r."""
    n = len(r1)
    cc = sum((conj(scalar(a)) * scalar(b) for a, b in zip(c1, c2)), 0)
    left = Form(n)
    right = Form(n)
    for i in range(n):
        left = left + wedge(Form.v(n, i + 1), star_form(r1[i]))
        right = right + wedge(r2[i], Form.cv(n, i + 1))
    return wedge(left, right).scale(cc)


def row_projection(r: Sequence[Form]) -> list[Form]:
    """r P with P_ij = cv_i v_j."""
    n = len(r)
    s = Form(n)
    for i in range(n):
        s = s + wedge(r[i], Form.cv(n, i + 1))
    return [wedge(s, Form.v(n, j + 1)) for j in range(n)]


def row_complement(r: Sequence[Form]) -> list[Form]:
    """r (1 - P)."""
    return [a - b for a, b in zip(r, row_projection(r))]


def ksgns_failures(sections: Sequence[tuple[Sequence, Sequence[Form]]]) -> list[str]:
    """Pairs of sections breaking P-invariance, and sections whose (1 - P) part is not null.
    Equality is exact after sphere reduction."""
    out = []
    proj = [(c, row_projection(r)) for c, r in sections]
    comp = [(c, row_complement(r)) for c, r in sections]
    for a, (c1, r1) in enumerate(sections):
        for b, (c2, r2) in enumerate(sections):
            if ksgns_inner(c1, r1, c2, r2) != ksgns_inner(proj[a][0], proj[a][1], proj[b][0], proj[b][1]):
                out.append(f"P-invariance fails for sections {a}, {b}")
        c, rc = comp[a]
        if ksgns_inner(c, rc, c, rc).terms:
            out.append(f"complement of section {a} is not null")
    return out
