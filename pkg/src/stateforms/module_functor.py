"""Modules over M_n, their universal connections, and the induced bundles.

A left M_n-module ``V`` of dimension ``dim`` is given by matrices
``L[(i, j)]`` (0-based), the action of the matrix unit ``E_ij``.  The right
module ``F = V (x) Row^n`` carries the universal connection

    nabla_F(v (x) r_i) = sum_{p,j} L_jp(v) (x) r_j (x) dE_pi .

F-valued universal forms are stored collapsed with Row (x)_{M_n} M_n = Row:
a dict ``{(u, j, key): c}`` means ``c e_u (x) r_j (x) (1 (x) E_key)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Sequence

from .bimodule import (
    EFormElement,
    GammaField,
    RightConnection,
    S_hat,
    decompose,
    generator,
    nabla_E,
    curvature_direct,
    sigma_hat,
)
from .forms import Form, pi_pq, wedge
from .matrix_calculus import MatTensor, d_uni, uni_product, unit
from .relations import DEFAULT_SLACK, is_zero
from .scalars import scalar

Matrix = tuple  # tuple of row tuples of scalars


def _mat(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(scalar(x) for x in row) for row in rows)


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(len(b))), 0) for j in range(len(b[0])))
                 for i in range(len(a)))


def _identity(d: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def _zero(d: int) -> Matrix:
    return tuple(tuple(0 for _ in range(d)) for _ in range(d))


@dataclass(frozen=True)
class LeftModule:
    n: int
    dim: int
    L: dict  # (i, j) -> dim x dim matrix
    name: str = "custom"

    def op(self, i: int, j: int) -> Matrix:
        return self.L[(i, j)]

    def trace_condition(self) -> bool:
        acc = _zero(self.dim)
        for j in range(self.n):
            m = self.L[(j, j)]
            acc = tuple(tuple(acc[r][c] + m[r][c] for c in range(self.dim)) for r in range(self.dim))
        return acc == _identity(self.dim)

    def representation_failures(self) -> list[tuple]:
        """Index tuples (c, g, e, s) with L_cg L_es != delta_ge L_cs."""
        out = []
        z = _zero(self.dim)
        for c, g, e, s in product(range(self.n), repeat=4):
            lhs = _matmul(self.L[(c, g)], self.L[(e, s)])
            rhs = self.L[(c, s)] if g == e else z
            if lhs != rhs:
                out.append((c, g, e, s))
        return out

    def is_representation(self) -> bool:
        return not self.representation_failures()

    def require_trace(self) -> None:
        if not self.trace_condition():
            raise ValueError(f"module {self.name!r} violates sum_j L_jj = id")


def fundamental(n: int) -> LeftModule:
    """C^n with E_ij acting as itself."""
    L = {}
    for i, j in product(range(n), repeat=2):
        L[(i, j)] = tuple(tuple(1 if (r == i and c == j) else 0 for c in range(n)) for r in range(n))
    return LeftModule(n, n, L, "fundamental")


def direct_sum(a: LeftModule, b: LeftModule) -> LeftModule:
    if a.n != b.n:
        raise ValueError("modules over different matrix algebras")
    dim = a.dim + b.dim
    L = {}
    for key in a.L:
        m = [[0] * dim for _ in range(dim)]
        for r in range(a.dim):
            for c in range(a.dim):
                m[r][c] = a.L[key][r][c]
        for r in range(b.dim):
            for c in range(b.dim):
                m[a.dim + r][a.dim + c] = b.L[key][r][c]
        L[key] = _mat(m)
    return LeftModule(a.n, dim, L, f"{a.name}+{b.name}")


def non_representation_example() -> LeftModule:
    """n = 2, dim 1: L11 = 1, L22 = 0, L12 = L21 = 1 (trace condition only)."""
    L = {(0, 0): ((1,),), (1, 1): ((0,),), (0, 1): ((1,),), (1, 0): ((1,),)}
    return LeftModule(2, 1, L, "non_representation")


def builtin_module(name: str, n: int) -> LeftModule:
    if name == "fundamental":
        return fundamental(n)
    if name == "sum":
        return direct_sum(fundamental(n), fundamental(n))
    if name == "twisted":
        return twisted_fundamental(n)
    if name == "counterexample":
        return counterexample_module(n)
    if name == "non_representation":
        if n != 2:
            raise ValueError("the rank-one non-representation example is defined for n = 2")
        return non_representation_example()
    raise ValueError(f"unknown builtin module {name!r}")


def load_module(path: str | Path) -> LeftModule:
    """JSON: {"n": 2, "dim": 1, "L": [[M_11, M_12], [M_21, M_22]]}, entries as strings."""
    data = json.loads(Path(path).read_text())
    n, dim = int(data["n"]), int(data["dim"])
    rows = data["L"]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError("L must be an n x n array of matrices")
    L = {}
    for i, j in product(range(n), repeat=2):
        m = rows[i][j]
        if len(m) != dim or any(len(r) != dim for r in m):
            raise ValueError(f"L[{i + 1}][{j + 1}] is not {dim} x {dim}")
        L[(i, j)] = _mat([[Fraction(str(x)) for x in r] for r in m])
    return LeftModule(n, dim, L, data.get("name", Path(path).stem))


def apply_matrix(m: Matrix, x: EFormElement) -> EFormElement:
    """Act on the V index of a V (x) C_{-1} valued element."""
    rows = len(m)
    n = x.n
    comps = []
    for r in range(rows):
        acc = Form(n)
        for c in range(len(m[r])):
            if m[r][c] != 0 and x.comps[c].terms:
                acc = acc + x.comps[c].scale(m[r][c])
        comps.append(acc)
    return EFormElement(tuple(comps), x.k)


# ---------------------------------------------------------------- F-valued universal forms

def _add(acc: dict, key, c) -> None:
    acc[key] = acc.get(key, 0) + c


def _clean(acc: dict) -> dict:
    return {k: v for k, v in acc.items() if v != 0}


def collapse(full: dict) -> dict:
    """{(u, j, T)} meaning e_u (x) r_j (x) T with T a full tensor key -> collapsed form."""
    out: dict = {}
    for (u, j, key), c in full.items():
        if key[0] == j:
            _add(out, (u, key[1], key[2:]), c)
    return _clean(out)


def nabla_F_basis(mod: LeftModule, w: int, i: int) -> dict:
    """Collapsed nabla_F(e_w (x) r_i), using r_j (x) dE_pi = r_j (x) E_pi - delta_jp r_i (x) 1."""
    mod.require_trace()
    n = mod.n
    out: dict = {}
    for p, j in product(range(n), repeat=2):
        L = mod.L[(j, p)]
        for u in range(mod.dim):
            c = L[u][w]
            if c == 0:
                continue
            _add(out, (u, j, (p, i)), c)
            if j == p:
                for e in range(n):
                    _add(out, (u, i, (e, e)), -c)
    return _clean(out)


def nabla_F(mod: LeftModule, x: dict) -> dict:
    """nabla^{[k]} on a collapsed F-valued k-form."""
    n = mod.n
    out: dict = {}
    for (w, b, rest), c in x.items():
        for (u, j, key), c2 in nabla_F_basis(mod, w, b).items():
            _add(out, (u, j, key + rest), c * c2)
        # e_w (x) r_b (x) d(1 (x) rest)
        one_rest = MatTensor(n, 1 + len(rest) // 2, {(e, e) + rest: 1 for e in range(n)})
        full = {(w, b, key): c * c3 for key, c3 in d_uni(one_rest).terms.items()}
        for key, c4 in collapse(full).items():
            _add(out, key, c4)
    return _clean(out)


def right_act(x: dict, s: int, t: int) -> dict:
    """x . E_st on the last tensor factor (or on the row for 0-forms)."""
    out: dict = {}
    for (u, j, key), c in x.items():
        if key:
            if key[-1] == s:
                _add(out, (u, j, key[:-1] + (t,)), c)
        elif j == s:
            _add(out, (u, t, ()), c)
    return _clean(out)


def tensor_d_unit(w: int, i: int, s: int, t: int, n: int) -> dict:
    """e_w (x) r_i (x) dE_st collapsed."""
    full = {(w, i, key): c for key, c in d_uni(unit(n, s + 1, t + 1)).terms.items()}
    return collapse(full)


def leibniz_failures(mod: LeftModule) -> list[tuple]:
    """(w, i, s, t) where nabla(x E_st) != nabla(x) E_st + x (x) dE_st."""
    n = mod.n
    out = []
    for w, i, s, t in product(range(mod.dim), range(n), range(n), range(n)):
        x = {(w, i, ()): 1}
        lhs = nabla_F(mod, right_act(x, s, t))
        rhs = right_act(nabla_F(mod, x), s, t)
        for key, c in tensor_d_unit(w, i, s, t, n).items():
            _add(rhs, key, c)
        if _clean(lhs) != _clean(rhs):
            out.append((w, i, s, t))
    return out


def kernel_failures(mod: LeftModule) -> list[tuple]:
    """Basis elements whose connection value is not killed by multiplication."""
    out = []
    for w, i in product(range(mod.dim), range(mod.n)):
        acc: dict = {}
        for (u, j, key), c in nabla_F_basis(mod, w, i).items():
            if key[0] == j:
                _add(acc, (u, key[1]), c)
        if _clean(acc):
            out.append((w, i))
    return out


def S_coefficients(mod: LeftModule, w: int, i: int) -> dict:
    """{(u, j, p, q): c} with nabla_F(e_w (x) r_i) = sum S_ijpq(e_w)_u e_u (x) r_j (x) E_pq."""
    return {(u, j, key[0], key[1]): c for (u, j, key), c in nabla_F_basis(mod, w, i).items()}


def S_formula(mod: LeftModule, w: int, i: int) -> dict:
    """-v delta_ij delta_pq + delta_iq L_jp(v)."""
    n = mod.n
    out: dict = {}
    for j, p, q in product(range(n), repeat=3):
        if i == j and p == q:
            _add(out, (w, j, p, q), -1)
        if i == q:
            for u in range(mod.dim):
                c = mod.L[(j, p)][u][w]
                if c:
                    _add(out, (u, j, p, q), c)
    return _clean(out)


def curvature_F(mod: LeftModule, w: int, i: int) -> dict:
    return nabla_F(mod, nabla_F(mod, {(w, i, ()): 1}))


def curvature_F_formula(mod: LeftModule, w: int, i: int) -> dict:
    """sum L_ab(L_jp(v)) (x) r_a (x) dE_bj ^ dE_pi, collapsed."""
    n = mod.n
    full: dict = {}
    for a, b, j, p in product(range(n), repeat=4):
        M = _matmul(mod.L[(a, b)], mod.L[(j, p)])
        form = uni_product(d_uni(unit(n, b + 1, j + 1)), d_uni(unit(n, p + 1, i + 1)))
        for u in range(mod.dim):
            c = M[u][w]
            if c == 0:
                continue
            for key, c2 in form.terms.items():
                _add(full, (u, a, key), c * c2)
    return collapse(_clean(full))


# ---------------------------------------------------------------- induced bundle connections

def tensor_connection(mod: LeftModule, gamma: GammaField) -> RightConnection:
    """nabla(w (x) cv_j) = L_pr(w) (x) cv_q (x) Gamma^{pq}_{rj} on V (x) C_{-1}."""
    mod.require_trace()
    n = gamma.n
    contracted = {}
    for p, r, j in product(range(n), repeat=3):
        acc = Form(n)
        for q in range(n):
            acc = acc + wedge(Form.cv(n, q + 1), gamma[(p, q, r, j)])
        contracted[(p, r, j)] = acc
    gens = {}
    for w, j in product(range(mod.dim), range(n)):
        comps = [Form(n) for _ in range(mod.dim)]
        for p, r in product(range(n), repeat=2):
            col = mod.L[(p, r)]
            for u in range(mod.dim):
                c = col[u][w]
                if c != 0:
                    comps[u] = comps[u] + contracted[(p, r, j)].scale(c)
        gens[(w, j)] = EFormElement(tuple(comps), 1)
    return RightConnection(n, mod.dim, gens)


def _collapse_rows(n: int, dim: int, by_row: dict, k: int) -> EFormElement:
    """{(u, c): EFormElement over h} -> V (x) C_{-1} element via r_c (x) h_g -> delta_cg."""
    comps = [Form(n) for _ in range(dim)]
    for (u, c), val in by_row.items():
        comps[u] = comps[u] + val.comps[c]
    return EFormElement(tuple(comps), k)


def chain_connection(mod: LeftModule, gamma: GammaField, w: int, a: int, i: int, j: int) -> EFormElement:
    """nabla on w (x) r_a (x) h_i (x) cv_j through (id (x) sigma)(nabla_F (x) id) + id (x) nabla_E,
    collapsed only at the end."""
    n = gamma.n
    e = generator(n, i, j)
    by_row: dict = {}
    for p, jj in product(range(n), repeat=2):
        sig = sigma_hat(gamma, d_uni(unit(n, p + 1, a + 1)), e)
        for u in range(mod.dim):
            c = mod.L[(jj, p)][u][w]
            if c != 0:
                key = (u, jj)
                by_row[key] = by_row[key] + sig.scale(c) if key in by_row else sig.scale(c)
    ne = nabla_E(gamma, e)
    key = (w, a)
    by_row[key] = by_row[key] + ne if key in by_row else ne
    return _collapse_rows(n, mod.dim, by_row, 1)


def discarded_terms(mod: LeftModule, gamma: GammaField, w: int, a: int, i: int, j: int) -> EFormElement:
    """(w delta_at delta_ri - delta_ri delta_ta L_ps(w) delta_ps) (x) cv_q (x) Gamma^{tq}_{rj}
    summed over t, r, q, p, s (the pair that cancels after the Row (x) Col collapse)."""
    n = gamma.n
    comps = [Form(n) for _ in range(mod.dim)]
    t, r = a, i
    acc = Form(n)
    for q in range(n):
        acc = acc + wedge(Form.cv(n, q + 1), gamma[(t, q, r, j)])
    comps[w] = comps[w] + acc
    for p in range(n):
        for u in range(mod.dim):
            c = mod.L[(p, p)][u][w]
            if c != 0:
                comps[u] = comps[u] - acc.scale(c)
    return EFormElement(tuple(comps), 1)


def split_del_delbar(mod: LeftModule, gamma: GammaField) -> tuple[RightConnection, RightConnection]:
    """The (1,0) and (0,1) parts of the induced connection, from the closed formulas."""
    mod.require_trace()
    n = gamma.n
    dgens, bgens = {}, {}
    for w, j in product(range(mod.dim), range(n)):
        dc = [Form(n) for _ in range(mod.dim)]
        bc = [Form(n) for _ in range(mod.dim)]
        cvj = Form.cv(n, j + 1)
        for q in range(n):
            bc[w] = bc[w] + wedge(Form.cv(n, q + 1) * Form.v(n, q + 1), Form.dcv(n, j + 1))
        for p, r in product(range(n), repeat=2):
            col = mod.L[(p, r)]
            holo = wedge(cvj * Form.cv(n, p + 1), Form.dv(n, r + 1))
            anti = wedge(cvj * Form.v(n, r + 1), Form.dcv(n, p + 1))
            for u in range(mod.dim):
                c = col[u][w]
                if c != 0:
                    dc[u] = dc[u] + holo.scale(c)
                    bc[u] = bc[u] - anti.scale(c)
        dgens[(w, j)] = EFormElement(tuple(dc), 1)
        bgens[(w, j)] = EFormElement(tuple(bc), 1)
    return RightConnection(n, mod.dim, dgens), RightConnection(n, mod.dim, bgens)


def projected_connection(conn: RightConnection, p: int, q: int) -> RightConnection:
    gens = {key: g.project(p, q) for key, g in conn.gens.items()}
    return RightConnection(conn.n, conn.rank, gens)


def holomorphic_curvature(delbar_conn: RightConnection, x: EFormElement) -> EFormElement:
    """pi^{0,2} (id (x) delbar + delbar_V ^ id) delbar_V (x)."""
    return delbar_conn.curvature(x).project(0, 2)


def holomorphic_failures(delbar_conn: RightConnection, slack: int = DEFAULT_SLACK) -> list[tuple]:
    out = []
    for w, j in product(range(delbar_conn.rank), range(delbar_conn.n)):
        if not holomorphic_curvature(delbar_conn, delbar_conn.generator(w, j)).is_zero(slack):
            out.append((w, j))
    return out


def bundle_E_holomorphic_failures(gamma: GammaField, slack: int = DEFAULT_SLACK) -> list[tuple]:
    """(0,2) part of R_E on generators of E itself."""
    n = gamma.n
    return [(i, j) for i, j in product(range(n), repeat=2)
            if not curvature_direct(gamma, generator(n, i, j)).project(0, 2).is_zero(slack)]


def pi02_curvature(mod: LeftModule, gamma: GammaField) -> dict:
    """{(w, j): pi^{0,2} R(e_w (x) cv_j)} for the induced connection."""
    conn = tensor_connection(mod, gamma)
    return {(w, j): conn.curvature(conn.generator(w, j)).project(0, 2)
            for w, j in product(range(mod.dim), range(gamma.n))}


def pi02_formula(mod: LeftModule, n: int, w: int, c: int, g: int, t: int, i: int, j: int) -> EFormElement:
    """Three-term (0,2) curvature formula on e_w (x) r_t (x) h_i (x) cv_j, output slot (r_c, h_g)."""
    comps = [Form(n) for _ in range(mod.dim)]
    cvj = Form.cv(n, j + 1)
    v = [Form.v(n, x + 1) for x in range(n)]
    dcv = [Form.dcv(n, x + 1) for x in range(n)]

    def add(M, form):
        for u in range(mod.dim):
            coef = M[u][w]
            if coef != 0:
                comps[u] = comps[u] + form.scale(coef)

    for a in range(n):
        if t == i:
            for b, s in product(range(n), repeat=2):
                add(_matmul(mod.L[(c, a)], mod.L[(b, s)]), cvj * v[a] * v[s] * wedge(dcv[g], dcv[b]))
        add(mod.L[(c, a)], -(cvj * v[a] * v[i] * wedge(dcv[g], dcv[t])))
        for b in range(n):
            add(_matmul(mod.L[(c, g)], mod.L[(b, a)]), cvj * v[a] * v[i] * wedge(dcv[b], dcv[t]))
    return EFormElement(tuple(comps), 2)


def pi02_formula_collapsed(mod: LeftModule, n: int, w: int, t: int, i: int, j: int) -> EFormElement:
    out = EFormElement.zero(n, 2, mod.dim)
    for c in range(n):
        out = out + pi02_formula(mod, n, w, c, c, t, i, j)
    return out


# ---------------------------------------------------------------- curvature of the tensor product

def tensor_curvature_lifted(mod: LeftModule, gamma: GammaField, w: int, a: int, i: int, j: int) -> EFormElement:
    """id (x) R_E + (id (x) sigma)(R_F (x) id) + (id (x) S)(nabla_F (x) id) on the lift
    e_w (x) r_a (x) h_i (x) cv_j, collapsed at the end."""
    n = gamma.n
    e = generator(n, i, j)
    by_row: dict = {}

    def put(key, val):
        by_row[key] = by_row[key] + val if key in by_row else val

    put((w, a), curvature_direct(gamma, e))
    # R_F(e_w (x) r_a) = sum L_cx L_ys (x) r_c (x) dE_xy ^ dE_sa
    for c, x, y, s in product(range(n), repeat=4):
        M = _matmul(mod.L[(c, x)], mod.L[(y, s)])
        if not any(any(row) for row in M):
            continue
        xi = uni_product(d_uni(unit(n, x + 1, y + 1)), d_uni(unit(n, s + 1, a + 1)))
        val = sigma_hat(gamma, xi, e)
        for u in range(mod.dim):
            coef = M[u][w]
            if coef != 0:
                put((u, c), val.scale(coef))
    # nabla_F(e_w (x) r_a) = sum L_jp (x) r_j (x) dE_pa
    for jj, p in product(range(n), repeat=2):
        val = S_hat(gamma, d_uni(unit(n, p + 1, a + 1)), e)
        for u in range(mod.dim):
            coef = mod.L[(jj, p)][u][w]
            if coef != 0:
                put((u, jj), val.scale(coef))
    return _collapse_rows(n, mod.dim, by_row, 2)


def tensor_curvature_direct(mod: LeftModule, gamma: GammaField, w: int, a: int, i: int, j: int) -> EFormElement:
    """Curvature of the induced connection on the collapsed image delta_ai e_w (x) cv_j."""
    conn = tensor_connection(mod, gamma)
    if a != i:
        return EFormElement.zero(gamma.n, 2, mod.dim)
    return conn.curvature(conn.generator(w, j))


# ---------------------------------------------------------------- functoriality

class IntertwinerError(ValueError):
    pass


def check_intertwiner(theta: Sequence[Sequence], m1: LeftModule, m2: LeftModule) -> Matrix:
    th = _mat(theta)
    if len(th) != m2.dim or any(len(r) != m1.dim for r in th):
        raise IntertwinerError(f"intertwiner must be {m2.dim} x {m1.dim}")
    for i, j in product(range(m1.n), repeat=2):
        if _matmul(th, m1.L[(i, j)]) != _matmul(m2.L[(i, j)], th):
            raise IntertwinerError(f"theta does not intertwine L_{i + 1}{j + 1}")
    return th


def functor_failures(theta: Sequence[Sequence], m1: LeftModule, m2: LeftModule, gamma: GammaField,
                     slack: int = DEFAULT_SLACK) -> list[tuple]:
    """Basis elements where (theta (x) id) delbar_1 != delbar_2 (theta (x) id)."""
    th = check_intertwiner(theta, m1, m2)
    _, b1 = split_del_delbar(m1, gamma)
    _, b2 = split_del_delbar(m2, gamma)
    out = []
    for w, j in product(range(m1.dim), range(gamma.n)):
        lhs = apply_matrix(th, b1.apply(b1.generator(w, j)))
        image = apply_matrix(th, generator(gamma.n, w, j, m1.dim))
        rhs = b2.apply(image)
        diff = lhs - rhs
        if not diff.syntactically_zero() and not diff.is_zero(slack):
            out.append((w, j))
    return out


def inclusion(m1: LeftModule, total_dim: int, offset: int = 0) -> Matrix:
    return tuple(tuple(1 if r == c + offset else 0 for c in range(m1.dim)) for r in range(total_dim))


def counterexample_module(n: int) -> LeftModule:
    """A trace-condition module that is not a representation: the rank-one
    example at n = 2, the twisted fundamental module above."""
    return non_representation_example() if n == 2 else twisted_fundamental(n)


def twisted_fundamental(n: int) -> LeftModule:
    """C^n with E_12 acting as E_12 + E_21: trace condition holds, not a representation."""
    base = fundamental(n)
    L = dict(base.L)
    L[(0, 1)] = tuple(tuple(1 if (r, c) in ((0, 1), (1, 0)) else 0 for c in range(n)) for r in range(n))
    return LeftModule(n, n, L, "twisted")


def sigma02_two_form(gamma: GammaField, a: int, b: int, s: int, t: int, i: int, j: int) -> EFormElement:
    """pi^{0,2} sigma(dE_ab ^ dE_st (x) h_i (x) cv_j)."""
    n = gamma.n
    xi = uni_product(d_uni(unit(n, a + 1, b + 1)), d_uni(unit(n, s + 1, t + 1)))
    return sigma_hat(gamma, xi, generator(n, i, j)).project(0, 2)


def sigma02_formula(n: int, a: int, b: int, s: int, t: int, i: int, j: int) -> EFormElement:
    """sum_g h_g (x) cv_j (x) (d_ti v_a v_s dcv_g^dcv_b - d_bs v_a v_i dcv_g^dcv_t + d_ag v_s v_i dcv_b^dcv_t)."""
    v = [Form.v(n, x + 1) for x in range(n)]
    dcv = [Form.dcv(n, x + 1) for x in range(n)]
    cvj = Form.cv(n, j + 1)
    comps = []
    for g in range(n):
        acc = Form(n)
        if t == i:
            acc = acc + v[a] * v[s] * wedge(dcv[g], dcv[b])
        if b == s:
            acc = acc - v[a] * v[i] * wedge(dcv[g], dcv[t])
        if a == g:
            acc = acc + v[s] * v[i] * wedge(dcv[b], dcv[t])
        comps.append(cvj * acc)
    return EFormElement(tuple(comps), 2)
