"""Catalogue of verification checks, grouped into suites.

Every check takes a :class:`Config` and returns an :class:`Outcome`.  The CLI
and the test-suite both run checks from this catalogue, so a check id names
the same computation everywhere.
"""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Callable, Iterable

from . import module_functor as mf
from .bimodule import (
    EFormElement,
    GammaField,
    GMatrix,
    S_definitional,
    S_exact_residual,
    S_hat,
    S_left_multiple_residual,
    S_derivative_residual,
    S_on_d_unit,
    S_product_residual,
    X_tensor,
    curvature_R_E,
    curvature_direct,
    curvature_left_defect_residual,
    curvature_two_sided_residual,
    example_G,
    gamma_C,
    gamma_example,
    gamma_from_G,
    gamma_hermitian_counterexample,
    gamma_simple,
    gauge_defect,
    generator,
    inner,
    ip_defect,
    ksgns_failures,
    ksgns_inner,
    left_defect_formula,
    nabla_E,
    right_connection_defect,
    row_projection,
    sigma_from_connection_residual,
    sigma_hat,
    sigma_index_formula,
    sigma_recursive,
    vacuum,
    vacuum_defect,
    validate_gamma,
)
from .forms import (
    Form,
    d,
    del_,
    delbar,
    form_grade,
    format_form,
    parse_form,
    pi_pq,
    sphere,
    star_form,
    theta,
    theta_bar,
    omega,
    wedge,
)
from .kernels import Echelon
from .matrix_calculus import (
    MatTensor,
    basis_element,
    d_uni,
    format_tensor,
    is_universal_form,
    parse_tensor,
    uni_basis,
    uni_basis_factored,
    uni_product,
    unit,
)
from .relations import DEFAULT_SLACK, ResourceCapError, ideal_member, is_zero
from .report import FAIL, PASS, SKIPPED, CheckRecord, SuiteReport
from .sampling import random_form, random_grade_form, random_poly, random_section, random_scalar
from .scalars import conj, format_poly, parse_poly, scalar
from .state_map import (
    correction_check,
    d_cochain_check,
    d_cochain_defect,
    dbar_cochain_check,
    defect_formula,
    phi0,
    phi_definitional,
    phi_forms,
)

SUITES = ("calculus", "connection", "curvature", "extend", "cochain", "holomorphic", "ksgns")
CALCULI = ("d", "dbar")


@dataclass(frozen=True)
class Config:
    n: int = 2
    slack: int = DEFAULT_SLACK
    seed: int = 0
    max_uni_degree: int | None = None
    calculus: str = "dbar"
    module: str = "fundamental"
    samples: int = 100

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.slack < 0:
            raise ValueError("slack must be non-negative")
        if self.calculus not in CALCULI:
            raise ValueError(f"calculus must be one of {', '.join(CALCULI)}")
        if self.max_uni_degree is not None and self.max_uni_degree < 1:
            raise ValueError("max-uni-degree must be at least 1")
        if self.samples < 1:
            raise ValueError("samples must be positive")

    @property
    def uni_degree(self) -> int:
        """Top universal-form degree for sweeps: 3 at n = 2, 2 above."""
        if self.max_uni_degree is not None:
            return self.max_uni_degree
        return 3 if self.n == 2 else 2

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{self.n}:{salt}")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["max_uni_degree"] = self.uni_degree
        return out


@dataclass
class Outcome:
    passed: bool
    detail: str = ""
    witness: str | None = None


@dataclass(frozen=True)
class Check:
    check_id: str
    suite: str
    anchor: str
    run: Callable[[Config], Outcome]
    expect_failure: Callable[[Config], bool] = lambda cfg: False
    applies: Callable[[Config], bool] = lambda cfg: True


# ---------------------------------------------------------------- helpers

def _text(x) -> str:
    if isinstance(x, Form):
        return format_form(x)
    if isinstance(x, MatTensor):
        return format_tensor(x)
    return str(x)


def _vanishes(x, slack: int) -> bool:
    if isinstance(x, Form):
        return is_zero(x, slack)
    return x.is_zero(slack)


def _all_vanish(items: Iterable[tuple[str, object]], slack: int, what: str = "cases") -> Outcome:
    count = 0
    for label, residual in items:
        count += 1
        if not _vanishes(residual, slack):
            return Outcome(False, f"fails at {label}", f"{label}: residual {_text(residual)}")
    return Outcome(True, f"{count} {what}")


def _all_true(items: Iterable[tuple[str, bool]], what: str = "cases") -> Outcome:
    count = 0
    for label, ok in items:
        count += 1
        if not ok:
            return Outcome(False, f"fails at {label}", label)
    return Outcome(True, f"{count} {what}")


def _idx(*xs) -> str:
    return "(" + ",".join(str(x + 1) for x in xs) + ")"


@lru_cache(maxsize=None)
def _gamma(name: str, n: int) -> GammaField:
    if name == "simple":
        return gamma_simple(n)
    if name == "example":
        return gamma_example(n)
    if name == "hermitian":
        return gamma_hermitian_counterexample(n)
    raise ValueError(name)


def _gammas(n: int) -> list[GammaField]:
    return [_gamma("simple", n), _gamma("example", n)]


def _generators(n: int) -> list[tuple[str, EFormElement]]:
    out = [(f"h{i + 1}*cv{j + 1}", generator(n, i, j)) for i, j in product(range(n), repeat=2)]
    out.append(("vacuum", vacuum(n)))
    return out


def _basis(n: int, m: int) -> list[tuple[tuple, tuple, MatTensor]]:
    return [(a0, tail, basis_element(n, a0, tail)) for a0, tail in uni_basis_factored(m, n)]


def _sample(seq: list, limit: int | None, rng: random.Random) -> list:
    if limit is None or len(seq) <= limit:
        return seq
    picked = sorted(rng.sample(range(len(seq)), limit))
    return [seq[i] for i in picked]


def _combine(*outcomes: Outcome) -> Outcome:
    for o in outcomes:
        if not o.passed:
            return o
    return Outcome(True, "; ".join(o.detail for o in outcomes if o.detail))


# ---------------------------------------------------------------- calculus

def _random_forms(cfg: Config, salt: str) -> list[Form]:
    rng = cfg.rng(salt)
    return [random_form(rng, cfg.n) for _ in range(cfg.samples)]


def _generator_forms(n: int) -> list[Form]:
    out = []
    for i in range(1, n + 1):
        out += [Form.v(n, i), Form.cv(n, i), Form.dv(n, i), Form.dcv(n, i)]
        for j in range(1, n + 1):
            out.append(Form.v(n, i) * Form.cv(n, j))
    return out


def check_d_squared(cfg: Config) -> Outcome:
    forms = _generator_forms(cfg.n) + _random_forms(cfg, "d2")
    return _all_vanish(((f"form {k}", d(d(a))) for k, a in enumerate(forms)), cfg.slack, "forms")


def check_leibniz(cfg: Config) -> Outcome:
    rng = cfg.rng("leibniz")
    items = []
    for k in range(cfg.samples):
        a, b = random_form(rng, cfg.n), random_form(rng, cfg.n)
        sign = -1 if a.degree() % 2 else 1
        res = d(wedge(a, b)) - wedge(d(a), b) - wedge(a, d(b)).scale(sign)
        items.append((f"pair {k}", res))
    return _all_vanish(items, cfg.slack, "pairs")


def check_star(cfg: Config) -> Outcome:
    n = cfg.n
    rng = cfg.rng("star")
    forms = _generator_forms(n) + _random_forms(cfg, "star")
    involution = _all_true(((f"form {k}", star_form(star_form(a)) == a) for k, a in enumerate(forms)))
    commute = _all_vanish(((f"form {k}", d(star_form(a)) - star_form(d(a))) for k, a in enumerate(forms)),
                          cfg.slack, "forms")
    rev = []
    for k in range(cfg.samples // 2):
        a, b = random_form(rng, n), random_form(rng, n)
        sign = -1 if (a.degree() * b.degree()) % 2 else 1
        rev.append((f"pair {k}", star_form(wedge(a, b)) == wedge(star_form(b), star_form(a)).scale(sign)))
    reversal = _all_true(rev, "pairs")
    example = star_form(wedge(Form.dv(n, 1), Form.dcv(n, 2))) == -wedge(Form.dv(n, 2), Form.dcv(n, 1))
    theta_star = is_zero(star_form(theta(n)) - theta_bar(n), cfg.slack)
    return _combine(involution, commute, reversal,
                    Outcome(example, "", "star(dv1^dcv2) != -dv2^dcv1"),
                    Outcome(theta_star, "", "star(theta) != theta_bar"))


def check_relations(cfg: Config) -> Outcome:
    n = cfg.n
    s = cfg.slack
    members = [
        ("theta", theta(n), 0), ("theta_bar", theta_bar(n), 0), ("omega", omega(n), 0),
        ("d(sphere)", d(sphere(n)), s), ("d(theta)+omega", d(theta(n)) + omega(n), s),
        ("d(theta_bar)-omega", d(theta_bar(n)) - omega(n), s), ("d(omega)", d(omega(n)), s),
        ("del(sphere)-theta", pi_pq(d(sphere(n)), 1, 0) - theta(n), s),
    ]
    got = _all_true(((name, ideal_member(f, sl)) for name, f, sl in members), "relations")
    bare = [Form.dv(n, 1), Form.dcv(n, n)]
    if n > 2:
        bare.append(wedge(Form.dv(n, 1), Form.dv(n, 2)))
    non = _all_true(((format_form(f), not ideal_member(f, s + 2)) for f in bare), "non-members")
    mono = _all_true(((name, all(ideal_member(f, k) for k in range(sl, s + 2))) for name, f, sl in members),
                     "monotone")
    return _combine(got, non, mono)


def check_projections(cfg: Config) -> Outcome:
    n = cfg.n
    bideg = [(p, q) for p in range(n + 1) for q in range(n + 1)]
    items = []
    for k, a in enumerate(_random_forms(cfg, "proj")):
        total = Form(n)
        ok = True
        for p, q in bideg:
            part = pi_pq(a, p, q)
            total = total + part
            ok = ok and pi_pq(part, p, q) == part
            ok = ok and all(not pi_pq(part, p2, q2).terms for p2, q2 in bideg if (p2, q2) != (p, q))
        items.append((f"form {k}", ok and total == a))
    split = _all_true(items, "forms")
    sq = []
    for k, a in enumerate(_random_forms(cfg, "delsq")):
        for p, q in bideg:
            part = pi_pq(a, p, q)
            if part.terms:
                sq.append((f"form {k} del^2 on ({p},{q})", del_(del_(part))))
                sq.append((f"form {k} delbar^2 on ({p},{q})", delbar(delbar(part))))
    squares = _all_vanish(sq, cfg.slack, "squares")
    f = Form.const(n, 1) + Form.v(n, 1)
    facts = _all_true([
        ("pi(dv1+dcv1,0,1)", pi_pq(Form.dv(n, 1) + Form.dcv(n, 1), 0, 1) == Form.dcv(n, 1)),
        ("pi(0-form,1,0)", not pi_pq(f, 1, 0).terms),
        ("delbar(cv1)", delbar(Form.cv(n, 1)) == Form.dcv(n, 1)),
    ])
    try:
        delbar(Form.dv(n, 1) + Form.dcv(n, 1))
        rejects = Outcome(False, "", "delbar accepted a mixed-bidegree form")
    except ValueError:
        rejects = Outcome(True)
    return _combine(split, squares, facts, rejects)


def check_grade(cfg: Config) -> Outcome:
    rng = cfg.rng("grade")
    n = cfg.n
    items = []
    for k in range(cfg.samples):
        ga, gb = rng.randint(-1, 1), rng.randint(-1, 1)
        a = random_grade_form(rng, n, ga, degree=rng.randint(0, 2))
        b = random_grade_form(rng, n, gb, degree=rng.randint(0, 1))
        w = wedge(a, b)
        ok = form_grade(a) in (ga, None) and form_grade(b) in (gb, None)
        ok = ok and form_grade(w) in (ga + gb, None)
        ok = ok and form_grade(d(a)) in (ga, None)
        ok = ok and form_grade(star_form(a)) in (-ga, None)
        items.append((f"sample {k}", ok))
    gens = _all_true(((name, form_grade(f) == 0) for name, f in
                      [("theta", theta(n)), ("theta_bar", theta_bar(n)), ("omega", omega(n)),
                       ("sphere", sphere(n))]), "generators")
    return _combine(_all_true(items, "samples"), gens)


def _nullspace(rows: list[dict], ncols: int) -> list[list[Fraction]]:
    """Rational nullspace of the matrix whose columns are the given sparse vectors."""
    # solve sum_k lam_k rows[k] = 0
    m = len(rows)
    mat = [[Fraction(rows[k].get(c, 0)) for k in range(m)] for c in range(ncols)]
    pivots = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * m
        vec[fc] = Fraction(1)
        for row, pc in zip(mat, pivots):
            vec[pc] = -row[fc]
        basis.append(vec)
    return basis


def check_universal(cfg: Config) -> Outcome:
    n = cfg.n
    rng = cfg.rng("universal")
    units = [(a, b) for a, b in product(range(1, n + 1), repeat=2)]
    items = []
    for k in range(cfg.samples // 2):
        length = rng.randint(1, 3)
        terms = {}
        for _ in range(3):
            key = tuple(x for _ in range(length) for x in rng.choice(units))
            key = tuple(x - 1 for x in key)
            terms[key] = terms.get(key, 0) + random_scalar(rng)
        x = MatTensor(n, length, terms)
        items.append((f"tensor {k}", not d_uni(d_uni(x)).terms))
    dd = _all_true(items, "tensors")
    forms = [x for m in (1, 2) for x in uni_basis(m, n)]
    leib, closed = [], []
    for k in range(min(cfg.samples // 2, 40)):
        x, y = rng.choice(forms), rng.choice(forms)
        sign = -1 if x.degree % 2 else 1
        lhs = d_uni(uni_product(x, y))
        rhs = uni_product(d_uni(x), y) + uni_product(x, d_uni(y)).scale(sign)
        leib.append((f"pair {k}", lhs == rhs))
        closed.append((f"pair {k}", is_universal_form(uni_product(x, y))))
    dims = []
    top = 2 if n == 2 else 1
    for m in range(top + 1):
        basis = uni_basis(m, n)
        expected = n * n * (n * n - 1) ** m
        cols = sorted({key for x in basis for key in x.terms})
        index = {c: i for i, c in enumerate(cols)}
        mat = [[0] * len(cols) for _ in basis]
        for r, x in enumerate(basis):
            for key, c in x.terms.items():
                mat[r][index[key]] = int(c)
        rank = Echelon(mat, ncols=len(cols)).rank if basis else 0
        dims.append((f"degree {m}: {len(basis)} elements, rank {rank}, expected {expected}",
                     len(basis) == expected and rank == expected and all(map(is_universal_form, basis))))
    # relations sum_k c_k dE_k = 0 in degree one force sum_k dc_k ^ dE_k = 0
    pairs = list(product(units, units))
    rows = [uni_product(unit(n, *c), d_uni(unit(n, *a))).terms for c, a in pairs]
    cols = sorted({key for r in rows for key in r})
    cindex = {c: i for i, c in enumerate(cols)}
    null = _nullspace([{cindex[k]: v for k, v in r.items()} for r in rows], len(cols))
    prol = []
    for k, lam in enumerate(null):
        acc = MatTensor(n, 3, {})
        for coef, (c, a) in zip(lam, pairs):
            if coef:
                acc = acc + uni_product(d_uni(unit(n, *c)), d_uni(unit(n, *a))).scale(coef)
        prol.append((f"relation {k}", not acc.terms))
    return _combine(dd, _all_true(leib, "Leibniz pairs"), _all_true(closed, "products"),
                    _all_true(dims, "degrees"), _all_true(prol, "relations"))


def check_serialization(cfg: Config) -> Outcome:
    n = cfg.n
    rng = cfg.rng("serial")
    items = []
    for k in range(cfg.samples // 2):
        p = random_poly(rng, n)
        items.append((f"poly {k}", parse_poly(format_poly(p), n) == p))
        f = random_form(rng, n)
        items.append((f"form {k}", parse_form(format_form(f), n) == f))
    for m in (1, 2):
        for x in uni_basis(m, n)[:10]:
            items.append((format_tensor(x), parse_tensor(format_tensor(x), n) == x))
    return _all_true(items, "objects")


# ---------------------------------------------------------------- connection

def _over_gammas(cfg: Config, fn: Callable[[GammaField], Outcome]) -> Outcome:
    outs = []
    for g in _gammas(cfg.n):
        o = fn(g)
        if not o.passed:
            return Outcome(False, f"{g.label}: {o.detail}", o.witness)
        outs.append(f"{g.label}: {o.detail}")
    return Outcome(True, "; ".join(outs))


def check_gauge(cfg: Config) -> Outcome:
    return _over_gammas(cfg, lambda g: _all_vanish(
        ((_idx(*k), gauge_defect(g, *k)) for k in g.indices()), cfg.slack, "tuples"))


def check_right_condition(cfg: Config) -> Outcome:
    n = cfg.n
    return _over_gammas(cfg, lambda g: _all_vanish(
        ((_idx(*k), right_connection_defect(g, *k)) for k in product(range(n), repeat=4)), cfg.slack,
        "tuples"))


def check_metric(cfg: Config) -> Outcome:
    return _over_gammas(cfg, lambda g: _all_vanish(
        ((_idx(*k), ip_defect(g, *k)) for k in g.indices()), cfg.slack, "tuples"))


def check_metric_counterexample(cfg: Config) -> Outcome:
    g = _gamma("hermitian", cfg.n)
    for k in g.indices():
        res = ip_defect(g, *k)
        if not is_zero(res, cfg.slack):
            return Outcome(True, f"metric compatibility breaks at {_idx(*k)}")
    return Outcome(False, "the Hermitian-symmetric G still preserves the inner product")


def check_vacuum(cfg: Config) -> Outcome:
    n = cfg.n
    return _over_gammas(cfg, lambda g: _combine(
        _all_vanish(((_idx(p, q), vacuum_defect(g, p, q)) for p, q in product(range(n), repeat=2)),
                    cfg.slack, "pairs"),
        _all_vanish([("nabla(vacuum)", nabla_E(g, vacuum(n)))], cfg.slack)))


def gamma_D(gamma: GammaField) -> dict:
    """D_{pr} = sum_s (C^p_{rs} - delta_{pr} dcv_s) v_s."""
    n = gamma.n
    C = gamma_C(gamma)
    out = {}
    for p, r in product(range(n), repeat=2):
        acc = Form(n)
        for s in range(n):
            c = C[(p, r, s)]
            if p == r:
                c = c - Form.dcv(n, s + 1)
            acc = acc + wedge(c, Form.v(n, s + 1))
        out[(p, r)] = acc
    return out


def check_family(cfg: Config) -> Outcome:
    n = cfg.n
    simple = _gamma("simple", n)
    from_zero = gamma_from_G(GMatrix.zero(n))
    same = _all_true(((_idx(*k), simple[k] == from_zero[k]) for k in simple.indices()), "components")
    valid = _all_true(((g.label, not validate_gamma(g, cfg.slack)) for g in _gammas(n)), "fields")
    gvalid = _all_true([("example G", not example_G(n).violations(cfg.slack))])
    traces = []
    anti = []
    for g in _gammas(n):
        C = gamma_C(g)
        for p in range(n):
            acc = Form(n)
            for i in range(n):
                acc = acc + C[(p, i, i)]
            traces.append((f"{g.label} C^{p + 1}_ii", acc))
        D = gamma_D(g)
        for p, i in product(range(n), repeat=2):
            anti.append((f"{g.label} D{_idx(p, i)}", D[(p, i)] + star_form(D[(i, p)])))
    try:
        gamma_from_G(example_G(n, hermitian=True))
        rejects = Outcome(False, "", "an invalid G was accepted")
    except ValueError:
        rejects = Outcome(True)
    return _combine(same, valid, gvalid, _all_vanish(traces, cfg.slack, "traces"),
                    _all_vanish(anti, cfg.slack, "entries"), rejects)


def check_formula_text(cfg: Config) -> Outcome:
    """Gamma^{pq}_{rs} = v_q (delta_pr dcv_s - cv_s v_r dcv_p + cv_s cv_p dv_r), term by term."""
    n = cfg.n
    g = _gamma("simple", n)
    items = []
    for p, q, r, s in g.indices():
        v, cv = Form.v, Form.cv
        f = -(cv(n, s + 1) * v(n, r + 1) * Form.dcv(n, p + 1)) + cv(n, s + 1) * cv(n, p + 1) * Form.dv(n, r + 1)
        if p == r:
            f = f + Form.dcv(n, s + 1)
        items.append((_idx(p, q, r, s), g[(p, q, r, s)] == v(n, q + 1) * f))
    return _all_true(items, "components")


def check_connection_leibniz(cfg: Config) -> Outcome:
    n = cfg.n
    rng = cfg.rng("conn-leibniz")
    def run(g):
        items = []
        for k in range(max(10, cfg.samples // 5)):
            i, j = rng.randrange(n), rng.randrange(n)
            x = generator(n, i, j)
            f = random_grade_form(rng, n, 0)
            res = nabla_E(g, x.wedge_right(f)) - x.wedge_right(d(f)) - nabla_E(g, x).wedge_right(f)
            items.append((f"h{i + 1}*cv{j + 1} . f{k}", res))
        return _all_vanish(items, cfg.slack, "samples")
    return _over_gammas(cfg, run)


def check_inner(cfg: Config) -> Outcome:
    n = cfg.n
    rng = cfg.rng("inner")
    items = []
    for s, t, i, j in product(range(n), repeat=4):
        expect = Form.v(n, t + 1) * Form.cv(n, j + 1) if s == i else Form(n)
        items.append((_idx(s, t, i, j), inner(generator(n, s, t), generator(n, i, j)) == expect))
    e = vacuum(n)
    items.append(("<e,e> = 1", inner(e, e) == Form.const(n, 1)))
    for k in range(10):
        a = [[random_scalar(rng) for _ in range(n)] for _ in range(n)]
        items.append((f"<e, a e> = phi(a) #{k}", inner(e, e.left_action(a)) == phi0(a)))
    for k in range(10):
        x = EFormElement(tuple(random_grade_form(rng, n, -1) for _ in range(n)), 0)
        y = EFormElement(tuple(random_grade_form(rng, n, -1) for _ in range(n)), 0)
        items.append((f"hermitian #{k}", star_form(inner(x, y)) == inner(y, x)))
    return _all_true(items, "identities")


# ---------------------------------------------------------------- curvature

def _simple_R(n: int, i: int, j: int) -> EFormElement:
    """sum_p h_p (x) cv_j dcv_p ^ dv_i."""
    comps = [Form.cv(n, j + 1) * wedge(Form.dcv(n, p + 1), Form.dv(n, i + 1)) for p in range(n)]
    return EFormElement(tuple(comps), 2)


def check_curvature_simple(cfg: Config) -> Outcome:
    n = cfg.n
    g = _gamma("simple", n)
    items = []
    for i, j in product(range(n), repeat=2):
        x = generator(n, i, j)
        items.append((f"via X {_idx(i, j)}", curvature_R_E(g, x) - _simple_R(n, i, j)))
        items.append((f"direct {_idx(i, j)}", curvature_direct(g, x) - _simple_R(n, i, j)))
    return _all_vanish(items, cfg.slack, "evaluations")


def check_curvature_consistency(cfg: Config) -> Outcome:
    n = cfg.n
    return _over_gammas(cfg, lambda g: _all_vanish(
        ((name, curvature_R_E(g, x) - curvature_direct(g, x)) for name, x in _generators(n)),
        cfg.slack, "generators"))


def _X_literal(n: int, p: int, q: int, i: int, j: int) -> Form:
    return wedge(Form.dcv(n, p + 1), Form.dv(n, i + 1)) if q == j else Form(n)


def check_X_literal(cfg: Config) -> Outcome:
    n = cfg.n
    X = X_tensor(_gamma("simple", n))
    return _all_vanish(((_idx(*k), X[k] - _X_literal(n, *k)) for k in sorted(X)), cfg.slack, "tuples")


def check_X_contracted(cfg: Config) -> Outcome:
    """sum_q cv_q X^{pq}_{ij} = cv_j dcv_p ^ dv_i."""
    n = cfg.n
    X = X_tensor(_gamma("simple", n))
    items = []
    for p, i, j in product(range(n), repeat=3):
        acc = Form(n)
        for q in range(n):
            acc = acc + Form.cv(n, q + 1) * X[(p, q, i, j)]
        items.append((_idx(p, i, j), acc - Form.cv(n, j + 1) * wedge(Form.dcv(n, p + 1), Form.dv(n, i + 1))))
    return _all_vanish(items, cfg.slack, "triples")


def check_X_no_02(cfg: Config) -> Outcome:
    X = X_tensor(_gamma("simple", cfg.n))
    return _all_vanish(((_idx(*k), pi_pq(X[k], 0, 2)) for k in sorted(X)), cfg.slack, "tuples")


def check_X_bidegree(cfg: Config) -> Outcome:
    X = X_tensor(_gamma("simple", cfg.n))
    return _all_vanish(((_idx(*k), X[k] - pi_pq(X[k], 1, 1)) for k in sorted(X)), cfg.slack, "tuples")


def check_curvature_right_linear(cfg: Config) -> Outcome:
    n = cfg.n
    rng = cfg.rng("R-right")
    def run(g):
        items = []
        for k in range(max(10, cfg.samples // 10)):
            i, j = rng.randrange(n), rng.randrange(n)
            x = generator(n, i, j)
            f = random_grade_form(rng, n, 0)
            items.append((f"h{i + 1}*cv{j + 1} . f{k}",
                          curvature_direct(g, x.wedge_right(f)) - curvature_direct(g, x).wedge_right(f)))
        return _all_vanish(items, cfg.slack, "samples")
    return _over_gammas(cfg, run)


def check_curvature_higher(cfg: Config) -> Outcome:
    n = cfg.n
    rng = cfg.rng("R-higher")
    def run(g):
        conn = g.connection()
        items = []
        for k in range(max(6, cfg.samples // 20)):
            i, j = rng.randrange(n), rng.randrange(n)
            x = generator(n, i, j)
            xi = random_grade_form(rng, n, 0, degree=1)
            y = x.wedge_right(xi)
            lhs = conn.apply_higher(conn.apply_higher(y))
            items.append((f"h{i + 1}*cv{j + 1} ^ xi{k}", lhs - conn.curvature(x).wedge_right(xi)))
        return _all_vanish(items, cfg.slack, "samples")
    return _over_gammas(cfg, run)


def check_left_defect(cfg: Config) -> Outcome:
    n = cfg.n
    return _over_gammas(cfg, lambda g: _all_vanish(
        ((_idx(r, t, i, j), S_on_d_unit(g, r, t, generator(n, i, j)) - left_defect_formula(g, r, t, i, j))
         for r, t, i, j in product(range(n), repeat=4)), cfg.slack, "tuples"))


def check_not_left_linear(cfg: Config) -> Outcome:
    n = cfg.n
    g = _gamma("simple", n)
    for r, t, i, j in product(range(n), repeat=4):
        val = S_on_d_unit(g, r, t, generator(n, i, j))
        if not val.is_zero(cfg.slack):
            return Outcome(True, f"R(E_rt e) - E_rt R(e) is nonzero at {_idx(r, t, i, j)}")
    return Outcome(False, "the curvature commutes with every matrix unit")


def check_left_multiple_curvature(cfg: Config) -> Outcome:
    n = cfg.n
    return _over_gammas(cfg, lambda g: _all_vanish(
        ((f"E{_idx(r, t)} on {name}", curvature_left_defect_residual(g, r, t, e))
         for r, t in product(range(n), repeat=2) for name, e in _generators(n)), cfg.slack, "cases"))


def check_two_sided_curvature(cfg: Config) -> Outcome:
    n = cfg.n
    rng = cfg.rng("two_sided")
    gens = _generators(n)
    quads = list(product(range(n), repeat=4))
    def run(g):
        items = []
        for u, w, r, t in _sample(quads, 40 if n > 2 else None, rng):
            name, e = gens[rng.randrange(len(gens))]
            items.append((f"c=E{_idx(u, w)} a=E{_idx(r, t)} on {name}",
                          curvature_two_sided_residual(g, u, w, r, t, e)))
        return _all_vanish(items, cfg.slack, "cases")
    return _over_gammas(cfg, run)


# ---------------------------------------------------------------- extend

def check_sigma_recursive(cfg: Config) -> Outcome:
    n = cfg.n
    rng = cfg.rng("sigma-rec")
    top = cfg.uni_degree
    def run(g):
        items = []
        for m in range(1, top + 1):
            basis = _basis(n, m)
            full = n == 2 or m == 1
            for a0, tail, xi in (basis if full else _sample(basis, 40, rng)):
                for i, j in product(range(n), repeat=2):
                    e = generator(n, i, j)
                    items.append((f"{format_tensor(xi)} on h{i + 1}*cv{j + 1}",
                                  sigma_hat(g, xi, e) - sigma_recursive(g, a0, tail, e)))
        return _all_vanish(items, cfg.slack, "evaluations")
    return _over_gammas(cfg, run)


def check_sigma_first_order(cfg: Config) -> Outcome:
    n = cfg.n
    def run(g):
        items = []
        for s, t, i, j in product(range(n), repeat=4):
            items.append((f"connection route {_idx(s, t, i, j)}", sigma_from_connection_residual(g, s, t, i, j)))
            closed = sigma_hat(g, d_uni(unit(n, s + 1, t + 1)), generator(n, i, j))
            items.append((f"index formula {_idx(s, t, i, j)}", closed - sigma_index_formula(g, s, t, i, j)))
        return _all_vanish(items, cfg.slack, "evaluations")
    return _over_gammas(cfg, run)


def check_sigma_linear(cfg: Config) -> Outcome:
    n = cfg.n
    rng = cfg.rng("sigma-lin")
    forms = uni_basis(1, n) + uni_basis(2, n)[:30]
    def run(g):
        items = []
        for k in range(20):
            xi = rng.choice(forms)
            i, j = rng.randrange(n), rng.randrange(n)
            e = generator(n, i, j)
            f = random_grade_form(rng, n, 0)
            items.append((f"right {k}", sigma_hat(g, xi, e.wedge_right(f)) - sigma_hat(g, xi, e).wedge_right(f)))
            u, w = rng.randrange(n), rng.randrange(n)
            items.append((f"left {k}", sigma_hat(g, uni_product(unit(n, u + 1, w + 1), xi), e)
                          - sigma_hat(g, xi, e).unit_action(u, w)))
        return _all_vanish(items, cfg.slack, "samples")
    return _over_gammas(cfg, run)


def check_S_definitional(cfg: Config) -> Outcome:
    n = cfg.n
    top = 2 if n == 2 else 1
    def run(g):
        items = []
        for m in range(1, top + 1):
            for a0, tail, xi in _basis(n, m):
                for i, j in product(range(n), repeat=2):
                    e = generator(n, i, j)
                    items.append((f"{format_tensor(xi)} on h{i + 1}*cv{j + 1}",
                                  S_hat(g, xi, e) - S_definitional(g, xi, e)))
        return _all_vanish(items, cfg.slack, "evaluations")
    return _over_gammas(cfg, run)


def check_S_exact(cfg: Config) -> Outcome:
    n = cfg.n
    return _over_gammas(cfg, lambda g: _all_vanish(
        ((f"dE{_idx(r, t)} on {name}", S_exact_residual(g, r, t, e))
         for r, t in product(range(n), repeat=2) for name, e in _generators(n)), cfg.slack, "cases"))


def check_S_left_multiple(cfg: Config) -> Outcome:
    n = cfg.n
    return _over_gammas(cfg, lambda g: _all_vanish(
        ((_idx(*k), S_left_multiple_residual(g, *k)) for k in product(range(n), repeat=6)),
        cfg.slack, "tuples"))


def check_S_simple_formula(cfg: Config) -> Outcome:
    """S(E_ab (x) E_rt (x) h_i cv_j) = delta_ti h_a (x) cv_j dcv_b ^ dv_r."""
    n = cfg.n
    g = _gamma("simple", n)
    items = []
    for a, b, r, t, i, j in product(range(n), repeat=6):
        comps = [Form(n) for _ in range(n)]
        if t == i:
            comps[a] = Form.cv(n, j + 1) * wedge(Form.dcv(n, b + 1), Form.dv(n, r + 1))
        got = S_hat(g, MatTensor(n, 2, {(a, b, r, t): 1}), generator(n, i, j))
        items.append((_idx(a, b, r, t, i, j), got - EFormElement(tuple(comps), 2)))
    return _all_vanish(items, cfg.slack, "tuples")


def check_S_no_0m(cfg: Config) -> Outcome:
    n = cfg.n
    g = _gamma("simple", n)
    items = []
    for m in range(1, min(cfg.uni_degree, 2) + 1):
        for a0, tail, xi in _basis(n, m):
            for name, e in _generators(n):
                items.append((f"{format_tensor(xi)} on {name}", S_hat(g, xi, e).project(0, m + 1)))
    return _all_vanish(items, cfg.slack, "evaluations")


def check_S_product(cfg: Config) -> Outcome:
    n = cfg.n
    rng = cfg.rng("S-product")
    ones = uni_basis(1, n)
    def run(g):
        items = []
        for k in range(12):
            xi, kappa = rng.choice(ones), rng.choice(ones)
            name, e = rng.choice(_generators(n))
            items.append((f"{format_tensor(xi)} ^ {format_tensor(kappa)} on {name}",
                          S_product_residual(g, xi, kappa, e)))
        return _all_vanish(items, cfg.slack, "samples")
    return _over_gammas(cfg, run)


def check_S_derivative(cfg: Config) -> Outcome:
    n = cfg.n
    rng = cfg.rng("S-derivative")
    ones = uni_basis(1, n)
    def run(g):
        items = []
        for k in range(12):
            xi = rng.choice(ones)
            name, e = rng.choice(_generators(n))
            items.append((f"{format_tensor(xi)} on {name}", S_derivative_residual(g, xi, e)))
        return _all_vanish(items, cfg.slack, "samples")
    return _over_gammas(cfg, run)


# ---------------------------------------------------------------- cochain

def check_phi_basics(cfg: Config) -> Outcome:
    n = cfg.n
    rng = cfg.rng("phi")
    items = []
    for a, b in product(range(n), repeat=2):
        mat = [[1 if (r, c) == (a, b) else 0 for c in range(n)] for r in range(n)]
        items.append((f"E{_idx(a, b)}", phi0(mat) == Form.v(n, a + 1) * Form.cv(n, b + 1)))
    ident = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
    items.append(("identity", phi0(ident) == Form.const(n, 1)))
    for k in range(10):
        a = [[random_scalar(rng) for _ in range(n)] for _ in range(n)]
        a_star = [[conj(a[c][r]) for c in range(n)] for r in range(n)]
        items.append((f"star #{k}", star_form(phi0(a)) == phi0(a_star)))
    return _all_true(items, "identities")


def check_phi_degree0(cfg: Config) -> Outcome:
    n = cfg.n
    g = _gamma("simple", n)
    items = []
    for a, b in product(range(n), repeat=2):
        x = unit(n, a + 1, b + 1)
        items.append((f"E{_idx(a, b)}", d(phi_forms(g, x)) - phi_forms(g, d_uni(x))))
    return _all_vanish(items, cfg.slack, "units")


def check_phi_definitional(cfg: Config) -> Outcome:
    n = cfg.n
    rng = cfg.rng("phi-def")
    def run(g):
        items = []
        for m in range(0, cfg.uni_degree):
            basis = _basis(n, m)
            for a0, tail, xi in (basis if n == 2 or m <= 1 else _sample(basis, 60, rng)):
                items.append((format_tensor(xi), phi_forms(g, xi) - phi_definitional(g, xi)))
        return _all_vanish(items, cfg.slack, "elements")
    return _over_gammas(cfg, run)


def check_phi_grade(cfg: Config) -> Outcome:
    n = cfg.n
    g = _gamma("simple", n)
    items = []
    for m in range(0, 2):
        for a0, tail, xi in _basis(n, m):
            items.append((format_tensor(xi), form_grade(phi_forms(g, xi)) in (0, None)))
    return _all_true(items, "elements")


def _failures_outcome(failures, what: str) -> Outcome:
    if failures:
        f = failures[0]
        return Outcome(False, f"{len(failures)} failing elements",
                       f"xi = {f.xi}; lhs = {f.lhs}; rhs = {f.rhs}")
    return Outcome(True, what)


def check_correction(cfg: Config) -> Outcome:
    m_max = cfg.uni_degree
    g = _gamma("simple", cfg.n)
    return _failures_outcome(correction_check(g, m_max, cfg.slack),
                             f"universal degrees 1..{m_max - 1}")


def check_defect_formula(cfg: Config) -> Outcome:
    n = cfg.n
    g = _gamma("simple", n)
    items = []
    for a, b, r, t in product(range(n), repeat=4):
        xi = MatTensor(n, 2, {(a, b, r, t): 1})
        dfc = d_cochain_defect(g, xi)
        items.append((_idx(a, b, r, t), dfc - defect_formula(n, a, b, r, t)))
        items.append((f"pi02 {_idx(a, b, r, t)}", pi_pq(dfc, 0, 2)))
    return _all_vanish(items, cfg.slack, "tuples")


def check_defect_nonzero(cfg: Config) -> Outcome:
    n = cfg.n
    slack = max(2, cfg.slack)
    for a, b, r, t in product(range(n), repeat=4):
        if b == r:
            continue
        f = defect_formula(n, a, b, r, t)
        if not ideal_member(f, slack):
            return Outcome(True, f"defect at {_idx(a, b, r, t)} is certified nonzero at slack {slack}",
                           format_form(f))
    return Outcome(False, f"every defect with b != r lies in the ideal at slack {slack}")


def check_dbar_cochain(cfg: Config) -> Outcome:
    m_max = cfg.uni_degree
    g = _gamma("simple", cfg.n)
    return _failures_outcome(dbar_cochain_check(g, m_max, cfg.slack), f"tensor length up to {m_max}")


def check_d_cochain(cfg: Config) -> Outcome:
    m_max = cfg.uni_degree
    g = _gamma("simple", cfg.n)
    return _failures_outcome(d_cochain_check(g, m_max, cfg.slack), f"tensor length up to {m_max}")


# ---------------------------------------------------------------- holomorphic

def resolve_module(spec: str, n: int) -> mf.LeftModule:
    if Path(spec).suffix == ".json" or Path(spec).exists():
        mod = mf.load_module(spec)
        if mod.n != n:
            raise ValueError(f"module {spec} is over M_{mod.n}, not M_{n}")
        return mod
    return mf.builtin_module(spec, n)


def _module(cfg: Config) -> mf.LeftModule:
    return resolve_module(cfg.module, cfg.n)


def check_module_flags(cfg: Config) -> Outcome:
    mod = _module(cfg)
    if not mod.trace_condition():
        return Outcome(False, f"module {mod.name} violates the trace condition")
    return Outcome(True, f"{mod.name}: dim {mod.dim}, representation={mod.is_representation()}")


def check_module_connection(cfg: Config) -> Outcome:
    mod = _module(cfg)
    n = cfg.n
    items = [
        ("right Leibniz", not mf.leibniz_failures(mod)),
        ("kernel of multiplication", not mf.kernel_failures(mod)),
    ]
    for w, i in product(range(mod.dim), range(n)):
        items.append((f"S shape e{w + 1} r{i + 1}", mf.S_coefficients(mod, w, i) == mf.S_formula(mod, w, i)))
        items.append((f"curvature e{w + 1} r{i + 1}",
                      mf.curvature_F(mod, w, i) == mf.curvature_F_formula(mod, w, i)))
    bad = mf.LeftModule(n, mod.dim, {k: tuple(tuple(2 * x for x in row) for row in m)
                                     for k, m in mod.L.items()}, "doubled")
    try:
        mf.nabla_F_basis(bad, 0, 0)
        items.append(("trace condition enforced", False))
    except ValueError:
        items.append(("trace condition enforced", True))
    return _all_true(items, "properties")


def check_tensor_chain(cfg: Config) -> Outcome:
    mod = _module(cfg)
    n = cfg.n
    g = _gamma("simple", n)
    conn = mf.tensor_connection(mod, g)
    items = []
    for w, a, i, j in product(range(mod.dim), range(n), range(n), range(n)):
        expect = conn.apply(conn.generator(w, j)) if a == i else EFormElement.zero(n, 1, mod.dim)
        items.append((f"e{w + 1} r{a + 1} h{i + 1} cv{j + 1}", mf.chain_connection(mod, g, w, a, i, j) - expect))
        items.append((f"cancellation {_idx(w, a, i, j)}", mf.discarded_terms(mod, g, w, a, i, j)))
    zero = mf.LeftModule(n, 0, {(p, q): () for p, q in product(range(n), repeat=2)}, "zero")
    zconn = mf.tensor_connection(zero, g)
    out = _all_vanish(items, cfg.slack, "evaluations")
    return _combine(out, Outcome(not zconn.gens, "", "zero module has a nonzero connection"))


def check_split(cfg: Config) -> Outcome:
    mod = _module(cfg)
    g = _gamma("simple", cfg.n)
    conn = mf.tensor_connection(mod, g)
    dpart, bpart = mf.split_del_delbar(mod, g)
    items = []
    for key in sorted(conn.gens):
        full = conn.gens[key]
        items.append((f"(1,0) {key}", dpart.gens[key] - full.project(1, 0)))
        items.append((f"(0,1) {key}", bpart.gens[key] - full.project(0, 1)))
        items.append((f"sum {key}", dpart.gens[key] + bpart.gens[key] - full))
    return _all_vanish(items, cfg.slack, "generators")


def check_sigma02(cfg: Config) -> Outcome:
    n = cfg.n
    g = _gamma("simple", n)
    return _all_vanish(((_idx(*k), mf.sigma02_two_form(g, *k) - mf.sigma02_formula(n, *k))
                        for k in product(range(n), repeat=6)), cfg.slack, "tuples")


def _pi02_formula_outcome(mod: mf.LeftModule, g: GammaField, slack: int) -> Outcome:
    n = g.n
    direct = mf.pi02_curvature(mod, g)
    items = []
    for w, t, i, j in product(range(mod.dim), range(n), range(n), range(n)):
        expect = direct[(w, j)] if t == i else EFormElement.zero(n, 2, mod.dim)
        items.append((f"e{w + 1} r{t + 1} h{i + 1} cv{j + 1}",
                      mf.pi02_formula_collapsed(mod, n, w, t, i, j) - expect))
    return _all_vanish(items, slack, "evaluations")


def check_pi02_formula(cfg: Config) -> Outcome:
    mod = _module(cfg)
    return _pi02_formula_outcome(mod, _gamma("simple", cfg.n), cfg.slack)


def check_module_holomorphic(cfg: Config) -> Outcome:
    mod = _module(cfg)
    g = _gamma("simple", cfg.n)
    nonzero = [k for k, v in mf.pi02_curvature(mod, g).items() if not v.is_zero(cfg.slack)]
    _, bpart = mf.split_del_delbar(mod, g)
    holo = not mf.holomorphic_failures(bpart, cfg.slack)
    consistent = holo == (not nonzero)
    rep = mod.is_representation()
    detail = f"{mod.name}: representation={rep}, holomorphic={holo}"
    if not consistent:
        return Outcome(False, detail, "pi02 curvature and the holomorphic curvature disagree")
    if rep and not holo:
        return Outcome(False, detail, f"nonzero pi02 at {nonzero[0]}")
    return Outcome(True, detail)


def check_bundle_E(cfg: Config) -> Outcome:
    bad = mf.bundle_E_holomorphic_failures(_gamma("simple", cfg.n), cfg.slack)
    return Outcome(not bad, "no (0,2) curvature on E" if not bad else "", str(bad) if bad else None)


def check_counterexample(cfg: Config) -> Outcome:
    mod = mf.counterexample_module(cfg.n)
    g = _gamma("simple", cfg.n)
    if not mod.trace_condition() or mod.is_representation():
        return Outcome(False, f"{mod.name} is not a trace-only module")
    pi02 = mf.pi02_curvature(mod, g)
    nonzero = [k for k, v in pi02.items() if not v.is_zero(cfg.slack)]
    _, bpart = mf.split_del_delbar(mod, g)
    holo_fail = mf.holomorphic_failures(bpart, cfg.slack)
    if nonzero and holo_fail:
        return Outcome(True, f"{mod.name}: pi02 curvature nonzero on {len(nonzero)} generators")
    return Outcome(False, f"{mod.name}: pi02 curvature vanishes although the module is not a representation")


def check_counterexample_formula(cfg: Config) -> Outcome:
    return _pi02_formula_outcome(mf.counterexample_module(cfg.n), _gamma("simple", cfg.n), cfg.slack)


def check_curvature_decomposition(cfg: Config) -> Outcome:
    mod = _module(cfg)
    n = cfg.n
    g = _gamma("simple", n)
    items = []
    for w, j in product(range(mod.dim), range(n)):
        direct = mf.tensor_curvature_direct(mod, g, w, 0, 0, j)
        lifts = [mf.tensor_curvature_lifted(mod, g, w, i, i, j) for i in range(n)]
        for i, val in enumerate(lifts):
            items.append((f"lift r{i + 1} h{i + 1} of e{w + 1} cv{j + 1}", val - direct))
        for a, i in product(range(n), repeat=2):
            if a != i:
                items.append((f"null lift r{a + 1} h{i + 1} of e{w + 1} cv{j + 1}", mf.tensor_curvature_lifted(mod, g, w, a, i, j)))
    return _all_vanish(items, cfg.slack, "lifts")


def check_functor(cfg: Config) -> Outcome:
    n = cfg.n
    g = _gamma("simple", n)
    fund = mf.fundamental(n)
    double = mf.direct_sum(fund, fund)
    mod = _module(cfg)
    ident = [[1 if r == c else 0 for c in range(mod.dim)] for r in range(mod.dim)]
    items = [
        (f"identity on {mod.name}", not mf.functor_failures(ident, mod, mod, g, cfg.slack)),
        ("inclusion into first summand", not mf.functor_failures(mf.inclusion(fund, 2 * n, 0), fund, double, g, cfg.slack)),
        ("inclusion into second summand", not mf.functor_failures(mf.inclusion(fund, 2 * n, n), fund, double, g, cfg.slack)),
    ]
    bad = [[1 if (r, c) == (0, 0) else 0 for c in range(n)] for r in range(n)]
    try:
        mf.functor_failures(bad, fund, fund, g, cfg.slack)
        items.append(("non-intertwiner rejected", False))
    except mf.IntertwinerError:
        items.append(("non-intertwiner rejected", True))
    return _all_true(items, "squares")


# ---------------------------------------------------------------- ksgns

def check_ksgns(cfg: Config) -> Outcome:
    n = cfg.n
    rng = cfg.rng("ksgns")
    count = max(20, cfg.samples // 5)
    sections = [random_section(rng, n) for _ in range(count)]
    bad = ksgns_failures(sections)
    if bad:
        return Outcome(False, f"{len(bad)} failures", bad[0])
    items = []
    const_row = [Form.const(n, 1)] + [Form(n) for _ in range(n - 1)]
    c = [1] + [0] * (n - 1)
    items.append(("constant section", not ksgns_failures([(c, const_row), sections[0]])))
    f = Form.from_poly(random_poly(rng, n))
    along_v = [f * Form.v(n, j + 1) for j in range(n)]
    items.append(("section along v is fixed by P", row_projection(along_v) == along_v))
    return _combine(Outcome(True, f"{count} sections"), _all_true(items, "special sections"))


# ---------------------------------------------------------------- catalogue

def _only_d(cfg: Config) -> bool:
    return cfg.calculus == "d"


def _only_dbar(cfg: Config) -> bool:
    return cfg.calculus == "dbar"


CATALOGUE: tuple[Check, ...] = (
    Check("calculus.d_squared", "calculus", "d o d = 0", check_d_squared),
    Check("calculus.leibniz", "calculus", "graded Leibniz rule", check_leibniz),
    Check("calculus.star", "calculus", "star operation", check_star),
    Check("calculus.relations", "calculus", "relation ideal generators", check_relations),
    Check("calculus.projections", "calculus", "bidegree projections", check_projections),
    Check("calculus.grade", "calculus", "U(1) grade bookkeeping", check_grade),
    Check("calculus.universal", "calculus", "universal calculus on matrices", check_universal),
    Check("calculus.serialization", "calculus", "canonical text round trip", check_serialization),

    Check("connection.gauge", "connection", "gauge condition", check_gauge),
    Check("connection.right_condition", "connection", "right-connection condition", check_right_condition),
    Check("connection.metric", "connection", "inner-product preservation", check_metric),
    Check("connection.metric_counterexample", "connection", "Hermitian G breaks the metric",
          check_metric_counterexample),
    Check("connection.vacuum", "connection", "flat vacuum vector", check_vacuum),
    Check("connection.family", "connection", "G-parametrised family", check_family),
    Check("connection.simple_components", "connection", "explicit simple Christoffel symbols",
          check_formula_text),
    Check("connection.leibniz", "connection", "right Leibniz on E", check_connection_leibniz),
    Check("connection.inner", "connection", "inner product on E", check_inner),

    Check("curvature.simple", "curvature", "curvature of the simple connection", check_curvature_simple),
    Check("curvature.consistency", "curvature", "curvature via X vs nabla^2", check_curvature_consistency),
    Check("curvature.X_literal", "curvature", "X tensor index by index", check_X_literal),
    Check("curvature.X_contracted", "curvature", "X tensor contracted with cv", check_X_contracted),
    Check("curvature.X_no_02", "curvature", "X has no (0,2) part", check_X_no_02),
    Check("curvature.X_bidegree", "curvature", "X is of type (1,1)", check_X_bidegree),
    Check("curvature.right_linear", "curvature", "curvature is right linear", check_curvature_right_linear),
    Check("curvature.higher", "curvature", "nabla^2 on one-forms", check_curvature_higher),
    Check("curvature.left_defect", "curvature", "left-module defect formula", check_left_defect),
    Check("curvature.not_left_linear", "curvature", "curvature is not left linear", check_not_left_linear),
    Check("curvature.left_multiple", "curvature", "curvature of a left multiple", check_left_multiple_curvature),
    Check("curvature.two_sided", "curvature", "two-sided curvature identity", check_two_sided_curvature),

    Check("extend.sigma_recursive", "extend", "closed vs recursive extended sigma", check_sigma_recursive),
    Check("extend.sigma_first_order", "extend", "first-order sigma from the connection",
          check_sigma_first_order),
    Check("extend.sigma_linear", "extend", "sigma is a bimodule map", check_sigma_linear),
    Check("extend.S_definitional", "extend", "closed vs definitional S", check_S_definitional),
    Check("extend.S_exact", "extend", "S on exact one-forms", check_S_exact),
    Check("extend.S_left_multiple", "extend", "left multiple of S", check_S_left_multiple),
    Check("extend.S_simple", "extend", "S for the simple connection", check_S_simple_formula),
    Check("extend.S_no_0m", "extend", "S has no (0,m) part", check_S_no_0m),
    Check("extend.S_product", "extend", "product rule for S", check_S_product),
    Check("extend.S_derivative", "extend", "derivative of S", check_S_derivative),

    Check("cochain.phi_basics", "cochain", "state evaluation on matrices", check_phi_basics),
    Check("cochain.phi_degree0", "cochain", "degree-zero cochain identity", check_phi_degree0),
    Check("cochain.phi_definitional", "cochain", "closed vs definitional phi", check_phi_definitional),
    Check("cochain.phi_grade", "cochain", "phi lands in grade zero", check_phi_grade),
    Check("cochain.correction", "cochain", "correction term for d phi", check_correction),
    Check("cochain.defect_formula", "cochain", "explicit d-defect", check_defect_formula),
    Check("cochain.defect_nonzero", "cochain", "d-defect is nonzero", check_defect_nonzero),
    Check("cochain.dbar", "cochain", "phi intertwines dbar", check_dbar_cochain, applies=_only_dbar),
    Check("cochain.d", "cochain", "phi does not intertwine d", check_d_cochain,
          expect_failure=lambda cfg: True, applies=_only_d),

    Check("holomorphic.module_flags", "holomorphic", "module flags", check_module_flags),
    Check("holomorphic.module_connection", "holomorphic", "connection on V (x) Row", check_module_connection),
    Check("holomorphic.tensor_chain", "holomorphic", "tensor-product connection", check_tensor_chain),
    Check("holomorphic.split", "holomorphic", "del / delbar split", check_split),
    Check("holomorphic.sigma02", "holomorphic", "(0,2) part of sigma on two-forms", check_sigma02),
    Check("holomorphic.pi02_formula", "holomorphic", "three-term (0,2) curvature", check_pi02_formula),
    Check("holomorphic.module", "holomorphic", "representations give holomorphic bundles",
          check_module_holomorphic),
    Check("holomorphic.bundle_E", "holomorphic", "E is holomorphic", check_bundle_E),
    Check("holomorphic.counterexample", "holomorphic", "trace condition alone is not enough",
          check_counterexample),
    Check("holomorphic.counterexample_formula", "holomorphic", "three-term formula on the counterexample",
          check_counterexample_formula),
    Check("holomorphic.curvature_decomposition", "holomorphic", "curvature of a tensor product",
          check_curvature_decomposition),
    Check("holomorphic.functor", "holomorphic", "module maps commute with delbar", check_functor),

    Check("ksgns.null_space", "ksgns", "null space of the KSGNS inner product", check_ksgns),
)

BY_ID = {c.check_id: c for c in CATALOGUE}


def checks_for(suite: str, cfg: Config) -> list[Check]:
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    return [c for c in CATALOGUE if (suite == "all" or c.suite == suite) and c.applies(cfg)]


def run_check(check: Check, cfg: Config) -> CheckRecord:
    expected = FAIL if check.expect_failure(cfg) else PASS
    start = time.perf_counter()
    try:
        out = check.run(cfg)
        status = PASS if out.passed else FAIL
        detail, witness = out.detail, out.witness
    except ResourceCapError as exc:
        status, detail, witness = SKIPPED, f"resource cap: {exc}", None
    return CheckRecord(check.check_id, check.anchor, status, expected, detail, witness,
                       round(time.perf_counter() - start, 3))


def run_suite(suite: str, cfg: Config, progress: Callable[[CheckRecord], None] | None = None) -> SuiteReport:
    records = []
    for check in checks_for(suite, cfg):
        rec = run_check(check, cfg)
        if progress:
            progress(rec)
        records.append(rec)
    return SuiteReport(suite, cfg.n, cfg.to_dict(), records)
