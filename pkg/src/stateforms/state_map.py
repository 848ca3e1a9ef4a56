"""The state evaluation map a -> v a v* and its extension to universal forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .bimodule import (
    EFormElement,
    GammaField,
    S_hat,
    _chain,
    inner,
    nabla_E,
    sigma_hat,
    vacuum,
)
from .forms import Form, d, pi_pq, wedge
from .matrix_calculus import MatTensor, as_tensor, d_uni, uni_basis, uni_basis_factored, basis_element
from .relations import DEFAULT_SLACK, is_zero


@dataclass
class StateMapContext:
    gamma: GammaField
    e: EFormElement = field(init=False)

    def __post_init__(self):
        self.e = vacuum(self.gamma.n)

    @property
    def n(self) -> int:
        return self.gamma.n

    def invariant_failures(self, slack: int = DEFAULT_SLACK) -> list[str]:
        out = []
        if not nabla_E(self.gamma, self.e).is_zero(slack):
            out.append("connection does not annihilate the vacuum")
        if not is_zero(inner(self.e, self.e) - Form.const(self.n, 1), slack):
            out.append("vacuum is not normalised")
        return out


def phi0(a) -> Form:
    """sum_{ij} v_i a_ij cv_j."""
    x = as_tensor(a)
    n = x.n
    out = Form(n)
    for (i, j), c in x.terms.items():
        out = out + wedge(Form.v(n, i + 1), Form.cv(n, j + 1)).scale(c)
    return out


def phi_forms(gamma: GammaField, xi: MatTensor) -> Form:
    """v_{a1} cv_{q1} Gamma^{b1 q1}_{a2 q2} ^ ... ^ Gamma^{b_{m-1} q_{m-1}}_{am bm}."""
    n = gamma.n
    out = Form(n)
    for key, c in xi.terms.items():
        m = len(key) // 2
        pairs = tuple((key[2 * l + 1], key[2 * l + 2]) for l in range(m - 1))
        T = _chain(gamma, pairs, key[-1])
        acc = Form(n)
        for q in range(n):
            if T[q].terms:
                acc = acc + wedge(Form.cv(n, q + 1), T[q])
        out = out + wedge(Form.v(n, key[0] + 1), acc).scale(c)
    return out


def phi_definitional(gamma: GammaField, xi: MatTensor) -> Form:
    """(<,> (x) id)(ebar (x) sigma(xi (x) e)) with the vacuum e."""
    e = vacuum(gamma.n)
    return inner(e, sigma_hat(gamma, xi, e))


def correction_term(gamma: GammaField, xi: MatTensor) -> Form:
    """-(-1)^|xi| <ebar, S(xi (x) e)>: the predicted value of d phi(xi) - phi(d xi)."""
    e = vacuum(gamma.n)
    val = inner(e, S_hat(gamma, xi, e))
    return val if xi.degree % 2 else -val


def d_cochain_defect(gamma: GammaField, xi: MatTensor) -> Form:
    """d phi(xi) - phi(d xi), computed directly."""
    return d(phi_forms(gamma, xi)) - phi_forms(gamma, d_uni(xi))


def defect_formula(n: int, a: int, b: int, r: int, t: int) -> Form:
    """v_a cv_t dcv_b ^ dv_r (0-based indices)."""
    return wedge(wedge(Form.v(n, a + 1), Form.cv(n, t + 1)), wedge(Form.dcv(n, b + 1), Form.dv(n, r + 1)))


def dbar_defect(gamma: GammaField, xi: MatTensor) -> Form:
    """pi^{0,m}(d phi(xi) - phi(d xi)) for xi of tensor length m."""
    return pi_pq(d_cochain_defect(gamma, xi), 0, xi.k)


@dataclass
class SweepFailure:
    index: int
    xi: str
    lhs: str
    rhs: str


def _sweep(gamma: GammaField, max_degree: int, residual, slack: int, min_degree: int = 0) -> list[SweepFailure]:
    failures = []
    n = gamma.n
    for m in range(min_degree, max_degree + 1):
        for idx, (a0, tail) in enumerate(uni_basis_factored(m, n)):
            xi = basis_element(n, a0, tail)
            lhs, rhs = residual(xi)
            if not is_zero(lhs - rhs, slack):
                failures.append(SweepFailure(idx, str(xi), str(lhs), str(rhs)))
    return failures


def dbar_cochain_check(gamma: GammaField, m_max: int, slack: int = DEFAULT_SLACK) -> list[SweepFailure]:
    """Failures of pi^{0,m} d phi(xi) = pi^{0,m} phi(d xi) over the universal bases of
    degree 0 .. m_max - 1 (tensor length up to m_max)."""
    def residual(xi):
        m = xi.k
        return pi_pq(d(phi_forms(gamma, xi)), 0, m), pi_pq(phi_forms(gamma, d_uni(xi)), 0, m)
    return _sweep(gamma, m_max - 1, residual, slack)


def d_cochain_check(gamma: GammaField, m_max: int, slack: int = DEFAULT_SLACK) -> list[SweepFailure]:
    """Failures of d phi(xi) = phi(d xi) over the same sweep (expected to fail)."""
    def residual(xi):
        return d(phi_forms(gamma, xi)), phi_forms(gamma, d_uni(xi))
    return _sweep(gamma, m_max - 1, residual, slack)


def correction_check(gamma: GammaField, m_max: int, slack: int = DEFAULT_SLACK, min_degree: int = 1) -> list[SweepFailure]:
    """Failures of d phi(xi) - phi(d xi) = -(-1)^|xi| <ebar, S(xi (x) e)>."""
    def residual(xi):
        return d_cochain_defect(gamma, xi), correction_term(gamma, xi)
    return _sweep(gamma, m_max - 1, residual, slack, min_degree)
