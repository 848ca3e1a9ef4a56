"""Catalogue behaviour: which checks hold at which n.

The "collapse" sets record where a claimed identity or non-identity degenerates
because every top-degree form lies in the relation ideal (2-forms at n = 2),
or where the per-index X formula only holds after contraction (n = 3).
"""

from __future__ import annotations

import pytest

from stateforms import checks
from stateforms.report import FAIL, PASS

COLLAPSED_AT_N2 = {"cochain.defect_nonzero", "curvature.not_left_linear", "holomorphic.counterexample"}
PER_INDEX_X_AT_N3 = {"curvature.X_literal", "curvature.X_bidegree"}


def test_catalogue_ids_are_unique_and_grouped():
    ids = [c.check_id for c in checks.CATALOGUE]
    assert len(ids) == len(set(ids))
    assert {c.suite for c in checks.CATALOGUE} == set(checks.SUITES)
    assert all(c.check_id.startswith(c.suite + ".") for c in checks.CATALOGUE)


def test_config_validation():
    with pytest.raises(ValueError):
        checks.Config(n=1)
    with pytest.raises(ValueError):
        checks.Config(slack=-1)
    with pytest.raises(ValueError):
        checks.Config(calculus="de Rham")
    assert checks.Config(n=2).uni_degree == 3
    assert checks.Config(n=3).uni_degree == 2


def test_calculus_selects_cochain_check():
    d_ids = {c.check_id for c in checks.checks_for("cochain", checks.Config(calculus="d"))}
    dbar_ids = {c.check_id for c in checks.checks_for("cochain", checks.Config())}
    assert "cochain.d" in d_ids and "cochain.dbar" not in d_ids
    assert "cochain.dbar" in dbar_ids and "cochain.d" not in dbar_ids


def test_unknown_suite():
    with pytest.raises(ValueError):
        checks.checks_for("nonsense", checks.Config())


def test_all_at_n2():
    report = checks.run_suite("all", checks.Config(n=2, samples=100))
    unexpected = {r.check_id for r in report.unexpected}
    assert unexpected == COLLAPSED_AT_N2
    assert all(r.status == FAIL for r in report.records if r.check_id in COLLAPSED_AT_N2)
    assert report.exit_code() == 1


def test_d_calculus_at_n2_is_an_unexpected_pass():
    report = checks.run_suite("cochain", checks.Config(n=2, calculus="d"))
    rec = next(r for r in report.records if r.check_id == "cochain.d")
    assert rec.expected == FAIL and rec.status == PASS
    assert report.exit_code() == 1


@pytest.mark.slow
def test_all_at_n3():
    report = checks.run_suite("all", checks.Config(n=3, samples=100))
    assert {r.check_id for r in report.unexpected} == PER_INDEX_X_AT_N3


@pytest.mark.slow
def test_d_calculus_fails_as_expected_at_n3():
    report = checks.run_suite("cochain", checks.Config(n=3, calculus="d"))
    rec = next(r for r in report.records if r.check_id == "cochain.d")
    assert rec.status == FAIL and rec.as_expected and rec.witness
    assert not report.unexpected
    assert report.exit_code() == 1


def test_reports_are_deterministic():
    cfg = checks.Config(n=2, samples=20, seed=7)
    a = checks.run_suite("calculus", cfg).canonical()
    b = checks.run_suite("calculus", cfg).canonical()
    assert a == b


def test_seed_is_recorded():
    report = checks.run_suite("ksgns", checks.Config(n=2, seed=42, samples=20))
    assert report.config["seed"] == 42


def test_holomorphic_suite_with_counterexample_module():
    report = checks.run_suite("holomorphic", checks.Config(n=3, module="twisted"))
    rec = {r.check_id: r for r in report.records}
    assert rec["holomorphic.module"].status == PASS
    assert "representation=False" in rec["holomorphic.module"].detail
    assert "holomorphic=False" in rec["holomorphic.module"].detail
