"""Command-line driver: ``stateforms verify ...`` and ``stateforms dump ...``."""

from __future__ import annotations

import argparse
import json
import sys
from itertools import product
from pathlib import Path

from . import checks
from ._accel import backend
from .bimodule import GammaField, X_tensor, curvature_R_E, gamma_example, gamma_simple, generator
from .forms import Form, format_form
from .matrix_calculus import parse_tensor
from .relations import DEFAULT_SLACK, ResourceCapError, default_basis, simplify
from .state_map import d_cochain_defect, phi_forms

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stateforms",
        description="Exact verification of the state evaluation map on CP^{n-1}.")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", nargs="?", help="suite name: " + ", ".join(("all",) + checks.SUITES))
    verify.add_argument("--suite", dest="suite_opt", help="suite name (alternative to the positional)")
    verify.add_argument("--n", type=int, default=2)
    verify.add_argument("--slack", type=int, default=DEFAULT_SLACK)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--samples", type=_positive_int, default=100,
                        help="random forms per sampled law (default 100)")
    verify.add_argument("--max-uni-degree", "--max-degree", dest="max_uni_degree", type=_positive_int,
                        help="longest tensor swept (default 3 at n=2, 2 above)")
    verify.add_argument("--calculus", choices=checks.CALCULI, default="dbar")
    verify.add_argument("--module", default="fundamental",
                        help="builtin module (fundamental, sum, twisted, counterexample) or a JSON file")
    verify.add_argument("--report", type=Path, help="write the JSON report here")
    verify.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    verify.add_argument("--relation-stats", type=Path, help="write relation-basis component sizes here")
    verify.add_argument("--quiet", action="store_true", help="print only the summary line")

    dump = sub.add_parser("dump", help="print a canonical serialization")
    dump.add_argument("selector", help="gamma, X, curvature, phi:<tensor> or defect:<tensor>")
    dump.add_argument("--n", type=int, default=2)
    dump.add_argument("--indices", help="comma-separated 1-based indices (p,q,i,j or i,j)")
    dump.add_argument("--gamma", choices=("simple", "example"), default="simple")
    dump.add_argument("--slack", type=int, default=DEFAULT_SLACK)
    return parser


# ------------------------------------------------------------------ verify

def _suite_name(args) -> str:
    if args.suite and args.suite_opt and args.suite != args.suite_opt:
        raise UsageError("conflicting suite names")
    name = args.suite or args.suite_opt
    if name is None:
        raise UsageError("no suite given")
    if name != "all" and name not in checks.SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from all, {', '.join(checks.SUITES)}")
    return name


def run_verify(args) -> int:
    suite = _suite_name(args)
    try:
        cfg = checks.Config(n=args.n, slack=args.slack, seed=args.seed, max_uni_degree=args.max_uni_degree,
                            calculus=args.calculus, module=args.module, samples=args.samples)
        if suite in ("all", "holomorphic"):
            checks.resolve_module(cfg.module, cfg.n)
    except (ValueError, OSError, KeyError) as exc:
        raise UsageError(str(exc)) from exc

    def progress(rec):
        if not args.quiet and not args.json:
            print(f"  {rec.status:<7} {rec.check_id}  {rec.seconds:.2f}s", file=sys.stderr, flush=True)

    report = checks.run_suite(suite, cfg, progress)
    report.config["backend"] = backend()
    if args.report:
        args.report.parent.mkdir(parents=True, exist_ok=True)
        args.report.write_text(report.to_json() + "\n")
    if args.relation_stats:
        args.relation_stats.write_text(default_basis().stats_json() + "\n")
    if args.json:
        print(report.to_json())
    elif args.quiet:
        print(report.render_text().splitlines()[-1])
    else:
        print(report.render_text())
    return report.exit_code()


# ------------------------------------------------------------------ dump

def _indices(text: str | None, count: int, n: int) -> list[tuple[int, ...]]:
    if text is None:
        return list(product(range(n), repeat=count))
    try:
        idx = tuple(int(x) - 1 for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad indices {text!r}") from exc
    if len(idx) != count:
        raise UsageError(f"expected {count} indices, got {len(idx)}")
    if any(not 0 <= i < n for i in idx):
        raise UsageError(f"indices must lie in 1..{n}")
    return [idx]


def _label(idx: tuple[int, ...]) -> str:
    return ",".join(str(i + 1) for i in idx)


def _emit(rows: list[tuple[tuple[int, ...], str]], single: bool) -> str:
    if single:
        return rows[0][1]
    return "\n".join(f"{_label(idx)}: {text}" for idx, text in rows)


def _vector_text(comps, slack: int) -> str:
    return "[" + ", ".join(format_form(simplify(c, slack)) for c in comps) + "]"


def dump_text(selector: str, n: int, indices: str | None = None, gamma_name: str = "simple",
              slack: int = DEFAULT_SLACK) -> str:
    """Canonical text for one dump selector; raises UsageError on a bad selector."""
    if n < 2:
        raise UsageError("n must be at least 2")
    gamma: GammaField = gamma_simple(n) if gamma_name == "simple" else gamma_example(n)
    single = indices is not None
    kind, _, arg = selector.partition(":")
    if kind == "gamma" and not arg:
        return _emit([(k, format_form(gamma[k])) for k in _indices(indices, 4, n)], single)
    if kind == "X" and not arg:
        X = X_tensor(gamma)
        return _emit([(k, format_form(simplify(X[k], slack))) for k in _indices(indices, 4, n)], single)
    if kind == "curvature" and not arg:
        rows = [(k, _vector_text(curvature_R_E(gamma, generator(n, *k)).comps, slack))
                for k in _indices(indices, 2, n)]
        return _emit(rows, single)
    if kind in ("phi", "defect") and arg:
        try:
            xi = parse_tensor(arg, n)
        except (ValueError, KeyError, IndexError) as exc:
            raise UsageError(f"cannot parse tensor {arg!r}: {exc}") from exc
        if kind == "phi":
            return format_form(simplify(phi_forms(gamma, xi), slack))
        if xi.degree < 1:
            raise UsageError("defect needs a tensor of length at least 2")
        return format_form(simplify(d_cochain_defect(gamma, xi), slack))
    raise UsageError(f"unknown selector {selector!r}")


def run_dump(args) -> int:
    print(dump_text(args.selector, args.n, args.indices, args.gamma, args.slack))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            return run_verify(args)
        return run_dump(args)
    except UsageError as exc:
        print(f"stateforms: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCapError as exc:
        print(f"stateforms: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
