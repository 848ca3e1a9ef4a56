"""Compare the numba and pure-numpy row-reduction kernels.

Run with ``python3 benchmarks/bench_kernels.py``.  The matrices are the
relation-ideal components that ideal membership actually builds, plus a few
random integer matrices of similar shape.  Both backends must agree on rank,
pivots and echelon rows; the script exits non-zero if they do not.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from stateforms._accel import HAVE_NUMBA
from stateforms.kernels import Echelon
from stateforms.relations import ComponentKey, _relation_rows, component_columns


def relation_matrix(key: ComponentKey) -> np.ndarray:
    cols = component_columns(key)
    index = {c: i for i, c in enumerate(cols)}
    rows = _relation_rows(key, index)
    mat = np.zeros((len(rows), len(cols)), dtype=object)
    for r, row in enumerate(rows):
        for c, v in row.items():
            mat[r, c] = v
    return mat


def workloads(seed: int) -> list[tuple[str, np.ndarray]]:
    out = []
    for key in (
        ComponentKey(2, 1, 1, 2, 2, (0, 0)),
        ComponentKey(3, 1, 1, 2, 2, (0, 0, 0)),
        ComponentKey(3, 1, 1, 3, 3, (0, 0, 0)),
        ComponentKey(3, 2, 1, 3, 4, (0, 0, 0)),
        ComponentKey(3, 1, 1, 5, 5, (0, 0, 0)),
        ComponentKey(3, 2, 2, 4, 4, (0, 0, 0)),
    ):
        mat = relation_matrix(key)
        out.append((f"relations n={key.n} ({key.p},{key.q}) deg {key.deg_v}", mat))
    rng = np.random.default_rng(seed)
    for rows, cols in ((60, 80), (120, 160)):
        dense = rng.integers(-3, 4, size=(rows, cols)) * (rng.random((rows, cols)) < 0.1)
        out.append((f"random sparse {rows}x{cols}", dense.astype(object)))
    return out


def best_time(mat: np.ndarray, use_numba: bool, repeat: int) -> tuple[float, Echelon]:
    best, ech = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        ech = Echelon(mat, ncols=mat.shape[1], use_numba=use_numba)
        best = min(best, time.perf_counter() - start)
    return best, ech


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if not HAVE_NUMBA:
        print("numba unavailable or disabled; only the numpy kernel will be timed")
    print(f"{'workload':<34}{'shape':>12}{'rank':>7}{'numpy s':>11}{'numba s':>11}{'speedup':>9}  path")
    mismatches = 0
    for name, mat in workloads(args.seed):
        t_np, e_np = best_time(mat, False, args.repeat)
        if HAVE_NUMBA:
            best_time(mat, True, 1)  # compile outside the timed runs
            t_nb, e_nb = best_time(mat, True, args.repeat)
            same = e_nb.rank == e_np.rank and e_nb.pivots == e_np.pivots and np.array_equal(e_nb.rows, e_np.rows)
            mismatches += not same
            # "numpy" here means the int64 kernel refused and fell back
            cells = f"{t_nb:>11.4f}{t_np / t_nb:>8.1f}x  {e_nb.backend}" + ("" if same else "  MISMATCH")
        else:
            cells = f"{'-':>11}{'-':>9}"
        shape = f"{mat.shape[0]}x{mat.shape[1]}"
        print(f"{name:<34}{shape:>12}{e_np.rank:>7}{t_np:>11.4f}{cells}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
