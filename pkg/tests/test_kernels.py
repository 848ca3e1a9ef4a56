from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stateforms._accel import ENV_FLAG, HAVE_NUMBA
from stateforms.kernels import Echelon

matrices = st.integers(1, 7).flatmap(
    lambda rows: st.integers(1, 7).flatmap(
        lambda cols: st.lists(st.lists(st.integers(-5, 5), min_size=cols, max_size=cols),
                              min_size=rows, max_size=rows)))


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_rank_matches_numpy(rows):
    mat = np.array(rows, dtype=object)
    ech = Echelon(mat, ncols=mat.shape[1])
    assert ech.rank == np.linalg.matrix_rank(np.array(rows, dtype=float))
    for r in rows:
        assert ech.contains(r)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not available")
@settings(max_examples=80, deadline=None)
@given(matrices)
def test_backends_agree(rows):
    mat = np.array(rows, dtype=object)
    a = Echelon(mat, ncols=mat.shape[1], use_numba=True)
    b = Echelon(mat, ncols=mat.shape[1], use_numba=False)
    assert a.rank == b.rank and a.pivots == b.pivots
    assert np.array_equal(a.rows, b.rows)
    probe = [1] * mat.shape[1]
    assert a.contains(probe) == b.contains(probe)


def test_large_entries_fall_back_to_python_integers():
    big = 1 << 80
    ech = Echelon([[big, 1], [1, big]], ncols=2)
    assert ech.rank == 2 and ech.backend == "numpy"
    assert ech.contains([big + 1, big + 1])


def test_non_member_detected():
    ech = Echelon([[1, 1, 0]], ncols=3)
    assert not ech.contains([1, 0, 0])
    with pytest.raises(ValueError):
        ech.contains([1, 0])


def test_env_flag_disables_numba():
    env = dict(os.environ, **{ENV_FLAG: "1"})
    out = subprocess.run([sys.executable, "-c", "from stateforms._accel import backend; print(backend())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
