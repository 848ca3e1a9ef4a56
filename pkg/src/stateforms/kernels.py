"""Exact integer row reduction.

Two interchangeable implementations of fraction-free Gaussian elimination
with per-row gcd normalisation:

* an ``int64`` kernel compiled with numba, which refuses (``ok == False``)
  as soon as an entry would leave a safe range, and
* a numpy ``object`` kernel on Python integers, which never overflows.

Both follow the same pivot rule, so they produce identical echelon forms
whenever the int64 kernel succeeds.  Public entry points try the compiled
kernel first and silently fall back.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import HAVE_NUMBA, njit

# entries above this bound are not multiplied in int64 (products stay < 2**62)
SAFE_BOUND = 1 << 30


@njit(cache=True)
def _gcd64(a, b):
    a = abs(a)
    b = abs(b)
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _echelon_int64(a):
    """In-place echelon of an int64 matrix.  Returns (rank, pivots, ok)."""
    m, ncols = a.shape
    pivots = np.full(min(m, ncols), -1, dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        best = -1
        best_abs = 0
        for i in range(r, m):
            x = abs(a[i, c])
            if x != 0 and (best < 0 or x < best_abs):
                best = i
                best_abs = x
        if best < 0:
            continue
        if best != r:
            for j in range(c, ncols):
                t = a[r, j]
                a[r, j] = a[best, j]
                a[best, j] = t
        if a[r, c] < 0:
            for j in range(c, ncols):
                a[r, j] = -a[r, j]
        p = a[r, c]
        for i in range(r + 1, m):
            f = a[i, c]
            if f == 0:
                continue
            g = _gcd64(p, f)
            mp = p // g
            mf = f // g
            h = 0
            for j in range(c, ncols):
                x = mp * a[i, j] - mf * a[r, j]
                if x > SAFE_BOUND or x < -SAFE_BOUND:
                    return r, pivots, False
                a[i, j] = x
                h = _gcd64(h, x)
            if h > 1:
                for j in range(c, ncols):
                    a[i, j] //= h
        pivots[r] = c
        r += 1
    return r, pivots, True


@njit(cache=True)
def _reduce_int64(ech, pivots, rank, vec):
    """Reduce ``vec`` in place against an echelon.  Returns (is_zero, ok)."""
    ncols = vec.shape[0]
    for r in range(rank):
        c = pivots[r]
        f = vec[c]
        if f == 0:
            continue
        p = ech[r, c]
        g = _gcd64(p, f)
        mp = p // g
        mf = f // g
        h = 0
        for j in range(c, ncols):
            x = mp * vec[j] - mf * ech[r, j]
            if x > SAFE_BOUND or x < -SAFE_BOUND:
                return False, False
            vec[j] = x
            h = _gcd64(h, x)
        if h > 1:
            for j in range(c, ncols):
                vec[j] //= h
    for j in range(ncols):
        if vec[j] != 0:
            return False, True
    return True, True


def _row_gcd(row) -> int:
    return math.gcd(*(int(x) for x in row)) if len(row) else 0


def echelon_object(mat) -> tuple[np.ndarray, list[int]]:
    """Echelon form over Python integers (numpy object array)."""
    a = np.array(mat, dtype=object)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    m, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        col = a[r:, c]
        nz = [i for i in range(len(col)) if col[i] != 0]
        if not nz:
            continue
        best = r + min(nz, key=lambda i: abs(col[i]))
        if best != r:
            a[[r, best], c:] = a[[best, r], c:]
        if a[r, c] < 0:
            a[r, c:] = -a[r, c:]
        p = a[r, c]
        for i in range(r + 1, m):
            f = a[i, c]
            if f == 0:
                continue
            g = math.gcd(p, f)
            row = (p // g) * a[i, c:] - (f // g) * a[r, c:]
            h = _row_gcd(row)
            if h > 1:
                row = row // h
            a[i, c:] = row
        pivots.append(c)
        r += 1
    return a[:r], pivots


def reduce_object(ech: np.ndarray, pivots, vec) -> bool:
    v = np.array(vec, dtype=object)
    for r, c in enumerate(pivots):
        f = v[c]
        if f == 0:
            continue
        p = ech[r, c]
        g = math.gcd(p, f)
        v[c:] = (p // g) * v[c:] - (f // g) * ech[r, c:]
        h = _row_gcd(v[c:])
        if h > 1:
            v[c:] = v[c:] // h
    return not any(x != 0 for x in v)


def _fits(values) -> bool:
    return all(-SAFE_BOUND <= int(x) <= SAFE_BOUND for x in values)


class Echelon:
    """Row-echelon basis of an integer row space, with membership tests."""

    __slots__ = ("ncols", "rank", "pivots", "rows", "_rows64", "backend")

    def __init__(self, mat, ncols: int | None = None, use_numba: bool | None = None):
        a = np.asarray(mat, dtype=object) if len(mat) else np.zeros((0, ncols or 0), dtype=object)
        if a.ndim != 2:
            a = a.reshape(0, ncols or 0)
        self.ncols = a.shape[1]
        if use_numba is None:
            use_numba = HAVE_NUMBA
        self._rows64 = None
        self.backend = "numpy"
        if use_numba and a.size and _fits(a.ravel()):
            a64 = a.astype(np.int64)
            rank, piv, ok = _echelon_int64(a64)
            if ok:
                self.rank = int(rank)
                self.pivots = [int(c) for c in piv[:rank]]
                self._rows64 = np.ascontiguousarray(a64[:rank])
                self.rows = self._rows64.astype(object)
                self.backend = "numba"
                return
        rows, piv = echelon_object(a)
        self.rows = rows
        self.pivots = piv
        self.rank = len(piv)

    def contains(self, vec) -> bool:
        """True iff ``vec`` lies in the row space."""
        if len(vec) != self.ncols:
            raise ValueError("vector length does not match the echelon")
        if self.rank == 0:
            return not any(int(x) != 0 for x in vec)
        if self._rows64 is not None and _fits(vec):
            v64 = np.array([int(x) for x in vec], dtype=np.int64)
            piv = np.array(self.pivots, dtype=np.int64)
            zero, ok = _reduce_int64(self._rows64, piv, self.rank, v64)
            if ok:
                return bool(zero)
        return reduce_object(self.rows, self.pivots, vec)
