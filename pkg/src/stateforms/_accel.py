"""Numba toggle.

Set ``STATEFORMS_DISABLE_NUMBA=1`` to run every kernel through the pure-numpy
path.  The flag is read once, at import time.
"""

from __future__ import annotations

import os

ENV_FLAG = "STATEFORMS_DISABLE_NUMBA"

NUMBA_DISABLED = os.environ.get(ENV_FLAG, "").strip().lower() not in ("", "0", "false", "no")

try:
    if NUMBA_DISABLED:
        raise ImportError(ENV_FLAG)
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised with the env flag set
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
