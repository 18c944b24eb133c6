"""Kernel backend selection.

Hot loops are compiled with numba when it is importable. Setting the
environment variable ``ETAMU_DISABLE_NUMBA=1`` before import forces the
pure-numpy path (the numba-decorated scalar kernels then run as plain
Python, and array kernels use their vectorized numpy twins).
"""
import os

ENV_FLAG = "ETAMU_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional accelerator
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get(ENV_FLAG, "").strip().lower() not in (
    "1",
    "true",
    "yes",
    "on",
)
BACKEND = "numba" if USE_NUMBA else "numpy"


def jit(fn):
    """``numba.njit(cache=True)`` under the numba backend, identity otherwise."""
    if USE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn
