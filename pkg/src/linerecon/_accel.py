"""Backend switch for the compiled kernels.

Set ``LINERECON_NO_NUMBA=1`` to run every kernel through its pure
numpy/Python path.  The flag is read once at import time.
"""
import os

USE_NUMBA = os.environ.get("LINERECON_NO_NUMBA", "").strip().lower() not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if USE_NUMBA:
    def njit(fn):
        return _njit(cache=True, nogil=True)(fn)
else:
    def njit(fn):
        return fn


def backend():
    return "numba" if USE_NUMBA else "python"
