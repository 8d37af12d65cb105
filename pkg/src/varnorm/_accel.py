"""Optional numba acceleration.

Set ``VARNORM_DISABLE_NUMBA=1`` before import to force the pure-numpy
kernels.  ``USE_NUMBA`` tells callers which path is live.
"""
import os

try:
    from numba import njit
    numba_installed = True
except ImportError:  # pragma: no cover
    numba_installed = False

USE_NUMBA = numba_installed and os.environ.get("VARNORM_DISABLE_NUMBA", "") not in ("1", "true", "yes")


def optional_njit(*args, **kwargs):
    def decorator(func):
        if USE_NUMBA:
            return njit(*args, **kwargs)(func)
        return func
    return decorator
