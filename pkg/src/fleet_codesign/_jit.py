"""Numba wiring with a pure-NumPy escape hatch.

Hot kernels are compiled with ``@njit`` by default.  Setting the environment
variable ``CODESIGN_NUMBA=0`` (before import) disables compilation so the
vectorised NumPy fallbacks in :mod:`fleet_codesign.kernels` are used instead;
useful for debugging and for benchmarking the two paths against each other.
"""

import os

NUMBA_ENABLED = os.environ.get("CODESIGN_NUMBA", "1").lower() not in ("0", "false", "no")

if NUMBA_ENABLED:
    try:
        from numba import njit, prange
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:

    def njit(func=None, **kwargs):
        if func is not None:
            return func

        def wrapper(f):
            return f

        return wrapper

    prange = range
