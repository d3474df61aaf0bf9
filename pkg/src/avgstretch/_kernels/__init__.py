"""Kernel backend selection.

AVGSTRETCH_BACKEND=numpy forces the pure-python/numpy fallback,
AVGSTRETCH_BACKEND=numba requires the compiled backend (import error if
numba is unavailable).  Unset, numba is used when importable.
"""

import os

from . import prep  # noqa: F401  (re-exported)

_requested = os.environ.get("AVGSTRETCH_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise RuntimeError(
        "AVGSTRETCH_BACKEND must be 'numba' or 'numpy', got %r" % _requested
    )

if _requested == "numpy":
    from . import numpy_impl as kernels
    BACKEND = "numpy"
else:
    try:
        from . import numba_impl as kernels
        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        from . import numpy_impl as kernels
        BACKEND = "numpy"


def active_backend():
    return BACKEND


def get_backend(name):
    """Explicit backend module lookup (used by the backend benchmark)."""
    if name == "numpy":
        from . import numpy_impl
        return numpy_impl
    if name == "numba":
        from . import numba_impl
        return numba_impl
    raise ValueError("unknown backend %r" % name)
