"""Backend dispatch for the numerical hot loops.

The backend is chosen once, at import time, from the ``GUE_LINSTAT_BACKEND``
environment variable: ``numba`` (default) or ``numpy``. If numba cannot be
imported the numpy fallback is used and a warning is logged.
"""
import logging
import os

from . import numpy_kernels

logger = logging.getLogger(__name__)

_requested = os.environ.get("GUE_LINSTAT_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"GUE_LINSTAT_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numba":
    try:
        from . import numba_kernels as _impl
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a declared dependency
        logger.warning("numba unavailable, falling back to numpy kernels")
        _impl = numpy_kernels
        BACKEND = "numpy"
else:
    _impl = numpy_kernels
    BACKEND = "numpy"

hermite_pair = _impl.hermite_pair
kernel_square_sums = _impl.kernel_square_sums
tridiagonalize = _impl.tridiagonalize
tql_eigenvalues = _impl.tql_eigenvalues

__all__ = [
    "BACKEND",
    "hermite_pair",
    "kernel_square_sums",
    "tridiagonalize",
    "tql_eigenvalues",
]
