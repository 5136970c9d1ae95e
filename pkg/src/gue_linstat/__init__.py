"""Variance and central limit behaviour of GUE linear statistics."""

__version__ = "0.1.0"

from ._accel import BACKEND  # noqa: E402
from .testfns import TestFunction, builtin  # noqa: E402

__all__ = ["BACKEND", "TestFunction", "builtin", "__version__"]
