"""Verification toolkit for rational linear forms in odd zeta values.

The forms come from twisted rational functions R_n^(D); the package builds
them exactly, decomposes them into partial fractions, evaluates the
resulting Hurwitz zeta combinations and runs the elimination that isolates
a chosen odd zeta value.
"""

from __future__ import annotations

from .rational_function import FormSpec, build_R, partial_fraction
from .zeta import Estimate, PrecisionContext

__version__ = "0.1.0"

__all__ = [
    "Estimate",
    "FormSpec",
    "PrecisionContext",
    "__version__",
    "build_R",
    "partial_fraction",
]
