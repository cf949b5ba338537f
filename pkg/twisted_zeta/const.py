"""Constants for the twisted zeta toolkit."""

from __future__ import annotations

from typing import Final

DOMAIN: Final = "twisted_zeta"
SCHEMA_VERSION: Final = "1"

# Precision
DEFAULT_WORKING_BITS: Final = 256
MIN_WORKING_BITS: Final = 64
DEFAULT_TARGET_ERROR: Final = 1e-30
DEFAULT_X0_TOL: Final = 1e-12
GUARD_BITS: Final = 24

# Series summation
DEFAULT_MAX_TERMS: Final = 200_000
TAIL_SWITCH_FACTOR: Final = 8
MAX_TAIL_ORDER: Final = 600
TREND_REL_ERROR: Final = 1e-20

# Euler-Maclaurin cutoff per requested bit of accuracy
EM_CUTOFF_PER_BIT: Final = 0.12
EM_MAX_CUTOFF: Final = 1 << 16

# Verification grid
DEFAULT_GRID_MAX_D: Final = 4
DEFAULT_GRID_MAX_N: Final = 4
DEFAULT_LEMMA2_MAX: Final = 8
DEFAULT_LEMMA2_RANGE: Final = 20
DEFAULT_HURWITZ_MAX_D: Final = 8
DEFAULT_HURWITZ_MAX_I: Final = 15
DEFAULT_WORKERS: Final = 4

# Exit codes
EXIT_OK: Final = 0
EXIT_FAILURE: Final = 1
EXIT_USAGE: Final = 2
