"""Fixtures for twisted zeta tests."""

from __future__ import annotations

import sys
from collections.abc import Generator
from pathlib import Path

import mpmath
import pytest

# Add the repository root to the Python path
repo_root = Path(__file__).parent.parent
if str(repo_root) not in sys.path:
    sys.path.insert(0, str(repo_root))

from twisted_zeta.rational_function import (  # noqa: E402
    FormSpec,
    PartialFraction,
    build_R,
    partial_fraction,
)
from twisted_zeta.zeta import PrecisionContext  # noqa: E402


@pytest.fixture
def precision() -> Generator[None]:
    """Run the test body at 256 bits so mpf comparisons are not rounded to 53."""
    with mpmath.workprec(256):
        yield


@pytest.fixture
def ctx() -> PrecisionContext:
    """Default evaluation context: 256 bits, 1e-30 absolute."""
    return PrecisionContext()


@pytest.fixture
def anchor_spec() -> FormSpec:
    """The smallest worked instance: D=1, s=3, n=1."""
    return FormSpec(1, 3, 1)


@pytest.fixture
def anchor_pf(anchor_spec: FormSpec) -> PartialFraction:
    return partial_fraction(build_R(anchor_spec))
