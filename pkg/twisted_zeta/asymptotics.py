"""Growth profile of the twisted series: f_D, x0, g_D and the term ratio."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .const import DEFAULT_MAX_TERMS, DEFAULT_WORKING_BITS, DEFAULT_X0_TOL
from .rational_function import FormSpec

_LOGGER = logging.getLogger(__name__)

BISECTION_MAX_STEPS = 4096


class BracketError(ValueError):
    """Raised when f_D - 1 does not change sign on the search interval."""


def _check_positive_x(x: mpmath.mpf | float) -> None:
    if not x > 0:
        raise ValueError(f"x must be positive, got {x}")


def f_D(x: mpmath.mpf | float, D: int, s: int) -> mpmath.mpf:
    """((x+3)/x)^D ((x+1)/(x+2))^(s+1)."""
    _check_positive_x(x)
    x = mpmath.mpf(x)
    return ((x + 3) / x) ** D * ((x + 1) / (x + 2)) ** (s + 1)


def x0_polynomial(x: mpmath.mpf | float, D: int, s: int) -> mpmath.mpf:
    """(x+3)^D (x+1)^(s+1) - x^D (x+2)^(s+1); vanishes exactly at x0."""
    x = mpmath.mpf(x)
    return (x + 3) ** D * (x + 1) ** (s + 1) - x**D * (x + 2) ** (s + 1)


def critical_x1(D: int, s: int, bits: int = DEFAULT_WORKING_BITS) -> mpmath.mpf:
    """Positive root of (s+1-3D) x^2 + (3s+3-9D) x - 6D."""
    lead = s + 1 - 3 * D
    if lead <= 0:
        raise ValueError(f"critical point needs s + 1 > 3D, got D={D}, s={s}")
    middle = 3 * s + 3 - 9 * D
    with mpmath.workprec(bits):
        disc = mpmath.mpf(middle * middle + 24 * D * lead)
        return (-middle + mpmath.sqrt(disc)) / (2 * lead)


def find_x0(
    D: int,
    s: int,
    tol: float = DEFAULT_X0_TOL,
    bits: int = DEFAULT_WORKING_BITS,
) -> mpmath.mpf:
    """Locate the unique x0 in (0, x1) with f_D(x0) = 1 by bisection.

    f_D falls from +infinity to f_D(x1) < 1 on (0, x1]; the lower end of the
    bracket is halved until f_D exceeds 1 there.

    Args:
        D: Twist denominator.
        s: Form weight, s + 1 > 3D.
        tol: Stop once |f_D(x) - 1| <= tol.
        bits: Working precision.

    Returns:
        x0 as an mpf.

    Raises:
        BracketError: If no sign change of f_D - 1 is found.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    with mpmath.workprec(bits):
        hi = critical_x1(D, s, bits)
        if f_D(hi, D, s) >= 1:
            raise BracketError(f"f_D(x1) >= 1 for D={D}, s={s}")
        lo = hi / 2
        for _ in range(BISECTION_MAX_STEPS):
            if f_D(lo, D, s) > 1:
                break
            lo /= 2
        else:
            raise BracketError(f"no lower bracket for x0 at D={D}, s={s}")
        mid = (lo + hi) / 2
        for step in range(BISECTION_MAX_STEPS):
            mid = (lo + hi) / 2
            residual = f_D(mid, D, s) - 1
            if abs(residual) <= tol:
                _LOGGER.debug("x0(D=%d, s=%d) found after %d steps", D, s, step + 1)
                break
            if mid in (lo, hi):
                raise BracketError(f"precision exhausted while bisecting D={D}, s={s}")
            if residual > 0:
                lo = mid
            else:
                hi = mid
        if not 0 < mid < 1:
            _LOGGER.warning(
                "x0 = %s lies outside (0, 1) for D=%d, s=%d",
                mpmath.nstr(mid, 10),
                D,
                s,
            )
        return mid


def x0_bounds(
    D: int, s: int, bits: int = DEFAULT_WORKING_BITS
) -> tuple[mpmath.mpf, mpmath.mpf]:
    """(2^(-(s+1)/D), 4 * 2^(-(s+1)/D)), the window expected for power-of-two D."""
    with mpmath.workprec(bits):
        low = mpmath.power(2, -mpmath.mpf(s + 1) / D)
        return low, 4 * low


def g_val(D: int, s: int, x: mpmath.mpf | float) -> mpmath.mpf:
    """D^(6(D-1)) (3+x)^(3D) (1+x)^(s+1) / (2+x)^(2(s+1))."""
    _check_positive_x(x)
    x = mpmath.mpf(x)
    return (
        mpmath.mpf(D) ** (6 * (D - 1))
        * (3 + x) ** (3 * D)
        * (1 + x) ** (s + 1)
        / (2 + x) ** (2 * (s + 1))
    )


def g_val_stirling(D: int, s: int, x: mpmath.mpf | float) -> mpmath.mpf:
    """The Stirling-limit expression; equals g_val at x = x0."""
    _check_positive_x(x)
    x = mpmath.mpf(x)
    prefactor = mpmath.mpf(D) ** (3 * (D - 2)) * mpmath.mpf(D) ** (3 * D)
    body = (3 + x) ** (3 * D) * (1 + x) ** (s + 1) / (2 + x) ** (2 * (s + 1))
    return prefactor * body * f_D(x, D, s) ** x


def criterion_value(
    D: int, s: int, tol: float = DEFAULT_X0_TOL, bits: int = DEFAULT_WORKING_BITS
) -> mpmath.mpf:
    """g_D(x0) e^s; the forms d_n^s r_n decay when this is below 1."""
    with mpmath.workprec(bits):
        return g_val(D, s, find_x0(D, s, tol, bits)) * mpmath.exp(s)


def minimal_criterion_s(
    D: int, s_max: int, tol: float = DEFAULT_X0_TOL, bits: int = DEFAULT_WORKING_BITS
) -> int | None:
    """Least odd s >= 3D + 1 with criterion_value(D, s) < 1, or None up to s_max."""
    start = 3 * D + 1
    if start % 2 == 0:
        start += 1
    for s in range(start, s_max + 1, 2):
        if criterion_value(D, s, tol, bits) < 1:
            _LOGGER.info("Criterion first met at s=%d for D=%d", s, D)
            return s
    return None


@dataclass(frozen=True, slots=True)
class AsymProfile:
    """x1, x0, g_D(x0) and the decay criterion for one (D, s)."""

    D: int
    s: int
    x1: mpmath.mpf
    x0: mpmath.mpf
    g_at_x0: mpmath.mpf
    criterion: mpmath.mpf

    @property
    def criterion_met(self) -> bool:
        return bool(self.criterion < 1)


def asym_profile(
    D: int, s: int, tol: float = DEFAULT_X0_TOL, bits: int = DEFAULT_WORKING_BITS
) -> AsymProfile:
    with mpmath.workprec(bits):
        x1 = critical_x1(D, s, bits)
        x0 = find_x0(D, s, tol, bits)
        g = g_val(D, s, x0)
        criterion = g * mpmath.exp(s)
    if criterion >= 1:
        _LOGGER.warning(
            "Decay criterion not met for D=%d, s=%d (g*e^s = %s)",
            D,
            s,
            mpmath.nstr(criterion, 6),
        )
    return AsymProfile(D, s, x1, x0, g, criterion)


def term_ratio(spec: FormSpec, j: int, k: int) -> Fraction:
    """Exact c_(k+1) / c_k with c_k = R(n + k + j/D).

    Every factor is positive for k >= 0 and 1 <= j <= D, so no term in
    that range vanishes.
    """
    D, n = spec.D, spec.n
    if not 1 <= j <= D:
        raise ValueError(f"j must lie in 1..{D}, got {j}")
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    ratio = Fraction(1)
    for l in range(1, D + 1):
        ratio *= (k + 3 * n + Fraction(j + l, D)) / (k + Fraction(j + l - 1, D))
    alpha = Fraction(j, D)
    ratio *= ((k + n + alpha) / (k + 2 * n + 1 + alpha)) ** (spec.s + 1)
    return ratio


def peak_index(spec: FormSpec, j: int, max_terms: int = DEFAULT_MAX_TERMS) -> int:
    """Index of the largest c_k: the first k at which the term ratio drops below 1."""
    for k in range(max_terms):
        if term_ratio(spec, j, k) < 1:
            return k
    raise ValueError(f"term ratio of {spec} stays >= 1 for {max_terms} terms")
