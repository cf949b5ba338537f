"""Hurwitz and Lerch zeta values with rigorous error bounds."""

from __future__ import annotations

import dataclasses
import logging
import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .const import (
    DEFAULT_TARGET_ERROR,
    DEFAULT_WORKING_BITS,
    EM_CUTOFF_PER_BIT,
    EM_MAX_CUTOFF,
    GUARD_BITS,
    MIN_WORKING_BITS,
)

_LOGGER = logging.getLogger(__name__)

LERCH_MAX_TERMS = 1_000_000


class ConvergenceError(Exception):
    """Raised when an approximation cannot reach its requested accuracy."""


@dataclass(frozen=True, slots=True)
class PrecisionContext:
    """Working precision and accuracy target for approximate evaluations.

    With ``target_rel_error`` set, callers that know the scale of their
    result (series sums, trend tables) bound the error relative to it.
    """

    working_bits: int = DEFAULT_WORKING_BITS
    target_abs_error: float = DEFAULT_TARGET_ERROR
    target_rel_error: float | None = None

    def __post_init__(self) -> None:
        if self.working_bits < MIN_WORKING_BITS:
            raise ValueError(
                f"working_bits must be >= {MIN_WORKING_BITS}, got {self.working_bits}"
            )
        if not self.target_abs_error > 0:
            raise ValueError("target_abs_error must be positive")
        if self.target_rel_error is not None and not 0 < self.target_rel_error < 1:
            raise ValueError("target_rel_error must lie in (0, 1)")

    def tolerance(self, scale: mpmath.mpf | None = None) -> mpmath.mpf:
        """Absolute tolerance, relative to ``scale`` when a relative target is set."""
        with mpmath.workprec(self.working_bits):
            if self.target_rel_error is not None and scale:
                return self.target_rel_error * abs(scale)
            return mpmath.mpf(self.target_abs_error)

    def with_bits(self, working_bits: int) -> PrecisionContext:
        return dataclasses.replace(self, working_bits=working_bits)

    def with_target(self, target_abs_error: float) -> PrecisionContext:
        return dataclasses.replace(self, target_abs_error=target_abs_error)


@dataclass(frozen=True, slots=True)
class Estimate:
    """An approximate real with an absolute error bound."""

    value: mpmath.mpf
    error_bound: mpmath.mpf

    def __add__(self, other: Estimate) -> Estimate:
        return Estimate(self.value + other.value, self.error_bound + other.error_bound)

    def __sub__(self, other: Estimate) -> Estimate:
        return Estimate(self.value - other.value, self.error_bound + other.error_bound)

    def scaled(self, factor: Fraction | int) -> Estimate:
        """Multiply by an exact rational; the bound scales by |factor|."""
        q = to_mpf(factor)
        return Estimate(self.value * q, self.error_bound * abs(q))

    def contains(self, x: mpmath.mpf) -> bool:
        return bool(abs(self.value - x) <= self.error_bound)


def to_mpf(q: Fraction | int) -> mpmath.mpf:
    """Round an exact rational at the current working precision."""
    q = Fraction(q)
    return mpmath.mpf(q.numerator) / q.denominator


def rounding_bound(value: mpmath.mpf, operations: int, bits: int) -> mpmath.mpf:
    return mpmath.ldexp(abs(value) * (operations + 2), -bits)


# _BERNOULLI_EVEN[m] = B_{2m}; append-only
_BERNOULLI_EVEN: list[Fraction] = [Fraction(1)]
_BERNOULLI_LOCK = threading.Lock()


def bernoulli_even(m: int) -> Fraction:
    """Return B_{2m} exactly, growing the shared table as needed."""
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    if m < len(_BERNOULLI_EVEN):
        return _BERNOULLI_EVEN[m]
    with _BERNOULLI_LOCK:
        while len(_BERNOULLI_EVEN) <= m:
            step = len(_BERNOULLI_EVEN)
            size = 2 * step + 1
            acc = sum(
                (math.comb(size, 2 * j) * b for j, b in enumerate(_BERNOULLI_EVEN)),
                Fraction(0),
            )
            # B_1 = -1/2 term of the binomial recurrence
            acc -= Fraction(size, 2)
            _BERNOULLI_EVEN.append(-acc / size)
        _LOGGER.debug("Bernoulli table grown to B_%d", 2 * m)
    return _BERNOULLI_EVEN[m]


def _hurwitz_em(sigma: int, a: mpmath.mpf, tol: mpmath.mpf, bits: int) -> Estimate:
    """Euler-Maclaurin evaluation of zeta(sigma, a) for any real a > 0.

    The remainder of the correction sum is bounded by its first omitted
    term, valid because every derivative of x^-sigma keeps a fixed sign.
    If the correction terms start growing before reaching ``tol`` the
    direct-summation cutoff is doubled and the evaluation restarts.
    """
    with mpmath.workprec(bits + GUARD_BITS):
        # accuracy needed relative to the size of the value
        magnitude = a**-sigma + a ** (1 - sigma) / (sigma - 1)
        tol_bits = max(1, int(mpmath.log(magnitude / tol, 2)))
        cutoff = max(1, math.ceil(EM_CUTOFF_PER_BIT * tol_bits) - int(a))
        while cutoff <= EM_MAX_CUTOFF:
            head = mpmath.fsum((k + a) ** -sigma for k in range(cutoff))
            x = cutoff + a
            total = head + x ** (1 - sigma) / (sigma - 1) + x**-sigma / 2
            rising = mpmath.mpf(sigma)
            power = x ** (-sigma - 1)
            factorial = 2
            previous: mpmath.mpf | None = None
            j = 1
            while True:
                term = to_mpf(bernoulli_even(j)) / factorial * rising * power
                if abs(term) <= tol:
                    bound = abs(term) + rounding_bound(total, cutoff + j, bits)
                    _LOGGER.debug(
                        "zeta(%d, %s): cutoff %d, %d correction terms",
                        sigma,
                        mpmath.nstr(a, 8),
                        cutoff,
                        j - 1,
                    )
                    return Estimate(total, bound)
                if previous is not None and abs(term) >= previous:
                    break
                total += term
                previous = abs(term)
                rising *= (sigma + 2 * j - 1) * (sigma + 2 * j)
                power /= x * x
                factorial *= (2 * j + 1) * (2 * j + 2)
                j += 1
            cutoff *= 2
            _LOGGER.debug("Euler-Maclaurin terms grew; cutoff raised to %d", cutoff)
    raise ConvergenceError(
        f"zeta({sigma}, {mpmath.nstr(a, 8)}) did not reach {mpmath.nstr(tol, 3)}"
    )


# (i, alpha, working_bits, tolerance) -> Estimate; write-once
_ZETA_CACHE: dict[tuple[int, Fraction, int, mpmath.mpf], Estimate] = {}
_ZETA_LOCK = threading.Lock()


def hurwitz_zeta(
    i: int,
    alpha: Fraction | int,
    ctx: PrecisionContext,
    tol: mpmath.mpf | None = None,
) -> Estimate:
    """Evaluate zeta(i, alpha) = sum_{k>=0} (k + alpha)^-i.

    Args:
        i: Integer exponent, i >= 2.
        alpha: Rational shift in (0, 1].
        ctx: Precision context.
        tol: Absolute target overriding ``ctx.target_abs_error``; linear
            forms pass a per-term share that may be far below float range.

    Returns:
        Estimate whose bound does not exceed the target.

    Raises:
        ValueError: If i < 2 or alpha is outside (0, 1].
        ConvergenceError: If the target cannot be met at this precision.
    """
    if i < 2:
        raise ValueError(f"zeta(i, alpha) diverges for i = {i} < 2")
    alpha = Fraction(alpha)
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    with mpmath.workprec(ctx.working_bits + GUARD_BITS):
        target = ctx.tolerance() if tol is None else mpmath.mpf(tol)
        key = (i, alpha, ctx.working_bits, target)
        cached = _ZETA_CACHE.get(key)
        if cached is not None:
            return cached
        estimate = _hurwitz_em(i, to_mpf(alpha), target / 2, ctx.working_bits)
    if estimate.error_bound > target:
        raise ConvergenceError(
            f"zeta({i}, {alpha}) bound {mpmath.nstr(estimate.error_bound, 3)} "
            f"exceeds target at {ctx.working_bits} bits"
        )
    with _ZETA_LOCK:
        return _ZETA_CACHE.setdefault(key, estimate)


def riemann_zeta(i: int, ctx: PrecisionContext) -> Estimate:
    """zeta(i) through the alpha = 1 path."""
    return hurwitz_zeta(i, 1, ctx)


def hurwitz_tail(
    sigma: int, shift: mpmath.mpf, ctx: PrecisionContext, tol: mpmath.mpf
) -> Estimate:
    """zeta(sigma, shift) for a large real shift, used by series tails."""
    if sigma < 2:
        raise ValueError(f"zeta(sigma, shift) diverges for sigma = {sigma} < 2")
    if not shift > 0:
        raise ValueError("shift must be positive")
    return _hurwitz_em(sigma, shift, tol, ctx.working_bits)


def lerch_phi(
    z: Fraction | int | mpmath.mpf,
    alpha: Fraction | int,
    i: int,
    ctx: PrecisionContext,
    tol: mpmath.mpf | None = None,
) -> Estimate:
    """Evaluate Phi(z, alpha, i) = sum_{k>=0} z^k / (k + alpha)^i for 0 <= z < 1.

    The tail after K terms is at most z^K / (K + alpha)^i / (1 - z).
    """
    alpha = Fraction(alpha)
    if i < 1:
        raise ValueError(f"i must be >= 1, got {i}")
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    with mpmath.workprec(ctx.working_bits + GUARD_BITS):
        zz = z if isinstance(z, mpmath.mpf) else to_mpf(z)
        if not 0 <= zz < 1:
            raise ValueError("lerch_phi needs 0 <= z < 1; use hurwitz_zeta at z = 1")
        a = to_mpf(alpha)
        if zz == 0:
            value = a**-i
            return Estimate(value, rounding_bound(value, 1, ctx.working_bits))
        target = (ctx.tolerance() if tol is None else mpmath.mpf(tol)) / 2
        total = mpmath.mpf(0)
        power = mpmath.mpf(1)
        for k in range(LERCH_MAX_TERMS):
            total += power / (k + a) ** i
            power *= zz
            tail = power / (k + 1 + a) ** i / (1 - zz)
            if tail <= target:
                _LOGGER.debug("Lerch sum stopped after %d terms", k + 1)
                return Estimate(
                    total, tail + rounding_bound(total, k + 1, ctx.working_bits)
                )
    raise ConvergenceError(f"Lerch sum at z = {mpmath.nstr(zz, 8)} did not converge")


def even_zeta_closed_form(k: int, ctx: PrecisionContext) -> Estimate:
    """zeta(2k) = (-1)^(k+1) B_2k (2 pi)^(2k) / (2 (2k)!)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    with mpmath.workprec(ctx.working_bits + GUARD_BITS):
        coefficient = Fraction((-1) ** (k + 1)) * bernoulli_even(k) / (
            2 * math.factorial(2 * k)
        )
        value = to_mpf(coefficient) * (2 * mpmath.pi) ** (2 * k)
        return Estimate(value, rounding_bound(value, 2 * k, ctx.working_bits))
