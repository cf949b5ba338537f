"""Linear forms in Hurwitz zeta values built from the twisted series.

r_n^(D,j) = sum_{m>=1} R(m + j/D) is evaluated two independent ways: by
summing the series directly, and as sum_i a_i zeta(i, j/D) + a_0 with the
exact coefficients assembled from the partial-fraction table.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .arith import is_integral, lcm_up_to
from .asymptotics import find_x0
from .const import (
    DEFAULT_MAX_TERMS,
    GUARD_BITS,
    MAX_TAIL_ORDER,
    TAIL_SWITCH_FACTOR,
)
from .jet import Jet
from .rational_function import (
    FormSpec,
    InvariantViolation,
    PartialFraction,
    build_R,
    eval_R_exact,
    first_order_sum,
    partial_fraction,
)
from .zeta import (
    ConvergenceError,
    Estimate,
    PrecisionContext,
    hurwitz_tail,
    hurwitz_zeta,
    lerch_phi,
    rounding_bound,
    to_mpf,
)

_LOGGER = logging.getLogger(__name__)


class SeriesDivergenceError(ConvergenceError):
    """Raised when a series sum exceeds its term budget without converging."""


@dataclass(frozen=True, slots=True)
class HurwitzForm:
    """sum_{i=2}^{s} a_i zeta(i, j/D) + a_0 with exact coefficients."""

    spec: FormSpec
    j: int
    # coefficients[i - 2] = a_i
    coefficients: tuple[Fraction, ...]
    a0: Fraction

    def a(self, i: int) -> Fraction:
        return self.coefficients[i - 2]

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.j, self.spec.D)


@dataclass(frozen=True, slots=True)
class SeriesTerm:
    k: int
    value: mpmath.mpf


@dataclass(frozen=True, slots=True)
class DualCheck:
    """Two evaluations of the same quantity and their difference."""

    first: Estimate
    second: Estimate
    residual: mpmath.mpf

    @property
    def bound(self) -> mpmath.mpf:
        return self.first.error_bound + self.second.error_bound

    @property
    def consistent(self) -> bool:
        return bool(self.residual <= self.bound)


def _check_j(spec: FormSpec, j: int) -> None:
    if not 1 <= j <= spec.D:
        raise ValueError(f"j must lie in 1..{spec.D}, got {j}")


def _ratio_mpf(spec: FormSpec, alpha: mpmath.mpf, k: int) -> mpmath.mpf:
    """c_(k+1) / c_k in working precision; same product as term_ratio."""
    D, n = spec.D, spec.n
    ratio = mpmath.mpf(1)
    for l in range(1, D + 1):
        ratio *= (k + 3 * n + alpha + mpmath.mpf(l) / D) / (
            k + alpha + mpmath.mpf(l - 1) / D
        )
    return ratio * ((k + n + alpha) / (k + 2 * n + 1 + alpha)) ** (spec.s + 1)


def _terms(spec: FormSpec, j: int) -> Iterable[tuple[int, mpmath.mpf]]:
    """Yield (k, c_k) for k = 0, 1, ...; call inside a workprec block."""
    R = build_R(spec)
    c = to_mpf(eval_R_exact(R, spec.n + Fraction(j, spec.D)))
    alpha = to_mpf(Fraction(j, spec.D))
    k = 0
    while True:
        yield k, c
        c *= _ratio_mpf(spec, alpha, k)
        k += 1


def series_terms(
    spec: FormSpec, j: int, count: int, ctx: PrecisionContext
) -> list[SeriesTerm]:
    """The first ``count`` nonzero terms c_k = R(n + k + j/D)."""
    _check_j(spec, j)
    out: list[SeriesTerm] = []
    with mpmath.workprec(ctx.working_bits + GUARD_BITS):
        for k, c in _terms(spec, j):
            if k >= count:
                break
            out.append(SeriesTerm(k, c))
    return out


def _infinity_jet(spec: FormSpec, order: int) -> Jet:
    """h(w) with R(t) = t^-p h(1/t), expanded to ``order``."""
    R = build_R(spec)
    numerator = Jet.constant(order, R.scalar)
    for r in R.numerator_roots:
        numerator = numerator.mul_linear(1, -r)
    denominator = Jet.constant(order, 1)
    for i in range(1, spec.n + 1):
        for _ in range(R.pole_multiplicity):
            denominator = denominator.mul_linear(1, i)
    return numerator * denominator.reciprocal()


def _infinity_bound(spec: FormSpec) -> mpmath.mpf:
    """max |h| on the circle |w| = 1/(2n)."""
    R = build_R(spec)
    rho = mpmath.mpf(1) / (2 * spec.n)
    top = to_mpf(R.scalar) * mpmath.fprod(
        1 + abs(to_mpf(r)) * rho for r in R.numerator_roots
    )
    bottom = mpmath.fprod(
        (1 - i * rho) ** R.pole_multiplicity for i in range(1, spec.n + 1)
    )
    return top / bottom


def _tail_order(
    spec: FormSpec, shift: mpmath.mpf, tol: mpmath.mpf
) -> tuple[int, mpmath.mpf] | None:
    """Smallest expansion order meeting ``tol`` at ``shift``, with its bound."""
    p = spec.decay_degree
    x = 2 * spec.n / shift
    lead = _infinity_bound(spec) * shift**-p * (1 + shift / (p - 1)) / (1 - x)
    if lead <= tol:
        return 0, lead * x
    order = max(0, int(mpmath.ceil(mpmath.log(lead / tol) / mpmath.log(1 / x))) - 1)
    if order > MAX_TAIL_ORDER:
        return None
    return order, lead * x ** (order + 1)


def _expansion_tail(
    spec: FormSpec,
    shift: mpmath.mpf,
    order: int,
    truncation: mpmath.mpf,
    tol: mpmath.mpf,
    ctx: PrecisionContext,
) -> Estimate:
    """sum_{m>=0} R(shift + m) = sum_q e_q zeta(p + q, shift) + truncation."""
    p = spec.decay_degree
    h = _infinity_jet(spec, order)
    share = tol / (2 * (order + 1))
    total = Estimate(mpmath.mpf(0), truncation)
    for q, e in enumerate(h.coefficients):
        if e == 0:
            continue
        weight = abs(to_mpf(e))
        zeta = hurwitz_tail(p + q, shift, ctx, share / weight)
        total = total + zeta.scaled(e)
    _LOGGER.debug("Series tail of %s from expansion of order %d", spec, order)
    return total


def sum_series_r(
    spec: FormSpec,
    j: int,
    ctx: PrecisionContext,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> Estimate:
    """Evaluate r_n^(D,j) = sum_{k>=0} c_k, the terms m = 1..n-1 being zero.

    Terms are summed directly until either the polynomial tail bound
    c_K (n+K+j/D)/(p-1) drops below the target past 4 x0 n with decreasing
    terms, or the shift is large enough for the expansion of R at infinity
    to finish the tail with a bounded truncation.

    Raises:
        ValueError: If j is outside 1..D.
        SeriesDivergenceError: If ``max_terms`` terms do not suffice.
    """
    _check_j(spec, j)
    D, n, p = spec.D, spec.n, spec.decay_degree
    bits = ctx.working_bits
    with mpmath.workprec(bits + GUARD_BITS):
        x0 = find_x0(D, spec.s, bits=bits)
        past_peak = int(mpmath.ceil(4 * x0 * n))
        alpha = to_mpf(Fraction(j, D))
        head = mpmath.mpf(0)
        previous: mpmath.mpf | None = None
        for k, c in _terms(spec, j):
            if k >= max_terms:
                break
            head += c
            tol = ctx.tolerance(head) / 2
            decreasing = previous is not None and c < previous
            previous = c
            if k >= past_peak and decreasing:
                direct = c * (n + k + alpha) / (p - 1)
                if direct <= tol:
                    _LOGGER.debug("Series of %s summed directly to k=%d", spec, k)
                    return Estimate(head, direct + rounding_bound(head, 4 * k, bits))
            shift = n + k + 1 + alpha
            if shift >= TAIL_SWITCH_FACTOR * n:
                plan = _tail_order(spec, shift, tol)
                if plan is not None:
                    order, truncation = plan
                    tail = _expansion_tail(spec, shift, order, truncation, tol, ctx)
                    rounding = rounding_bound(head, 4 * k, bits)
                    return Estimate(head, rounding) + tail
    raise SeriesDivergenceError(
        f"series of {spec}, j={j} not converged in {max_terms} terms"
    )


def coeffs_from_pfd(pf: PartialFraction, j: int) -> HurwitzForm:
    """Assemble a_i = sum_k a[i][k] and the exact constant a_0.

    a_0 = -sum_i sum_k sum_{l<=k} a[i][k] / (l + j/D)^i.

    Raises:
        InvariantViolation: If sum_k a[1][k] != 0 or the parity pattern of
            the a_i is broken.
    """
    spec = pf.spec
    _check_j(spec, j)
    if first_order_sum(pf) != 0:
        raise InvariantViolation(f"sum_k a[1][k] = {first_order_sum(pf)} for {spec}")
    alpha = Fraction(j, spec.D)
    coefficients = tuple(sum(pf.rows[i - 1], Fraction(0)) for i in range(2, spec.s + 1))
    a0 = Fraction(0)
    for i in range(1, spec.s + 1):
        prefix = Fraction(0)
        for k in range(spec.n + 1):
            prefix += 1 / (k + alpha) ** i
            a0 -= pf.coefficient(i, k) * prefix
    vanishing_parity = 0 if spec.odd_zeta_form else 1
    for i, a in enumerate(coefficients, start=2):
        if i % 2 == vanishing_parity and a != 0:
            raise InvariantViolation(f"a_{i} = {a} should vanish for {spec}")
    return HurwitzForm(spec, j, coefficients, a0)


def _scaled_bits(ctx: PrecisionContext, scale: mpmath.mpf) -> int:
    """Bits for an absolute target after cancellation among terms of ``scale``."""
    needed = mpmath.log(max(scale, 1) / ctx.target_abs_error, 2)
    return max(ctx.working_bits, int(mpmath.ceil(needed)) + GUARD_BITS)


def _share(ctx: PrecisionContext, coefficient: Fraction, count: int) -> mpmath.mpf:
    """Absolute target for one term of a combination of ``count`` terms."""
    return ctx.tolerance() / (4 * count * abs(to_mpf(coefficient)))


def evaluate_linear_combination(
    terms: Sequence[tuple[Fraction, Estimate]],
    constant: Fraction,
    bits: int,
) -> Estimate:
    """sum c * v + constant, with the bound sum |c| err + rounding."""
    with mpmath.workprec(bits + GUARD_BITS):
        total = Estimate(to_mpf(constant), mpmath.mpf(0))
        magnitude = abs(to_mpf(constant))
        for coefficient, estimate in terms:
            part = estimate.scaled(coefficient)
            total = total + part
            magnitude += abs(part.value)
        rounding = rounding_bound(magnitude, 2 * len(terms), bits)
        return Estimate(total.value, total.error_bound + rounding)


def eval_zeta_combination(
    coefficients: Iterable[tuple[int, Fraction]],
    constant: Fraction,
    alpha: Fraction,
    ctx: PrecisionContext,
) -> Estimate:
    """Evaluate sum c_i zeta(i, alpha) + constant to the absolute target of ``ctx``.

    Working precision is raised to absorb the cancellation between the
    large coefficients, and every zeta value is requested with its share
    of the target.
    """
    active = [(i, c) for i, c in coefficients if c != 0]
    if not active:
        with mpmath.workprec(ctx.working_bits):
            value = to_mpf(constant)
            return Estimate(value, rounding_bound(value, 1, ctx.working_bits))
    with mpmath.workprec(ctx.working_bits + GUARD_BITS):
        # zeta(i, alpha) <= alpha^-i + 2 for i >= 2
        scale = sum(abs(to_mpf(c)) * (to_mpf(alpha) ** -i + 2) for i, c in active)
        bits = _scaled_bits(ctx, scale + abs(to_mpf(constant)))
        inner = ctx.with_bits(bits)
        terms = [
            (c, hurwitz_zeta(i, alpha, inner, tol=_share(ctx, c, len(active))))
            for i, c in active
        ]
    return evaluate_linear_combination(terms, constant, bits)


def eval_form(form: HurwitzForm, ctx: PrecisionContext) -> Estimate:
    """Evaluate sum a_i zeta(i, j/D) + a_0."""
    return eval_zeta_combination(
        enumerate(form.coefficients, start=2), form.a0, form.alpha, ctx
    )


def dual_check(
    spec: FormSpec,
    j: int,
    ctx: PrecisionContext,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> DualCheck:
    """Compare the direct series with the Hurwitz form for r_n^(D,j)."""
    series = sum_series_r(spec, j, ctx, max_terms)
    form = eval_form(coeffs_from_pfd(partial_fraction(build_R(spec)), j), ctx)
    with mpmath.workprec(ctx.working_bits + GUARD_BITS):
        residual = abs(series.value - form.value)
    _LOGGER.debug("Dual residual for %s, j=%d: %s", spec, j, mpmath.nstr(residual, 5))
    return DualCheck(series, form, residual)


def check_form_integrality(form: HurwitzForm) -> bool:
    """d_n^(s-i) a_i and d_n^s a_0 are integers."""
    s = form.spec.s
    d = lcm_up_to(form.spec.n)
    return is_integral(d**s * form.a0) and all(
        is_integral(d ** (s - i) * a) for i, a in enumerate(form.coefficients, start=2)
    )


def _check_z(z: Fraction) -> None:
    if not 0 < z < 1:
        raise ValueError(f"z must lie in (0, 1), got {z}")


def sum_series_weighted(
    spec: FormSpec,
    j: int,
    z: Fraction,
    ctx: PrecisionContext,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> Estimate:
    """sum_{m>=1} R(m + j/D) z^m by direct summation.

    Past the peak the terms are non-increasing, so the tail after term K is
    at most c_K z^(n+K) z / (1 - z).
    """
    _check_j(spec, j)
    z = Fraction(z)
    _check_z(z)
    bits = ctx.working_bits
    with mpmath.workprec(bits + GUARD_BITS):
        zz = to_mpf(z)
        weight = zz**spec.n
        total = mpmath.mpf(0)
        previous: mpmath.mpf | None = None
        for k, c in _terms(spec, j):
            if k >= max_terms:
                break
            total += c * weight
            weight *= zz
            if previous is not None and c <= previous:
                tail = c * weight / (1 - zz)
                if tail <= ctx.tolerance(total) / 2:
                    return Estimate(total, tail + rounding_bound(total, 3 * k, bits))
            previous = c
    raise SeriesDivergenceError(
        f"weighted series of {spec} not converged in {max_terms} terms"
    )


def lerch_form_value(
    pf: PartialFraction, j: int, z: Fraction, ctx: PrecisionContext
) -> Estimate:
    """sum_{i,k} a[i][k] z^-k (Phi(z, j/D, i) - sum_{l<=k} z^l / (l + j/D)^i)."""
    spec = pf.spec
    _check_j(spec, j)
    z = Fraction(z)
    _check_z(z)
    alpha = Fraction(j, spec.D)
    # exact per-i weights: sum_k a[i][k] z^-k, and the exact finite corrections
    weights: list[Fraction] = []
    constant = Fraction(0)
    for i in range(1, spec.s + 1):
        weight = Fraction(0)
        prefix = Fraction(0)
        for k in range(spec.n + 1):
            prefix += z**k / (k + alpha) ** i
            factor = pf.coefficient(i, k) / z**k
            weight += factor
            constant -= factor * prefix
        weights.append(weight)
    active = [(i, w) for i, w in enumerate(weights, start=1) if w != 0]
    with mpmath.workprec(ctx.working_bits + GUARD_BITS):
        zz = to_mpf(z)
        scale = sum(abs(to_mpf(w)) / to_mpf(alpha) ** i for i, w in active) / (1 - zz)
        bits = _scaled_bits(ctx, scale + abs(to_mpf(constant)))
        inner = ctx.with_bits(bits)
        terms = [
            (w, lerch_phi(z, alpha, i, inner, tol=_share(ctx, w, len(active))))
            for i, w in active
        ]
    return evaluate_linear_combination(terms, constant, bits)


def lerch_dual_check(
    spec: FormSpec,
    j: int,
    z: Fraction,
    ctx: PrecisionContext,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> DualCheck:
    """Compare the weighted series with its Lerch-function form."""
    series = sum_series_weighted(spec, j, z, ctx, max_terms)
    form = lerch_form_value(partial_fraction(build_R(spec)), j, z, ctx)
    with mpmath.workprec(ctx.working_bits + GUARD_BITS):
        residual = abs(series.value - form.value)
    return DualCheck(series, form, residual)
