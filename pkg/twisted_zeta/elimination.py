"""Divisor-aggregated forms and elimination of unwanted zeta values.

With D = 2^(m+1), the forms rhat^(D,d) for d = D/2, D/4, ..., 1 carry the
same a_i scaled by (D/d)^i - 1. An integer vector w built from the adjugate
of M = (2^(i_a * b) - 1) combines them so that every zeta(i) outside the
chosen set J cancels exactly.
"""

from __future__ import annotations

import dataclasses
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import pairwise

import mpmath

from .arith import is_integral, lcm_up_to
from .asymptotics import criterion_value
from .const import GUARD_BITS, TREND_REL_ERROR
from .linalg import (
    IntMatrix,
    SingularMatrixError,
    adjugate,
    determinant,
    mat_vec,
    transpose,
)
from .linear_forms import (
    DualCheck,
    coeffs_from_pfd,
    eval_zeta_combination,
    sum_series_r,
)
from .rational_function import (
    FormSpec,
    InvariantViolation,
    PartialFraction,
    build_R,
    partial_fraction,
)
from .zeta import Estimate, PrecisionContext, hurwitz_zeta

_LOGGER = logging.getLogger(__name__)


class PlanError(ValueError):
    """Raised when m, s, J and j do not describe a valid elimination."""


class VerificationFailure(Exception):
    """Raised when an elimination identity fails on concrete numbers."""


def _check_divisor(D: int, d: int) -> None:
    if d < 1 or D % d:
        raise ValueError(f"d = {d} does not divide D = {D}")


def zeta_identity_check(
    D: int, i: int, ctx: PrecisionContext, d: int = 1
) -> DualCheck:
    """Compare ((D/d)^i - 1) zeta(i) with sum_{j=1}^{D/d-1} zeta(i, jd/D)."""
    if i < 2:
        raise ValueError(f"i must be >= 2, got {i}")
    _check_divisor(D, d)
    q = D // d
    with mpmath.workprec(ctx.working_bits + GUARD_BITS):
        zero = Estimate(mpmath.mpf(0), mpmath.mpf(0))
        # each side gets half the target; the scaled zeta(i) is computed tighter
        target = ctx.tolerance() / 2
        lhs, rhs = zero, zero
        if q > 1:
            scale = q**i - 1
            lhs = hurwitz_zeta(i, 1, ctx, tol=target / scale).scaled(scale)
        for j in range(1, q):
            share = target / (q - 1)
            rhs = rhs + hurwitz_zeta(i, Fraction(j * d, D), ctx, tol=share)
        residual = abs(lhs.value - rhs.value)
    return DualCheck(lhs, rhs, residual)


def hat_r(spec: FormSpec, d: int, ctx: PrecisionContext) -> Estimate:
    """rhat_n^(D,d) = sum_{j=1}^{D/d-1} r_n^(D, dj) by series summation."""
    _check_divisor(spec.D, d)
    total = Estimate(mpmath.mpf(0), mpmath.mpf(0))
    with mpmath.workprec(ctx.working_bits + GUARD_BITS):
        for j in range(1, spec.D // d):
            total = total + sum_series_r(spec, d * j, ctx)
    return total


@dataclass(frozen=True, slots=True)
class HatForm:
    """sum_i c_i zeta(i) + c_0 representing rhat^(D,d); c_i = a_i ((D/d)^i - 1)."""

    spec: FormSpec
    d: int
    # coefficients[i - 2] = c_i
    coefficients: tuple[Fraction, ...]
    a0: Fraction

    def coefficient(self, i: int) -> Fraction:
        return self.coefficients[i - 2]


def hat_form(pf: PartialFraction, d: int) -> HatForm:
    """Exact zeta(i) form of rhat^(D,d).

    Raises:
        ValueError: If d does not divide D or the a_i are not an odd zeta form.
        InvariantViolation: If an even-index coefficient is nonzero.
    """
    spec = pf.spec
    _check_divisor(spec.D, d)
    if not (spec.nd_even and spec.odd_zeta_form):
        raise ValueError(f"hat forms need nD even and s or n odd, got {spec}")
    q = spec.D // d
    forms = [coeffs_from_pfd(pf, d * j) for j in range(1, q)]
    base = forms[0] if forms else coeffs_from_pfd(pf, spec.D)
    coefficients = tuple(
        a * (q**i - 1) for i, a in enumerate(base.coefficients, start=2)
    )
    for i, c in enumerate(coefficients, start=2):
        if i % 2 == 0 and c != 0:
            raise InvariantViolation(f"even coefficient c_{i} = {c} in hat form")
    a0 = sum((form.a0 for form in forms), Fraction(0))
    return HatForm(spec, d, coefficients, a0)


def hat_form_value(form: HatForm, ctx: PrecisionContext) -> Estimate:
    return eval_zeta_combination(
        enumerate(form.coefficients, start=2), form.a0, Fraction(1), ctx
    )


def build_M(m: int, complement: Sequence[int]) -> IntMatrix:
    """M[a][b] = 2^(i_a * b) - 1 for a, b = 1..m+1."""
    if m < 0:
        raise PlanError(f"m must be >= 0, got {m}")
    if len(complement) != m + 1 or len(set(complement)) != m + 1:
        raise PlanError(f"complement needs {m + 1} distinct entries, got {complement}")
    if any(i < 3 or i % 2 == 0 for i in complement):
        raise PlanError(f"complement entries must be odd and >= 3, got {complement}")
    return tuple(
        tuple(2 ** (i * beta) - 1 for beta in range(1, m + 2)) for i in complement
    )


def solve_w(M: IntMatrix, l: int) -> tuple[int, ...]:
    """Row l (1-based) of adj(M), so that w M = det(M) e_l.

    Raises:
        SingularMatrixError: If det(M) = 0.
    """
    if not 1 <= l <= len(M):
        raise ValueError(f"l must lie in 1..{len(M)}, got {l}")
    if determinant(M) == 0:
        raise SingularMatrixError("elimination matrix is singular")
    return adjugate(M)[l - 1]


def positivity_constant(w: Sequence[int], l: int) -> int:
    """(-1)^(l-1) sum_k w_k (2^k - 1); must be positive.

    Raises:
        VerificationFailure: If the constant is not positive.
    """
    value = (-1) ** (l - 1) * sum(wk * (2**k - 1) for k, wk in enumerate(w, start=1))
    if value <= 0:
        raise VerificationFailure(f"positivity constant {value} <= 0 for w = {w}")
    return value


@dataclass(frozen=True, slots=True)
class EliminationPlan:
    m: int
    s: int
    J: tuple[int, ...]
    j: int
    complement: tuple[int, ...]
    l: int
    M: IntMatrix
    det: int
    w: tuple[int, ...]
    positivity: int

    @property
    def D(self) -> int:
        return 2 ** (self.m + 1)

    @property
    def N(self) -> int:
        return (self.s - 1) // 2

    @property
    def sign(self) -> int:
        return (-1) ** (self.l - 1)

    def divisor(self, k: int) -> int:
        """d_k = 2^(m+1-k), so that D/d_k = 2^k."""
        return 2 ** (self.m + 1 - k)

    @property
    def eliminated(self) -> tuple[int, ...]:
        return tuple(i for i in self.complement if i != self.j)


def plan_elimination(m: int, s: int, J: Sequence[int], j: int) -> EliminationPlan:
    """Validate (m, s, J, j) and build M, w and the positivity constant.

    w is column l of adj(M), so that M w = det(M) e_l; the combination
    sum_k w_k rhat^(k) then keeps zeta(j) and drops the other complement
    values.

    Raises:
        PlanError: If the inputs are inconsistent.
        VerificationFailure: If M w differs from det(M) e_l or the
            positivity constant is not positive.
    """
    if m < 0:
        raise PlanError(f"m must be >= 0, got {m}")
    D = 2 ** (m + 1)
    if s % 2 == 0 or s < 3 * D + 1:
        raise PlanError(f"s must be odd and >= 3D + 1 = {3 * D + 1}, got {s}")
    N = (s - 1) // 2
    odd = set(range(3, s + 1, 2))
    chosen = set(J)
    if len(chosen) != len(J) or not chosen <= odd:
        raise PlanError(f"J must be distinct odd values in 3..{s}, got {sorted(J)}")
    if len(chosen) != N - m:
        raise PlanError(f"J needs N - m = {N - m} elements, got {len(chosen)}")
    if j not in chosen:
        raise PlanError(f"target {j} is not in J")
    complement = tuple(sorted({j} | (odd - chosen)))
    l = complement.index(j) + 1
    M = build_M(m, complement)
    det = determinant(M)
    if det == 0:
        raise SingularMatrixError(f"M is singular for complement {complement}")
    w = solve_w(transpose(M), l)
    expected = tuple(det if row == l else 0 for row in range(1, m + 2))
    if mat_vec(M, w) != expected:
        raise VerificationFailure(f"M w = {mat_vec(M, w)}, expected {expected}")
    positivity = positivity_constant(w, l)
    _LOGGER.info(
        "Elimination plan m=%d s=%d: complement %s, l=%d, det %d",
        m,
        s,
        complement,
        l,
        det,
    )
    return EliminationPlan(
        m, s, tuple(sorted(chosen)), j, complement, l, M, det, w, positivity
    )


@dataclass(frozen=True, slots=True)
class IntegerZetaForm:
    """A_0 + sum_{i in J} A_i zeta(i) with integer coefficients."""

    n: int
    A0: int
    # (i, A_i) for i in J, increasing i
    coefficients: tuple[tuple[int, int], ...]
    value: Estimate


def _combined_rational(
    plan: EliminationPlan, pf: PartialFraction
) -> tuple[dict[int, Fraction], Fraction]:
    coefficients: dict[int, Fraction] = {}
    constant = Fraction(0)
    for k, wk in enumerate(plan.w, start=1):
        form = hat_form(pf, plan.divisor(k))
        for i, c in enumerate(form.coefficients, start=2):
            coefficients[i] = coefficients.get(i, Fraction(0)) + plan.sign * wk * c
        constant += plan.sign * wk * form.a0
    return coefficients, constant


def combined_form(
    plan: EliminationPlan, n: int, ctx: PrecisionContext
) -> IntegerZetaForm:
    """d_n^s (-1)^(l-1) sum_k w_k rhat^(D, d_k) as an integer zeta form.

    Raises:
        VerificationFailure: If an eliminated coefficient is nonzero, a
            scaled coefficient is not an integer, or the zeta(j)
            coefficient differs from (-1)^(l-1) det(M) d_n^s a_j.
    """
    spec = FormSpec(plan.D, plan.s, n)
    pf = partial_fraction(build_R(spec))
    rational, constant = _combined_rational(plan, pf)
    scale = lcm_up_to(n) ** plan.s
    for i in plan.eliminated:
        if rational[i] != 0:
            raise VerificationFailure(
                f"zeta({i}) survives with coefficient {rational[i]}"
            )
    leftovers = [i for i, c in rational.items() if c != 0 and i not in plan.J]
    if leftovers:
        raise VerificationFailure(
            f"unexpected zeta values {leftovers} in combined form"
        )
    a_j = coeffs_from_pfd(pf, plan.D).a(plan.j)
    if rational[plan.j] != plan.sign * plan.det * a_j:
        raise VerificationFailure(f"coefficient of zeta({plan.j}) is off")
    scaled = {i: scale * rational[i] for i in plan.J}
    scaled_constant = scale * constant
    if not all(is_integral(c) for c in (*scaled.values(), scaled_constant)):
        raise VerificationFailure(f"d_n^s scaling leaves a non-integer at n={n}")
    value = eval_zeta_combination(scaled.items(), scaled_constant, Fraction(1), ctx)
    _LOGGER.debug("Combined form at n=%d has value %s", n, mpmath.nstr(value.value, 10))
    return IntegerZetaForm(
        n,
        scaled_constant.numerator,
        tuple((i, scaled[i].numerator) for i in plan.J),
        value,
    )


def combined_series_value(
    plan: EliminationPlan, n: int, ctx: PrecisionContext
) -> Estimate:
    """The same quantity through the series: d_n^s (-1)^(l-1) sum_k w_k rhat."""
    spec = FormSpec(plan.D, plan.s, n)
    scale = lcm_up_to(n) ** plan.s
    total = Estimate(mpmath.mpf(0), mpmath.mpf(0))
    with mpmath.workprec(ctx.working_bits + GUARD_BITS):
        for k, wk in enumerate(plan.w, start=1):
            total = total + hat_r(spec, plan.divisor(k), ctx).scaled(plan.sign * wk)
        return total.scaled(scale)


@dataclass(frozen=True, slots=True)
class ConvergenceRow:
    n: int
    value: mpmath.mpf
    ratio: mpmath.mpf | None


@dataclass(frozen=True, slots=True)
class ConvergenceReport:
    """d_n^s |rhat_n| over n, gated by the decay criterion g e^s < 1."""

    criterion: mpmath.mpf
    rows: tuple[ConvergenceRow, ...]
    # None when nothing is asserted
    decay_ok: bool | None = field(default=None)

    @property
    def criterion_met(self) -> bool:
        return bool(self.criterion < 1)

    @property
    def last_ratio(self) -> mpmath.mpf | None:
        """Ratio of the last two rows, the observed geometric rate."""
        return self.rows[-1].ratio if self.rows else None


def _relative(ctx: PrecisionContext) -> PrecisionContext:
    if ctx.target_rel_error is not None:
        return ctx
    return dataclasses.replace(ctx, target_rel_error=TREND_REL_ERROR)


def convergence_report(
    plan: EliminationPlan, n_list: Sequence[int], ctx: PrecisionContext
) -> ConvergenceReport:
    """Tabulate d_n^s |rhat_n| and check its decay when the criterion holds.

    d_n jumps at prime powers, so consecutive values need not decrease;
    the check is that the last value is below the first and that its n-th
    root is below 1.
    """
    if not n_list or any(b <= a for a, b in pairwise(n_list)):
        raise ValueError("n_list must be non-empty and strictly increasing")
    criterion = criterion_value(plan.D, plan.s, bits=ctx.working_bits)
    series_ctx = _relative(ctx)
    rows: list[ConvergenceRow] = []
    with mpmath.workprec(ctx.working_bits + GUARD_BITS):
        previous: mpmath.mpf | None = None
        for n in n_list:
            value = abs(combined_series_value(plan, n, series_ctx).value)
            ratio = value / previous if previous else None
            rows.append(ConvergenceRow(n, value, ratio))
            previous = value
        decay_ok: bool | None = None
        if criterion < 1 and len(rows) > 1:
            last = rows[-1]
            decay_ok = bool(
                last.value < rows[0].value and mpmath.root(last.value, last.n) < 1
            )
        elif criterion >= 1:
            _LOGGER.warning(
                "Criterion not met at s=%d (g*e^s = %s); decay not asserted",
                plan.s,
                mpmath.nstr(criterion, 6),
            )
    return ConvergenceReport(criterion, tuple(rows), decay_ok)


@dataclass(frozen=True, slots=True)
class CertificateEntry:
    form: IntegerZetaForm
    series: Estimate
    nonzero: bool
    consistent: bool


@dataclass(frozen=True, slots=True)
class Certificate:
    plan: EliminationPlan
    entries: tuple[CertificateEntry, ...]
    convergence: ConvergenceReport
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def certify(
    m: int,
    s: int,
    J: Sequence[int],
    j: int,
    n_list: Sequence[int],
    ctx: PrecisionContext,
) -> Certificate:
    """Build the plan, the integer forms for each n and the decay table.

    Failures of individual checks are collected rather than raised, so
    one report lists every problem.
    """
    plan = plan_elimination(m, s, J, j)
    series_ctx = _relative(ctx)
    failures: list[str] = []
    entries: list[CertificateEntry] = []
    for n in sorted(n_list):
        try:
            form = combined_form(plan, n, ctx)
        except (VerificationFailure, InvariantViolation) as err:
            failures.append(f"n={n}: {err}")
            continue
        series = combined_series_value(plan, n, series_ctx)
        with mpmath.workprec(ctx.working_bits + GUARD_BITS):
            nonzero = bool(abs(form.value.value) > form.value.error_bound)
            gap = abs(form.value.value - series.value)
            consistent = bool(gap <= form.value.error_bound + series.error_bound)
        if not nonzero:
            failures.append(f"n={n}: form value not separated from 0")
        if not consistent:
            failures.append(
                f"n={n}: form and series differ by {mpmath.nstr(gap, 5)}"
            )
        entries.append(CertificateEntry(form, series, nonzero, consistent))
    report = convergence_report(plan, sorted(n_list), ctx)
    if report.decay_ok is False:
        failures.append("d_n^s |rhat_n| does not decay although the criterion holds")
    for failure in failures:
        _LOGGER.error("Certificate check failed: %s", failure)
    return Certificate(plan, tuple(entries), report, tuple(failures))


