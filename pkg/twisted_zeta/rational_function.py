"""The twisted rational functions R_n^(D) and their partial fractions."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction

from .arith import coprime_factorial_part, is_integral, lcm_up_to
from .jet import Jet

_LOGGER = logging.getLogger(__name__)


class PoleError(ValueError):
    """Raised when a rational function is evaluated at one of its poles."""


class InvariantViolation(Exception):
    """Raised when an identity guaranteed by the construction fails."""


@dataclass(frozen=True, slots=True)
class FormSpec:
    """The triple (D, s, n) selecting one rational function R_n^(D)."""

    D: int
    s: int
    n: int

    def __post_init__(self) -> None:
        if self.D < 1:
            raise ValueError(f"D must be >= 1, got {self.D}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.s < 3 * self.D:
            raise ValueError(f"s must be >= 3D = {3 * self.D}, got {self.s}")

    def __str__(self) -> str:
        return f"D={self.D},s={self.s},n={self.n}"

    @property
    def nd_even(self) -> bool:
        return (self.n * self.D) % 2 == 0

    @property
    def parity_sign(self) -> int:
        """(-1)^(nD)."""
        return 1 if self.nd_even else -1

    @property
    def reflection_sign(self) -> int:
        """(-1)^(nD + (s+1)(n+1)), the sign tying a[i][k] to a[i][n-k].

        Equals parity_sign whenever s or n is odd.
        """
        return self.parity_sign * (-1) ** ((self.s + 1) * (self.n + 1))

    @property
    def odd_zeta_form(self) -> bool:
        """True when the even-index a_i vanish."""
        return self.reflection_sign == 1

    @property
    def decay_degree(self) -> int:
        """p with R(t) = O(t^-p) as t -> infinity."""
        return (self.s + 1) * (self.n + 1) - 3 * self.D * self.n - 1

    @property
    def scalar(self) -> int:
        """D^(6(D-1)n) * (n!)^(s-(3D-1))."""
        return self.D ** (6 * (self.D - 1) * self.n) * math.factorial(self.n) ** (
            self.s - (3 * self.D - 1)
        )


@dataclass(frozen=True, slots=True)
class StructuredRational:
    """R_n^(D) kept as scalar * prod (t - root) / prod (t + k)^(s+1)."""

    spec: FormSpec
    scalar: Fraction
    numerator_roots: tuple[Fraction, ...]
    poles: tuple[int, ...]
    pole_multiplicity: int

    @property
    def effective_order(self) -> int:
        # one numerator root sits on every pole
        return self.pole_multiplicity - 1


def build_R(spec: FormSpec) -> StructuredRational:
    """Construct R_n^(D) for ``spec``.

    The numerator roots are n - j/D for j = 0..3Dn; the poles are
    0, -1, ..., -n, each with raw multiplicity s + 1.
    """
    D, s, n = spec.D, spec.s, spec.n
    roots = tuple(Fraction(n) - Fraction(j, D) for j in range(3 * D * n + 1))
    poles = tuple(range(n + 1))
    R = StructuredRational(spec, Fraction(spec.scalar), roots, poles, s + 1)
    if len(R.numerator_roots) != 3 * D * n + 1:
        raise InvariantViolation("numerator root count differs from 3Dn + 1")
    if sum(-k in R.numerator_roots for k in poles) != n + 1:
        raise InvariantViolation("every pole must carry exactly one numerator root")
    return R


def _as_fraction(t: Fraction | int | str) -> Fraction:
    return t if isinstance(t, Fraction) else Fraction(t)


def eval_R_exact(R: StructuredRational, t: Fraction | int | str) -> Fraction:
    """Evaluate R exactly at a rational point.

    Raises:
        PoleError: If t is one of 0, -1, ..., -n.
    """
    t = _as_fraction(t)
    if t.denominator == 1 and -t in R.poles:
        raise PoleError(f"R({R.spec}) has a pole at t = {t}")
    numerator = R.scalar * math.prod(t - r for r in R.numerator_roots)
    denominator = math.prod(t + k for k in R.poles) ** R.pole_multiplicity
    return numerator / denominator


def laurent_coefficients(
    scalar: Fraction,
    roots: Sequence[Fraction],
    poles: Mapping[int, int],
) -> dict[int, list[Fraction]]:
    """Principal parts of scalar * prod (t - r) / prod (t + k)^m_k.

    Roots lying on a pole cancel against it before expansion. For each pole
    -k the function times (t + k)^m is expanded as a jet in u = t + k and the
    coefficient of (t + k)^-i is read off at u^(m - i).

    Returns:
        Mapping k -> [b_1, ..., b_m] for every pole of positive order.

    Raises:
        InvariantViolation: If a jet constant term vanishes.
    """
    remaining = list(roots)
    orders = dict(poles)
    for k in poles:
        while orders[k] > 0 and Fraction(-k) in remaining:
            remaining.remove(Fraction(-k))
            orders[k] -= 1

    expansions: dict[int, list[Fraction]] = {}
    for k, order in sorted(orders.items()):
        if order <= 0:
            continue
        jet_order = order - 1
        numerator = Jet.constant(jet_order, scalar)
        for r in remaining:
            numerator = numerator.mul_linear(-k - r)
        denominator = Jet.constant(jet_order, 1)
        for other, mult in orders.items():
            if other == k:
                continue
            for _ in range(mult):
                denominator = denominator.mul_linear(other - k)
        try:
            local = numerator * denominator.reciprocal()
        except ZeroDivisionError as err:
            raise InvariantViolation(
                f"vanishing jet constant term at pole -{k}"
            ) from err
        expansions[k] = [local[order - i] for i in range(1, order + 1)]
        _LOGGER.debug("Expanded pole -%d with jet order %d", k, jet_order)
    return expansions


@dataclass(frozen=True, slots=True)
class PartialFraction:
    """Exact table a[i][k], R(t) = sum_{i,k} a[i][k] / (t + k)^i."""

    spec: FormSpec
    # rows[i - 1][k]
    rows: tuple[tuple[Fraction, ...], ...]

    def coefficient(self, i: int, k: int) -> Fraction:
        return self.rows[i - 1][k]

    def reconstruct(self, t: Fraction | int | str) -> Fraction:
        """Evaluate sum a[i][k] / (t + k)^i at a non-pole rational point."""
        t = _as_fraction(t)
        if t.denominator == 1 and 0 <= -t <= self.spec.n:
            raise PoleError(f"t = {t} is a pole")
        total = Fraction(0)
        for k in range(self.spec.n + 1):
            base = 1 / (t + k)
            power = base
            for i in range(1, self.spec.s + 1):
                total += self.rows[i - 1][k] * power
                power *= base
        return total

    def replace_coefficient(self, i: int, k: int, value: Fraction) -> PartialFraction:
        """Return a copy with a[i][k] replaced; used by mutation checks."""
        rows = [list(row) for row in self.rows]
        rows[i - 1][k] = value
        return PartialFraction(self.spec, tuple(tuple(row) for row in rows))


def partial_fraction(R: StructuredRational) -> PartialFraction:
    """Exact partial-fraction decomposition of R via per-pole jets."""
    spec = R.spec
    expansions = laurent_coefficients(
        R.scalar, R.numerator_roots, {k: R.pole_multiplicity for k in R.poles}
    )
    for k in R.poles:
        if len(expansions.get(k, ())) != spec.s:
            raise InvariantViolation(f"pole -{k} of {spec} does not have order s")
    rows = tuple(
        tuple(expansions[k][i - 1] for k in R.poles) for i in range(1, spec.s + 1)
    )
    _LOGGER.debug("Decomposed R for %s with %d poles", spec, len(R.poles))
    return PartialFraction(spec, rows)


class ElementaryKind(IntEnum):
    """The six simple-pole factors that R splits into."""

    FACTORIAL = 1
    SHIFT_DOWN = 2
    SHIFT_UP = 3
    TWIST_DOWN = 4
    TWIST_UP = 5
    TWIST_FAR = 6

    @property
    def twisted(self) -> bool:
        return self >= ElementaryKind.TWIST_DOWN


def _check_elementary(kind: int, n: int, D: int, i: int) -> ElementaryKind:
    try:
        resolved = ElementaryKind(kind)
    except ValueError as err:
        raise ValueError(f"kind must be in 1..6, got {kind}") from err
    if n < 1 or D < 1:
        raise ValueError("n and D must be positive")
    if resolved.twisted and not 1 <= i <= D - 1:
        raise ValueError(f"twist i must be in 1..{D - 1}, got {i}")
    return resolved


def elementary_pfd(kind: int, n: int, D: int = 1, i: int = 0) -> list[int]:
    """Closed-form simple-pole coefficients c_0..c_n of an elementary factor.

    Every factor has the shape P(t) / prod_{j=0}^{n} (t + j); the twisted
    kinds carry D^(2n) and are normalized by gcd(D^n, n!).

    Raises:
        ValueError: If kind or i is out of range.
        InvariantViolation: If a coefficient comes out non-integral.
    """
    resolved = _check_elementary(kind, n, D, i)
    g = math.gcd(D**n, math.factorial(n))
    coprime_part = coprime_factorial_part(n, D)
    twist_scale = Fraction(D**n, g)
    out: list[int] = []
    for k in range(n + 1):
        binom = math.comb(n, k)
        match resolved:
            case ElementaryKind.FACTORIAL:
                value = Fraction((-1) ** k * binom)
            case ElementaryKind.SHIFT_DOWN:
                value = Fraction((-1) ** (n + k) * math.comb(n + k, n) * binom)
            case ElementaryKind.SHIFT_UP:
                value = Fraction((-1) ** k * math.comb(2 * n - k, n) * binom)
            case ElementaryKind.TWIST_DOWN:
                block = math.prod(D * j - i for j in range(k + 1, n + k + 1))
                value = (-1) ** (n + k) * Fraction(block, coprime_part)
                value *= binom * twist_scale
            case ElementaryKind.TWIST_UP:
                block = math.prod(D * j + i for j in range(k - n, k))
                value = (-1) ** (n + k) * Fraction(block, coprime_part)
                value *= binom * twist_scale
            case ElementaryKind.TWIST_FAR:
                block = math.prod(D * j - i for j in range(n - k + 1, 2 * n - k + 1))
                value = (-1) ** k * Fraction(block, coprime_part)
                value *= binom * twist_scale
        if not is_integral(value):
            raise InvariantViolation(
                f"elementary kind {kind} (n={n}, D={D}, i={i}) has non-integral c_{k}"
            )
        out.append(value.numerator)
    return out


def elementary_value(kind: int, n: int, D: int, i: int, t: Fraction) -> Fraction:
    """Evaluate the elementary factor itself, without decomposing it."""
    resolved = _check_elementary(kind, n, D, i)
    t = _as_fraction(t)
    twist = Fraction(i, D)
    match resolved:
        case ElementaryKind.FACTORIAL:
            top = Fraction(math.factorial(n))
        case ElementaryKind.SHIFT_DOWN:
            top = math.prod((t - j for j in range(1, n + 1)), start=Fraction(1))
        case ElementaryKind.SHIFT_UP:
            top = math.prod((t + n + j for j in range(1, n + 1)), start=Fraction(1))
        case ElementaryKind.TWIST_DOWN:
            top = D ** (2 * n) * math.prod(
                (t - j + twist for j in range(1, n + 1)), start=Fraction(1)
            )
        case ElementaryKind.TWIST_UP:
            top = D ** (2 * n) * math.prod(
                (t + j - twist for j in range(1, n + 1)), start=Fraction(1)
            )
        case ElementaryKind.TWIST_FAR:
            top = D ** (2 * n) * math.prod(
                (t + n + j - twist for j in range(1, n + 1)), start=Fraction(1)
            )
    return top / math.prod(t + j for j in range(n + 1))


def _simple_pole_sum(coefficients: Sequence[int], t: Fraction) -> Fraction:
    return sum((Fraction(c) / (t + k) for k, c in enumerate(coefficients)), Fraction(0))


def elementary_product_check(spec: FormSpec, points: Iterable[Fraction]) -> bool:
    """Rebuild R from its elementary factors and compare at ``points``.

    R = F1^(s-3D+1) * F2 * F3 * prod_{i=1}^{D-1} F4(i) F5(i) F6(i), each
    factor evaluated through its closed-form decomposition.
    """
    R = build_R(spec)
    D, s, n = spec.D, spec.s, spec.n
    tables: list[tuple[list[int], int]] = [
        (elementary_pfd(ElementaryKind.FACTORIAL, n), s - 3 * D + 1),
        (elementary_pfd(ElementaryKind.SHIFT_DOWN, n), 1),
        (elementary_pfd(ElementaryKind.SHIFT_UP, n), 1),
    ]
    for i in range(1, D):
        for kind in (
            ElementaryKind.TWIST_DOWN,
            ElementaryKind.TWIST_UP,
            ElementaryKind.TWIST_FAR,
        ):
            tables.append((elementary_pfd(kind, n, D, i), 1))
    for t in points:
        t = _as_fraction(t)
        rebuilt = math.prod(
            (_simple_pole_sum(coeffs, t) ** power for coeffs, power in tables),
            start=Fraction(1),
        )
        if rebuilt != eval_R_exact(R, t):
            _LOGGER.error("Elementary product differs from R(%s) at t = %s", spec, t)
            return False
    return True


def check_reflection(R: StructuredRational, points: Iterable[Fraction]) -> bool:
    """R(-n - t) == -reflection_sign * R(t) at every non-pole point."""
    n, sign = R.spec.n, -R.spec.reflection_sign
    for t in points:
        t = _as_fraction(t)
        if t.denominator == 1 and -n <= t <= 0:
            continue
        if eval_R_exact(R, -n - t) != sign * eval_R_exact(R, t):
            _LOGGER.error("Reflection fails for R(%s) at t = %s", R.spec, t)
            return False
    return True


def check_symmetry(pf: PartialFraction) -> bool:
    """a[i][k] == (-1)^(i-1) (-1)^(nD) a[i][n-k] for all i, k.

    When s and n are both even the pole order s + 1 and the pole count
    n + 1 are odd, and the reflection contributes one more minus sign.
    """
    n, sign = pf.spec.n, pf.spec.reflection_sign
    return all(
        pf.coefficient(i, k) == (-1) ** (i - 1) * sign * pf.coefficient(i, n - k)
        for i in range(1, pf.spec.s + 1)
        for k in range(n + 1)
    )


def check_coeff_integrality(pf: PartialFraction) -> bool:
    """d_n^(s-i) a[i][k] is an integer for all i, k."""
    d, s = lcm_up_to(pf.spec.n), pf.spec.s
    return all(
        is_integral(d ** (s - i) * pf.coefficient(i, k))
        for i in range(1, s + 1)
        for k in range(pf.spec.n + 1)
    )


def first_order_sum(pf: PartialFraction) -> Fraction:
    """sum_k a[1][k], which must vanish."""
    return sum(pf.rows[0], Fraction(0))


def lemma4_value(pf: PartialFraction, k: int, j: int, l: int) -> Fraction:
    """sum_i a[i][k] / (l + j/D)^i."""
    spec = pf.spec
    if not 0 <= k <= spec.n or not 1 <= j <= spec.D or not 0 <= l <= spec.n:
        raise ValueError(f"index out of range: k={k}, j={j}, l={l} for {spec}")
    base = 1 / (l + Fraction(j, spec.D))
    return sum(
        (pf.coefficient(i, k) * base**i for i in range(1, spec.s + 1)), Fraction(0)
    )


def check_lemma4(pf: PartialFraction, k: int, j: int, l: int) -> bool:
    """d_n^s sum_i a[i][k] / (l + j/D)^i is an integer."""
    d = lcm_up_to(pf.spec.n)
    return is_integral(d**pf.spec.s * lemma4_value(pf, k, j, l))


def check_zero_set(R: StructuredRational) -> bool:
    """R vanishes at every t = -2n + j/D, j = 0..3Dn, off the poles."""
    D, n = R.spec.D, R.spec.n
    for j in range(3 * D * n + 1):
        t = Fraction(-2 * n) + Fraction(j, D)
        if t.denominator == 1 and -t in R.poles:
            continue
        if eval_R_exact(R, t) != 0:
            return False
    return True


def lemma1_check(poles: Mapping[int, int], n: int) -> bool:
    """d_n^(s-i) b_{i,j} is integral for 1 / prod (t + k_j)^(s_j).

    Args:
        poles: Map from distinct k_j in 0..n to positive multiplicities s_j.
        n: Range bound; d_n is taken from it.
    """
    if not poles or any(not 0 <= k <= n or m < 1 for k, m in poles.items()):
        raise ValueError("poles must map distinct k in 0..n to positive orders")
    total = sum(poles.values())
    d = lcm_up_to(n)
    expansions = laurent_coefficients(Fraction(1), (), poles)
    return all(
        is_integral(d ** (total - i) * b)
        for coeffs in expansions.values()
        for i, b in enumerate(coeffs, start=1)
    )
