"""Verification suite runner for the construction's exact and numeric checks."""

from __future__ import annotations

import asyncio
import functools
import logging
import threading
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field, replace
from fractions import Fraction

import mpmath

from .arith import is_integral, lcm_up_to, lemma2_divides
from .const import (
    DEFAULT_GRID_MAX_D,
    DEFAULT_GRID_MAX_N,
    DEFAULT_HURWITZ_MAX_D,
    DEFAULT_HURWITZ_MAX_I,
    DEFAULT_LEMMA2_MAX,
    DEFAULT_LEMMA2_RANGE,
    DEFAULT_WORKERS,
    GUARD_BITS,
)
from .elimination import VerificationFailure, zeta_identity_check
from .linear_forms import (
    check_form_integrality,
    coeffs_from_pfd,
    dual_check,
    lerch_dual_check,
)
from .oracle import partial_fraction_bruteforce
from .rational_function import (
    FormSpec,
    InvariantViolation,
    PartialFraction,
    build_R,
    check_lemma4,
    check_symmetry,
    check_zero_set,
    elementary_product_check,
    eval_R_exact,
    first_order_sum,
    lemma1_check,
    partial_fraction,
)
from .zeta import (
    ConvergenceError,
    PrecisionContext,
    even_zeta_closed_form,
    riemann_zeta,
)

_LOGGER = logging.getLogger(__name__)

# mpmath keeps one global precision, so numeric checks run one at a time.
_MPMATH_LOCK = threading.Lock()

SAMPLE_POINTS = (Fraction(1, 11), Fraction(13, 17), Fraction(-3, 13), Fraction(29, 7))
LERCH_Z = Fraction(1, 2)

Params = tuple[tuple[str, int], ...]


@dataclass(frozen=True, slots=True, order=True)
class CheckResult:
    """Outcome of one check at one grid cell; ``witness`` explains a failure."""

    check: str
    params: Params
    passed: bool = field(compare=False)
    witness: str | None = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class GridLimits:
    max_D: int = DEFAULT_GRID_MAX_D
    max_n: int = DEFAULT_GRID_MAX_N
    lemma2_max: int = DEFAULT_LEMMA2_MAX
    lemma2_range: int = DEFAULT_LEMMA2_RANGE
    hurwitz_max_D: int = DEFAULT_HURWITZ_MAX_D
    hurwitz_max_i: int = DEFAULT_HURWITZ_MAX_I

    def capped(self, bound: int) -> GridLimits:
        """Use ``bound`` as the D and n extent of every grid."""
        return replace(
            self,
            max_D=bound,
            max_n=bound,
            lemma2_max=bound,
            hurwitz_max_D=max(bound, 2),
        )


def _specs(limits: GridLimits) -> Iterator[FormSpec]:
    for D in range(1, limits.max_D + 1):
        for s in (3 * D, 3 * D + 1, 3 * D + 3):
            for n in range(1, limits.max_n + 1):
                yield FormSpec(D, s, n)


def _spec_params(spec: FormSpec, **extra: int) -> Params:
    return (("D", spec.D), ("s", spec.s), ("n", spec.n), *extra.items())


def _spec_cells(limits: GridLimits) -> Iterator[Params]:
    for spec in _specs(limits):
        yield _spec_params(spec)


def _even_twist_cells(limits: GridLimits) -> Iterator[Params]:
    for spec in _specs(limits):
        if spec.nd_even:
            for j in range(1, spec.D + 1):
                yield _spec_params(spec, j=j)


def _oracle_cells(limits: GridLimits) -> Iterator[Params]:
    for spec in _specs(limits):
        if spec.s <= 5 and spec.n <= 2:
            yield _spec_params(spec)


def _lerch_cells(limits: GridLimits) -> Iterator[Params]:
    for spec in _specs(limits):
        if spec.D <= 2 and spec.n <= 2:
            for j in range(1, spec.D + 1):
                yield _spec_params(spec, j=j)


def _lemma1_cells(limits: GridLimits) -> Iterator[Params]:
    for n in range(1, limits.max_n + 1):
        for s in (1, 2, 3):
            yield (("n", n), ("s", s))


def _lemma2_cells(limits: GridLimits) -> Iterator[Params]:
    for D in range(1, limits.lemma2_max + 1):
        for n in range(1, limits.lemma2_max + 1):
            yield (("D", D), ("n", n))


def _hurwitz_cells(limits: GridLimits) -> Iterator[Params]:
    for D in range(2, limits.hurwitz_max_D + 1):
        for i in range(2, limits.hurwitz_max_i + 1):
            yield (("D", D), ("i", i))


def _even_zeta_cells(limits: GridLimits) -> Iterator[Params]:
    for k in range(1, limits.hurwitz_max_i // 2 + 1):
        yield (("k", k),)


@functools.lru_cache(maxsize=256)
def _decomposition(spec: FormSpec) -> PartialFraction:
    return partial_fraction(build_R(spec))


class VerificationCoordinator:
    """Run the verification grid and aggregate per-cell results.

    Cells are independent; exact checks run concurrently on worker threads
    and results come back sorted by (check, parameters) whatever the
    completion order.
    """

    def __init__(
        self,
        ctx: PrecisionContext,
        *,
        only: tuple[str, ...] = (),
        limits: GridLimits | None = None,
        workers: int = DEFAULT_WORKERS,
        mutate: bool = False,
    ) -> None:
        """Initialize the coordinator.

        Args:
            ctx: Precision for the numeric checks.
            only: Check keys to run; empty runs all of them.
            limits: Grid extents.
            workers: Maximum number of cells in flight.
            mutate: Perturb a[1][0] of every decomposition so that the
                exact checks must report a witness.
        """
        if workers < 1:
            raise ValueError("workers must be >= 1")
        unknown = set(only) - set(CHECK_KEYS)
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")
        self.ctx = ctx
        self.only = only
        self.limits = limits or GridLimits()
        self.workers = workers
        self.mutate = mutate

    def decomposition(self, spec: FormSpec) -> PartialFraction:
        pf = _decomposition(spec)
        if self.mutate:
            return pf.replace_coefficient(1, 0, pf.coefficient(1, 0) + 1)
        return pf

    def cells(self) -> list[tuple[CheckDescription, Params]]:
        selected = [c for c in CHECKS if not self.only or c.key in self.only]
        return [(check, p) for check in selected for p in check.cells(self.limits)]

    async def async_run(self) -> list[CheckResult]:
        cells = self.cells()
        _LOGGER.info("Running %d verification cells", len(cells))
        semaphore = asyncio.Semaphore(self.workers)

        async def run(check: CheckDescription, params: Params) -> CheckResult:
            async with semaphore:
                return await asyncio.to_thread(self._run_cell, check, params)

        results = await asyncio.gather(*(run(c, p) for c, p in cells))
        failed = sum(not r.passed for r in results)
        _LOGGER.info("Verification finished: %d cells, %d failed", len(results), failed)
        return sorted(results)

    def run(self) -> list[CheckResult]:
        return asyncio.run(self.async_run())

    def _run_cell(self, check: CheckDescription, params: Params) -> CheckResult:
        values = dict(params)
        try:
            if check.numeric:
                with _MPMATH_LOCK:
                    witness = check.run(self, values)
            else:
                witness = check.run(self, values)
        except (InvariantViolation, VerificationFailure, ConvergenceError) as err:
            witness = f"{type(err).__name__}: {err}"
        except Exception as err:
            _LOGGER.exception("Unexpected error in %s at %s", check.key, values)
            witness = f"unexpected {type(err).__name__}: {err}"
        if witness is not None:
            _LOGGER.error("Check %s failed at %s: %s", check.key, values, witness)
        return CheckResult(check.key, params, witness is None, witness)


# Each runner returns None on success or a witness string.
Runner = Callable[[VerificationCoordinator, dict[str, int]], str | None]


@dataclass(frozen=True, slots=True)
class CheckDescription:
    key: str
    cells: Callable[[GridLimits], Iterator[Params]]
    run: Runner
    numeric: bool = False


def _spec_of(p: dict[str, int]) -> FormSpec:
    return FormSpec(p["D"], p["s"], p["n"])


def _lemma1(_: VerificationCoordinator, p: dict[str, int]) -> str | None:
    n, s = p["n"], p["s"]
    patterns = {
        "uniform": {k: s for k in range(n + 1)},
        "staggered": {k: 1 + (k % s) for k in range(n + 1)},
    }
    for name, poles in patterns.items():
        if not lemma1_check(poles, n):
            return f"{name} poles {poles} give a non-integral scaled coefficient"
    return None


def _lemma2(coordinator: VerificationCoordinator, p: dict[str, int]) -> str | None:
    bound = coordinator.limits.lemma2_range
    for k in range(-bound, bound + 1):
        for i in range(-bound, bound + 1):
            if not lemma2_divides(p["D"], p["n"], k, i):
                return f"k={k}, i={i}"
    return None


def _integrality(coordinator: VerificationCoordinator, p: dict[str, int]) -> str | None:
    spec = _spec_of(p)
    pf = coordinator.decomposition(spec)
    d = lcm_up_to(spec.n)
    for i in range(1, spec.s + 1):
        for k in range(spec.n + 1):
            scaled = d ** (spec.s - i) * pf.coefficient(i, k)
            if not is_integral(scaled):
                return f"d_n^(s-i) a[{i}][{k}] = {scaled}"
    return None


def _symmetry(coordinator: VerificationCoordinator, p: dict[str, int]) -> str | None:
    if check_symmetry(coordinator.decomposition(_spec_of(p))):
        return None
    return "a[i][k] != (-1)^(i-1) reflection_sign a[i][n-k]"


def _first_order(coordinator: VerificationCoordinator, p: dict[str, int]) -> str | None:
    total = first_order_sum(coordinator.decomposition(_spec_of(p)))
    return None if total == 0 else f"sum_k a[1][k] = {total}"


def _lemma4(coordinator: VerificationCoordinator, p: dict[str, int]) -> str | None:
    spec = _spec_of(p)
    pf = coordinator.decomposition(spec)
    for k in range(spec.n + 1):
        for j in range(1, spec.D + 1):
            for l in range(spec.n + 1):
                if not check_lemma4(pf, k, j, l):
                    return f"k={k}, j={j}, l={l}"
    return None


def _reconstruct(coordinator: VerificationCoordinator, p: dict[str, int]) -> str | None:
    spec = _spec_of(p)
    pf = coordinator.decomposition(spec)
    R = build_R(spec)
    for t in SAMPLE_POINTS:
        if pf.reconstruct(t) != eval_R_exact(R, t):
            return f"partial fractions differ from R at t = {t}"
    return None


def _form_integrality(
    coordinator: VerificationCoordinator, p: dict[str, int]
) -> str | None:
    form = coeffs_from_pfd(coordinator.decomposition(_spec_of(p)), p["j"])
    if check_form_integrality(form):
        return None
    return "d_n^(s-i) a_i or d_n^s a_0 is not an integer"


def _zero_set(_: VerificationCoordinator, p: dict[str, int]) -> str | None:
    return None if check_zero_set(build_R(_spec_of(p))) else "R(-2n + j/D) != 0"


def _elementary(_: VerificationCoordinator, p: dict[str, int]) -> str | None:
    if elementary_product_check(_spec_of(p), SAMPLE_POINTS):
        return None
    return "product of elementary decompositions differs from R"


def _oracle(coordinator: VerificationCoordinator, p: dict[str, int]) -> str | None:
    spec = _spec_of(p)
    expected = partial_fraction_bruteforce(build_R(spec))
    got = coordinator.decomposition(spec)
    for i in range(1, spec.s + 1):
        for k in range(spec.n + 1):
            if got.coefficient(i, k) != expected.coefficient(i, k):
                return (
                    f"a[{i}][{k}]: jets {got.coefficient(i, k)}, "
                    f"linear system {expected.coefficient(i, k)}"
                )
    return None


def _within(coordinator: VerificationCoordinator, residual: mpmath.mpf) -> bool:
    with mpmath.workprec(coordinator.ctx.working_bits + GUARD_BITS):
        return bool(residual <= 2 * coordinator.ctx.tolerance())


def _hurwitz_identity(
    coordinator: VerificationCoordinator, p: dict[str, int]
) -> str | None:
    check = zeta_identity_check(p["D"], p["i"], coordinator.ctx)
    if check.consistent and _within(coordinator, check.residual):
        return None
    return f"residual {mpmath.nstr(check.residual, 5)}"


def _even_zeta(coordinator: VerificationCoordinator, p: dict[str, int]) -> str | None:
    k = p["k"]
    ctx = coordinator.ctx
    direct = riemann_zeta(2 * k, ctx)
    closed = even_zeta_closed_form(k, ctx)
    with mpmath.workprec(ctx.working_bits + GUARD_BITS):
        gap = abs(direct.value - closed.value)
        if gap <= direct.error_bound + closed.error_bound:
            return None
    return f"zeta({2 * k}) differs from its Bernoulli form by {mpmath.nstr(gap, 5)}"


def _dual(coordinator: VerificationCoordinator, p: dict[str, int]) -> str | None:
    check = dual_check(_spec_of(p), p["j"], coordinator.ctx)
    if check.consistent and _within(coordinator, check.residual):
        return None
    return f"series and form differ by {mpmath.nstr(check.residual, 5)}"


def _lerch(coordinator: VerificationCoordinator, p: dict[str, int]) -> str | None:
    check = lerch_dual_check(_spec_of(p), p["j"], LERCH_Z, coordinator.ctx)
    if check.consistent:
        return None
    return f"weighted series and Lerch form differ by {mpmath.nstr(check.residual, 5)}"


CHECKS: tuple[CheckDescription, ...] = (
    CheckDescription("lemma1", _lemma1_cells, _lemma1),
    CheckDescription("lemma2", _lemma2_cells, _lemma2),
    CheckDescription("integrality", _spec_cells, _integrality),
    CheckDescription("symmetry", _spec_cells, _symmetry),
    CheckDescription("first_order_sum", _spec_cells, _first_order),
    CheckDescription("lemma4", _spec_cells, _lemma4),
    CheckDescription("reconstruct", _spec_cells, _reconstruct),
    CheckDescription("form_integrality", _even_twist_cells, _form_integrality),
    CheckDescription("zero_set", _spec_cells, _zero_set),
    CheckDescription("elementary_product", _spec_cells, _elementary),
    CheckDescription("oracle", _oracle_cells, _oracle),
    CheckDescription("hurwitz_identity", _hurwitz_cells, _hurwitz_identity, True),
    CheckDescription("even_zeta", _even_zeta_cells, _even_zeta, True),
    CheckDescription("dual", _even_twist_cells, _dual, True),
    CheckDescription("lerch", _lerch_cells, _lerch, True),
)
CHECK_KEYS: tuple[str, ...] = tuple(check.key for check in CHECKS)
