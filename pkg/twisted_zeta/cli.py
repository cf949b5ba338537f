"""Command-line front end for the twisted zeta toolkit."""

from __future__ import annotations

import argparse
import io
import logging
import sys
from collections.abc import Callable, Sequence
from typing import Any

import mpmath

from . import reports
from .asymptotics import (
    BracketError,
    asym_profile,
    minimal_criterion_s,
    peak_index,
    x0_bounds,
)
from .config import FORMATS, RunConfig, UsageError, validate_config
from .const import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, SCHEMA_VERSION
from .coordinator import (
    CHECK_KEYS,
    SAMPLE_POINTS,
    GridLimits,
    VerificationCoordinator,
)
from .elimination import (
    EliminationPlan,
    PlanError,
    VerificationFailure,
    certify,
    combined_form,
    hat_form,
    hat_form_value,
    hat_r,
    plan_elimination,
)
from .linalg import SingularMatrixError
from .linear_forms import (
    check_form_integrality,
    coeffs_from_pfd,
    dual_check,
    lerch_dual_check,
)
from .rational_function import (
    FormSpec,
    InvariantViolation,
    PoleError,
    build_R,
    check_coeff_integrality,
    check_lemma4,
    check_reflection,
    check_symmetry,
    check_zero_set,
    elementary_product_check,
    first_order_sum,
    partial_fraction,
)
from .trends import TrendRow, gap_decreasing, nth_root_trend, twist_ratio_trend
from .zeta import ConvergenceError, PrecisionContext

_LOGGER = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

# (payload, exit code); payload is a JSON document or CSV text
Outcome = tuple[Any, int]


def _context(config: RunConfig) -> PrecisionContext:
    return PrecisionContext(config.bits, config.target_error)


def _form_spec(config: RunConfig) -> FormSpec:
    assert config.D is not None and config.s is not None and config.n is not None
    return FormSpec(config.D, config.s, config.n)


def _summary(message: str, *args: object) -> None:
    print(message % args, file=sys.stderr)


def cmd_decompose(config: RunConfig) -> Outcome:
    spec = _form_spec(config)
    R = build_R(spec)
    pf = partial_fraction(R)
    payload = reports.partial_fraction_payload(pf)
    code = EXIT_OK
    checks: dict[str, bool] = {}
    if config.check:
        checks["integrality"] = check_coeff_integrality(pf)
        checks["symmetry"] = check_symmetry(pf)
        checks["first_order_sum"] = first_order_sum(pf) == 0
        checks["lemma4"] = all(
            check_lemma4(pf, k, j, l)
            for k in range(spec.n + 1)
            for j in range(1, spec.D + 1)
            for l in range(spec.n + 1)
        )
        checks["zero_set"] = check_zero_set(R)
        checks["reflection"] = check_reflection(R, SAMPLE_POINTS)
        checks["elementary_product"] = elementary_product_check(spec, SAMPLE_POINTS)
        if spec.nd_even:
            checks["form_integrality"] = all(
                check_form_integrality(coeffs_from_pfd(pf, j))
                for j in range(1, spec.D + 1)
            )
        payload["checks"] = checks
        if not all(checks.values()):
            code = EXIT_FAILURE
    _summary(
        "%s: max coefficient size %d bits, %d checks run",
        spec,
        payload["max_coefficient_bits"],
        len(checks),
    )
    return payload, code


def cmd_verify(config: RunConfig) -> Outcome:
    limits = GridLimits()
    if config.max is not None:
        limits = limits.capped(config.max)
    coordinator = VerificationCoordinator(
        _context(config),
        only=config.only,
        limits=limits,
        workers=config.workers,
        mutate=config.mutate,
    )
    results = coordinator.run()
    payload = reports.check_results_payload(results)
    _summary("%d cells checked, %d failed", payload["total"], payload["failed"])
    return payload, EXIT_FAILURE if payload["failed"] else EXIT_OK


def cmd_evaluate(config: RunConfig) -> Outcome:
    spec = _form_spec(config)
    ctx = _context(config)
    bits = config.bits
    pf = partial_fraction(build_R(spec))
    payload: dict[str, Any] = {"schema": SCHEMA_VERSION}
    consistent = True
    if config.j is not None:
        check = dual_check(spec, config.j, ctx, config.max_terms)
        form = coeffs_from_pfd(pf, config.j)
        payload["form"] = reports.hurwitz_form_payload(form, check.second, bits)
        payload["dual"] = reports.dual_check_payload(check, bits)
        consistent = check.consistent
        if config.z is not None:
            lerch = lerch_dual_check(spec, config.j, config.z, ctx, config.max_terms)
            payload["lerch"] = {
                "z": reports.rational(config.z),
                **reports.dual_check_payload(lerch, bits),
            }
            consistent = consistent and lerch.consistent
    if config.d is not None:
        hat = hat_form(pf, config.d)
        value = hat_form_value(hat, ctx)
        series = hat_r(spec, config.d, ctx)
        with mpmath.workprec(bits):
            gap = abs(value.value - series.value)
            agrees = bool(gap <= value.error_bound + series.error_bound)
        payload["hat"] = {
            **reports.hat_form_payload(hat, value, bits),
            "series": reports.estimate(series, bits),
            "residual": str(mpmath.nstr(gap, reports.BOUND_DIGITS)),
            "consistent": agrees,
        }
        consistent = consistent and agrees
    return payload, EXIT_OK if consistent else EXIT_FAILURE


def _trend_rows(config: RunConfig, ctx: PrecisionContext) -> list[TrendRow]:
    assert config.D is not None and config.s is not None and config.j is not None
    if config.j_other is not None:
        return twist_ratio_trend(
            config.D, config.s, config.j, config.j_other, config.n_list, ctx
        )
    return nth_root_trend(config.D, config.s, config.j, config.n_list, ctx)


def cmd_asymptotics(config: RunConfig) -> Outcome:
    assert config.D is not None and config.s is not None and config.j is not None
    D, s, bits = config.D, config.s, config.bits
    ctx = _context(config)
    profile = asym_profile(D, s, config.tol, bits)
    if config.n_list and config.format == "csv":
        buffer = io.StringIO()
        reports.dump_trend_csv(_trend_rows(config, ctx), buffer, bits)
        return buffer.getvalue(), EXIT_OK
    low, high = x0_bounds(D, s, bits)
    payload: dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "profile": reports.profile_payload(profile, bits),
        "x0_window": {
            "low": reports.real(low, bits),
            "high": reports.real(high, bits),
            "inside": bool(low < profile.x0 < high),
        },
    }
    if config.search is not None:
        payload["minimal_s"] = minimal_criterion_s(D, config.search, config.tol, bits)
    if config.n_list:
        rows = _trend_rows(config, ctx)
        payload["trend"] = {
            "kind": "twist_ratio" if config.j_other is not None else "nth_root",
            "rows": reports.trend_payload(rows, bits),
            "gap_decreasing": gap_decreasing(rows),
        }
        payload["peaks"] = [
            {"n": n, "k": peak_index(FormSpec(D, s, n), config.j, config.max_terms)}
            for n in config.n_list
        ]
    return payload, EXIT_OK


def _plan(config: RunConfig) -> EliminationPlan:
    assert config.m is not None and config.s is not None
    assert config.zeta_target is not None
    return plan_elimination(config.m, config.s, config.J, config.zeta_target)


def cmd_eliminate(config: RunConfig) -> Outcome:
    assert config.n is not None
    plan = _plan(config)
    form = combined_form(plan, config.n, _context(config))
    payload = {
        "schema": SCHEMA_VERSION,
        "plan": reports.plan_payload(plan),
        "form": reports.integer_form_payload(form, config.bits),
    }
    return payload, EXIT_OK


def cmd_certify(config: RunConfig) -> Outcome:
    assert config.m is not None and config.s is not None
    assert config.zeta_target is not None
    ctx = _context(config)
    cert = certify(
        config.m, config.s, config.J, config.zeta_target, config.n_list, ctx
    )
    _summary("certificate %s", "passed" if cert.passed else "FAILED")
    payload = reports.certificate_payload(cert, config.bits)
    return payload, EXIT_OK if cert.passed else EXIT_FAILURE


HANDLERS: dict[str, Callable[[RunConfig], Outcome]] = {
    "decompose": cmd_decompose,
    "verify": cmd_verify,
    "evaluate": cmd_evaluate,
    "asymptotics": cmd_asymptotics,
    "eliminate": cmd_eliminate,
    "certify": cmd_certify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bits", type=int, help="working precision in bits")
    common.add_argument(
        "--target-error", type=float, help="absolute error target for evaluations"
    )
    common.add_argument("--tol", type=float, help="x0 bisection tolerance")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=FORMATS, help="report format")
    common.add_argument("--max-terms", type=int, help="series term budget")
    common.add_argument(
        "--log-level", choices=LOG_LEVELS, default="WARNING", help="stderr log level"
    )

    form = argparse.ArgumentParser(add_help=False)
    form.add_argument("--D", type=int, help="twist denominator")
    form.add_argument("--s", type=int, help="weight s >= 3D")

    elimination = argparse.ArgumentParser(add_help=False)
    elimination.add_argument("--m", type=int, help="D = 2^(m+1)")
    elimination.add_argument("--s", type=int, help="odd weight")
    group = elimination.add_mutually_exclusive_group()
    group.add_argument("--J", help="comma-separated odd zeta indices to keep")
    group.add_argument("--exclude", help="comma-separated odd indices to drop")
    elimination.add_argument(
        "--target", dest="zeta_target", type=int, help="zeta index kept in front"
    )

    parser = argparse.ArgumentParser(
        prog="twisted-zeta",
        description="Rational linear forms in odd zeta values from twisted "
        "rational functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common, form], help="partial fractions")
    p.add_argument("--n", type=int)
    p.add_argument("--check", action="store_true", help="run the exact predicates")

    p = sub.add_parser("verify", parents=[common], help="run the verification grid")
    p.add_argument("--only", action="extend", nargs="+", choices=CHECK_KEYS)
    p.add_argument("--max", type=int, help="D and n extent of every grid")
    p.add_argument("--workers", type=int)
    p.add_argument("--mutate", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("evaluate", parents=[common, form], help="dual evaluation")
    p.add_argument("--n", type=int)
    p.add_argument("--j", type=int, help="twist index 1..D")
    p.add_argument("--d", type=int, help="divisor of D for the aggregated form")
    p.add_argument("--z", help="rational 0 < z < 1 for the Lerch check")

    p = sub.add_parser("asymptotics", parents=[common, form], help="growth profile")
    p.add_argument("--n", help="n values for trend tables, e.g. 10,20,40")
    p.add_argument("--j", type=int)
    p.add_argument("--j-other", type=int, help="second twist for ratio trends")
    p.add_argument(
        "--search", type=int, help="least s up to this bound with g e^s < 1"
    )

    p = sub.add_parser("eliminate", parents=[common, elimination], help="one form")
    p.add_argument("--n", type=int)

    p = sub.add_parser("certify", parents=[common, elimination], help="certificate")
    p.add_argument("--n", help="n values, e.g. 2,4 or 20-30")
    return parser


def _emit(payload: Any, config: RunConfig) -> None:
    if isinstance(payload, str):
        text = payload
    else:
        buffer = io.StringIO()
        reports.dump_json(payload, buffer)
        text = buffer.getvalue()
    if config.out is None:
        sys.stdout.write(text)
    else:
        reports.write_text(text, config.out)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code else EXIT_OK
    raw = vars(args)
    logging.basicConfig(
        level=raw.pop("log_level"),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = validate_config(raw)
        payload, code = HANDLERS[config.command](config)
    except (
        InvariantViolation,
        VerificationFailure,
        ConvergenceError,
        BracketError,
        SingularMatrixError,
        PoleError,
    ) as err:
        _LOGGER.error("Verification failed: %s", err)
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAILURE
    except (UsageError, PlanError) as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    _emit(payload, config)
    return code

