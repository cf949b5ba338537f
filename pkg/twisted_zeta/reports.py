"""JSON and CSV renderings of toolkit results.

Payloads are plain dicts built in a fixed key order so that identical runs
produce byte-identical output. Exact rationals are written as
``[numerator, denominator]`` decimal strings and approximate reals as
``mpmath.nstr`` strings whose digit count follows the working precision.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from collections.abc import Iterable, Sequence
from fractions import Fraction
from pathlib import Path
from typing import IO, Any, TypedDict

import mpmath

from .asymptotics import AsymProfile
from .const import SCHEMA_VERSION
from .coordinator import CheckResult
from .elimination import (
    Certificate,
    ConvergenceReport,
    EliminationPlan,
    HatForm,
    IntegerZetaForm,
)
from .linear_forms import DualCheck, HurwitzForm
from .rational_function import FormSpec, PartialFraction
from .trends import TrendRow
from .zeta import Estimate

_LOGGER = logging.getLogger(__name__)

BOUND_DIGITS = 6
TREND_COLUMNS = ("n", "value", "reference", "gap")


class EstimateDict(TypedDict):
    value: str
    error_bound: str


def digits_for(bits: int) -> int:
    """Decimal digits carried by ``bits`` binary digits."""
    return max(BOUND_DIGITS, math.floor(bits * math.log10(2)))


def rational(q: Fraction | int) -> list[str]:
    q = Fraction(q)
    return [str(q.numerator), str(q.denominator)]


def real(x: mpmath.mpf, bits: int) -> str:
    return str(mpmath.nstr(x, digits_for(bits)))


def estimate(est: Estimate, bits: int) -> EstimateDict:
    return {
        "value": real(est.value, bits),
        "error_bound": str(mpmath.nstr(est.error_bound, BOUND_DIGITS)),
    }


def _spec(spec: FormSpec) -> dict[str, int]:
    return {"D": spec.D, "s": spec.s, "n": spec.n}


def partial_fraction_payload(pf: PartialFraction) -> dict[str, Any]:
    """Coefficient table in row-major (i, k) order plus a size summary."""
    max_bits = max(
        max(abs(a.numerator).bit_length(), a.denominator.bit_length())
        for row in pf.rows
        for a in row
    )
    return {
        "schema": SCHEMA_VERSION,
        **_spec(pf.spec),
        "coeffs": [[rational(a) for a in row] for row in pf.rows],
        "max_coefficient_bits": max_bits,
    }


def hurwitz_form_payload(
    form: HurwitzForm, value: Estimate | None = None, bits: int = 0
) -> dict[str, Any]:
    payload: dict[str, Any] = {
        **_spec(form.spec),
        "j": form.j,
        "alpha": rational(form.alpha),
        "a": {str(i): rational(a) for i, a in enumerate(form.coefficients, start=2)},
        "a0": rational(form.a0),
    }
    if value is not None:
        payload["value"] = estimate(value, bits)
    return payload


def hat_form_payload(form: HatForm, value: Estimate, bits: int) -> dict[str, Any]:
    return {
        **_spec(form.spec),
        "d": form.d,
        "c": {str(i): rational(c) for i, c in enumerate(form.coefficients, start=2)},
        "c0": rational(form.a0),
        "value": estimate(value, bits),
    }


def dual_check_payload(check: DualCheck, bits: int) -> dict[str, Any]:
    return {
        "series": estimate(check.first, bits),
        "form": estimate(check.second, bits),
        "residual": str(mpmath.nstr(check.residual, BOUND_DIGITS)),
        "bound": str(mpmath.nstr(check.bound, BOUND_DIGITS)),
        "consistent": check.consistent,
    }


def profile_payload(profile: AsymProfile, bits: int) -> dict[str, Any]:
    return {
        "D": profile.D,
        "s": profile.s,
        "x1": real(profile.x1, bits),
        "x0": real(profile.x0, bits),
        "g_at_x0": real(profile.g_at_x0, bits),
        "criterion": real(profile.criterion, bits),
        "criterion_met": profile.criterion_met,
    }


def trend_payload(rows: Sequence[TrendRow], bits: int) -> list[dict[str, Any]]:
    return [
        {
            "n": row.n,
            "value": real(row.value, bits),
            "reference": real(row.reference, bits),
            "gap": real(row.gap, bits),
        }
        for row in rows
    ]


def plan_payload(plan: EliminationPlan) -> dict[str, Any]:
    return {
        "m": plan.m,
        "D": plan.D,
        "s": plan.s,
        "J": list(plan.J),
        "j": plan.j,
        "complement": list(plan.complement),
        "l": plan.l,
        "M": [[str(x) for x in row] for row in plan.M],
        "det": str(plan.det),
        "w": [str(x) for x in plan.w],
        "positivity": str(plan.positivity),
    }


def integer_form_payload(form: IntegerZetaForm, bits: int) -> dict[str, Any]:
    return {
        "n": form.n,
        "A0": str(form.A0),
        "A": {str(i): str(a) for i, a in form.coefficients},
        "value": estimate(form.value, bits),
    }


def convergence_payload(report: ConvergenceReport, bits: int) -> dict[str, Any]:
    return {
        "criterion": real(report.criterion, bits),
        "criterion_met": report.criterion_met,
        "decay_ok": report.decay_ok,
        "last_ratio": None
        if report.last_ratio is None
        else real(report.last_ratio, bits),
        "rows": [
            {
                "n": row.n,
                "value": real(row.value, bits),
                "ratio": None if row.ratio is None else real(row.ratio, bits),
            }
            for row in report.rows
        ],
    }


def certificate_payload(cert: Certificate, bits: int) -> dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "plan": plan_payload(cert.plan),
        "forms": [
            {
                **integer_form_payload(entry.form, bits),
                "series": estimate(entry.series, bits),
                "nonzero": entry.nonzero,
                "consistent": entry.consistent,
            }
            for entry in cert.entries
        ],
        "convergence": convergence_payload(cert.convergence, bits),
        "failures": list(cert.failures),
        "passed": cert.passed,
    }


def check_results_payload(results: Iterable[CheckResult]) -> dict[str, Any]:
    rows = list(results)
    failed = [r for r in rows if not r.passed]
    return {
        "schema": SCHEMA_VERSION,
        "total": len(rows),
        "failed": len(failed),
        "failures": [
            {"check": r.check, "params": dict(r.params), "witness": r.witness}
            for r in failed
        ],
        "summary": _summary(rows),
    }


def _summary(results: Sequence[CheckResult]) -> dict[str, dict[str, int]]:
    summary: dict[str, dict[str, int]] = {}
    for result in results:
        counts = summary.setdefault(result.check, {"passed": 0, "failed": 0})
        counts["passed" if result.passed else "failed"] += 1
    return summary


def dump_json(payload: Any, stream: IO[str]) -> None:
    json.dump(payload, stream, indent=2)
    stream.write("\n")


def dump_trend_csv(rows: Sequence[TrendRow], stream: IO[str], bits: int) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(TREND_COLUMNS)
    for row in trend_payload(rows, bits):
        writer.writerow([row[column] for column in TREND_COLUMNS])


def write_text(text: str, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    _LOGGER.info("Wrote report to %s", path)
