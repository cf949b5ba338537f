"""Trend tables for the n-th-root and twist-ratio limits."""

from __future__ import annotations

import dataclasses
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import pairwise

import mpmath

from .asymptotics import find_x0, g_val
from .const import GUARD_BITS, TREND_REL_ERROR
from .linear_forms import sum_series_r
from .rational_function import FormSpec
from .zeta import PrecisionContext

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class TrendRow:
    """One row of a trend table: the measured value, its limit and the gap."""

    n: int
    value: mpmath.mpf
    reference: mpmath.mpf
    gap: mpmath.mpf


def _check_n_list(n_list: Sequence[int]) -> None:
    if not n_list:
        raise ValueError("n_list must not be empty")
    if any(b <= a for a, b in pairwise(n_list)):
        raise ValueError(f"n_list must be strictly increasing, got {list(n_list)}")


def _relative(ctx: PrecisionContext) -> PrecisionContext:
    if ctx.target_rel_error is not None:
        return ctx
    return dataclasses.replace(ctx, target_rel_error=TREND_REL_ERROR)


def nth_root_trend(
    D: int, s: int, j: int, n_list: Sequence[int], ctx: PrecisionContext
) -> list[TrendRow]:
    """Rows (n, r_n^(1/n), g_D(x0), relative gap)."""
    _check_n_list(n_list)
    series_ctx = _relative(ctx)
    with mpmath.workprec(ctx.working_bits + GUARD_BITS):
        reference = g_val(D, s, find_x0(D, s, bits=ctx.working_bits))
        rows = []
        for n in n_list:
            r = sum_series_r(FormSpec(D, s, n), j, series_ctx)
            value = mpmath.root(r.value, n)
            gap = abs(value - reference) / reference
            _LOGGER.debug("n-th root trend D=%d s=%d n=%d: gap %s", D, s, n, gap)
            rows.append(TrendRow(n, value, reference, gap))
    return rows


def twist_ratio_trend(
    D: int,
    s: int,
    j: int,
    j_other: int,
    n_list: Sequence[int],
    ctx: PrecisionContext,
) -> list[TrendRow]:
    """Rows (n, r_n^(D,j) / r_n^(D,j_other), 1, |ratio - 1|)."""
    _check_n_list(n_list)
    series_ctx = _relative(ctx)
    rows = []
    with mpmath.workprec(ctx.working_bits + GUARD_BITS):
        one = mpmath.mpf(1)
        for n in n_list:
            spec = FormSpec(D, s, n)
            if j == j_other:
                ratio = one
            else:
                top = sum_series_r(spec, j, series_ctx)
                bottom = sum_series_r(spec, j_other, series_ctx)
                ratio = top.value / bottom.value
            rows.append(TrendRow(n, ratio, one, abs(ratio - 1)))
    return rows


def gap_decreasing(rows: Sequence[TrendRow]) -> bool:
    """True if the gap strictly decreases down the table."""
    return all(b.gap < a.gap for a, b in pairwise(rows))
