"""Brute-force partial fractions by coefficient matching.

Independent of the jet path: clear denominators, expand every basis term
Q(t)/(t+k)^i as a polynomial and solve the resulting square linear system
exactly. Only meant for tiny specs.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from fractions import Fraction

from .linalg import solve
from .rational_function import PartialFraction, StructuredRational

_LOGGER = logging.getLogger(__name__)

# Polynomials are coefficient lists, lowest degree first.
Poly = list[Fraction]

ORACLE_MAX_UNKNOWNS = 64


def poly_mul_linear(poly: Sequence[Fraction], c: Fraction | int) -> Poly:
    """Multiply by (t + c)."""
    out = [Fraction(0)] * (len(poly) + 1)
    for deg, coeff in enumerate(poly):
        out[deg] += coeff * c
        out[deg + 1] += coeff
    return out


def poly_from_shifts(
    shifts: Sequence[Fraction | int], scale: Fraction = Fraction(1)
) -> Poly:
    """scale * prod (t + c) over ``shifts``."""
    poly: Poly = [Fraction(scale)]
    for c in shifts:
        poly = poly_mul_linear(poly, c)
    return poly


def partial_fraction_bruteforce(R: StructuredRational) -> PartialFraction:
    """Decompose R by solving for all a[i][k] at once.

    Raises:
        ValueError: If the system would exceed ``ORACLE_MAX_UNKNOWNS``.
    """
    spec = R.spec
    s, n = spec.s, spec.n
    unknowns = s * (n + 1)
    if unknowns > ORACLE_MAX_UNKNOWNS:
        raise ValueError(f"{spec} needs {unknowns} unknowns; oracle is for tiny specs")

    remaining = list(R.numerator_roots)
    for k in R.poles:
        remaining.remove(Fraction(-k))
    numerator = poly_from_shifts([-r for r in remaining], R.scalar)

    # column (i, k) holds prod_{k'} (t + k')^s / (t + k)^i
    basis: list[tuple[int, int]] = [(i, k) for k in R.poles for i in range(1, s + 1)]
    columns: list[Poly] = []
    for i, k in basis:
        shifts = [other for other in R.poles for _ in range(s if other != k else s - i)]
        column = poly_from_shifts(shifts)
        columns.append(column + [Fraction(0)] * (unknowns - len(column)))

    rhs = numerator + [Fraction(0)] * (unknowns - len(numerator))
    matrix = [[columns[col][deg] for col in range(unknowns)] for deg in range(unknowns)]
    solution = solve(matrix, rhs)
    _LOGGER.debug("Oracle solved a %dx%d system for %s", unknowns, unknowns, spec)

    table = dict(zip(basis, solution, strict=True))
    rows = tuple(tuple(table[i, k] for k in R.poles) for i in range(1, s + 1))
    return PartialFraction(spec, rows)
