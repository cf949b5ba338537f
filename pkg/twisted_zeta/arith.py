"""Exact integer and rational primitives used by the integrality lemmas."""

from __future__ import annotations

import math
import threading
from fractions import Fraction

import mpmath

from .const import DEFAULT_WORKING_BITS


def _require_positive(name: str, value: int) -> None:
    if value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value}")


# _LCM_TABLE[m] = d_m; grows on demand and is never rewritten
_LCM_TABLE: list[int] = [1, 1]
_LCM_LOCK = threading.Lock()


def lcm_up_to(n: int) -> int:
    """Return d_n = lcm{1, ..., n}.

    Args:
        n: Upper end of the range, n >= 1.

    Returns:
        The least common multiple of 1..n.

    Raises:
        ValueError: If n <= 0.
    """
    _require_positive("n", n)
    if n < len(_LCM_TABLE):
        return _LCM_TABLE[n]
    with _LCM_LOCK:
        while len(_LCM_TABLE) <= n:
            m = len(_LCM_TABLE)
            _LCM_TABLE.append(math.lcm(_LCM_TABLE[-1], m))
    return _LCM_TABLE[n]


def is_prime(p: int) -> bool:
    """Deterministic trial division; inputs here are tiny."""
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    return all(p % q for q in range(3, math.isqrt(p) + 1, 2))


def _int_valuation(p: int, m: int) -> int:
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return k


def p_valuation(p: int, x: Fraction | int) -> int:
    """Return nu_p(x) for a nonzero rational x.

    Args:
        p: A prime.
        x: Nonzero rational (or integer).

    Returns:
        nu_p(numerator) - nu_p(denominator).

    Raises:
        ValueError: If x is zero or p is not prime.
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    x = Fraction(x)
    if x == 0:
        raise ValueError("p-adic valuation of 0 is undefined")
    return _int_valuation(p, abs(x.numerator)) - _int_valuation(p, x.denominator)


def coprime_factorial_part(n: int, D: int) -> int:
    """Return n!/gcd(D^n, n!), the largest divisor of n! coprime to D."""
    _require_positive("n", n)
    _require_positive("D", D)
    fact = math.factorial(n)
    return fact // math.gcd(D**n, fact)


def lemma2_divides(D: int, n: int, k: int, i: int) -> bool:
    """Check that n!/gcd(D^n, n!) divides prod_{j=k}^{n+k-1} (Dj + i).

    The product is evaluated exactly; a vanishing factor makes the
    product 0, which every integer divides.
    """
    _require_positive("n", n)
    _require_positive("D", D)
    product = math.prod(D * j + i for j in range(k, n + k))
    return product % coprime_factorial_part(n, D) == 0


def lcm_root_trend(N: int, bits: int = DEFAULT_WORKING_BITS) -> list[mpmath.mpf]:
    """Return the table d_n^(1/n) for n = 1..N.

    No convergence to e is asserted at finite N; the table is meant
    for inspection.
    """
    _require_positive("N", N)
    with mpmath.workprec(bits):
        return [+mpmath.root(mpmath.mpf(lcm_up_to(n)), n) for n in range(1, N + 1)]


def is_integral(x: Fraction) -> bool:
    """Return True if the rational x is an integer."""
    return x.denominator == 1
