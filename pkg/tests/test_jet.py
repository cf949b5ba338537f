"""Test truncated power series arithmetic."""

from fractions import Fraction

import pytest

from twisted_zeta.jet import Jet, product_of_linear


def test_from_coefficients_pads_and_truncates():
    """Test construction normalizes the coefficient count."""
    assert Jet.from_coefficients(3, [1, 2]).coefficients == (1, 2, 0, 0)
    assert Jet.from_coefficients(1, [1, 2, 3]).coefficients == (1, 2)


def test_invalid_jets():
    """Test orders and coefficient counts are validated."""
    with pytest.raises(ValueError):
        Jet(-1, ())
    with pytest.raises(ValueError):
        Jet(2, (Fraction(1),))


def test_geometric_series():
    """Test 1/(1 - u) = 1 + u + u^2 + ..."""
    jet = Jet.linear(5, 1, -1).reciprocal()
    assert jet.coefficients == (1,) * 6


def test_reciprocal_of_shifted_linear():
    """Test 1/(2 + u) = sum (-1)^m u^m / 2^(m+1)."""
    jet = Jet.linear(4, 2).reciprocal()
    assert jet.coefficients == tuple(
        Fraction((-1) ** m, 2 ** (m + 1)) for m in range(5)
    )


def test_reciprocal_needs_unit():
    """Test a vanishing constant term cannot be inverted."""
    with pytest.raises(ZeroDivisionError):
        Jet.linear(3, 0).reciprocal()


def test_product_and_inverse():
    """Test f * (1/f) is the unit jet."""
    f = Jet.from_coefficients(6, [3, -1, Fraction(2, 7), 5])
    assert (f * f.reciprocal()).coefficients == (1, 0, 0, 0, 0, 0, 0)
    assert (f / f).coefficients == (1, 0, 0, 0, 0, 0, 0)


def test_power_matches_repeated_product():
    """Test exponentiation by squaring."""
    f = Jet.linear(5, 1)
    assert (f**4).coefficients == (1, 4, 6, 4, 1, 0)
    assert (f**-1).coefficients == f.reciprocal().coefficients
    assert (f**0).coefficients == (1, 0, 0, 0, 0, 0)


def test_scalar_operations():
    """Test mixing jets with rationals."""
    f = Jet.linear(2, 1, 2)
    assert (f + 3).coefficients == (4, 2, 0)
    assert (3 + f).coefficients == (4, 2, 0)
    assert (f - 1).coefficients == (0, 2, 0)
    assert (f * Fraction(1, 2)).coefficients == (Fraction(1, 2), 1, 0)
    assert (f / 2).coefficients == (Fraction(1, 2), 1, 0)


def test_mul_linear_matches_general_product():
    """Test the O(order) linear multiplication."""
    f = Jet.from_coefficients(4, [1, -2, 3, 5, 7])
    assert f.mul_linear(3, 2) == f * Jet.linear(4, 3, 2)


def test_orders_must_match():
    """Test arithmetic between different orders is rejected."""
    with pytest.raises(ValueError, match="orders differ"):
        Jet.linear(2, 1) + Jet.linear(3, 1)


def test_product_of_linear():
    """Test scale * (1 + u)(2 + u) = 2 * (2 + 3u + u^2)."""
    jet = product_of_linear(3, [1, 2], scale=2)
    assert jet.coefficients == (4, 6, 2, 0)
