"""Test Hurwitz and Lerch evaluation with error bounds."""

from fractions import Fraction

import mpmath
import pytest

from twisted_zeta.zeta import (
    ConvergenceError,
    Estimate,
    PrecisionContext,
    bernoulli_even,
    even_zeta_closed_form,
    hurwitz_tail,
    hurwitz_zeta,
    lerch_phi,
    riemann_zeta,
    to_mpf,
)


def test_precision_context_validation():
    """Test bits and targets are validated."""
    with pytest.raises(ValueError, match="working_bits"):
        PrecisionContext(working_bits=32)
    with pytest.raises(ValueError):
        PrecisionContext(target_abs_error=0)
    with pytest.raises(ValueError):
        PrecisionContext(target_rel_error=2.0)


def test_precision_context_tolerance(precision):
    """Test absolute and relative tolerances."""
    ctx = PrecisionContext(target_rel_error=1e-10)
    assert float(ctx.tolerance(mpmath.mpf(1000))) == pytest.approx(1e-7)
    assert float(ctx.tolerance()) == pytest.approx(1e-30)
    assert ctx.with_bits(512).working_bits == 512
    assert ctx.with_target(1e-5).target_abs_error == 1e-5


def test_estimate_arithmetic(precision):
    """Test bounds add under + and - and scale by |factor|."""
    a = Estimate(mpmath.mpf(1), mpmath.mpf("1e-10"))
    b = Estimate(mpmath.mpf(3), mpmath.mpf("2e-10"))
    assert (a + b).value == 4
    assert float((a - b).error_bound) == pytest.approx(3e-10)
    scaled = b.scaled(Fraction(-1, 2))
    assert scaled.value == -1.5
    assert float(scaled.error_bound) == pytest.approx(1e-10)
    assert a.contains(mpmath.mpf(1) + mpmath.mpf("5e-11"))
    assert not a.contains(mpmath.mpf(2))


def test_bernoulli_even():
    """Test the first even Bernoulli numbers."""
    assert [bernoulli_even(m) for m in range(5)] == [
        1,
        Fraction(1, 6),
        Fraction(-1, 30),
        Fraction(1, 42),
        Fraction(-1, 30),
    ]
    assert bernoulli_even(6) == Fraction(-691, 2730)
    with pytest.raises(ValueError):
        bernoulli_even(-1)


def test_riemann_zeta_two(ctx, precision):
    """Test zeta(2) = pi^2 / 6 within the returned bound."""
    est = riemann_zeta(2, ctx)
    assert est.error_bound <= ctx.tolerance()
    assert est.contains(mpmath.pi**2 / 6)
    assert mpmath.nstr(est.value, 11) == "1.6449340668"


def test_riemann_zeta_four(ctx, precision):
    """Test zeta(4) = pi^4 / 90."""
    est = riemann_zeta(4, ctx)
    assert abs(est.value - mpmath.pi**4 / 90) <= est.error_bound + mpmath.mpf(10) ** -60
    assert mpmath.nstr(est.value, 11) == "1.0823232337"


def test_hurwitz_half(ctx, precision):
    """Test zeta(3, 1/2) = 7 zeta(3)."""
    est = hurwitz_zeta(3, Fraction(1, 2), ctx)
    expected = 7 * mpmath.zeta(3)
    assert abs(est.value - expected) <= 2 * ctx.tolerance()
    assert mpmath.nstr(est.value, 11) == "8.4143983221"


@pytest.mark.parametrize(("i", "alpha"), [(2, Fraction(1, 3)), (5, Fraction(3, 4))])
def test_hurwitz_matches_mpmath(ctx, precision, i, alpha):
    """Test against mpmath.zeta(s, a)."""
    est = hurwitz_zeta(i, alpha, ctx)
    assert abs(est.value - mpmath.zeta(i, to_mpf(alpha))) <= 2 * ctx.tolerance()


def test_hurwitz_tight_tolerance(precision):
    """Test a per-call tolerance below float range."""
    ctx = PrecisionContext(working_bits=512)
    tol = mpmath.mpf(10) ** -120
    est = hurwitz_zeta(3, Fraction(1, 5), ctx, tol=tol)
    assert est.error_bound <= tol


def test_hurwitz_rejects_bad_arguments(ctx):
    """Test the domain checks."""
    with pytest.raises(ValueError, match="diverges"):
        hurwitz_zeta(1, 1, ctx)
    with pytest.raises(ValueError, match="alpha"):
        hurwitz_zeta(3, Fraction(3, 2), ctx)
    with pytest.raises(ValueError, match="alpha"):
        hurwitz_zeta(3, 0, ctx)


def test_hurwitz_unreachable_target():
    """Test a target beyond the working precision raises."""
    ctx = PrecisionContext(working_bits=64, target_abs_error=1e-60)
    with pytest.raises(ConvergenceError):
        hurwitz_zeta(2, 1, ctx)


def test_hurwitz_tail(ctx, precision):
    """Test the large-shift path against mpmath."""
    est = hurwitz_tail(7, mpmath.mpf(1000.5), ctx, mpmath.mpf(10) ** -40)
    assert abs(est.value - mpmath.zeta(7, mpmath.mpf(1000.5))) <= mpmath.mpf(10) ** -39


def test_lerch_two_log_two(ctx, precision):
    """Test Phi(1/2, 1, 1) = 2 log 2."""
    est = lerch_phi(Fraction(1, 2), 1, 1, ctx)
    assert est.error_bound <= ctx.tolerance()
    assert abs(est.value - 2 * mpmath.log(2)) <= 2 * ctx.tolerance()
    assert mpmath.nstr(est.value, 8) == "1.3862944"


def test_lerch_matches_mpmath(ctx, precision):
    """Test a twisted shift against mpmath.lerchphi."""
    est = lerch_phi(Fraction(2, 3), Fraction(1, 4), 3, ctx)
    expected = mpmath.lerchphi(mpmath.mpf(2) / 3, 3, mpmath.mpf(1) / 4)
    assert abs(est.value - expected) <= 2 * ctx.tolerance()


def test_lerch_at_zero(ctx, precision):
    """Test Phi(0, alpha, i) = alpha^-i."""
    assert lerch_phi(0, Fraction(1, 2), 3, ctx).value == 8


def test_lerch_rejects_bad_arguments(ctx):
    """Test z = 1 is refused in favour of hurwitz_zeta."""
    with pytest.raises(ValueError, match="hurwitz_zeta"):
        lerch_phi(1, 1, 2, ctx)
    with pytest.raises(ValueError):
        lerch_phi(Fraction(1, 2), 1, 0, ctx)


@pytest.mark.parametrize("k", [1, 2, 5, 8])
def test_even_zeta_closed_form(ctx, precision, k):
    """Test the Bernoulli closed form against the Euler-Maclaurin value."""
    closed = even_zeta_closed_form(k, ctx)
    direct = riemann_zeta(2 * k, ctx)
    assert abs(closed.value - direct.value) <= closed.error_bound + direct.error_bound


def test_even_zeta_closed_form_rejects_zero(ctx):
    """Test k >= 1."""
    with pytest.raises(ValueError):
        even_zeta_closed_form(0, ctx)
