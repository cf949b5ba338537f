"""Test the Hurwitz-zeta linear forms and their direct series."""

import dataclasses
from fractions import Fraction

import mpmath
import pytest

from twisted_zeta.linear_forms import (
    SeriesDivergenceError,
    check_form_integrality,
    coeffs_from_pfd,
    dual_check,
    eval_form,
    eval_zeta_combination,
    evaluate_linear_combination,
    lerch_dual_check,
    lerch_form_value,
    series_terms,
    sum_series_r,
    sum_series_weighted,
)
from twisted_zeta.rational_function import (
    FormSpec,
    InvariantViolation,
    build_R,
    partial_fraction,
)
from twisted_zeta.zeta import Estimate, PrecisionContext, to_mpf

ANCHOR_VALUE = "0.029076935875"


def _pf(D, s, n):
    return partial_fraction(build_R(FormSpec(D, s, n)))


def test_anchor_form(anchor_pf):
    """Test a_2 = 14, a_3 = 0 and a_0 = -23 for D=1, s=3, n=1."""
    form = coeffs_from_pfd(anchor_pf, 1)
    assert form.a(2) == 14
    assert form.a(3) == 0
    assert form.a0 == -23
    assert form.alpha == 1


def test_anchor_form_value(anchor_pf, ctx, precision):
    """Test the form evaluates to 14 zeta(2) - 23."""
    value = eval_form(coeffs_from_pfd(anchor_pf, 1), ctx)
    assert value.error_bound <= ctx.tolerance()
    assert abs(value.value - (14 * mpmath.zeta(2) - 23)) <= 2 * ctx.tolerance()
    assert mpmath.nstr(value.value, 11) == ANCHOR_VALUE


def test_series_terms_start_at_first_nonzero(anchor_spec, ctx, precision):
    """Test c_0 = R(2) = 1/54 and c_1 = R(3)."""
    terms = series_terms(anchor_spec, 1, 2, ctx)
    assert [t.k for t in terms] == [0, 1]
    assert abs(terms[0].value - to_mpf(Fraction(1, 54))) < mpmath.mpf(10) ** -60
    expected = to_mpf(Fraction(2 * 5, 27 * 64))
    assert abs(terms[1].value - expected) < mpmath.mpf(10) ** -60


def test_sum_series_anchor(anchor_spec, ctx, precision):
    """Test the direct series reaches the target and matches the form."""
    series = sum_series_r(anchor_spec, 1, ctx)
    assert series.error_bound <= ctx.tolerance()
    assert mpmath.nstr(series.value, 11) == ANCHOR_VALUE


def test_dual_check_anchor(anchor_spec, ctx, precision):
    """Test both evaluations agree within their combined bound."""
    check = dual_check(anchor_spec, 1, ctx)
    assert check.consistent
    assert check.residual <= 2 * ctx.tolerance()


@pytest.mark.parametrize("j", [1, 2])
def test_dual_check_twisted(ctx, precision, j):
    """Test the twisted series for D=2, s=7, n=2."""
    check = dual_check(FormSpec(2, 7, 2), j, ctx)
    assert check.consistent
    assert check.residual <= 2 * ctx.tolerance()


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("j", [1, 2])
def test_dual_check_large_s(ctx, precision, n, j):
    """Test D=2, s=25, where the coefficients are large, for n up to 4."""
    check = dual_check(FormSpec(2, 25, n), j, ctx)
    assert check.consistent
    assert check.residual <= 2 * ctx.tolerance()


@pytest.mark.slow
@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("j", [1, 2])
def test_dual_check_large_s_relative(n, j):
    """Test the two evaluations agree relative to r_n once it is below 1e-30."""
    tight = PrecisionContext(working_bits=512, target_abs_error=1e-80)
    with mpmath.workprec(512):
        check = dual_check(FormSpec(2, 25, n), j, tight)
        assert check.consistent
        assert abs(check.first.value) > 1e6 * tight.tolerance()
        assert check.residual <= 1e-6 * abs(check.first.value)
        assert check.residual <= 1e-6 * abs(check.second.value)


@pytest.mark.parametrize(("D", "s", "n"), [(2, 7, 1), (2, 7, 2), (4, 13, 1)])
def test_even_coefficients_vanish(D, s, n):
    """Test a_i = 0 for even i when nD is even and s is odd."""
    pf = _pf(D, s, n)
    for j in range(1, D + 1):
        form = coeffs_from_pfd(pf, j)
        assert all(form.a(i) == 0 for i in range(2, s + 1, 2))
        assert any(form.a(i) != 0 for i in range(3, s + 1, 2))


def test_odd_coefficients_vanish_for_even_s_and_n():
    """Test the parity pattern flips when s and n are both even."""
    form = coeffs_from_pfd(_pf(2, 6, 2), 1)
    assert all(form.a(i) == 0 for i in range(3, 7, 2))


@pytest.mark.parametrize(("D", "s", "n"), [(1, 3, 1), (2, 7, 2), (3, 9, 2), (2, 6, 3)])
def test_form_integrality(D, s, n):
    """Test d_n^(s-i) a_i and d_n^s a_0 are integers for every j."""
    pf = _pf(D, s, n)
    assert all(check_form_integrality(coeffs_from_pfd(pf, j)) for j in range(1, D + 1))


def test_form_integrality_detects_mutation():
    """Test a fractional constant is rejected."""
    form = coeffs_from_pfd(_pf(2, 7, 2), 1)
    mutated = dataclasses.replace(form, a0=form.a0 + Fraction(1, 2**30))
    assert not check_form_integrality(mutated)


def test_first_order_sum_is_enforced(anchor_pf):
    """Test a broken first-order sum cannot be assembled into a form."""
    mutated = anchor_pf.replace_coefficient(1, 0, Fraction(-13))
    with pytest.raises(InvariantViolation, match="a\\[1\\]"):
        coeffs_from_pfd(mutated, 1)


def test_twist_range(anchor_pf, anchor_spec, ctx):
    """Test j must lie in 1..D."""
    with pytest.raises(ValueError, match="j must"):
        coeffs_from_pfd(anchor_pf, 2)
    with pytest.raises(ValueError, match="j must"):
        sum_series_r(anchor_spec, 0, ctx)


def test_series_budget(anchor_spec, ctx):
    """Test an exhausted term budget raises."""
    with pytest.raises(SeriesDivergenceError):
        sum_series_r(anchor_spec, 1, ctx, max_terms=2)


def test_evaluate_linear_combination(precision):
    """Test 2 x + 1 with the bound scaled by 2."""
    x = Estimate(mpmath.mpf(1), mpmath.mpf("1e-20"))
    result = evaluate_linear_combination([(Fraction(2), x)], Fraction(1), 256)
    assert result.value == 3
    assert result.error_bound >= mpmath.mpf("2e-20")


def test_eval_zeta_combination_constant_only(ctx, precision):
    """Test vanishing coefficients leave the constant."""
    result = eval_zeta_combination([(3, Fraction(0))], Fraction(5, 4), Fraction(1), ctx)
    assert result.value == 1.25


def test_lerch_dual_check(anchor_spec, ctx, precision):
    """Test the weighted series against the Lerch form at z = 1/2."""
    check = lerch_dual_check(anchor_spec, 1, Fraction(1, 2), ctx)
    assert check.consistent
    assert check.residual <= 2 * ctx.tolerance()


def test_lerch_dual_check_twisted(ctx, precision):
    """Test a twisted shift at z = 3/4."""
    check = lerch_dual_check(FormSpec(2, 7, 1), 1, Fraction(3, 4), ctx)
    assert check.consistent


def test_lerch_form_approaches_hurwitz_form(anchor_pf, precision):
    """Test the Lerch form tends to the Hurwitz form as z -> 1."""
    ctx = PrecisionContext(target_abs_error=1e-12)
    near = lerch_form_value(anchor_pf, 1, Fraction(999, 1000), ctx)
    limit = eval_form(coeffs_from_pfd(anchor_pf, 1), ctx)
    assert abs(near.value - limit.value) < mpmath.mpf("1e-2")


def test_weighted_series_rejects_bad_z(anchor_spec, ctx):
    """Test z must lie strictly between 0 and 1."""
    with pytest.raises(ValueError, match="z must"):
        sum_series_weighted(anchor_spec, 1, Fraction(1), ctx)
