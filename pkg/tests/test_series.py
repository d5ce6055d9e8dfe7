from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from conftest import coefficients_agree, exact_series, gaussian_rationals, unit_series
from univalent.errors import ModeError, NormalizationError, TruncationError
from univalent.gaussian import QQi
from univalent.series import (Mode, TruncatedSeries, compose, exp_series, log_series, pow_series,
                              substitute_power)


def S(coeffs, valuation=0, order=None, mode=None):
    return TruncatedSeries.from_coeffs(coeffs, valuation=valuation, order=order, mode=mode)


def sympy_coeffs(expr, var, n):
    """Taylor coefficients 0..n-1 of a sympy expression, as QQi."""
    poly = sp.series(expr, var, 0, n).removeO()
    out = []
    for k in range(n):
        c = sp.nsimplify(poly.coeff(var, k))
        re, im = sp.Rational(sp.re(c)), sp.Rational(sp.im(c))
        out.append(QQi(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q))))
    return out


class TestRingExamples:
    def test_polynomial_product(self):
        p = S([1, 2], valuation=1, order=4) * S([1, -1], valuation=1, order=4)
        assert [p.coeff(k) for k in range(2, 7)] == [1, 1, -2, 0, 0]

    def test_add_zero(self):
        f = S([QQi(1, 2), 3, Fraction(-1, 3)], valuation=1)
        assert f + TruncatedSeries.zero(5, valuation=0) == f.truncate(f.order) + 0
        assert coefficients_agree(f + 0, f)

    def test_laurent_product(self):
        # (z - 2 + 1/z) * z, hand expanded
        p = S([1, -2, 1], valuation=-1, order=4) * S([1], valuation=1, order=4)
        assert p.valuation == 0
        assert [p.coeff(k) for k in range(0, 3)] == [1, -2, 1]

    def test_mode_mismatch(self):
        with pytest.raises(ModeError):
            S([1, 2]) + S([1.0, 2.0])

    def test_underflow(self):
        with pytest.raises(TruncationError):
            S([5]).derivative()
        with pytest.raises(TruncationError):
            S([1, 2]).truncate(-1)

    def test_coefficient_beyond_precision(self):
        with pytest.raises(TruncationError):
            S([1, 2, 3]).coeff(3)

    def test_truncation_policy_keeps_least_known_order(self):
        p = S([1, 1, 1, 1, 1]) * S([1, 1])
        assert p.order == 1


class TestRingAxioms:
    @given(exact_series(), exact_series(), exact_series())
    def test_add_associative(self, a, b, c):
        try:
            lhs = (a + b) + c
            rhs = a + (b + c)
        except TruncationError:
            return
        assert lhs == rhs

    @given(exact_series(), exact_series())
    def test_add_commutative(self, a, b):
        try:
            assert a + b == b + a
        except TruncationError:
            pass

    @given(exact_series(), exact_series(), exact_series())
    def test_mul_associative(self, a, b, c):
        assert (a * b) * c == a * (b * c)

    @given(exact_series(), exact_series(), exact_series())
    def test_distributive(self, a, b, c):
        try:
            lhs = a * (b + c)
            rhs = a * b + a * c
        except TruncationError:
            return
        assert coefficients_agree(lhs, rhs)

    @given(exact_series(min_val=0))
    def test_one_is_neutral(self, a):
        assert a * TruncatedSeries.one(a.order) == a

    @given(exact_series(), exact_series())
    def test_approx_matches_exact(self, a, b):
        exact = (a * b).as_array()
        approx = (a.to_approx() * b.to_approx()).as_array()
        scale = max(1.0, float(np.max(np.abs(exact))))
        assert np.max(np.abs(exact - approx)) <= 1e-12 * scale


class TestReciprocal:
    @given(exact_series())
    def test_reciprocal_round_trip(self, a):
        if not any(a.coeffs):
            return
        r = a.reciprocal()
        prod = a.normalized() * r
        assert prod.valuation == 0
        assert prod.coeff(0) == 1
        assert all(prod.coeff(k) == 0 for k in range(1, prod.precision))

    def test_reciprocal_of_zero(self):
        with pytest.raises(ZeroDivisionError):
            TruncatedSeries.zero(3).reciprocal()


class TestLogExpPow:
    def test_log_one(self):
        L = log_series(TruncatedSeries.one(6))
        assert all(c == 0 for c in L.coeffs)

    @pytest.mark.parametrize("t", [Fraction(1, 2), Fraction(-3, 7), QQi(1, 1)])
    def test_log_of_linear(self, t):
        # log(1 - t w) = -sum t^k w^k / k; w plays the role of 1/z
        L = log_series(S([1, -t], order=9))
        want = [QQi(0)] + [-(QQi(t) ** k) / k for k in range(1, 10)]
        assert list(L.coeffs) == want

    def test_log_of_linear_sympy_oracle(self):
        w = sp.symbols("w")
        want = sympy_coeffs(sp.log(1 - sp.Rational(2, 5) * w), w, 10)
        assert list(log_series(S([1, Fraction(-2, 5)], order=9)).coeffs) == want

    def test_exp_log_round_trip(self):
        u = S([1, 1, 1])
        assert exp_series(log_series(u)) == u

    def test_log_needs_unit_constant(self):
        with pytest.raises(NormalizationError):
            log_series(S([2, 1]))

    def test_binomial(self):
        v = pow_series(S([1, -1], order=10), -2)
        assert list(v.coeffs) == [n + 1 for n in range(11)]

    def test_binomial_sympy_oracle(self):
        z = sp.symbols("z")
        want = sympy_coeffs((1 - sp.Rational(1, 3) * z) ** sp.Rational(-2, 3), z, 12)
        assert list(pow_series(S([1, Fraction(-1, 3)], order=11), Fraction(-2, 3)).coeffs) == want

    def test_pow_zero(self):
        v = pow_series(S([1, 3, 5], order=4), 0)
        assert list(v.coeffs) == [1, 0, 0, 0, 0]

    def test_square_root_squared(self):
        r = pow_series(S([1, 1], order=8), Fraction(1, 2))
        assert list((r * r).coeffs) == [1, 1] + [0] * 7

    @given(unit_series())
    def test_exp_log_identity(self, u):
        assert exp_series(log_series(u)) == u

    @given(unit_series())
    def test_pow_one_identity(self, u):
        assert pow_series(u, 1) == u

    @given(unit_series(), st.fractions(min_value=-3, max_value=3, max_denominator=5))
    def test_pow_matches_exp_log(self, u, e):
        assert pow_series(u, e) == exp_series(log_series(u).scale(e))

    @given(unit_series(), st.fractions(min_value=-3, max_value=3, max_denominator=5))
    def test_pow_approx_matches_exact(self, u, e):
        ex = pow_series(u, e).as_array()
        ap = pow_series(u.to_approx(), float(e)).as_array()
        scale = max(1.0, float(np.max(np.abs(ex))))
        assert np.max(np.abs(ex - ap)) <= 1e-12 * scale

    @given(unit_series())
    def test_log_approx_matches_exact(self, u):
        ex = log_series(u).as_array()
        ap = log_series(u.to_approx()).as_array()
        scale = max(1.0, float(np.max(np.abs(ex))))
        assert np.max(np.abs(ex - ap)) <= 1e-12 * scale

    def test_exact_pow_rejects_float_exponent(self):
        with pytest.raises(ModeError):
            pow_series(S([1, 1]), 0.5)


class TestSubstitutePower:
    def test_exponent_scaling(self):
        f = S([1, 1], valuation=1, order=1)
        g = substitute_power(f, 2)
        assert g.valuation == 2
        assert [g.coeff(k) for k in range(2, g.precision)] == [1, 0, 1, 0]

    def test_koebe_squared_argument(self):
        k = S(list(range(1, 8)), valuation=1)
        g = substitute_power(k, 2)
        assert [g.coeff(2 * n) for n in range(1, 8)] == list(range(1, 8))
        assert all(g.coeff(2 * n + 1) == 0 for n in range(1, 7))

    def test_identity_power(self):
        f = S([1, 2, 3], valuation=1)
        assert substitute_power(f, 1) == f

    @given(exact_series(min_val=0), st.integers(1, 4))
    def test_agrees_with_compose(self, f, m):
        g = S([1], valuation=m, order=f.precision * m + 2)
        assert coefficients_agree(substitute_power(f, m), compose(f, g))


class TestCompose:
    def test_geometric_inner(self):
        # 1/(1-x) composed with z/(1-z) gives (1-z)/(1-2z)
        f = S([1] * 8)
        g = S([1] * 8, valuation=1)
        h = compose(f, g)
        want = [1] + [2 ** (n - 1) for n in range(1, h.precision)]
        assert list(h.coeffs) == want

    def test_inner_must_vanish(self):
        with pytest.raises(NormalizationError):
            compose(S([1, 1]), S([1, 1]))

    def test_mode_label(self):
        assert S([1.0, 2.0]).mode is Mode.APPROX
        assert S([1, QQi(0, 1)]).mode is Mode.EXACT


@given(gaussian_rationals(), gaussian_rationals())
def test_gaussian_field_ops(x, y):
    assert (x + y) - y == x
    if y:
        assert (x * y) / y == x
    assert (x * y).abs2() == x.abs2() * y.abs2()
    assert complex(x * y) == pytest.approx(complex(x) * complex(y))


@pytest.mark.parametrize("text,want", [("3/4", QQi(Fraction(3, 4))), ("-2i", QQi(0, -2)),
                                       ("1/2-3/4i", QQi(Fraction(1, 2), Fraction(-3, 4))),
                                       ("0.25+1i", QQi(Fraction(1, 4), 1)), ("i", QQi(0, 1))])
def test_gaussian_parse(text, want):
    assert QQi.parse(text) == want
    assert QQi.parse(str(want)) == want
