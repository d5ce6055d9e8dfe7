import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from univalent import catalog as cat
from univalent.errors import DomainError, IntegrationError, NormalizationError
from univalent.gaussian import QQi
from univalent.loewner import PiecewiseConstantDriver, loewner_sample, random_driver
from univalent.maps import SClassMap, SigmaClassMap, circle_inversion
from univalent.series import Mode


class TestKoebe:
    def test_theta_zero(self):
        assert cat.koebe(0, 12).coefficients() == list(range(1, 14))

    def test_theta_pi(self):
        f = cat.koebe(math.pi, 6)
        assert f.mode is Mode.EXACT
        assert f.a(2) == -2 and f.a(3) == 3

    def test_order(self):
        assert len(cat.koebe(0, 5).coefficients()) == 6

    @pytest.mark.parametrize("theta", [math.pi / 2, math.pi, 3 * math.pi / 2])
    def test_rotation_equivariance_exact(self, theta):
        u = cat.unit(theta)
        f, g = cat.koebe(theta, 10), cat.koebe(0, 10)
        assert all(f.a(n) == u.conjugate() ** (n - 1) * g.a(n) for n in range(1, 12))

    @given(st.floats(0, 2 * math.pi))
    def test_rotation_equivariance_approx(self, theta):
        f = cat.koebe(theta, 10)
        want = [n * cmath.exp(-1j * (n - 1) * theta) for n in range(1, 12)]
        assert np.allclose(f.series.as_array(), want, rtol=0, atol=1e-12)


class TestKoebeRoot:
    def test_odd_koebe(self):
        f = cat.koebe_root(2, 0, 9)
        assert f.coefficients() == [1, 0, 1, 0, 1, 0, 1, 0, 1, 0]

    def test_m_one_is_koebe(self):
        assert cat.koebe_root(1, math.pi, 10).coefficients() == cat.koebe(math.pi, 10).coefficients()

    def test_cube_root_sympy_oracle(self):
        z = sp.symbols("z")
        ser = sp.series(z * (1 - z ** 3) ** sp.Rational(-2, 3), z, 0, 12).removeO()
        want = [sp.Rational(ser.coeff(z, n)) for n in range(1, 12)]
        got = cat.koebe_root(3, 0, 10).coefficients()
        assert [Fraction(int(w.p), int(w.q)) for w in want] == got
        # frozen from the oracle above
        assert got[3] == Fraction(2, 3) and got[6] == Fraction(5, 9) and got[9] == Fraction(40, 81)

    def test_odd_koebe_rotated(self):
        # z/(1 - i z^2) = z + i z^3 - z^5 - i z^7
        f = cat.koebe_root(2, 0, 7, rotation=QQi(0, -1))
        assert f.coefficients()[::2] == [1, QQi(0, 1), -1, QQi(0, -1)]

    def test_m_below_one(self):
        with pytest.raises(DomainError):
            cat.koebe_root(0)

    @pytest.mark.parametrize("m", range(1, 6))
    def test_inversion_matches_sigma_root_map(self, m):
        # the root transform of order m+1 inverts to the Sigma map whose first b index is m
        F = circle_inversion(cat.koebe_root(m + 1, 0, 30))
        G = cat.sigma_root_map(m, 1, 30)
        assert F.coefficients() == G.coefficients()


class TestSigmaMaps:
    def test_t_zero(self):
        F = cat.sigma_root_map(2, 0, 8)
        assert all(b == 0 for b in F.coefficients())

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            cat.sigma_root_map(1, Fraction(3, 2))

    @pytest.mark.parametrize("m", range(0, 7))
    @pytest.mark.parametrize("t", [Fraction(1, 3), Fraction(1), QQi(0, 1), QQi(Fraction(3, 5), Fraction(4, 5))])
    def test_golusin_jenkins(self, m, t):
        F = cat.sigma_root_map(m, t, 16)
        bm2 = F.b(m).abs2()
        cap = Fraction(4, (m + 1) ** 2)
        assert bm2 == cap * QQi(t).abs2()
        assert bm2 <= cap
        assert (bm2 == cap) == (QQi(t).abs2() == 1)
        assert F.dilatation == pytest.approx(abs(complex(t)))

    def test_affine_is_koebe_inversion(self):
        assert cat.affine_sigma(-2, 1, 8).coefficients() == circle_inversion(cat.koebe(0, 8)).coefficients()

    def test_affine_identity(self):
        assert all(b == 0 for b in cat.affine_sigma(0, 0, 6).coefficients())

    def test_affine_dilatation(self):
        F = cat.affine_sigma(0, Fraction(1, 2))
        assert F.dilatation == 0.5 and F.dilatation_exact

    def test_affine_not_injective(self):
        with pytest.raises(DomainError):
            cat.affine_sigma(0, 2)

    def test_affine_omits_zero_flag(self):
        assert cat.affine_sigma(-2, 1).omits_zero
        assert not cat.affine_sigma(5, Fraction(1, 2)).omits_zero


class TestHomotopy:
    def test_endpoint(self):
        f = cat.koebe(0, 8)
        assert cat.homotopy_s(f, 1).coefficients() == f.coefficients()

    def test_zero_gives_identity(self):
        assert cat.homotopy_s(cat.koebe(0, 8), 0).coefficients() == [1] + [0] * 8

    def test_koebe_half(self):
        assert cat.homotopy_s(cat.koebe(0, 8), Fraction(1, 2)).a(3) == Fraction(3, 4)

    def test_sigma_zero(self):
        F = cat.homotopy_sigma(cat.sigma_root_map(1, 1, 8), 0)
        assert all(b == 0 for b in F.coefficients())

    @given(st.fractions(-1, 1, max_denominator=9), st.fractions(-1, 1, max_denominator=9),
           st.fractions(-1, 1, max_denominator=9))
    def test_affine_under_homotopy(self, b0, b1, t):
        F = cat.homotopy_sigma(cat.affine_sigma(b0, b1, 6), t)
        assert F.coefficients() == [b0 * t, b1 * t * t, 0, 0, 0, 0]

    def test_parameter_bound(self):
        with pytest.raises(DomainError):
            cat.homotopy_s(cat.koebe(0, 4), 2)
        with pytest.raises(DomainError):
            cat.HomotopyParam(QQi(1, 1))

    def test_koebe_coefficients_increase_in_t(self):
        ts = [Fraction(k, 10) for k in range(1, 10)]
        rows = [cat.homotopy_s(cat.koebe(0, 8), t).coefficients() for t in ts]
        for n in range(1, 9):
            col = [abs(r[n]) for r in rows]
            assert all(b > a for a, b in zip(col, col[1:]))

    def test_growth_radius_scales(self):
        assert cat.homotopy_s(cat.koebe(0, 4), Fraction(1, 2)).growth_radius == 0.5


class TestSmallK:
    def test_n3(self):
        f = cat.small_k_extremal(3, Fraction(1, 10), 1, 6)
        assert f.a(3) == Fraction(1, 10)

    def test_n4_sympy_oracle(self):
        z = sp.symbols("z")
        ser = sp.series(z * (1 - sp.Rational(1, 17) * z ** 3) ** sp.Rational(-2, 3), z, 0, 8).removeO()
        f = cat.small_k_extremal(4, Fraction(1, 17), 1, 6)
        assert f.a(4) == Fraction(2, 51) == Fraction(2, 3 * 17)
        assert f.a(7) == Fraction(int(sp.Rational(ser.coeff(z, 7)).p), int(sp.Rational(ser.coeff(z, 7)).q)) \
            == Fraction(5, 2601)

    def test_k_out_of_range(self):
        with pytest.raises(DomainError):
            cat.small_k_extremal(3, Fraction(1, 5))
        with pytest.raises(DomainError):
            cat.small_k_extremal(3, 0)

    def test_t_on_circle(self):
        with pytest.raises(DomainError):
            cat.small_k_extremal(3, Fraction(1, 10), Fraction(1, 2))


class TestSquareRootTransform:
    def test_identity(self):
        G = cat.sigma_square_root_transform(cat.sigma_identity(8))
        assert all(b == 0 for b in G.coefficients())

    def test_koebe_inversion(self):
        G = cat.sigma_square_root_transform(cat.affine_sigma(-2, 1, 12))
        # sqrt(z^2 - 2 + z^-2) = z - 1/z
        assert G.coefficients()[:6] == [0, -1, 0, 0, 0, 0]

    def test_needs_flag(self):
        with pytest.raises(NormalizationError):
            cat.sigma_square_root_transform(cat.affine_sigma(5, Fraction(1, 2)))

    def test_odd(self):
        G = cat.sigma_square_root_transform(cat.sigma_root_map(1, Fraction(1, 2), 12))
        assert all(G.b(j) == 0 for j in range(0, G.max_index + 1, 2))


class TestNormalization:
    @pytest.mark.parametrize("f", [
        cat.identity(6), cat.koebe(0, 6), cat.koebe(1.0, 6), cat.koebe_root(3, 0, 6),
        cat.small_k_extremal(5, Fraction(1, 26)), cat.homotopy_s(cat.koebe(0, 6), Fraction(1, 3)),
    ])
    def test_s_class(self, f):
        assert isinstance(f, SClassMap)
        assert f.series.valuation == 1 and f.a(1) == 1 and f.provenance

    @pytest.mark.parametrize("F", [
        cat.sigma_identity(6), cat.sigma_root_map(2, Fraction(1, 2), 6), cat.affine_sigma(1, QQi(0, 1)),
        cat.homotopy_sigma(cat.sigma_root_map(3, 1, 8), Fraction(1, 2)),
    ])
    def test_sigma_class(self, F):
        assert isinstance(F, SigmaClassMap)
        assert F.series.valuation == -1 and F.series.coeff(-1) == 1 and F.provenance


class TestLoewner:
    def test_zero_time(self):
        f = loewner_sample(PiecewiseConstantDriver.constant(0.3, 0.0), order=8)
        assert np.allclose(f.series.as_array(), [1] + [0] * 8)

    def test_constant_driver_a2(self):
        T = 1.3
        f = loewner_sample(PiecewiseConstantDriver.constant(0.0, T), order=6)
        assert abs(complex(f.a(2)) + 2 * (1 - math.exp(-T))) < 1e-8

    def test_long_time_limit_is_rotated_koebe(self):
        theta = 0.7
        f = loewner_sample(PiecewiseConstantDriver.constant(theta, 25.0), order=6)
        assert abs(abs(complex(f.a(2))) - 2) < 1e-8
        u = complex(f.a(2)) / 2
        want = [n * u ** (n - 1) for n in range(1, 8)]
        assert np.allclose(f.series.as_array(), want, atol=1e-7)

    @pytest.mark.parametrize("seed", range(5))
    def test_bieberbach_sanity(self, seed):
        f = loewner_sample(random_driver(seed, 4, 2.0), order=8)
        for n in range(2, 9):
            assert abs(complex(f.a(n))) <= n + 1e-8

    def test_step_failure_reports_tolerance(self):
        with pytest.raises(IntegrationError) as info:
            loewner_sample(PiecewiseConstantDriver.constant(0.0, 1.0), order=8, tol=1e-30)
        assert info.value.achieved > 0
