from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from univalent.gaussian import QQi
from univalent.maps import SClassMap
from univalent.series import TruncatedSeries

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def gaussian_rationals(draw):
    return QQi(draw(small_fractions), draw(small_fractions))


@st.composite
def exact_series(draw, min_val=-2, max_val=2, max_order=6):
    v = draw(st.integers(min_val, max_val))
    n = draw(st.integers(0, max_order))
    cs = draw(st.lists(gaussian_rationals(), min_size=n + 1, max_size=n + 1))
    return TruncatedSeries.from_coeffs(cs, valuation=v)


@st.composite
def unit_series(draw, max_order=8):
    """Power series with constant term 1."""
    n = draw(st.integers(1, max_order))
    cs = draw(st.lists(gaussian_rationals(), min_size=n, max_size=n))
    return TruncatedSeries.from_coeffs([QQi(1)] + cs)


def random_s_prefix(rng, order: int, den: int = 9, span: int = 4) -> SClassMap:
    """``z + a_2 z^2 + ...`` with random Gaussian-rational coefficients (algebraic tests only)."""
    cs = [QQi(1)]
    for _ in range(order):
        cs.append(QQi(Fraction(rng.randint(-span * den, span * den), den),
                      Fraction(rng.randint(-span * den, span * den), den)))
    return SClassMap(TruncatedSeries.from_coeffs(cs, valuation=1), "test-prefix")


@pytest.fixture
def rng():
    import random

    return random.Random(1234)


def coefficients_agree(x: TruncatedSeries, y: TruncatedSeries) -> bool:
    """Equal on every exponent both series know."""
    lo = min(x.valuation, y.valuation)
    hi = min(x.precision, y.precision)
    return all(x.coeff(k) == y.coeff(k) for k in range(lo, hi))


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
