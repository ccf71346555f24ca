import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from ncgame.prices import MarginalPrice, Polynomial, PowerLog, PriceFunction, as_fraction, marginal_price

coeff = st.floats(0, 5, allow_nan=False)
polys = st.lists(coeff, min_size=1, max_size=5).map(Polynomial)
powerlogs = st.builds(
    PowerLog,
    st.floats(0.1, 5),
    st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(5, 2), Fraction(4)]),
    st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)]),
    st.floats(0, 3),
)
prices = st.one_of(polys, powerlogs)
points = st.floats(0, 1e3, allow_nan=False)


def test_polynomial_evaluation_examples():
    assert float(Polynomial([1, 0, 0, 0, 0.15])(2.0)) == pytest.approx(3.4)
    assert float(Polynomial([1, 2])(6)) == 13


def test_polynomial_rejects_negative_coefficients():
    with pytest.raises(ValueError):
        Polynomial([1, -0.5])


def test_polynomial_trailing_zeros_and_degree():
    p = Polynomial([2, 0, 3, 0, 0])
    assert p.coeffs == (2.0, 0.0, 3.0)
    assert p.degree == 2 and p.index == 2
    assert Polynomial([]).is_zero and Polynomial([0, 0]).index is None


def test_marginal_of_linear_is_double():
    assert marginal_price(Polynomial([0, 1])) == Polynomial([0, 2])


def test_marginal_coefficient_rule_bpr():
    assert Polynomial([1, 0, 0, 0, 0.15]).marginal() == Polynomial([1, 0, 0, 0, 0.75])


def test_powerlog_marginal_matches_hand_derivative_and_finite_difference():
    tau = PowerLog(1.0, 2, 1)
    c = tau.marginal()
    x = 2.0
    L = math.log(math.e + x)
    dtau = 2 * x * L + x**2 / (math.e + x)
    assert c(x) == pytest.approx(x * dtau + x**2 * L, rel=1e-12)
    h = 1e-6
    fd = (tau(x + h) - tau(x - h)) / (2 * h)
    assert c(x) == pytest.approx(x * fd + tau(x), rel=1e-6)


def test_powerlog_validation():
    with pytest.raises(ValueError):
        PowerLog(0, 1)
    with pytest.raises(ValueError):
        PowerLog(1, 0, -1)
    with pytest.raises(ValueError):
        PowerLog(1, Fraction(1, 10), -5)
    with pytest.raises(ValueError):
        PowerLog(1, 1, 0, offset=-1)
    PowerLog(1, 2, -1)


def test_powerlog_is_never_zero_and_keys():
    p = PowerLog(2.0, Fraction(5, 2), 1, offset=0.5)
    assert not p.is_zero
    assert p.growth() == (Fraction(5, 2), Fraction(1))
    assert PowerLog(2.0, 0, 0, offset=1.0).scale == 3.0


def test_as_fraction():
    assert as_fraction("5/2") == Fraction(5, 2)
    assert as_fraction(0.5) == Fraction(1, 2)
    assert as_fraction(2) == Fraction(2)


@pytest.mark.parametrize("price", [
    Polynomial([1, 2, 0, 3]),
    PowerLog(1.5, Fraction(5, 2), 1),
    PowerLog(0.5, 2, Fraction(1, 2), offset=2.0),
    PowerLog(1.0, 3, -1),
])
def test_serialization_round_trip(price):
    assert PriceFunction.from_dict(price.to_dict()) == price


def test_marginal_price_not_serializable():
    with pytest.raises(TypeError):
        MarginalPrice(PowerLog(1, 2)).to_dict()


def test_unknown_kind():
    with pytest.raises(ValueError):
        PriceFunction.from_dict({"kind": "spline"})


@given(prices, points, points)
def test_monotone(price, x, y):
    lo, hi = sorted((x, y))
    assert float(price(lo)) <= float(price(hi)) * (1 + 1e-12) + 1e-12


@given(prices, points)
def test_non_negative_and_finite(price, x):
    v = float(price(x))
    assert math.isfinite(v) and v >= 0


@given(prices, points)
def test_marginal_dominates(price, x):
    assert float(price.marginal()(x)) >= float(price(x)) * (1 - 1e-12)


@given(prices, st.floats(0.01, 50))
def test_antiderivative_matches_quadrature(price, x):
    ref, _ = integrate.quad(lambda u: float(price(u)), 0, x, epsabs=1e-12, epsrel=1e-12)
    assert float(price.antiderivative(x)) == pytest.approx(ref, rel=1e-8, abs=1e-10)


@given(prices, st.floats(0.05, 100))
def test_derivative_matches_central_difference(price, x):
    h = 1e-6 * max(x, 1.0)
    fd = (float(price(x + h)) - float(price(x - h))) / (2 * h)
    assert float(price.derivative(x)) == pytest.approx(fd, rel=1e-5, abs=1e-6)


@given(powerlogs, st.floats(0.0, 100))
def test_marginal_antiderivative_is_total_cost(price, x):
    c = price.marginal()
    assert float(c.antiderivative(x)) == pytest.approx(x * float(price(x)), rel=1e-12, abs=1e-12)


def test_vectorized_evaluation():
    xs = np.linspace(0, 3, 7)
    for p in (Polynomial([1, 1]), PowerLog(1, 2, 1)):
        assert np.allclose(p(xs), [float(p(x)) for x in xs])
