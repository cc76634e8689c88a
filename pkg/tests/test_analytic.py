import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from memkick.analytic import NaturalGrowthProblem, natural_growth, natural_growth_solution, sample_natural_growth
from memkick.econ import GrowthParams, ParameterError


def test_initial_value_at_zero():
    prob = NaturalGrowthProblem(GrowthParams(0.5, 1, 1, 1.5), 2.0, (1.7, 3.0))
    assert natural_growth_solution(prob, 0.0) == 1.7


def test_alpha_one_is_exponential_growth():
    prob = NaturalGrowthProblem(GrowthParams(0.5, 1, 1, 1.0), 1.0, (1.0,))
    assert prob.rate == 0.5
    assert natural_growth_solution(prob, 2.0) == pytest.approx(math.e, rel=1e-14)


def test_half_order_matches_series_oracle():
    mpmath.mp.dps = 40
    oracle = mpmath.nsum(lambda k: 1 / mpmath.gamma(0.5 * k + 1), [0, mpmath.inf])
    value = natural_growth(0.5, 1.0, [1.0], 1.0)
    assert value == pytest.approx(float(oracle), rel=1e-13)
    assert value == pytest.approx(5.00898, abs=1e-4)


def test_second_order_uses_both_derivatives():
    # alpha = 2, rate = 1: Y = Y0 cosh t + Y0' sinh t
    y = natural_growth(2.0, 1.0, [2.0, 0.5], 1.3)
    assert y == pytest.approx(2.0 * math.cosh(1.3) + 0.5 * math.sinh(1.3), rel=1e-13)


@given(st.floats(0, 10))
def test_alpha_one_closed_form(t):
    assert natural_growth(1.0, 0.7, [1.5], t) == pytest.approx(1.5 * math.exp(0.7 * t), rel=1e-10)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8, 1.0, 1.5])
def test_monotone_in_time(alpha):
    n = 1 if alpha <= 1 else 2
    ts, ys = sample_natural_growth(alpha, 0.8, [1.0] + [0.2] * (n - 1), 6.0, 120)
    assert np.all(np.diff(ys) > 0)
    assert ts[0] == 0.0 and ts[-1] == 6.0


def test_validation():
    with pytest.raises(ParameterError):
        NaturalGrowthProblem(GrowthParams(0.5, 1, 1, 1.5), 1.0, (1.0,))
    with pytest.raises(ParameterError):
        NaturalGrowthProblem(GrowthParams(0.5, 1, 1, 0.5), 0.0, (1.0,))
    with pytest.raises(ParameterError):
        natural_growth(0.5, 1.0, [1.0], -1.0)
    with pytest.raises(ParameterError):
        sample_natural_growth(0.5, 1.0, [1.0], 1.0, 1)
