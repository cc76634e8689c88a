import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from memkick.special import (
    GammaPoleError,
    MittagLefflerError,
    MittagLefflerRangeError,
    MlParams,
    gamma_fn,
    kernel_table,
    kernel_v,
    mittag_leffler,
    power_table,
)

mpmath.mp.dps = 40


def ml_oracle(alpha, beta, z):
    """High-precision series, independent of the implementation under test."""
    return float(mpmath.nsum(lambda k: mpmath.mpf(z) ** k / mpmath.gamma(alpha * k + beta), [0, mpmath.inf]))


# --- gamma -------------------------------------------------------------------------------


@pytest.mark.parametrize("x, expected", [(1.0, 1.0), (5.0, 24.0), (0.5, 1.7724538509055160)])
def test_gamma_examples(x, expected):
    assert gamma_fn(x) == pytest.approx(expected, rel=1e-12)


def test_gamma_half_is_sqrt_pi():
    assert gamma_fn(0.5) == pytest.approx(float(mpmath.sqrt(mpmath.pi)), rel=1e-15)


@given(st.floats(0.05, 50.0))
def test_gamma_accuracy_on_desk_range(x):
    assert gamma_fn(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-12)


@pytest.mark.parametrize("x", [0, -1, -2, -17])
def test_gamma_poles(x):
    with pytest.raises(GammaPoleError):
        gamma_fn(x)


def test_gamma_overflow():
    with pytest.raises(OverflowError):
        gamma_fn(200.0)


def test_gamma_negative_non_integer_uses_reflection():
    assert gamma_fn(-0.5) == pytest.approx(-2 * math.sqrt(math.pi), rel=1e-14)


# --- Mittag-Leffler ----------------------------------------------------------------------


def test_ml_exponential_anchor():
    assert mittag_leffler(MlParams(1, 1), 1.0) == pytest.approx(math.e, rel=1e-14)


def test_ml_zero_argument_is_reciprocal_gamma():
    assert mittag_leffler(MlParams(0.7, 1.3), 0.0) == pytest.approx(1.1142425085473018, rel=1e-15)


def test_ml_cosh():
    assert mittag_leffler(MlParams(2, 1), 1.0) == pytest.approx(1.5430806348152437, rel=1e-14)


def test_ml_beta_two():
    assert mittag_leffler(MlParams(1, 2), 1.0) == pytest.approx(1.7182818284590452, rel=1e-14)


def test_ml_half_order_erf_identity():
    expected = math.e * (1 + math.erf(1.0))
    assert mittag_leffler(MlParams(0.5, 1), 1.0) == pytest.approx(expected, rel=1e-13)
    assert expected == pytest.approx(5.008980080762283, rel=1e-15)


@given(st.floats(-5, 5))
def test_ml_matches_exp(x):
    assert mittag_leffler(MlParams(1, 1), x) == pytest.approx(math.exp(x), rel=1e-10)


@given(
    st.sampled_from([0.3, 0.5, 0.9, 1.4, 2.0]),
    st.floats(0.2, 4.0),
    st.floats(-2.0, 3.0),
)
def test_ml_recurrence(alpha, beta, z):
    try:
        lhs = mittag_leffler(MlParams(alpha, beta), z)
        inner = mittag_leffler(MlParams(alpha, alpha + beta), z)
    except MittagLefflerRangeError:
        assume(False)
    rhs = 1 / gamma_fn(beta) + z * inner
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-300)


@pytest.mark.parametrize("alpha, beta, z", [(0.5, 1.0, 3.0), (1.7, 0.6, -4.0), (0.25, 2.0, 1.2), (1.0, 1.0, 25.0)])
def test_ml_against_mpmath(alpha, beta, z):
    assert mittag_leffler(MlParams(alpha, beta), z) == pytest.approx(ml_oracle(alpha, beta, z), rel=1e-12)


def test_ml_range_guard():
    with pytest.raises(MittagLefflerRangeError):
        mittag_leffler(MlParams(1, 1), 31.0)
    with pytest.raises(MittagLefflerRangeError):
        mittag_leffler(MlParams(0.05, 1), 0.5)


def test_ml_cancellation_guard_refuses_inaccurate_result():
    # E_{1,1}(-30) = e^-30 is far below the rounding noise of its alternating series
    with pytest.raises(MittagLefflerRangeError):
        mittag_leffler(MlParams(1, 1), -30.0)


def test_ml_nonconvergence():
    with pytest.raises(MittagLefflerError):
        mittag_leffler(MlParams(1, 1, max_terms=3), 10.0)


@pytest.mark.parametrize(
    "kwargs",
    [dict(alpha=0, beta=1), dict(alpha=1, beta=-1), dict(alpha=1, beta=1, tol=0), dict(alpha=1, beta=1, max_terms=0)],
)
def test_ml_params_validation(kwargs):
    with pytest.raises(ValueError):
        MlParams(**kwargs)


# --- kernel ----------------------------------------------------------------------------


@pytest.mark.parametrize(
    "alpha, z, expected",
    [
        (1.0, 7, 0.0),
        (0.5, 1, -0.29289321881345248),
        (0.5, 2, -0.12975651199692176),
        (0.5, 3, -0.077350269189625765),
        (1.5, 1, 0.41421356237309505),
        (1.5, 2, 0.31783724519578224),
    ],
)
def test_kernel_examples(alpha, z, expected):
    assert kernel_v(alpha, z) == pytest.approx(expected, rel=1e-14, abs=0)


def test_kernel_examples_from_oracle():
    for alpha, z in [(0.5, 1), (0.5, 2), (0.5, 3), (1.5, 2)]:
        exact = mpmath.mpf(z + 1) ** (alpha - 1) - mpmath.mpf(z) ** (alpha - 1)
        assert kernel_v(alpha, z) == pytest.approx(float(exact), rel=1e-14)


def test_kernel_table_examples():
    assert np.array_equal(kernel_table(1.0, 10).values, np.zeros(10))
    t = kernel_table(0.5, 3)
    assert t.values == pytest.approx([-0.29289321881345248, -0.12975651199692176, -0.077350269189625765], rel=1e-14)
    t = kernel_table(1.5, 2)
    assert t.values == pytest.approx([2**0.5 - 1, 3**0.5 - 2**0.5], rel=1e-15)
    assert t[1] == t.values[0] and t.n_max == 2


def test_kernel_table_is_read_only():
    t = kernel_table(0.5, 4)
    with pytest.raises(ValueError):
        t.values[0] = 1.0
    with pytest.raises(IndexError):
        t[0]


@given(st.floats(0.01, 3.0), st.integers(1, 300))
def test_kernel_table_bit_identical_to_kernel_v(alpha, n):
    t = kernel_table(alpha, n)
    assert all(t[z] == kernel_v(alpha, z) for z in range(1, n + 1))


@given(st.integers(1, 10_000))
def test_v1_is_bitwise_zero(z):
    v = kernel_v(1.0, z)
    assert v == 0.0 and math.copysign(1.0, v) == 1.0


@given(st.floats(0.05, 2.5), st.integers(1, 5000))
def test_telescoping(alpha, m):
    assume(abs(alpha - 1.0) > 1e-9)
    partial = float(np.sum(kernel_table(alpha, m).values))
    exact = (m + 1) ** (alpha - 1) - 1
    assert partial == pytest.approx(exact, rel=1e-12)


@given(st.floats(0.01, 0.99), st.integers(1, 2000))
def test_fading_memory(alpha, z):
    a, b = kernel_v(alpha, z), kernel_v(alpha, z + 1)
    assert a < 0 and b < 0
    assert abs(b) < abs(a)


def test_kernel_rejects_bad_arguments():
    with pytest.raises(ValueError):
        kernel_v(0.5, 0)
    with pytest.raises(ValueError):
        kernel_v(-1.0, 3)
    with pytest.raises(ValueError):
        kernel_table(0.5, 0)


def test_power_table_integer_exponent_exact():
    t = power_table(2.0, 5)
    assert list(t) == [0.0, 1.0, 4.0, 9.0, 16.0, 25.0]
