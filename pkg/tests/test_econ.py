import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from memkick.econ import (
    BurstOnly,
    ConstantC,
    ConstantG,
    CustomPrice,
    FractionalOrder,
    GrowthParams,
    LinearPrice,
    MittagLefflerC,
    Mixed,
    ParameterError,
    PowerC,
    PowerG,
    burst_ratio,
    normalize_memory,
    normalize_standard,
    r_inverse,
    r_slope,
    r_transform,
)

G_CASES = [ConstantG(0.7), PowerG(1.0, 1.0), PowerG(2.5, -1.0), PowerG(0.3, 2.0), PowerG(-1.2, -0.5)]


@pytest.mark.parametrize("alpha, n", [(0.5, 1), (1.0, 1), (1.5, 2), (2.0, 2), (2.3, 3), (0.01, 1)])
def test_bracket(alpha, n):
    order = FractionalOrder(alpha)
    assert order.bracket_n == n
    assert n - 1 < alpha <= n


@pytest.mark.parametrize(
    "kwargs, key",
    [
        (dict(m=0.0, v=1, T=1, alpha=0.5), "m"),
        (dict(m=1.0, v=1, T=1, alpha=0.5), "m"),
        (dict(m=0.5, v=0, T=1, alpha=0.5), "v"),
        (dict(m=0.5, v=1, T=-1, alpha=0.5), "T"),
        (dict(m=0.5, v=1, T=1, alpha=0.0), "alpha"),
    ],
)
def test_growth_params_validation_names_key(kwargs, key):
    with pytest.raises(ParameterError) as info:
        GrowthParams(**kwargs)
    assert info.value.key == key
    assert str(info.value).startswith(f"{key}: must satisfy")


def test_growth_params_coefficients():
    g = GrowthParams(0.5, 1.0, 1.0, 0.5)
    assert g.rate == 0.5
    assert g.memory_coefficient() == pytest.approx(0.5 / math.sqrt(math.pi), rel=1e-15)


def test_linear_price_is_exact():
    f = LinearPrice(3.0, 0.25)
    assert f(2.0) == 3.0 * 2.0 - 0.25


def test_custom_price():
    f = CustomPrice(lambda y: y**2, "square")
    assert f(3.0) == 9.0
    assert BurstOnly(f).F is f


def test_mixed_defaults_q():
    m = Mixed(0.3, ConstantG(1.0), LinearPrice(1, 0))
    assert m.q == pytest.approx(0.7, abs=1e-15)


def test_mixed_enforces_p_plus_q():
    with pytest.raises(ParameterError) as info:
        Mixed(0.3, ConstantG(1.0), LinearPrice(1, 0), q=0.6)
    assert info.value.key == "q"
    with pytest.raises(ParameterError):
        Mixed(1.2, ConstantG(1.0), LinearPrice(1, 0))


@given(st.floats(0.0, 1.0))
def test_mixed_p_plus_q_is_one(p):
    m = Mixed(p, ConstantG(1.0), LinearPrice(1, 0))
    assert abs(m.p + m.q - 1.0) <= 1e-12


def test_g_case_constants():
    assert ConstantG(0.4).C == 0.4
    assert PowerG(2.0, 3.0).C == 2.0
    with pytest.raises(ParameterError):
        PowerG(1.0, 0.0)
    with pytest.raises(ParameterError):
        PowerG(0.0, 1.0)
    with pytest.raises(ParameterError):
        ConstantG(0.0)


def test_forcing_validation():
    assert PowerC(2.0, 0.5)(4.0) == 4.0
    assert ConstantC(3.0)(10.0) == 3.0
    with pytest.raises(ParameterError):
        PowerC(1.0, -1.0)
    with pytest.raises(ParameterError):
        MittagLefflerC(1.0, 1.0, 0.0)


def test_mittag_leffler_forcing_zero_rate():
    c = MittagLefflerC(2.0, 1.5, 0.7, 0.0)
    assert c(4.0) == pytest.approx(2.0 * 4.0**0.5 / math.gamma(1.5), rel=1e-14)


# --- normalizations ----------------------------------------------------------------------


def test_normalize_standard_examples():
    n = normalize_standard(GrowthParams(0.5, 1, 1, 1.0), LinearPrice(1, 0))
    assert (n.lam, n.scale) == (1.0, 0.5)
    n = normalize_standard(GrowthParams(0.5, 1, 2, 1.0), LinearPrice(2, 3))
    assert (n.lam, n.scale) == (4.0, 0.5)
    n = normalize_standard(GrowthParams(0.2, 2, 1, 1.0), LinearPrice(1, 1))
    assert n.lam == pytest.approx(1.1, rel=1e-15)
    assert n.scale == pytest.approx(0.090909090909090909, rel=1e-15)


def test_normalize_standard_zero_denominator():
    # v + m b T = 0 requires b = -v / (m T)
    with pytest.raises(ZeroDivisionError):
        normalize_standard(GrowthParams(0.5, 1, 1, 1.0), LinearPrice(1, -2))


def test_normalize_needs_linear_price_with_a():
    with pytest.raises(ParameterError):
        normalize_standard(GrowthParams(0.5, 1, 1, 1.0), LinearPrice(0, 1))
    with pytest.raises(TypeError):
        normalize_standard(GrowthParams(0.5, 1, 1, 1.0), CustomPrice(abs))


def test_normalize_memory_half_order():
    n = normalize_memory(GrowthParams(0.5, 1, 1, 0.5), LinearPrice(1, 1))
    assert n.lam == pytest.approx(1.2820947917738781, rel=1e-15)
    assert n.mu == pytest.approx(0.28209479177387814, rel=1e-15)
    assert n.eta == pytest.approx(4.5449077018110321, rel=1e-14)
    assert n.scale == pytest.approx(0.22002647041688548, rel=1e-14)
    assert n.eta == pytest.approx(n.lam / n.mu, rel=1e-14)


def test_normalize_memory_alpha_one_equals_standard():
    g, f = GrowthParams(0.5, 1, 2, 1.0), LinearPrice(2, 3)
    a, b = normalize_memory(g, f), normalize_standard(g, f)
    assert a.lam == pytest.approx(b.lam, rel=1e-14)
    assert a.scale == pytest.approx(b.scale, rel=1e-14)
    assert a.mu == pytest.approx(b.mu, rel=1e-14)


def test_normalize_memory_rejects_b_zero_and_large_alpha():
    with pytest.raises(ParameterError) as info:
        normalize_memory(GrowthParams(0.5, 1, 1, 0.5), LinearPrice(1, 0))
    assert info.value.key == "b"
    with pytest.raises(ParameterError):
        normalize_memory(GrowthParams(0.5, 1, 1, 1.5), LinearPrice(1, 1))


@given(
    st.floats(0.01, 0.99),
    st.floats(0.1, 10),
    st.floats(0.1, 5),
    st.floats(0.05, 1.0),
    st.floats(0.1, 5).filter(lambda x: x != 0),
    st.floats(0.01, 5),
)
def test_normalization_identities(m, v, T, alpha, a, b):
    n = normalize_memory(GrowthParams(m, v, T, alpha), LinearPrice(a, b))
    assert abs((n.lam - n.mu) - 1.0) <= 1e-14
    assert n.eta == pytest.approx(n.lam / n.mu, rel=1e-14)


# --- R transform -------------------------------------------------------------------------


def test_r_transform_examples():
    assert r_transform(ConstantG(1.0), 1.0) == 0.0
    assert r_transform(PowerG(1.0, -1.0), 3.0) == 3.0
    assert r_transform(PowerG(1.0, 1.0), 2.0) == -0.5
    assert r_inverse(PowerG(1.0, 1.0), -0.5) == 2.0


@pytest.mark.parametrize("g", G_CASES)
@given(y=st.floats(1e-6, 1e6))
def test_r_round_trip(g, y):
    assert r_inverse(g, r_transform(g, y)) == pytest.approx(y, rel=1e-12)


@pytest.mark.parametrize("g", G_CASES)
@given(y=st.floats(1e-3, 1e3))
def test_r_slope_matches_kernel_of_transform(g, y):
    # dR/dY = 1/(Y * G(Y)/C)
    assert r_slope(g, y) == pytest.approx(g.C / (y * g(y)), rel=1e-12)


def test_r_domain_errors():
    with pytest.raises(ParameterError):
        r_transform(ConstantG(1.0), 0.0)
    with pytest.raises(ParameterError) as info:
        r_inverse(PowerG(1.0, 1.0), 0.5)
    assert info.value.key == "r"


def test_burst_ratio():
    f = LinearPrice(2.0, 1.0)
    assert burst_ratio(ConstantG(5.0), f, 3.0) == 5.0
    assert burst_ratio(PowerG(5.0, 2.0), f, 2.0) == pytest.approx(3.0 / 4.0)
