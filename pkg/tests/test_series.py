"""Power-series evaluation against a multiprecision reference."""
import pytest

from conftest import mp_F
from pfqbounds.errors import NotConverged
from pfqbounds.params import HypSpec
from pfqbounds.series import eval_series, eval_series_accelerated

CASES = [
    (1.0, (2.0,), (3.0,), -0.5),
    (1.7, (0.8, 1.2), (1.4, 2.0), 0.6),
    (-0.7, (0.8, 1.2), (1.4, 2.0), 0.85),
    (2.3, (0.7, 1.1, 1.6), (1.3, 1.9, 2.4), -0.6),
    (0.4, (2.5,), (2.6,), 0.95),
]


def test_matches_reference_inside_disc():
    for sigma, a, b, x in CASES:
        r = eval_series(HypSpec(sigma, a, b), x)
        ref = mp_F(sigma, a, b, x)
        assert r.value == pytest.approx(ref, rel=1e-12)
        assert abs(r.value - ref) \
            <= 10.0 * r.abs_err_estimate + 1e-15 * abs(ref)


def test_polynomial_cases_terminate():
    r = eval_series(HypSpec(-3.0, (0.8,), (1.9,)), 7.0)
    assert r.value == pytest.approx(mp_F(-3.0, (0.8,), (1.9,), 7.0),
                                    rel=1e-14)
    assert r.effort <= 10


def test_sigma_zero_is_identically_one():
    assert eval_series(HypSpec(0.0, (0.8,), (1.9,)), 0.7).value == 1.0


def test_zero_argument_is_one():
    assert eval_series(HypSpec(1.3, (0.8,), (1.9,)), 0.0).value == 1.0


def test_divergence_raises():
    with pytest.raises(NotConverged):
        eval_series(HypSpec(0.9, (1.1,), (2.0,)), 1.2)


def test_acceleration_reaches_past_the_disc():
    spec = HypSpec(0.9, (1.1,), (2.0,))
    for x in (0.95, 1.3, 2.5):
        r = eval_series_accelerated(spec, x)
        ref = mp_F(0.9, (1.1,), (2.0,), x)
        assert abs(r.value - ref) <= 10.0 * r.abs_err_estimate
        assert r.abs_err_estimate <= 1e-7 * abs(r.value)


def test_acceleration_depth_is_roundoff_limited_past_one():
    # raw terms grow like x^k beyond the disc, so piling on stages must
    # not degrade the result
    spec = HypSpec(0.9, (1.1,), (2.0,))
    ref = mp_F(0.9, (1.1,), (2.0,), 2.5)
    auto = eval_series_accelerated(spec, 2.5)
    deep = eval_series_accelerated(spec, 2.5, n=80)
    assert abs(auto.value - ref) <= 10.0 * auto.abs_err_estimate
    assert abs(deep.value - ref) <= 10.0 * deep.abs_err_estimate
    assert abs(auto.value - ref) < abs(deep.value - ref)


def test_acceleration_covers_q4():
    # no closed-form density at q = 4; the accelerated series is the
    # only route between the disc and the asymptotic regime
    spec = HypSpec(1.2, (0.5, 0.9, 1.3, 1.7), (1.1, 1.5, 1.9, 2.3))
    r = eval_series_accelerated(spec, 1.4)
    ref = mp_F(1.2, spec.a, spec.b, 1.4)
    assert abs(r.value - ref) <= 10.0 * r.abs_err_estimate
    assert r.abs_err_estimate <= 1e-8 * abs(r.value)
