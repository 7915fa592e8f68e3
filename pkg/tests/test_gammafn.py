"""Signed log-gamma ratios, pochhammer, and pole classification."""
import math

import mpmath as mp
import pytest
from hypothesis import given, strategies as st

from pfqbounds.errors import PoleError, ZeroError
from pfqbounds.gammafn import (gamma_ratio_lists, gamma_ratio_log,
                               is_nonpositive_integer, lgamma_signed,
                               pochhammer)


def test_positive_arguments_match_stdlib():
    for x in (0.3, 1.0, 2.5, 8.0, 41.7):
        lo, sg = lgamma_signed(x)
        assert sg == 1.0
        assert lo == pytest.approx(math.lgamma(x), rel=1e-15, abs=1e-15)


def test_negative_arguments_carry_gamma_sign():
    lo, sg = lgamma_signed(-0.5)
    assert sg == -1.0
    assert math.exp(lo) == pytest.approx(2.0 * math.sqrt(math.pi),
                                         rel=1e-14)
    lo, sg = lgamma_signed(-1.5)
    assert sg == 1.0
    assert math.exp(lo) == pytest.approx(4.0 * math.sqrt(math.pi) / 3.0,
                                         rel=1e-14)


def test_pole_arguments_collapse_reciprocals():
    for x in (0.0, -1.0, -7.0):
        lo, sg = lgamma_signed(x)
        assert lo == math.inf and sg == 1.0
        assert math.exp(-lo) == 0.0


def test_nonpositive_integer_detection():
    assert is_nonpositive_integer(0.0)
    assert is_nonpositive_integer(-3.0)
    assert is_nonpositive_integer(-3.0 + 1e-13)
    assert not is_nonpositive_integer(0.5)
    assert not is_nonpositive_integer(-2.5)
    assert not is_nonpositive_integer(3.0)


@given(st.floats(0.1, 5.0), st.integers(0, 8), st.integers(0, 8))
def test_pochhammer_splits_multiplicatively(a, n, m):
    whole = pochhammer(a, n + m)
    split = pochhammer(a, n) * pochhammer(a + n, m)
    assert whole == pytest.approx(split, rel=1e-12, abs=1e-300)


def test_pochhammer_terminates_at_negative_integers():
    assert pochhammer(-3.0, 5) == 0.0
    assert pochhammer(-3.0, 3) == -6.0
    assert pochhammer(2.0, 0) == 1.0


@given(st.floats(0.1, 40.0))
def test_ratio_recurrence(x):
    assert gamma_ratio_lists([x + 1.0], [x]) == pytest.approx(x, rel=1e-12)


def test_ratio_matches_direct_products():
    direct = math.gamma(2.3) * math.gamma(0.7) \
        / (math.gamma(1.1) * math.gamma(3.4))
    assert gamma_ratio_lists([2.3, 0.7], [1.1, 3.4]) \
        == pytest.approx(direct, rel=1e-13)


def test_ratio_survives_overflowing_factors():
    # each factor overflows a double on its own
    mp.mp.dps = 30
    ref = float(mp.gamma(300.2) / mp.gamma(300.0))
    assert gamma_ratio_lists([300.2], [300.0]) == pytest.approx(ref,
                                                                rel=1e-13)


def test_numerator_pole_raises():
    with pytest.raises(PoleError):
        gamma_ratio_lists([-2.0], [1.2])


def test_denominator_pole_raises():
    with pytest.raises(ZeroError):
        gamma_ratio_lists([1.2], [-2.0])


def test_log_form_reports_poles_without_raising():
    lo, _ = gamma_ratio_log([1.5], [-3.0])
    assert lo == -math.inf
    lo, _ = gamma_ratio_log([-3.0], [1.5])
    assert lo == math.inf
    lo, _ = gamma_ratio_log([-1.0], [-2.0])
    assert math.isnan(lo)
