"""Gauss 2F1 evaluation paths against a multiprecision reference."""
import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import mp_2f1
from pfqbounds.gammafn import gamma_ratio_lists
from pfqbounds.gauss2f1 import hyp2f1, hyp2f1_from_u, series_2f1


def test_series_matches_reference_inside_disc():
    for a, b, c, z in ((0.5, 1.2, 2.0, 0.6), (1.3, 0.4, 2.6, -0.7),
                       (2.2, 0.9, 1.1, 0.35), (0.7, 0.7, 3.0, -0.2)):
        assert series_2f1(a, b, c, z) \
            == pytest.approx(mp_2f1(a, b, c, z), rel=1e-13)


def test_series_vectorizes_over_z():
    z = np.array([0.5, -0.3, 0.0])
    vals = series_2f1(0.7, 1.4, 2.2, z)
    for zi, vi in zip(z, vals):
        assert vi == pytest.approx(mp_2f1(0.7, 1.4, 2.2, float(zi)),
                                   rel=1e-13)


def test_large_negative_arguments():
    for z in (-5.0, -49.0, -1.0001):
        assert hyp2f1(1.3, 0.4, 2.6, z) \
            == pytest.approx(mp_2f1(1.3, 0.4, 2.6, z), rel=1e-12)


def test_argument_near_one_from_u():
    a, b, c = 0.5, 0.9, 2.2
    for u in (1e-12, 1e-6, 0.02, 0.4, 0.97):
        vals, rel = hyp2f1_from_u(a, b, c, np.array([u]))
        ref = mp_2f1(a, b, c, 1.0 - u)
        assert vals[0] == pytest.approx(ref, rel=max(1e-11, 20.0 * rel))


def test_unit_argument_limit():
    # c - a - b > 0, so the value tends to a finite gamma ratio
    a, b, c = 0.5, 0.9, 2.2
    lim = gamma_ratio_lists([c, c - a - b], [c - a, c - b])
    vals, _ = hyp2f1_from_u(a, b, c, np.array([1e-14]))
    assert vals[0] == pytest.approx(lim, rel=1e-10)


@given(st.floats(0.1, 3.0), st.floats(0.2, 3.0), st.floats(-0.85, 0.85))
def test_equal_upper_lower_collapse(a, b, z):
    assert series_2f1(a, b, b, z) \
        == pytest.approx((1.0 - z) ** (-a), rel=1e-11)


def test_zero_argument_is_one():
    assert series_2f1(0.7, 1.1, 1.9, 0.0) == 1.0
