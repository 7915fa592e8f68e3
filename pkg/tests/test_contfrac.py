"""Continued-fraction convergents: exact rationals, bracketing, ratios."""
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import mp_2f1
from pfqbounds.contfrac import (convergent, convergent_bounds,
                                gauss_cf_ratio, pade_coeff_check)


def test_low_order_convergents_are_exact_rationals():
    one = Fraction(1)
    assert convergent(one, Fraction(2), Fraction(3), one, 2) \
        == Fraction(3, 5)
    assert convergent(one, Fraction(2), Fraction(3), one, 3) \
        == Fraction(13, 21)


def test_bounds_straddle_and_tighten():
    true = 2.0 * (1.0 - math.log(2.0))
    prev_width = math.inf
    for m in range(1, 7):
        bp = convergent_bounds(2.0, 3.0, 1.0, m)
        assert bp.valid and bp.lower_valid and bp.upper_valid
        assert bp.lower <= true <= bp.upper
        width = bp.upper - bp.lower
        assert width < prev_width
        prev_width = width


def test_full_ratio_matches_reference():
    for b, c, x in ((2.0, 3.0, 1.0), (0.7, 1.9, 0.4), (1.4, 2.9, 30.0)):
        r = gauss_cf_ratio(1.0, b, c, x)
        assert r.value == pytest.approx(mp_2f1(1.0, b, c, -x), rel=1e-13)


def test_contiguous_ratio_semantics():
    a, b, c, x = 2.0, 1.2, 2.7, 0.8
    r = gauss_cf_ratio(a, b, c, x)
    ref = mp_2f1(a, b, c, -x) / mp_2f1(a - 1.0, b, c - 1.0, -x)
    assert r.value == pytest.approx(ref, rel=1e-12)


def test_taylor_coefficients_agree_exactly():
    for b, c, order in ((2, 3, 6),
                        (Fraction(3, 2), Fraction(5, 2), 5),
                        (Fraction(7, 10), Fraction(19, 10), 4)):
        ok, conv, ser = pade_coeff_check(b, c, order)
        assert ok
        assert conv == ser


def test_out_of_domain_pairs_are_flagged():
    assert not convergent_bounds(2.0, 3.0, -0.5, 2).valid
    assert not convergent_bounds(3.0, 2.0, 1.0, 2).valid


@given(st.floats(0.3, 2.0), st.floats(0.1, 2.0),
       st.floats(0.05, 50.0), st.integers(1, 8))
def test_bounds_stay_ordered(b, gap, x, m):
    c = b + gap + 1.0
    bp = convergent_bounds(b, c, x, m)
    assert bp.valid
    assert 0.0 < bp.lower <= bp.upper <= 1.0 + 1e-15
