"""Inverse-power expansion at large argument."""
import pytest

from conftest import mp_F
from pfqbounds.asymptotic import check_nondegenerate, eval_asymptotic_auto
from pfqbounds.errors import DegenerateParameters
from pfqbounds.params import HypSpec


def test_matches_reference_at_large_argument():
    cases = [
        (0.7, (1.1,), (2.3,)),
        (2.2, (0.8, 1.25), (1.4, 2.0)),  # decay set by min(a), not sigma
        (0.45, (0.9, 1.3, 1.7), (1.5, 2.1, 2.6)),
    ]
    for sigma, a, b in cases:
        spec = HypSpec(sigma, a, b)
        for x in (40.0, 300.0):
            r = eval_asymptotic_auto(spec, x)
            ref = mp_F(sigma, a, b, x)
            assert r.value == pytest.approx(ref, rel=1e-10)
            assert abs(r.value - ref) \
                <= 10.0 * r.abs_err_estimate + 1e-14 * abs(ref)


def test_integer_parameter_gaps_are_rejected():
    with pytest.raises(DegenerateParameters):
        check_nondegenerate(HypSpec(1.0, (0.7, 1.7), (1.3, 2.4)))
    with pytest.raises(DegenerateParameters):
        check_nondegenerate(HypSpec(1.7, (0.7, 1.1), (1.3, 2.4)))
    check_nondegenerate(HypSpec(1.65, (0.7, 1.12), (1.3, 2.4)))
