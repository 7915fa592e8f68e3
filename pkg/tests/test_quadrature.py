"""Double-exponential nodes and the weighted Beta-kernel integrator."""
import math

import numpy as np
import pytest

from pfqbounds.quadrature import de_nodes, integrate_weighted, weighted_sum


def _beta(alpha, beta):
    return math.gamma(alpha) * math.gamma(beta) / math.gamma(alpha + beta)


def test_unit_core_reproduces_beta_values():
    for alpha, beta in ((1.0, 1.0), (0.4, 2.2), (3.0, 0.7), (2.5, 2.5)):
        val, err, _ = integrate_weighted(lambda n: np.ones_like(n.s),
                                         alpha, beta)
        ref = _beta(alpha, beta)
        assert val == pytest.approx(ref, rel=1e-13)
        assert abs(val - ref) <= 10.0 * err + 1e-14 * ref


def test_rational_core_value():
    # int_0^1 s^(0.3-1) (1-s)^(1.7-1) / (1 + 2.5 s) ds, reference from
    # a 40-digit adaptive quadrature
    val, _, _ = integrate_weighted(lambda n: 1.0 / (1.0 + 2.5 * n.s),
                                   0.3, 1.7)
    assert val == pytest.approx(2.1800710008606106, rel=1e-12)


def test_levels_agree_on_smooth_cores():
    v4 = weighted_sum(np.ones_like(de_nodes(4).s), 1.3, 2.1, de_nodes(4))
    v6 = weighted_sum(np.ones_like(de_nodes(6).s), 1.3, 2.1, de_nodes(6))
    assert v4 == pytest.approx(v6, rel=1e-12)


def test_node_tables_are_cached():
    assert de_nodes(5) is de_nodes(5)


def test_nodes_live_in_unit_interval_symmetrically():
    n = de_nodes(5)
    # the extreme nodes round to 1.0 in floats; the log fields hold the
    # true endpoint distances
    assert np.all(n.s > 0.0)
    assert np.all(n.log_s < 0.0) and np.all(n.log_1ms < 0.0)
    assert np.allclose(n.s + n.s[::-1], 1.0, atol=1e-15)
    assert np.allclose(n.log_1ms, n.log_s[::-1], rtol=1e-13)


def test_refinement_roughly_doubles_node_count():
    n4, n5 = de_nodes(4), de_nodes(5)
    assert 2 * len(n4.s) - 3 <= len(n5.s) <= 2 * len(n4.s) + 3
