"""Large-argument expansion of F(sigma, (a); (b); -x).

For x > 1 the function equals an exact convergent sum of branches
x^(-a_k) * (series in 1/x), one per numerator parameter, weighted by
gamma-function connection coefficients.  Branches collide when two
numerator parameters differ by an integer; that case is reported as
degenerate rather than patched with limit formulas.
"""
from __future__ import annotations

import math

from .errors import DegenerateParameters, NotConverged
from .gammafn import gamma_ratio_log
from .params import EvalResult, HypSpec, Method

_NEAR_INT = 1e-6


def check_nondegenerate(spec: HypSpec) -> None:
    """Raise unless all numerator-parameter gaps are safely non-integer."""
    params = spec.numerator_params()
    for i in range(len(params)):
        for j in range(i + 1, len(params)):
            gap = params[i] - params[j]
            if abs(gap - round(gap)) < _NEAR_INT:
                raise DegenerateParameters(
                    "numerator parameters %g and %g differ by a "
                    "near-integer" % (params[i], params[j]))


def _branch(spec: HypSpec, ak: float, x: float, order: int):
    """One x^(-ak) branch: connection coefficient and inner 1/x series.

    Returns (signed branch value, first omitted inner term magnitude).
    """
    others = [p for p in spec.numerator_params() if p != ak]
    num = [ak] + [p - ak for p in others]
    den = [bj - ak for bj in spec.b]
    lg, sg = gamma_ratio_log(num, den)
    total = 0.0
    term = 1.0
    fac_last = 0.0
    for m in range(order):
        total += term
        fac = 1.0 / (m + 1.0)
        for bj in spec.b:
            fac *= (1.0 + ak - bj + m)
        fac *= (ak + m)
        for p in others:
            fac /= (1.0 + ak - p + m)
        term *= -fac / x
        fac_last = abs(term)
    scale = sg * math.exp(lg - ak * math.log(x))
    return scale * total, abs(scale) * fac_last


def eval_asymptotic(spec: HypSpec, x: float, order: int = 30) -> EvalResult:
    """Fixed-order branch sum; error = sum of first omitted terms."""
    if x <= 1.0:
        raise NotConverged("expansion converges only for x > 1",
                           value=math.nan, err=math.inf)
    check_nondegenerate(spec)
    lead, slead = gamma_ratio_log(list(spec.b),
                                  [spec.sigma] + list(spec.a))
    total = 0.0
    err = 0.0
    for ak in spec.numerator_params():
        v, e = _branch(spec, ak, x, order)
        total += v
        err += e
    scale = slead * math.exp(lead)
    value = scale * total
    return EvalResult(value, abs(scale) * err + 2e-16 * abs(value),
                      Method.Asymptotic, order)


def eval_asymptotic_auto(spec: HypSpec, x: float,
                         tol: float = 1e-13,
                         max_order: int = 2048) -> EvalResult:
    """Grow the order until the omitted-term estimate meets tol."""
    check_nondegenerate(spec)
    best = None
    order = 20
    while order <= max_order:
        res = eval_asymptotic(spec, x, order=order)
        if best is None or res.abs_err_estimate < best.abs_err_estimate:
            best = res
        if res.abs_err_estimate <= tol * max(abs(res.value), 1e-300):
            return res
        order *= 2
    raise NotConverged(
        "asymptotic sum stalled at x=%g (best rel err %.2e)"
        % (x, best.abs_err_estimate / max(abs(best.value), 1e-300)),
        value=best.value, err=best.abs_err_estimate)
