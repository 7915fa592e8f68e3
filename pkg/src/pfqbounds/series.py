"""Power-series evaluation of F(sigma, (a); (b); -x).

The defining series alternates for x > 0, so the truncation error is
bounded by the first omitted term once the terms decrease.  Inside the
unit disk that is enough; close to |x| = 1 convergence stalls and the
Cohen-Villegas-Zagier Chebyshev acceleration takes over.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import NotConverged
from .params import EvalResult, HypSpec, Method

_PLAIN_CAP = 1_000_000


def _term_ratio(spec: HypSpec, n: int) -> float:
    r = (spec.sigma + n) / (n + 1.0)
    for ai, bi in zip(spec.a, spec.b):
        r *= (ai + n) / (bi + n)
    return r


def eval_series(spec: HypSpec, x: float, tol: float = 1e-15,
                cap: int = _PLAIN_CAP) -> EvalResult:
    """Direct summation with compensated accumulation."""
    if x == 0.0:
        return EvalResult(1.0, 0.0, Method.Series, 1)
    total = 0.0
    comp = 0.0
    term = 1.0
    n = 0
    while n < cap:
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        nxt = term * _term_ratio(spec, n) * (-x)
        if abs(nxt) <= tol * abs(total) and abs(nxt) < abs(term):
            # alternating tail is bounded by the first omitted term;
            # one-signed tails (x < 0) get the geometric envelope
            tail = abs(nxt)
            if x < 0.0 and abs(x) < 1.0:
                tail /= (1.0 - abs(x))
            return EvalResult(total, tail + 2e-16 * abs(total),
                              Method.Series, n + 1)
        term = nxt
        n += 1
    raise NotConverged("series did not converge at x=%g" % x,
                       value=total, err=abs(term))


_CVZ_BASE = 3.0 + math.sqrt(8.0)


def auto_accel_order(x: float) -> int:
    """Stage count for the Chebyshev acceleration.

    On (0, 1] each stage contracts the error by 1/(3+sqrt(8))
    regardless of x.  Past 1 the moments live outside the unit
    interval and the contraction weakens to
    (2x - 1 + 2 sqrt(x^2-x))/(3+sqrt(8)), which reaches 1 at x = 2;
    meanwhile the raw terms grow like x^k, so roundoff climbs with
    depth and the usable depth is the balance point of the two."""
    if x <= 1.0:
        return 28
    rho = (2.0 * x - 1.0 + 2.0 * math.sqrt(x * x - x)) / _CVZ_BASE
    if rho >= 1.0:
        return 8
    n = math.log(1e-14) / (math.log(rho) - math.log(x))
    return max(12, min(int(math.ceil(n)), 400))


def _cvz_weights(n: int) -> np.ndarray:
    """Chebyshev acceleration coefficients for an alternating series."""
    d = (3.0 + math.sqrt(8.0)) ** n
    d = 0.5 * (d + 1.0 / d)
    b = -1.0
    c = -d
    w = np.empty(n)
    for k in range(n):
        c = b - c
        w[k] = c / d
        b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1.0))
    return w


def eval_series_accelerated(spec: HypSpec, x: float,
                            n: int | None = None) -> EvalResult:
    """CVZ-accelerated sum; effective for x near or just beyond 1.

    Requires x > 0 (the acceleration needs an alternating series).
    The error estimate comes from comparing against the n-1 stage.
    """
    if x <= 0.0:
        raise NotConverged("acceleration needs x > 0", value=math.nan,
                           err=math.inf)
    if n is None:
        n = auto_accel_order(x)
    terms = np.empty(n)
    term = 1.0
    for k in range(n):
        terms[k] = term
        term *= _term_ratio(spec, k) * x
    val = float(_cvz_weights(n) @ terms)
    val_lo = float(_cvz_weights(n - 1) @ terms[:n - 1])
    err = abs(val - val_lo) + 4e-16 * abs(val)
    return EvalResult(val, err, Method.Series, n)
