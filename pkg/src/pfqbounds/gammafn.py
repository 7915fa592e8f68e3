"""Gamma-ratio machinery.

Ratios of many gamma factors appear throughout: representation
prefactors, asymptotic coefficients, endpoint constants.  Everything
funnels through signed log-gamma sums so individual factors may
overflow while the ratio stays representable.
"""
from __future__ import annotations

import math
from math import lgamma

from .errors import PoleError, ZeroError
from .params import GammaRatioSpec

_INF = math.inf


def lgamma_signed(x: float) -> tuple[float, float]:
    """(log|Gamma(x)|, sign of Gamma(x)).

    At a pole (non-positive integer) the log is +inf with sign 1, so
    exp(-log) correctly collapses reciprocal factors to zero; callers
    that need a hard failure check for the pole themselves.
    """
    if x > 0.0:
        return lgamma(x), 1.0
    n = math.floor(x)
    if x == n:
        return _INF, 1.0
    # Gamma alternates sign on successive negative unit intervals
    sign = 1.0 if int(n) % 2 == 0 else -1.0
    return lgamma(x), sign


def is_nonpositive_integer(x: float, tol: float = 1e-12) -> bool:
    return x < 0.5 and abs(x - round(x)) < tol and round(x) <= 0


def pochhammer(a: float, n: int) -> float:
    """Shifted factorial a(a+1)...(a+n-1); exact for small integers."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = 1.0
    for j in range(n):
        out *= a + j
    return out


def gamma_ratio_log(numerator, denominator) -> tuple[float, float]:
    """(log|ratio|, sign) of prod Gamma(num) / prod Gamma(den).

    Denominator poles drive the log to -inf (ratio 0); numerator poles
    to +inf.  Exact cancellation of poles between the two lists is not
    attempted.
    """
    lo = 0.0
    sign = 1.0
    for x in numerator:
        l, s = lgamma_signed(x)
        lo += l
        sign *= s
    for x in denominator:
        l, s = lgamma_signed(x)
        lo -= l
        sign *= s
    return lo, sign


def gamma_ratio(spec: GammaRatioSpec) -> float:
    """prod Gamma(numerator) / prod Gamma(denominator), via log space."""
    for x in spec.numerator:
        if is_nonpositive_integer(x):
            raise PoleError(f"numerator gamma argument {x} is a "
                            "non-positive integer")
    for x in spec.denominator:
        if is_nonpositive_integer(x):
            raise ZeroError(f"denominator gamma argument {x} is a "
                            "non-positive integer")
    lo, sign = gamma_ratio_log(spec.numerator, spec.denominator)
    return sign * math.exp(lo)


def gamma_ratio_lists(numerator, denominator) -> float:
    return gamma_ratio(GammaRatioSpec(tuple(numerator), tuple(denominator)))
