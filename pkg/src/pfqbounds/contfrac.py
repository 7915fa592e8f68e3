"""Gauss continued fraction for ratios of contiguous 2F1 values.

The ratio 2F1(a, b; c; -x) / 2F1(a-1, b; c-1; -x) equals
(c-1) / ((c-1) + K) with K a continued fraction whose elements are
positive for x > 0 and c > b > 0, c > a > 0.  Truncations of even and
odd depth then straddle the true value, which is the engine behind the
two-sided rational bounds: with a = 1 the denominator function is 1
and the convergents bound F(1, b; c; -x) itself.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .errors import NotConverged
from .params import BoundPair, BoundSource, EvalResult, Method

_TINY = 1e-300


def cf_elements(a: float, b: float, c: float, n: int, start: int = 0):
    """Partial-fraction elements (p_k, q_k) for k = start .. start+n-1,
    so K = p_0 x / (q_0 + p_1 x / (q_1 + ...)) after the leading term."""
    out = []
    for k in range(start, start + n):
        if k % 2 == 0:
            j = k // 2
            out.append(((b + j) * (c - a + j), c + 2 * j))
        else:
            j = (k - 1) // 2
            out.append(((a + j) * (c - b + j), c + 2 * j + 1))
    return out


def convergent(a: float, b: float, c: float, x: float, order: int) -> float:
    """Truncation after `order` bars (the leading (c-1) counts as one)."""
    if order < 1:
        raise ValueError("order must be at least 1")
    t = 0 * c
    for p, q in reversed(cf_elements(a, b, c, order - 1)):
        t = p * x / (q + t)
    return (c - 1) / ((c - 1) + t)


def gauss_cf_ratio(a: float, b: float, c: float, x: float,
                   tol: float = 5e-16, max_iter: int = 100000) -> EvalResult:
    """Full ratio via the modified Lentz algorithm."""
    f = c - 1.0
    if f == 0.0:
        f = _TINY
    cc = f
    dd = 0.0
    delta = math.inf
    for start in range(0, max_iter, 64):
        for i, (p, q) in enumerate(cf_elements(a, b, c, 64, start=start)):
            num = p * x
            dd = q + num * dd
            if dd == 0.0:
                dd = _TINY
            cc = q + num / cc
            if cc == 0.0:
                cc = _TINY
            dd = 1.0 / dd
            delta = cc * dd
            f *= delta
            if abs(delta - 1.0) < tol:
                k = start + i + 1
                val = (c - 1.0) / f
                return EvalResult(val, abs(val) * 8e-16 * math.sqrt(k + 1.0),
                                  Method.ContinuedFraction, k)
    raise NotConverged("continued fraction stalled at x=%g" % x,
                       value=(c - 1.0) / f, err=abs(delta - 1.0))


def convergent_bounds(b: float, c: float, x: float, m: int) -> BoundPair:
    """Two-sided rational bounds on F(1, b; c; -x) from convergents of
    orders m and m+1 (even truncations sit below, odd above)."""
    if m < 1:
        raise ValueError("order must be at least 1")
    v1 = convergent(1.0, b, c, x, m)
    v2 = convergent(1.0, b, c, x, m + 1)
    if m % 2 == 0:
        lower, upper = v1, v2
    else:
        lower, upper = v2, v1
    valid = x > 0.0 and c > b > 0.0 and c >= 1.0
    return BoundPair(lower=lower, upper=upper,
                     source=BoundSource.Convergents, valid=valid,
                     lower_valid=valid, upper_valid=valid)


def _poly_mul(p, q, keep: int):
    out = [Fraction(0)] * min(len(p) + len(q) - 1, keep)
    for i, pi in enumerate(p):
        if i >= keep:
            break
        for j, qj in enumerate(q):
            if i + j >= keep:
                break
            out[i + j] += pi * qj
    return out


def _poly_add(p, q):
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else Fraction(0))
            + (q[i] if i < len(q) else Fraction(0)) for i in range(n)]


def _series_inverse(d, keep: int):
    inv = [Fraction(0)] * keep
    inv[0] = 1 / d[0]
    for n in range(1, keep):
        acc = Fraction(0)
        for k in range(1, min(n, len(d) - 1) + 1):
            acc += d[k] * inv[n - k]
        inv[n] = -acc / d[0]
    return inv


def pade_coeff_check(b, c, order: int):
    """Exact-arithmetic agreement between the order-m convergent of
    F(1, b; c; -x) and its Taylor series through x^(m-1).

    Returns (ok, convergent_coeffs, series_coeffs) as Fractions.
    """
    b = Fraction(b)
    c = Fraction(c)
    elems = []
    for k in range(order - 1):
        if k % 2 == 0:
            j = k // 2
            elems.append(((b + j) * (c - 1 + j), c + 2 * j))
        else:
            j = (k - 1) // 2
            elems.append(((1 + j) * (c - b + j), c + 2 * j + 1))
    num = [Fraction(0)]
    den = [Fraction(1)]
    for p, q in reversed(elems):
        new_num = [Fraction(0)] + [p * di for di in den]
        new_den = _poly_add([q * di for di in den], num)
        num, den = new_num, new_den
    lead = c - 1
    r_num = [lead * di for di in den]
    r_den = _poly_add(r_num, num)
    keep = order
    coeffs = _poly_mul(r_num, _series_inverse(r_den, keep), keep)
    series = [Fraction(1)]
    for n in range(1, keep):
        series.append(series[-1] * -(b + n - 1) / (c + n - 1))
    ok = all(coeffs[i] == series[i] for i in range(keep))
    return ok, tuple(coeffs), tuple(series)
