"""Thomae's two fundamental relations for 3F2 at unit argument and the
integral identity that encodes the first of them.

Unit-argument series have terms decaying like n^(-1-m) with
m = d + e - a - b - c, too slow to sum raw at small m.  The evaluator
sums a fixed head and closes the tail with Hurwitz zeta values against
a fitted three-term asymptotic of the terms, which brings even
m ~ 0.1 cases to ~1e-11 relative.
"""
from __future__ import annotations

import math

import numpy as np
import scipy.special as sp

from .errors import (DomainError, NearIntegerDifference, NotConverged,
                     PoleError)
from .gammafn import gamma_ratio_log, is_nonpositive_integer
from .gauss2f1 import hyp2f1_from_u
from .params import ThomaeInstance
from .quadrature import de_nodes

_HEAD = 20000
_LOG_CUT = -700.0


def _terminating_length(*nums) -> int | None:
    """Series length if some numerator parameter is a non-positive
    integer, else None."""
    best = None
    for p in nums:
        if is_nonpositive_integer(p):
            k = int(round(-p)) + 1
            best = k if best is None else min(best, k)
    return best


def hyp3f2_unit(a: float, b: float, c: float, d: float, e: float,
                head: int = _HEAD) -> tuple:
    """3F2(a, b, c; d, e; 1) and an error estimate.

    Requires margin d+e-a-b-c > 0 unless the series terminates.
    """
    term_len = _terminating_length(a, b, c)
    m = d + e - a - b - c
    if term_len is None and not m > 0.0:
        raise DomainError("series at unit argument diverges: "
                          "margin %g <= 0" % m)
    n_terms = term_len if term_len is not None else head
    n = np.arange(n_terms, dtype=float)
    with np.errstate(divide="raise"):
        try:
            ratios = (a + n) * (b + n) * (c + n) \
                / ((d + n) * (e + n) * (n + 1.0))
        except FloatingPointError:
            raise PoleError("denominator parameter hits a "
                            "non-positive integer")
    terms = np.empty(n_terms + 1)
    terms[0] = 1.0
    np.cumprod(ratios, out=terms[1:])
    total = float(np.sum(terms))
    if term_len is not None:
        return total, 4e-16 * abs(total) * math.sqrt(term_len + 1.0)
    # tail: fit terms ~ C n^(-1-m) (1 + c1/n + c2/n^2) at three depths
    # and integrate the fit exactly with Hurwitz zeta values
    ns = np.array([n_terms, n_terms * 7 // 8, n_terms * 3 // 4],
                  dtype=float)
    y = terms[ns.astype(int)] * ns ** (1.0 + m)
    u = 1.0 / ns
    coef = np.linalg.solve(np.vander(u, 3, increasing=True), y)
    zs = sp.zeta(np.array([1.0, 2.0, 3.0]) + m, n_terms + 1)
    tail = float(coef @ zs)
    # truncation of the fitted expansion: next-order zeta weight with
    # a generous coefficient, plus head roundoff
    err = 10.0 * abs(coef[0]) * float(sp.zeta(4.0 + m, n_terms + 1)) \
        + abs(tail) * 1e-11 \
        + 4e-16 * float(np.sum(np.abs(terms))) * math.sqrt(n_terms)
    return total + tail, err


def thomae_first_check(inst: ThomaeInstance, tol: float = 1e-9) -> dict:
    """First fundamental relation at unit argument:

        3F2[m, 1-a, 1-c; w_d, w_e]
          = G[w_d, w_e, b; m, 1+b-a, 1+b-c] 3F2[b, 1+b-e, 1+b-d;
                                                1+b-a, 1+b-c]

    with m = d+e-a-b-c and w_d = d-a-c+1, w_e = e-a-c+1.  Reports both
    sides and their relative deviation.
    """
    a, b, c, d, e = inst.a, inst.b, inst.c, inst.d, inst.e
    m = inst.margin
    wd = d - a - c + 1.0
    we = e - a - c + 1.0
    if not b > 0.0:
        raise DomainError("left side needs margin b > 0")
    for p in (wd, we, 1.0 + b - a, 1.0 + b - c):
        if is_nonpositive_integer(p):
            raise PoleError("denominator parameter %g is a "
                            "non-positive integer" % p)
    lhs, lerr = hyp3f2_unit(m, 1.0 - a, 1.0 - c, wd, we)
    lg, sg = gamma_ratio_log([wd, we, b],
                             [m, 1.0 + b - a, 1.0 + b - c])
    rseries, rerr = hyp3f2_unit(b, 1.0 + b - e, 1.0 + b - d,
                                1.0 + b - a, 1.0 + b - c)
    rhs = sg * math.exp(lg) * rseries
    scale = max(abs(lhs), abs(rhs), 1e-300)
    dev = abs(lhs - rhs) / scale
    err = (lerr + rerr + 1e-15 * abs(rhs)) / scale
    return {"instance": inst, "lhs": lhs, "rhs": rhs,
            "deviation": dev, "err": err,
            "passed": dev <= max(tol, 5.0 * err)}


def thomae_second_check(inst: ThomaeInstance,
                        tol: float = 1e-8) -> dict:
    """Second fundamental relation: 3F2[a,b,c; d,e](1) equals a sine-
    and-gamma prefactor times the difference of two unit 3F2 values,
    the second being the first with b and c interchanged."""
    a, b, c, d, e = inst.a, inst.b, inst.c, inst.d, inst.e
    m = inst.margin
    if not (b > 0.0 and c > 0.0):
        raise DomainError("brace-term margins need b > 0 and c > 0")
    cb = c - b
    if abs(cb - round(cb)) <= 1e-4:
        raise NearIntegerDifference(
            "c - b = %g is too close to an integer" % cb)
    if is_nonpositive_integer(1.0 - a):
        raise PoleError("prefactor gamma(1-a) pole: a = %g" % a)
    lhs, lerr = hyp3f2_unit(a, b, c, d, e)

    def brace(bb: float, cc: float) -> tuple:
        wd = d - a - cc + 1.0
        we = e - a - cc + 1.0
        for p in (wd, we):
            if is_nonpositive_integer(p):
                raise PoleError("denominator parameter %g is a "
                                "non-positive integer" % p)
        s3, serr = hyp3f2_unit(1.0 - a, 1.0 - cc, m, wd, we)
        lg, sg = gamma_ratio_log([], [wd, we, d - bb, e - bb])
        return sg * math.exp(lg) * s3, serr * math.exp(lg)

    t1, e1 = brace(b, c)
    t2, e2 = brace(c, b)
    lg, sg = gamma_ratio_log([d, e, 1.0 - a, m], [b, c])
    pref = sg * math.exp(lg) * math.pi / math.sin(math.pi * cb)
    rhs = pref * (t1 - t2)
    scale = max(abs(lhs), abs(rhs), 1e-300)
    dev = abs(lhs - rhs) / scale
    err = (lerr + abs(pref) * (e1 + e2) + 1e-14 * abs(rhs)) / scale
    return {"instance": inst, "lhs": lhs, "rhs": rhs,
            "deviation": dev, "err": err,
            "passed": dev <= max(tol, 5.0 * err)}


def _kernel_integral(p: float, q: float, f1: float, f2: float,
                     f3: float, level: int = 6) -> float:
    """int_0^1 t^(p-1) (1-t)^(q-1) 2F1(f1, f2; f3; 1-t) dt, the 2F1
    evaluated from the distance t of its argument to 1."""
    nodes = de_nodes(level)
    log_f = nodes.log_w + (p - 1.0) * nodes.log_s \
        + (q - 1.0) * nodes.log_1ms
    keep = log_f > _LOG_CUT
    t = nodes.s[keep]
    log_t = nodes.log_s[keep]
    vals, _ = hyp2f1_from_u(f1, f2, f3, t, log_t)
    with np.errstate(divide="ignore"):
        log_full = log_f[keep] + np.log(np.abs(vals))
    return float(np.sum(np.sign(vals) * np.exp(log_full)))


def integral_identity_check(a: float, b: float, c: float, d: float,
                            e: float, tol: float = 1e-7,
                            level: int = 6) -> dict:
    """The unit-argument integral identity:

        int t^(b-1) (1-t)^(m-1) 2F1(e-c, d-c; d+e-b-c; 1-t) dt
        = G[b, c, m; a, d-a, e-a]
          int t^(e-a-1) (1-t)^(a-1) 2F1(e-c, e-b; d+e-b-c; 1-t) dt,

    m = d+e-a-b-c.  Both sides by endpoint-weighted quadrature; the
    2F1 factors are evaluated from the distance of their argument to 1.
    """
    m = d + e - a - b - c
    if not (b > 0.0 and m > 0.0 and e - a > 0.0 and a > 0.0):
        raise DomainError("need b > 0, d+e-a-b-c > 0, e-a > 0, a > 0")
    if not (c > 0.0 and d - a > 0.0):
        raise DomainError("integrals require c > 0 and d - a > 0")
    g = d + e - b - c
    lhs = _kernel_integral(b, m, e - c, d - c, g, level)
    lg, sg = gamma_ratio_log([b, c, m], [a, d - a, e - a])
    rhs_int = _kernel_integral(e - a, a, e - c, e - b, g, level)
    rhs = sg * math.exp(lg) * rhs_int
    scale = max(abs(lhs), abs(rhs), 1e-300)
    dev = abs(lhs - rhs) / scale
    return {"a": a, "b": b, "c": c, "d": d, "e": e,
            "lhs": lhs, "rhs": rhs, "deviation": dev,
            "passed": dev <= tol}


def hyp3f2_via_integral(a: float, b: float, c: float, d: float,
                        e: float, x: float, level: int = 6) -> float:
    """3F2(a, b, c; d, e; x) for x <= 1 through the kernel-integral
    representation: valid for d+e-b-c > 0, b, c > 0, and at x = 1 the
    additional margin d+e-a-b-c > 0."""
    g = d + e - b - c
    if not (g > 0.0 and b > 0.0 and c > 0.0):
        raise DomainError("need d+e-b-c > 0 and b, c > 0")
    if x > 1.0:
        raise DomainError("representation needs x <= 1")
    if x == 1.0 and not d + e - a - b - c > 0.0:
        raise DomainError("x = 1 needs margin d+e-a-b-c > 0")
    nodes = de_nodes(level)
    log_f = nodes.log_w + (b - 1.0) * nodes.log_s \
        + (g - 1.0) * nodes.log_1ms
    if x == 1.0:
        log_f += -a * nodes.log_1ms
        base_done = True
    else:
        base_done = False
    keep = log_f > _LOG_CUT
    t = nodes.s[keep]
    log_t = nodes.log_s[keep]
    vals, _ = hyp2f1_from_u(e - c, d - c, g, t, log_t)
    log_full = log_f[keep]
    if not base_done:
        log_full = log_full - a * np.log1p(-x * t)
    with np.errstate(divide="ignore"):
        log_full = log_full + np.log(np.abs(vals))
    lg, sg = gamma_ratio_log([d, e], [b, c, g])
    return sg * math.exp(lg) * float(
        np.sum(np.sign(vals) * np.exp(log_full)))
