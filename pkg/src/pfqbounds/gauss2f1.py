"""Gauss 2F1 evaluated from the distance to the singular argument.

Density kernels need 2F1(alpha, beta; gamma; 1-u) where u can be as
small as 1e-300, far below the resolution of forming 1 - u in doubles.
Everything here takes u itself (optionally with log u) and never forms
the argument.  For u <= 0.45 the value comes from the two-term
connection formula in powers of u, with dedicated limit series when
gamma - alpha - beta is an integer; for larger u the ordinary series
at argument 1-u converges fast and is delegated to the scipy ufunc.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import digamma
from scipy.special import hyp2f1 as _sp_hyp2f1

from .gammafn import lgamma_signed, is_nonpositive_integer

_SPLIT = 0.45
_SERIES_CAP = 800


def series_2f1(a: float, b: float, c: float, z, cap: int = _SERIES_CAP,
               tol: float = 5e-17):
    """Plain 2F1 series, vectorized over z; caller keeps |z| <= ~0.5."""
    z = np.asarray(z, dtype=float)
    term = np.ones_like(z)
    out = np.ones_like(z)
    for n in range(cap):
        term = term * ((a + n) * (b + n) / ((c + n) * (n + 1.0))) * z
        out = out + term
        if np.all(np.abs(term) <= tol * np.abs(out)):
            break
    return out


def _terminating(n: int, other: float, c: float, u):
    """2F1 with a numerator parameter equal to -n: a degree-n polynomial."""
    u = np.asarray(u, dtype=float)
    z = 1.0 - u
    term = np.ones_like(u)
    out = np.ones_like(u)
    absum = np.ones_like(u)
    for k in range(n):
        term = term * ((-n + k) * (other + k) / ((c + k) * (k + 1.0))) * z
        out = out + term
        absum = absum + np.abs(term)
    err = float(np.max(2e-16 * absum / (np.abs(out) + 1e-300)))
    return out, err


def _generic(a: float, b: float, c: float, u, log_u):
    m = c - a - b
    l1, s1 = lgamma_signed(c)
    l2, s2 = lgamma_signed(m)
    l3, s3 = lgamma_signed(c - a)
    l4, s4 = lgamma_signed(c - b)
    coef1 = s1 * s2 * s3 * s4 * math.exp(l1 + l2 - l3 - l4)
    l5, s5 = lgamma_signed(-m)
    l6, s6 = lgamma_signed(a)
    l7, s7 = lgamma_signed(b)
    log2 = l1 + l5 - l6 - l7
    sgn2 = s1 * s5 * s6 * s7
    t1 = coef1 * series_2f1(a, b, 1.0 - m, u)
    t2 = sgn2 * np.exp(log2 + m * log_u) * series_2f1(c - a, c - b,
                                                      1.0 + m, u)
    return t1 + t2


def _log_case_zero(a: float, b: float, c: float, u, log_u):
    """Limit series for gamma - alpha - beta == 0."""
    u = np.asarray(u, dtype=float)
    lg, sg = lgamma_signed(c)
    la, sa = lgamma_signed(a)
    lb, sb = lgamma_signed(b)
    pref = sg * sa * sb * math.exp(lg - la - lb)
    term = np.ones_like(u)
    out = np.zeros_like(u)
    for k in range(_SERIES_CAP):
        h = 2.0 * digamma(k + 1.0) - digamma(a + k) - digamma(b + k)
        add = term * (h - log_u)
        out = out + add
        term = term * ((a + k) * (b + k) / ((k + 1.0) ** 2)) * u
        if k > 2 and np.all(np.abs(add) <= 5e-17 * np.abs(out)):
            break
    return pref * out


def _log_case_pos(a: float, b: float, c: float, m: int, u, log_u):
    """Limit series for gamma - alpha - beta == m, positive integer."""
    u = np.asarray(u, dtype=float)
    lg, sg = lgamma_signed(c)
    lam, sam = lgamma_signed(a + m)
    lbm, sbm = lgamma_signed(b + m)
    pref1 = sg * sam * sbm * math.exp(lg + math.lgamma(m) - lam - lbm)
    term = np.ones_like(u)
    finite = np.zeros_like(u)
    for k in range(m):
        finite = finite + term
        if k < m - 1:
            term = term * ((a + k) * (b + k)
                           / ((k + 1.0) * (k + 1.0 - m))) * u
    la, sa = lgamma_signed(a)
    lb, sb = lgamma_signed(b)
    pref2 = sg * sa * sb * math.exp(lg - la - lb) * ((-1.0) ** m)
    term = np.exp(m * log_u) / math.factorial(m)
    logsum = np.zeros_like(u)
    for k in range(_SERIES_CAP):
        h = (digamma(k + 1.0) + digamma(k + m + 1.0)
             - digamma(a + k + m) - digamma(b + k + m))
        add = term * (h - log_u)
        logsum = logsum + add
        term = term * ((a + m + k) * (b + m + k)
                       / ((k + 1.0) * (k + m + 1.0))) * u
        if k > 2 and np.all(np.abs(add) <= 5e-17 * (np.abs(logsum) + 1e-300)):
            break
    return pref1 * finite + pref2 * logsum


def hyp2f1_sub1(a: float, b: float, c: float, u, log_u=None):
    """2F1(a, b; c; 1-u) for u in (0, ~0.45]; returns (values, rel_err).

    Stable for u down to the subnormal range when log_u is supplied.
    """
    u = np.asarray(u, dtype=float)
    if log_u is None:
        log_u = np.log(u)
    max_neg_log = float(np.max(-log_u)) if u.size else 0.0
    if is_nonpositive_integer(a):
        return _terminating(-int(round(a)), b, c, u)
    if is_nonpositive_integer(b):
        return _terminating(-int(round(b)), a, c, u)
    m = c - a - b
    mi = round(m)
    dist = abs(m - mi)
    if dist < 1e-10:
        mi = int(mi)
        power_err = abs(mi) * max_neg_log * 2e-16
        if mi >= 1:
            return _log_case_pos(a, b, c, mi, u, log_u), 1e-13 + power_err
        if mi == 0:
            return _log_case_zero(a, b, c, u, log_u), 1e-13
        # lift a negative-integer deficiency through the Euler transform
        fac = np.exp(m * log_u)
        aa, bb = c - a, c - b
        if is_nonpositive_integer(aa):
            v, e = _terminating(-int(round(aa)), bb, c, u)
            return fac * v, e + power_err
        if is_nonpositive_integer(bb):
            v, e = _terminating(-int(round(bb)), aa, c, u)
            return fac * v, e + power_err
        return fac * _log_case_pos(aa, bb, c, -mi, u, log_u), \
            1e-13 + power_err
    # generic branch: cancellation grows as the gap to an integer shrinks
    err = 8e-16 / dist + abs(m) * max_neg_log * 2e-16 + 1e-15
    return _generic(a, b, c, u, log_u), min(err, 1.0)


def hyp2f1_from_u(a: float, b: float, c: float, u, log_u=None):
    """2F1(a, b; c; 1-u) for u in (0, 1]; returns (values, rel_err).

    Splits at u = 0.45: connection form below, scipy ufunc above
    (where forming 1-u is exact enough and the series is fast).
    """
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    if log_u is None:
        log_u = np.log(u)
    else:
        log_u = np.atleast_1d(np.asarray(log_u, dtype=float))
    out = np.empty_like(u)
    err = 0.0
    near = u <= _SPLIT
    if np.any(near):
        out[near], err = hyp2f1_sub1(a, b, c, u[near], log_u=log_u[near])
    if np.any(~near):
        out[~near] = _sp_hyp2f1(a, b, c, 1.0 - u[~near])
        err = max(err, 5e-15)
    if scalar:
        return float(out[0]), err
    return out, err


def hyp2f1(a: float, b: float, c: float, z):
    """2F1 at a general real argument z < 1 (scipy ufunc passthrough)."""
    return _sp_hyp2f1(a, b, c, z)
