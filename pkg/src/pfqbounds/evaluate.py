"""Method dispatch for F(sigma, (a); (b); -x) and the q=3
representation cross-check.

Every backend reports an a-posteriori error estimate, so dispatch is
honest: the automatic mode picks the method whose estimate is smallest
among those applicable at the given x, with the switchover structure

    series for moderate |x|  <  density quadrature  <  asymptotic,

plus series acceleration for positive alternating cases near and
beyond |x| = 1 when no density is available.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.special as sp

from .contfrac import gauss_cf_ratio
from .density import (_F3_SERIES_MIN_S, _LOG_CUT, _q3_labels, _sorted_key,
                      appell_f3, q3_y_integral, stieltjes_eval,
                      stieltjes_eval_many)
from .errors import (DegenerateParameters, DomainError, NotConverged,
                     UnsupportedQ)
from .gammafn import gamma_ratio_log
from .gauss2f1 import series_2f1
from .params import (AppellF3Spec, EvalResult, HypSpec, Method)
from .quadrature import de_nodes
from .series import eval_series, eval_series_accelerated
from .asymptotic import check_nondegenerate, eval_asymptotic_auto

_SERIES_X_MAX = 0.9


def _try_series(spec: HypSpec, x: float, tol: float) -> EvalResult:
    if abs(x) < 1.0:
        try:
            return eval_series(spec, x, tol=min(tol, 1e-14))
        except NotConverged:
            if not (x > 0.0 and spec.sigma > 0.0
                    and all(ai > 0 for ai in spec.a)):
                raise
    elif not (x >= 1.0 and spec.sigma > 0.0
              and all(ai > 0 for ai in spec.a)):
        raise NotConverged("series diverges at x=%g" % x)
    return eval_series_accelerated(spec, x)


def _cf_value(spec: HypSpec, x: float, tol: float) -> EvalResult:
    """F(m, a; b; -x) for q=1 and positive integer m as a telescoping
    product of contiguous continued-fraction ratios."""
    if spec.q != 1:
        raise DomainError("continued fraction form needs q = 1")
    m = spec.sigma
    if not (m == int(m) and m >= 1):
        raise DomainError(
            "continued fraction form needs a positive integer sigma")
    m = int(m)
    a, b = spec.a[0], spec.b[0]
    if not x > -1.0:
        raise DomainError("continued fraction needs x > -1")
    if b - m <= 0 or b - m <= a - 1:
        raise DomainError("contiguous chain exits the convergence region")
    val, err, effort = 1.0, 0.0, 0
    for j in range(m, 0, -1):
        r = gauss_cf_ratio(j, a, b - (m - j), x, tol=min(tol, 5e-16))
        val *= r.value
        err += r.abs_err_estimate / max(abs(r.value), 1e-300)
        effort += r.effort
    return EvalResult(val, abs(val) * (err + 1e-16),
                      Method.ContinuedFraction, effort)


def evaluate(spec: HypSpec, x: float, tol: float = 1e-10,
             method: Method | None = None) -> EvalResult:
    """Best-effort evaluation of F(sigma, (a); (b); -x) for x > -1.

    With `method` given, that backend is used and its domain errors
    propagate; otherwise backends are tried in a coverage order and the
    first result meeting `tol` is returned (else the smallest-error
    one).
    """
    if not x > -1.0:
        raise DomainError("argument requires x > -1, got %g" % x)
    if method is Method.Series:
        return _try_series(spec, x, tol)
    if method is Method.ContinuedFraction:
        return _cf_value(spec, x, tol)
    if method is Method.StieltjesQuadrature:
        return stieltjes_eval(spec, x, tol=tol)
    if method is Method.Asymptotic:
        check_nondegenerate(spec)
        if not x > 1.0:
            raise DomainError("asymptotic expansion needs x > 1")
        return eval_asymptotic_auto(spec, x, tol=tol)
    if x == 0.0:
        return EvalResult(1.0, 0.0, Method.Series, 1)
    if spec.sigma == 0.0:
        return EvalResult(1.0, 0.0, Method.Series, 1)

    candidates = []
    if abs(x) <= _SERIES_X_MAX or (
            x > _SERIES_X_MAX and spec.sigma > 0.0
            and all(ai > 0 for ai in spec.a)
            and not (spec.stieltjes_valid or spec.q2_relaxed_valid)
            and x <= 1.5):
        try:
            r = _try_series(spec, x, tol)
            if r.abs_err_estimate <= tol * max(abs(r.value), 1e-300):
                return r
            candidates.append(r)
        except (NotConverged, DomainError):
            pass
    if (spec.stieltjes_valid or spec.q2_relaxed_valid) and spec.q <= 3:
        try:
            r = stieltjes_eval(spec, x, tol=tol)
            if r.abs_err_estimate <= tol * max(abs(r.value), 1e-300):
                return r
            candidates.append(r)
        except (NotConverged, DomainError, UnsupportedQ):
            pass
    if x > 1.0:
        try:
            check_nondegenerate(spec)
            r = eval_asymptotic_auto(spec, x, tol=tol)
            if r.abs_err_estimate <= tol * max(abs(r.value), 1e-300):
                return r
            candidates.append(r)
        except (DegenerateParameters, NotConverged):
            pass
    if x > _SERIES_X_MAX and spec.sigma > 0.0 \
            and all(ai > 0 for ai in spec.a):
        try:
            r = _try_series(spec, x, tol)
            candidates.append(r)
        except (NotConverged, DomainError):
            pass
    if not candidates:
        raise NotConverged(
            "no evaluation method converged at x=%g" % x)
    ranked = sorted(candidates, key=lambda r: r.abs_err_estimate
                    / max(abs(r.value), 1e-300))
    best = ranked[0]
    if len(ranked) > 1:
        # two methods disagreeing beyond their combined claims means at
        # least one estimate is optimistic; report the disagreement
        second = ranked[1]
        gap = abs(best.value - second.value)
        claimed = 5.0 * (best.abs_err_estimate + second.abs_err_estimate)
        if gap > claimed:
            best = EvalResult(best.value, gap, best.method, best.effort)
    if best.abs_err_estimate > 1e-4 * max(abs(best.value), 1e-300):
        raise NotConverged(
            "best method reached only %.1e relative at x=%g"
            % (best.abs_err_estimate / max(abs(best.value), 1e-300), x),
            value=best.value, err=best.abs_err_estimate)
    return best


def evaluate_many(spec: HypSpec, xs, tol: float = 1e-10):
    """Vectorized evaluation over an x array: (values, abs_errors).

    Fast path: one shared density grid when the spec admits one;
    otherwise a per-point dispatch loop.
    """
    xs = np.asarray(xs, dtype=float)
    if (spec.stieltjes_valid or spec.q2_relaxed_valid) \
            and spec.q <= 3 and np.all(xs > -1.0):
        try:
            vals, errs = stieltjes_eval_many(spec, xs)
            loose = errs > np.maximum(tol * np.abs(vals), 1e-300)
            if not np.any(loose):
                return vals, errs
            # nearly-degenerate parameter sets leave real quadrature
            # error; redo just those points through the full dispatch
            for i in np.nonzero(loose)[0]:
                r = evaluate(spec, float(xs[i]), tol=tol)
                if r.abs_err_estimate < errs[i]:
                    vals[i] = r.value
                    errs[i] = r.abs_err_estimate
            return vals, errs
        except (DomainError, UnsupportedQ, NotConverged):
            pass
    vals = np.empty_like(xs)
    errs = np.empty_like(xs)
    for i, x in enumerate(xs):
        r = evaluate(spec, float(x), tol=tol)
        vals[i] = r.value
        errs[i] = r.abs_err_estimate
    return vals, errs


@dataclass(frozen=True)
class RepresentationReport:
    """Three routes to the same q=3 value and their disagreements."""
    spec: HypSpec
    x: float
    reference: float
    reference_method: Method
    double_integral: float
    f3_integral: float
    dev_ref_double: float
    dev_ref_f3: float
    dev_double_f3: float
    tol: float
    passed: bool


def _double_integral_value(labels, sigma: float, x: float) -> float:
    """Tensor quadrature of the iterated representation: the 2F1 kernel
    is evaluated at its native argument y(1-s) by the external library
    routine, bypassing this package's connection machinery."""
    (a1, b1), (a2, b2), (a3, b3) = labels
    B13 = b1 + b3 - a1 - a3
    B = b1 + b2 + b3 - a1 - a2 - a3
    lg, sg = gamma_ratio_log([b1, b2, b3],
                             [a1, a2, a3, b2 - a2, B13])
    sn = de_nodes(5)
    yn = de_nodes(5)
    log_ws = sn.log_w + (a2 - 1.0) * sn.log_s + (B - 1.0) * sn.log_1ms \
        - sigma * np.log1p(x * sn.s)
    ks = log_ws > _LOG_CUT
    log_wy = yn.log_w + (B13 - 1.0) * yn.log_s \
        + (b2 - a2 - 1.0) * yn.log_1ms
    ky = log_wy > _LOG_CUT
    s = sn.s[ks]
    one_ms = np.exp(sn.log_1ms[ks])
    y = yn.s[ky]
    arg = y[:, None] * one_ms[None, :]
    np.clip(arg, 0.0, 1.0 - 1e-16, out=arg)
    f = sp.hyp2f1(b3 - a1, b1 - a1, B13, arg)
    u = 1.0 - arg
    inner = np.exp(log_wy[ky])[:, None] * u ** (a3 - b2) * f
    return sg * math.exp(lg) * float(
        np.exp(log_ws[ks]) @ inner.sum(axis=0))


def _f3_integral_value(labels, sigma: float, x: float,
                       tol: float) -> float:
    """Quadrature against Appell F3 values: the genuine double series
    where it converges (s above 1/2), the equivalent y-integral form
    below."""
    (a1, b1), (a2, b2), (a3, b3) = labels
    B13 = b1 + b3 - a1 - a3
    B = b1 + b2 + b3 - a1 - a2 - a3
    lgB1, sgB1 = gamma_ratio_log([b1, b2, b3], [a1, a2, a3, B])
    sn = de_nodes(5)
    log_ws = sn.log_w + (a2 + a3 - b2 - 1.0) * sn.log_s \
        + (B - 1.0) * sn.log_1ms - sigma * np.log1p(x * sn.s)
    keep = log_ws > _LOG_CUT
    s = sn.s[keep]
    log_s = sn.log_s[keep]
    log_ws = log_ws[keep]
    f3 = np.empty_like(s)
    hi = s > max(_F3_SERIES_MIN_S, 0.55)
    for i in np.nonzero(hi)[0]:
        f3[i] = appell_f3(AppellF3Spec(
            alpha1=b2 - a3, alpha2=b3 - a1,
            beta1=b2 - a2, beta2=b1 - a1, gamma=B,
            z1=1.0 - 1.0 / s[i], z2=1.0 - s[i]), tol=tol).value
    if not np.all(hi):
        lgK, sgK = gamma_ratio_log([B], [b2 - a2, B13])
        yv, _ = q3_y_integral((a1, b1), (a2, b2), (a3, b3),
                              s[~hi], log_s[~hi])
        f3[~hi] = sgK * np.exp(lgK) * s[~hi] ** (b2 - a3) * yv
    return sgB1 * math.exp(lgB1) * float(np.exp(log_ws) @ f3)


def f4f3_representations_check(spec: HypSpec, x: float,
                               tol: float = 1e-6) -> RepresentationReport:
    """Evaluate a q=3 function three ways: reference dispatch, the
    iterated two-dimensional integral, and the Appell-kernel single
    integral; report the three values and pairwise deviations.

    The reference is the direct series when it converges and the
    density quadrature otherwise, so for x >= 1 the check is a mutual
    consistency statement among the integral forms rather than a test
    against an external value.
    """
    if spec.q != 3:
        raise UnsupportedQ("representation check is specific to q=3")
    if not spec.stieltjes_valid:
        raise DomainError("need sorted b's to dominate sorted a's > 0")
    if not x > -1.0:
        raise DomainError("representation requires x > -1")
    if abs(x) < 1.0:
        ref = eval_series(spec, x, tol=1e-14)
    else:
        ref = stieltjes_eval(spec, x)
    labels = _q3_labels(*_sorted_key(spec.a, spec.b))
    di = _double_integral_value(labels, spec.sigma, x)
    f3i = _f3_integral_value(labels, spec.sigma, x, tol=1e-14)
    scale = max(abs(ref.value), 1e-300)
    d1 = abs(ref.value - di) / scale
    d2 = abs(ref.value - f3i) / scale
    d3 = abs(di - f3i) / scale
    return RepresentationReport(
        spec=spec, x=x, reference=ref.value,
        reference_method=ref.method,
        double_integral=di, f3_integral=f3i,
        dev_ref_double=d1, dev_ref_f3=d2, dev_double_f3=d3,
        tol=tol, passed=max(d1, d2, d3) <= tol)
