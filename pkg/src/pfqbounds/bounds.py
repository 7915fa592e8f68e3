"""Closed-form bounds on F(sigma, (a); (b); -x) and the monotone
ratio they derive from.

The ratio

    f(delta; x) = F(sigma, (a)+delta; (b)+delta; -x)
                  / F(sigma, (a); (b); -x)

decreases in x for sigma > 0 and increases for sigma < 0, pinned to 1
at x = 0 and to an explicit gamma ratio at infinity.  Squeezing the
sigma = 1 case between those endpoint values gives the product-form
two-sided bounds; Jensen's inequality then raises them to general
sigma.  Carlson's and Luke's classical bounds are included for
comparison.  Out-of-domain requests return validity flags rather than
raising, so sweeps can probe beyond the proven regions on purpose.
"""
from __future__ import annotations

import math

import numpy as np

from .density import _grid, _q2_core_at, _sorted_key, q3_y_integral
from .errors import DomainError, PoleError, ZeroError
from .evaluate import evaluate, evaluate_many
from .gammafn import gamma_ratio_log
from .params import BoundPair, BoundSource, HypSpec, RatioPoint
from .quadrature import de_nodes

_LOG_CUT = -700.0


def _prod(values) -> float:
    out = 1.0
    for v in values:
        out *= v
    return out


def _ratio_value(spec: HypSpec, delta: float, x: float,
                 tol: float) -> tuple:
    num = evaluate(spec.shifted(delta), x, tol=tol)
    den = evaluate(spec, x, tol=tol)
    if den.value == 0.0:
        raise ZeroError("denominator function vanished at x=%g" % x)
    val = num.value / den.value
    rel = num.abs_err_estimate / max(abs(num.value), 1e-300) \
        + den.abs_err_estimate / max(abs(den.value), 1e-300)
    return val, abs(val) * rel


def ratio_f(spec: HypSpec, delta: float, x: float,
            tol: float = 1e-10) -> RatioPoint:
    """The shifted-over-unshifted ratio at one x > -1."""
    if not delta > 0.0:
        raise DomainError("delta must be positive")
    val, _ = _ratio_value(spec, delta, x, tol)
    return RatioPoint(x=x, f_value=val)


def ratio_f_grid(spec: HypSpec, delta: float, xs,
                 tol: float = 1e-10) -> tuple:
    """Vectorized ratio over an x array: (values, abs_err_estimates)."""
    if not delta > 0.0:
        raise DomainError("delta must be positive")
    xs = np.asarray(xs, dtype=float)
    num, num_err = evaluate_many(spec.shifted(delta), xs, tol=tol)
    den, den_err = evaluate_many(spec, xs, tol=tol)
    val = num / den
    rel = num_err / np.maximum(np.abs(num), 1e-300) \
        + den_err / np.maximum(np.abs(den), 1e-300)
    return val, np.abs(val) * rel


def ratio_f_at_infinity(spec: HypSpec, delta: float) -> float:
    """Limit of the ratio as x -> infinity, as a gamma ratio.

    A pole hit by one of the gamma arguments (say a_i = sigma) is
    resolved by the continuity limit: the value is recomputed with
    sigma perturbed by +/-1e-6 and the two results averaged; if they
    disagree the pole is genuine and PoleError propagates.
    """
    if not delta > 0.0:
        raise DomainError("delta must be positive")

    def gamma_form(sigma: float) -> float:
        num = list(spec.a) + [ai + delta - sigma for ai in spec.a] \
            + [bi - sigma for bi in spec.b] \
            + [bi + delta for bi in spec.b]
        den = [ai - sigma for ai in spec.a] \
            + [ai + delta for ai in spec.a] + list(spec.b) \
            + [bi + delta - sigma for bi in spec.b]
        lg, sg = gamma_ratio_log(num, den)
        if math.isnan(lg):
            raise PoleError("gamma pole in both numerator and "
                            "denominator")
        if lg == math.inf:
            raise PoleError("gamma pole in the numerator")
        return sg * math.exp(lg)  # lg = -inf gives the zero limit

    try:
        return gamma_form(spec.sigma)
    except PoleError:
        hi = gamma_form(spec.sigma + 1e-6)
        lo = gamma_form(spec.sigma - 1e-6)
        mid = 0.5 * (hi + lo)
        if abs(hi - lo) > 1e-3 * max(abs(mid), 1e-300):
            raise PoleError(
                "ratio limit diverges near sigma=%g" % spec.sigma)
        return mid


def ratio_f_at_infinity_product(spec: HypSpec) -> float:
    """The delta = 1 limit in product form,
    prod b_i (a_i - sigma) / (a_i (b_i - sigma))."""
    out = 1.0
    for ai, bi in zip(spec.a, spec.b):
        den = ai * (bi - spec.sigma)
        if den == 0.0:
            raise PoleError("product form hits a zero denominator")
        out *= bi * (ai - spec.sigma) / den
    return out


def bounds_thm2(a, b, x: float) -> BoundPair:
    """Two-sided product-form bounds on F(1, (a); (b); -x).

    lower = 1/(1 + x prod(a_i/b_i)), valid for b_k > a_k > 0 at any
    x > -1 (the lower bound extends below 0 as a Pade underestimate of
    a Stieltjes function); upper = 1/(1 + x prod((a_i-1)/(b_i-1))),
    valid for b_k > a_k > 1 and x > 0.  For q = 2 the relaxed
    conditions (positive a's, sum(b) > sum(a), min(a) < min(b)) admit
    both sides at x > 0 and the lower side on (-1, 0).
    """
    a = tuple(float(v) for v in a)
    b = tuple(float(v) for v in b)
    spec = HypSpec(1.0, a, b)
    pairwise = spec.stieltjes_valid
    pairwise_strict = all(bk > ak > 1.0 for ak, bk in
                          zip(sorted(a), sorted(b)))
    relaxed = spec.q2_relaxed_valid
    lo_base = 1.0 + x * _prod(ai / bi for ai, bi in zip(a, b))
    up_base = 1.0 + x * _prod((ai - 1.0) / (bi - 1.0)
                              for ai, bi in zip(a, b))
    lower = 1.0 / lo_base if lo_base > 0.0 else math.nan
    upper = 1.0 / up_base if up_base > 0.0 else math.nan
    lower_valid = (x > -1.0 and (pairwise or (relaxed and lo_base > 0.0))
                   and lo_base > 0.0)
    upper_valid = (x > 0.0 and (pairwise_strict or relaxed)
                   and up_base > 0.0)
    return BoundPair(lower=lower, upper=upper, source=BoundSource.Thm2,
                     valid=lower_valid and upper_valid,
                     lower_valid=lower_valid, upper_valid=upper_valid)


def bound_lower_sigma(a, b, sigma: float, x: float) -> float:
    """(1 + x prod(a_i/b_i))^(-sigma), the Jensen-raised lower bound;
    proven for b_k > a_k > 0, sigma >= 1, x > -1, and classically for
    sigma > 0, x > 0."""
    base = 1.0 + x * _prod(ai / bi for ai, bi in zip(a, b))
    if base <= 0.0:
        raise DomainError("bound base 1 + x prod(a/b) is not positive")
    return base ** (-sigma)


def bound_luke_smallsigma(a, b, sigma: float, x: float) -> float:
    """1/(1 + x sigma prod(a_i/b_i)), a lower bound for
    b_k >= a_k > 0, x > 0, 0 < sigma <= 1."""
    base = 1.0 + x * sigma * _prod(ai / bi for ai, bi in zip(a, b))
    if base <= 0.0:
        raise DomainError("bound base is not positive")
    return 1.0 / base


def bound_upper_sigma(a, b, sigma: float, x: float) -> float:
    """(1 + x prod((a_i-1)/(b_i-1)))^(-sigma), the Jensen-raised upper
    bound for b_k > a_k > 1, x > 0, 0 < sigma <= 1."""
    base = 1.0 + x * _prod((ai - 1.0) / (bi - 1.0)
                           for ai, bi in zip(a, b))
    if base <= 0.0:
        raise DomainError("bound base is not positive")
    return base ** (-sigma)


def bound_q1_negx(a: float, b: float, sigma: float, x: float) -> float:
    """(1 + a x/(b-1))^(-sigma), an upper bound on 2F1(sigma, a; b; -x)
    for b > a+1 > 1, 0 < sigma <= 1, -1 < x < 0."""
    base = 1.0 + a * x / (b - 1.0)
    if base <= 0.0:
        raise DomainError("bound base is not positive")
    return base ** (-sigma)


def bounds_carlson(a: float, b: float, sigma: float,
                   x: float) -> BoundPair:
    """Carlson's two-sided bounds on 2F1(sigma, a; b; -x) for
    b > a >= sigma > 0, x > -1: a max of two expressions below and a
    single power above."""
    valid = b > a >= sigma > 0.0 and x > -1.0
    if not valid:
        # outside the stated region the power bases can go negative,
        # so do not evaluate them at all
        return BoundPair(lower=math.nan, upper=math.nan,
                         source=BoundSource.Carlson, valid=False,
                         lower_valid=False, upper_valid=False)
    with np.errstate(all="ignore"):
        low1 = (1.0 + x) ** (b - a - sigma) \
            / (1.0 + x * (1.0 - a / b)) ** (b - sigma)
        low2 = (1.0 + a * x / b) ** (-sigma)
        lower = max(low1, low2)
        upper = (1.0 + x) ** (-sigma * a / b)
    if not (math.isfinite(lower) and math.isfinite(upper)):
        valid = False
    return BoundPair(lower=lower, upper=upper,
                     source=BoundSource.Carlson, valid=valid,
                     lower_valid=valid, upper_valid=valid)


def bound_pair(source: BoundSource, spec: HypSpec, x: float,
               order: int = 2) -> BoundPair:
    """BoundPair for any source; one-sided sources carry a trivial
    flagged-invalid opposite side."""
    from .contfrac import convergent_bounds

    if source is BoundSource.Thm2:
        return bounds_thm2(spec.a, spec.b, x)
    if source is BoundSource.Thm3Jensen:
        lower = bound_lower_sigma(spec.a, spec.b, spec.sigma, x)
        valid = (spec.stieltjes_valid and x > -1.0
                 and (spec.sigma >= 1.0
                      or (spec.sigma > 0.0 and x > 0.0)))
        return BoundPair(lower=lower, upper=math.inf, source=source,
                         valid=valid, lower_valid=valid,
                         upper_valid=False)
    if source is BoundSource.Thm4Jensen:
        upper = bound_upper_sigma(spec.a, spec.b, spec.sigma, x)
        valid = (all(bk > ak > 1.0 for ak, bk in
                     zip(sorted(spec.a), sorted(spec.b)))
                 and x > 0.0 and 0.0 < spec.sigma <= 1.0)
        return BoundPair(lower=0.0, upper=upper, source=source,
                         valid=valid, lower_valid=False,
                         upper_valid=valid)
    if source is BoundSource.Q1NegX:
        if spec.q != 1:
            raise DomainError("source q1neg needs q = 1")
        a, b = spec.a[0], spec.b[0]
        upper = bound_q1_negx(a, b, spec.sigma, x)
        valid = (b > a + 1.0 > 1.0 and 0.0 < spec.sigma <= 1.0
                 and -1.0 < x < 0.0)
        return BoundPair(lower=0.0, upper=upper, source=source,
                         valid=valid, lower_valid=False,
                         upper_valid=valid)
    if source is BoundSource.Carlson:
        if spec.q != 1:
            raise DomainError("source carlson needs q = 1")
        return bounds_carlson(spec.a[0], spec.b[0], spec.sigma, x)
    if source is BoundSource.LukeSigma:
        lower = bound_luke_smallsigma(spec.a, spec.b, spec.sigma, x)
        valid = (all(bk >= ak > 0.0 for ak, bk in
                     zip(sorted(spec.a), sorted(spec.b)))
                 and x > 0.0 and 0.0 < spec.sigma <= 1.0)
        return BoundPair(lower=lower, upper=math.inf, source=source,
                         valid=valid, lower_valid=valid,
                         upper_valid=False)
    if source is BoundSource.Convergents:
        if spec.q != 1 or spec.sigma != 1.0:
            raise DomainError("source convergents needs q = 1, "
                              "sigma = 1")
        return convergent_bounds(spec.a[0], spec.b[0], x, order)
    raise DomainError("unknown bound source %r" % source)


def spec_weight(spec: HypSpec):
    """Callable s-array -> weight array s^(a1-1) g((a);(b);s) for a
    q <= 3 spec with a nonnegative density.  Exactly 0 outside (0,1)."""
    if not (spec.stieltjes_valid or spec.q2_relaxed_valid):
        raise DomainError("spec admits no nonnegative density")
    a_sorted, b_sorted = _sorted_key(spec.a, spec.b)
    q = spec.q

    def w(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        inside = (s > 0.0) & (s < 1.0)
        si = s[inside]
        log_s = np.log(si)
        log_1ms = np.log1p(-si)
        if q == 1:
            a1, b1 = a_sorted[0], b_sorted[0]
            lg, sg = gamma_ratio_log([b1], [a1, b1 - a1])
            core = sg * np.exp(lg) * np.ones_like(si)
            alpha, beta = a1, b1 - a1
        elif q == 2:
            alpha, beta, core, _ = _q2_core_at(a_sorted, b_sorted,
                                               si, log_s)
        elif q == 3:
            pairs = list(zip(a_sorted, b_sorted))
            (a2, b2), (a3, b3), (a1, b1) = pairs
            B13 = b1 + b3 - a1 - a3
            B = sum(b_sorted) - sum(a_sorted)
            lg, sg = gamma_ratio_log([b1, b2, b3],
                                     [a1, a2, a3, B13, b2 - a2])
            core, _ = q3_y_integral((a1, b1), (a2, b2), (a3, b3),
                                    si, log_s)
            core = sg * np.exp(lg) * core
            alpha, beta = a2, B
        else:
            raise DomainError("no closed-form density for q=%d" % q)
        lgA, sgA = gamma_ratio_log(
            list(spec.b),
            list(spec.a) + [bi - ai for ai, bi in
                            zip(a_sorted, b_sorted)])
        a0 = sgA * math.exp(lgA)
        with np.errstate(over="ignore"):
            vals = np.sign(core) / a0 * np.exp(
                np.log(np.abs(core) + 1e-300)
                + (alpha - 1.0) * log_s + (beta - 1.0) * log_1ms)
        out = np.zeros_like(s)
        out[inside] = vals
        return out

    return w


def _stieltjes_of_spec(spec: HypSpec, t: float, x: float,
                       level: int) -> float:
    """f_t(x) for the spec's own density through the analytic grid
    (endpoint exponents handled in log space); unnormalized."""
    nodes, alpha, beta, core, _ = _grid(
        *_sorted_key(spec.a, spec.b), level)
    log_f = nodes.log_w + (alpha - 1.0) * nodes.log_s \
        + (beta - 1.0) * nodes.log_1ms - t * np.log1p(x * nodes.s)
    keep = log_f > _LOG_CUT
    return float(np.sum(np.exp(log_f[keep]) * core[keep]))


def _stieltjes_of_weight(weight, sigma: float, x: float,
                         level: int = 6) -> float:
    nodes = de_nodes(level)
    w = np.asarray(weight(nodes.s), dtype=float)
    log_f = nodes.log_w - sigma * np.log1p(x * nodes.s)
    keep = (log_f > _LOG_CUT) & (w != 0.0) & np.isfinite(w)
    return float(np.sum(np.exp(log_f[keep]) * w[keep]))


def jensen_exponentiation_check(weight, sigma: float, x: float,
                                level: int = 6) -> dict:
    """Check the exponentiation inequalities for a generalized
    Stieltjes function f_t(x) = int w(s) (1+sx)^(-t) ds given by a
    nonnegative weight — either a callable on (0,1) or a HypSpec whose
    realized density is used directly:

        f_1(x)^sigma <= f_1(0)^(sigma-1) f_sigma(x)   for sigma >= 1,
        f_sigma(x) <= f_1(0)^(1-sigma) f_1(x)^sigma   for sigma <= 1.

    Returns lhs, rhs, margin = rhs - lhs, and holds.
    """
    if not sigma > 0.0:
        raise DomainError("sigma must be positive")
    if not x > -1.0:
        raise DomainError("need x > -1")
    if isinstance(weight, HypSpec):
        f1_0 = _stieltjes_of_spec(weight, 1.0, 0.0, level)
        f1_x = _stieltjes_of_spec(weight, 1.0, x, level)
        fs_x = _stieltjes_of_spec(weight, sigma, x, level)
    else:
        f1_0 = _stieltjes_of_weight(weight, 1.0, 0.0, level)
        f1_x = _stieltjes_of_weight(weight, 1.0, x, level)
        fs_x = _stieltjes_of_weight(weight, sigma, x, level)
    if sigma >= 1.0:
        lhs = f1_x ** sigma
        rhs = f1_0 ** (sigma - 1.0) * fs_x
    else:
        lhs = fs_x
        rhs = f1_0 ** (1.0 - sigma) * f1_x ** sigma
    err = 1e-13 * (abs(lhs) + abs(rhs))
    return {"sigma": sigma, "x": x, "lhs": lhs, "rhs": rhs,
            "margin": rhs - lhs, "err": err,
            "holds": rhs - lhs >= -err}


def chebyshev_discrete_check(spec: HypSpec, delta: float, x: float,
                             level: int = 6) -> dict:
    """The discrete form of the covariance inequality behind the
    monotone ratio: with p the realized density kernel, q(s) = s^delta
    and h(s) = s/(1+xs) both increasing,

        sum(q p) sum(h p) < sum(q h p) sum(p)

    over the quadrature grid.  Returns the two sides and the verdict.
    """
    if not delta > 0.0:
        raise DomainError("delta must be positive")
    if not x > -1.0:
        raise DomainError("need x > -1")
    nodes, alpha, beta, core, _ = _grid(
        *_sorted_key(spec.a, spec.b), level)
    log_p = nodes.log_w + (alpha + delta - 1.0) * nodes.log_s \
        + (beta - 1.0) * nodes.log_1ms \
        - spec.sigma * np.log1p(x * nodes.s)
    keep = log_p > _LOG_CUT
    p = np.exp(log_p[keep]) * core[keep]
    s = nodes.s[keep]
    qv = s ** delta
    hv = s / (1.0 + x * s)
    lhs = float(np.sum(qv * p) * np.sum(hv * p))
    rhs = float(np.sum(qv * hv * p) * np.sum(p))
    err = 1e-13 * (abs(lhs) + abs(rhs))
    return {"lhs": lhs, "rhs": rhs, "margin": rhs - lhs, "err": err,
            "holds": rhs - lhs > -err}
