"""Closed-form Stieltjes densities for q = 1, 2, 3 and their quadrature.

F(sigma, (a); (b); -x) = A0 * integral over (0,1) of
s^(a1-1) g(s) (1+sx)^(-sigma) ds, where g has closed forms:
a pure Beta weight for q=1, a Gauss 2F1 factor for q=2, and for q=3
either a one-dimensional integral of 2F1 or an Appell F3 value.

The full integrand weight s^(a1-1) g(s) depends only on the parameter
multisets, not on how a's are paired with b's, so internally everything
is computed in a canonical labeling chosen for numerical stability:
pairs are formed by sorting both lists, the carrier exponent is the
smallest a (keeping the 2F1 factors bounded near s=0), and for q=3 the
pair with the largest a takes label 1 (keeping the corner exponent of
the inner 2F1 non-negative).  Public samples are converted back to the
caller's labels.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import (ArgumentOutOfRange, DomainError, NotConverged,
                     UnsupportedQ)
from .gammafn import gamma_ratio_log, lgamma_signed
from .gauss2f1 import hyp2f1_from_u
from .params import (AppellF3Spec, DensitySample, EvalResult, HypSpec,
                     Method)
from .quadrature import de_nodes

ROUTE_ITERATED = "iterated_f21"
ROUTE_APPELL = "appell_f3"

_Y_LEVEL = 4
_LOG_CUT = -700.0
_U_FLOOR = 1e-318
_F3_SERIES_MIN_S = 0.51


def _sorted_key(a, b):
    return tuple(sorted(float(v) for v in a)), \
        tuple(sorted(float(v) for v in b))


def _q2_core_at(a_sorted, b_sorted, s, log_s):
    """2F1 core factor of the q=2 weight at the given s points, with
    the smallest a as carrier; returns (alpha, beta, values, rel_err)."""
    a1, a2 = a_sorted
    b1, b2 = b_sorted
    m = b1 + b2 - a1 - a2
    lg, sg = gamma_ratio_log([b1, b2], [a1, a2, m])
    f, ferr = hyp2f1_from_u(b2 - a2, b1 - a2, m, s, log_s)
    return a1, m, sg * np.exp(lg) * f, ferr


def _q3_labels(a_sorted, b_sorted):
    pairs = list(zip(a_sorted, b_sorted))
    (a2, b2), (a3, b3), (a1, b1) = pairs
    return (a1, b1), (a2, b2), (a3, b3)


def q3_y_integral(pair1, pair2, pair3, s, log_s, level=None):
    """The y-integral that carries the q=3 density's 2F1 kernel:

        Y(s) = int_0^1 y^(B13-1) (1-y)^(b2-a2-1) u^(a3-b2)
               2F1(b3-a1, b1-a1; B13; 1-u) dy,   u = (1-y) + y s,

    with B13 = b1+b3-a1-a3.  Pair 2 supplies the Beta weight in y and
    the u power; pairs 1 and 3 feed the 2F1.  Bounded near s=0 requires
    a1 >= a3 in this labeling.  Returns (values, rel_err) over the s
    array."""
    a1, b1 = pair1
    a2, b2 = pair2
    a3, b3 = pair3
    B13 = b1 + b3 - a1 - a3
    yn = de_nodes(_Y_LEVEL if level is None else level)
    log_wy = yn.log_w + (B13 - 1.0) * yn.log_s \
        + (b2 - a2 - 1.0) * yn.log_1ms
    keep = log_wy > _LOG_CUT
    ys = yn.s[keep]
    one_my = np.exp(yn.log_1ms[keep])
    log_wy = log_wy[keep]
    u = one_my[:, None] + ys[:, None] * np.asarray(s)[None, :]
    np.maximum(u, _U_FLOOR, out=u)
    log_u = np.log(u)
    f, ferr = hyp2f1_from_u(b3 - a1, b1 - a1, B13,
                            u.ravel(), log_u.ravel())
    f = np.asarray(f).reshape(u.shape)
    with np.errstate(divide="ignore"):
        log_t = log_wy[:, None] - (b2 - a3) * log_u + np.log(np.abs(f))
    vals = np.sum(np.sign(f) * np.exp(log_t), axis=0)
    return vals, ferr + 1e-14


def _q3_core_at(a_sorted, b_sorted, s, log_s):
    """Inner y-integral core of the q=3 weight at the given s points;
    returns (alpha, beta, values, rel_err)."""
    (a1, b1), (a2, b2), (a3, b3) = _q3_labels(a_sorted, b_sorted)
    B13 = b1 + b3 - a1 - a3
    B = sum(b_sorted) - sum(a_sorted)
    lg, sg = gamma_ratio_log([b1, b2, b3],
                             [a1, a2, a3, B13, b2 - a2])
    core, err = q3_y_integral((a1, b1), (a2, b2), (a3, b3), s, log_s)
    return a2, B, sg * np.exp(lg) * core, err


@lru_cache(maxsize=128)
def _grid(a_sorted, b_sorted, level):
    """Cached (nodes, alpha, beta, core, core_rel_err) for one spec's
    density at the DE s-nodes of the given level."""
    nodes = de_nodes(level)
    q = len(a_sorted)
    if q == 1:
        a1, b1 = a_sorted[0], b_sorted[0]
        lg, sg = gamma_ratio_log([b1], [a1, b1 - a1])
        core = sg * math.exp(lg) * np.ones_like(nodes.s)
        return nodes, a1, b1 - a1, core, 0.0
    if q == 2:
        alpha, beta, core, err = _q2_core_at(a_sorted, b_sorted,
                                             nodes.s, nodes.log_s)
        return nodes, alpha, beta, core, err
    if q == 3:
        alpha, beta, core, err = _q3_core_at(a_sorted, b_sorted,
                                             nodes.s, nodes.log_s)
        return nodes, alpha, beta, core, err
    raise UnsupportedQ("no closed-form density for q=%d" % q)


def _check_stieltjes(spec: HypSpec) -> None:
    if spec.q > 3:
        raise UnsupportedQ(
            "no closed-form density for q=%d" % spec.q)
    if not (spec.stieltjes_valid or spec.q2_relaxed_valid):
        raise DomainError(
            "not Stieltjes-valid: need sorted b's to dominate sorted "
            "a's > 0 (or the relaxed two-pair conditions)")


def _truncation_tails(nodes, alpha: float, beta: float,
                      core) -> tuple:
    """Mass of the weight beyond the node table's last points.

    All refinement levels share the same t range, so the level
    difference cannot see the integrable-singularity tails
    s^(alpha-1) near 0 and (1-s)^(beta-1) near 1 that lie past the
    extreme nodes.  Those tails are bounded by the pure power-law
    integrals, which only matter when alpha or beta is small."""
    right = abs(float(core[-1])) * math.exp(
        min(beta * nodes.log_1ms[-1], 0.0)) / beta
    left = abs(float(core[0])) * math.exp(
        min(alpha * nodes.log_s[0], 0.0)) / alpha
    return left, right


def _quad_value(spec: HypSpec, x: float, level: int) -> tuple:
    nodes, alpha, beta, core, core_err = _grid(
        *_sorted_key(spec.a, spec.b), level)
    log_f = nodes.log_w + (alpha - 1.0) * nodes.log_s \
        + (beta - 1.0) * nodes.log_1ms \
        - spec.sigma * np.log1p(x * nodes.s)
    keep = log_f > _LOG_CUT
    val = float(np.sum(np.exp(log_f[keep]) * core[keep]))
    left, right = _truncation_tails(nodes, alpha, beta, core)
    trunc = left + right * math.exp(-spec.sigma * math.log1p(x))
    return val, core_err, trunc


def stieltjes_eval(spec: HypSpec, x: float, tol: float = 1e-12,
                   max_level: int = 6) -> EvalResult:
    """Quadrature of the density representation; valid for x > -1."""
    if not x > -1.0:
        raise DomainError("representation requires x > -1, got %g" % x)
    _check_stieltjes(spec)
    prev, _, _ = _quad_value(spec, x, 4)
    level = 5
    while True:
        val, core_err, trunc = _quad_value(spec, x, level)
        err = abs(val - prev) + (core_err + 5e-16) * abs(val) + trunc
        if err <= tol * max(abs(val), 1e-300) or level >= max_level:
            break
        prev, level = val, level + 1
    if err > 1e-6 * max(abs(val), 1e-300):
        raise NotConverged("density quadrature stalled at x=%g" % x,
                           value=val, err=err)
    return EvalResult(val, err, Method.StieltjesQuadrature, level)


def stieltjes_eval_many(spec: HypSpec, xs) -> tuple:
    """Vectorized variant over an x array: (values, abs_err_estimates).

    Uses one fixed level pair; per-x errors come from the level
    difference plus the shared core error.
    """
    xs = np.asarray(xs, dtype=float)
    if not np.all(xs > -1.0):
        raise DomainError("representation requires x > -1")
    _check_stieltjes(spec)
    out = []
    for level in (4, 5):
        nodes, alpha, beta, core, core_err = _grid(
            *_sorted_key(spec.a, spec.b), level)
        log_base = nodes.log_w + (alpha - 1.0) * nodes.log_s \
            + (beta - 1.0) * nodes.log_1ms
        log_f = log_base[None, :] - spec.sigma * np.log1p(
            xs[:, None] * nodes.s[None, :])
        np.clip(log_f, _LOG_CUT, None, out=log_f)
        ex = np.exp(log_f)
        ex[log_f <= _LOG_CUT] = 0.0
        out.append(ex @ core)
    v4, v5 = out
    left, right = _truncation_tails(nodes, alpha, beta, core)
    trunc = left + right * np.exp(-spec.sigma * np.log1p(xs))
    errs = np.abs(v5 - v4) + (core_err + 5e-16) * np.abs(v5) + trunc
    return v5, errs


def density_q1(a: float, b: float, s: float) -> DensitySample:
    """Pure Beta-weight density for one parameter pair."""
    if not b > a > 0:
        raise DomainError("need b > a > 0")
    if not 0.0 <= s <= 1.0:
        raise DomainError("s must lie in [0,1]")
    if (s == 0.0 and a < 1.0) or (s == 1.0 and b - a < 1.0):
        raise DomainError("weight unbounded at this endpoint")
    g = (1.0 - s) ** (b - a - 1.0) if s < 1.0 else \
        (1.0 if b - a == 1.0 else 0.0)
    w = (s ** (a - 1.0) if s > 0.0 else
         (1.0 if a == 1.0 else 0.0)) * g
    return DensitySample(s=s, g_value=g, weight_value=w)


def density_q2(a1: float, a2: float, b1: float, b2: float, s: float,
               tol: float = 1e-12) -> DensitySample:
    """Density with a 2F1 core for two parameter pairs.

    Valid under the relaxed conditions: a's positive, sum of b's
    exceeding sum of a's, and min(a) < min(b).
    """
    m = b1 + b2 - a1 - a2
    if not (m > 0 and a1 > 0 and a2 > 0
            and min(a1, a2) < min(b1, b2)):
        raise DomainError("need positive a's, sum(b) > sum(a), "
                          "and min(a) < min(b)")
    if not 0.0 < s < 1.0:
        raise DomainError("s must lie in (0,1)")
    a_sorted, b_sorted = _sorted_key([a1, a2], [b1, b2])
    sv = np.array([s])
    alpha, beta, core, _ = _q2_core_at(a_sorted, b_sorted,
                                       sv, np.log(sv))
    # core carries the canonical gamma prefactor; the caller-label
    # weight is rho / A0 with A0 in the caller's pairing
    lgA, sgA = gamma_ratio_log([b1, b2],
                               [a1, a2, b1 - a1, b2 - a2])
    a0 = sgA * math.exp(lgA)
    if a0 == 0.0:
        raise DomainError("gamma pole in this pairing's normalizer; "
                          "re-pair a's with b's")
    rho = float(core[0]) * s ** (alpha - 1.0) * (1.0 - s) ** (beta - 1.0)
    w = rho / a0
    g = w * s ** (1.0 - a1)
    return DensitySample(s=s, g_value=g, weight_value=w)


def density_q3(a1: float, a2: float, a3: float,
               b1: float, b2: float, b3: float, s: float,
               tol: float = 1e-12,
               route: str = ROUTE_ITERATED) -> DensitySample:
    """Density for three parameter pairs, by either route.

    ROUTE_ITERATED integrates the inner 2F1 kernel over y; ROUTE_APPELL
    uses the Appell F3 closed form, by its double series where that
    converges (s > 1/2) and by the equivalent integral otherwise.
    """
    spec = HypSpec(1.0, (a1, a2, a3), (b1, b2, b3))
    if not spec.stieltjes_valid:
        raise DomainError("need sorted b's to dominate sorted a's > 0")
    if not 0.0 < s < 1.0:
        raise DomainError("s must lie in (0,1)")
    if route not in (ROUTE_ITERATED, ROUTE_APPELL):
        raise ValueError("unknown route %r" % route)
    if route == ROUTE_APPELL and s > _F3_SERIES_MIN_S:
        B = b1 + b2 + b3 - a1 - a2 - a3
        lgC, sgC = gamma_ratio_log([b1 - a1, b2 - a2, b3 - a3], [B])
        f3 = appell_f3(AppellF3Spec(
            alpha1=b2 - a3, alpha2=b3 - a1,
            beta1=b2 - a2, beta2=b1 - a1,
            gamma=B, z1=1.0 - 1.0 / s, z2=1.0 - s), tol=tol)
        g = sgC * math.exp(lgC) * s ** (a2 + a3 - a1 - b2) \
            * (1.0 - s) ** (B - 1.0) * f3.value
        w = g * s ** (a1 - 1.0)
        return DensitySample(s=s, g_value=g, weight_value=w)
    a_sorted, b_sorted = _sorted_key([a1, a2, a3], [b1, b2, b3])
    sv = np.array([s])
    alpha, beta, core, _ = _q3_core_at(a_sorted, b_sorted,
                                       sv, np.log(sv))
    # core carries the canonical gamma prefactor; the caller-label
    # weight is rho / A0 with A0 in the caller's pairing
    lgA, sgA = gamma_ratio_log(
        [b1, b2, b3],
        [a1, a2, a3, b1 - a1, b2 - a2, b3 - a3])
    a0 = sgA * math.exp(lgA)
    if a0 == 0.0:
        raise DomainError("gamma pole in this pairing's normalizer; "
                          "re-pair a's with b's")
    rho = float(core[0]) * s ** (alpha - 1.0) * (1.0 - s) ** (beta - 1.0)
    w = rho / a0
    g = w * s ** (1.0 - a1)
    return DensitySample(s=s, g_value=g, weight_value=w)


def appell_f3(spec: AppellF3Spec, tol: float = 1e-15,
              max_diag: int = 4000) -> EvalResult:
    """Appell F3 by its double series, summed along anti-diagonals.

    Requires |z1| < 1 and |z2| < 1.
    """
    z1, z2 = spec.z1, spec.z2
    if not (abs(z1) < 1.0 and abs(z2) < 1.0):
        raise ArgumentOutOfRange(
            "double series needs |z1| < 1 and |z2| < 1")
    rho = max(abs(z1), abs(z2))
    # row coefficients (alpha)_k (beta)_k z^k / k!
    ak = [1.0]
    bl = [1.0]
    total = 0.0
    poch_g = 1.0
    small_streak = 0
    for n in range(max_diag):
        if n > 0:
            ak.append(ak[-1] * (spec.alpha1 + n - 1)
                      * (spec.beta1 + n - 1) * z1 / n)
            bl.append(bl[-1] * (spec.alpha2 + n - 1)
                      * (spec.beta2 + n - 1) * z2 / n)
            poch_g *= (spec.gamma + n - 1)
        diag = 0.0
        for k in range(n + 1):
            diag += ak[k] * bl[n - k]
        diag /= poch_g
        total += diag
        if abs(diag) <= tol * max(abs(total), 1e-300):
            small_streak += 1
            if small_streak >= 3 and n > 4:
                err = abs(diag) / max(1.0 - rho, 1e-3) \
                    + 4e-16 * abs(total)
                return EvalResult(total, err, Method.Series, n + 1)
        else:
            small_streak = 0
    raise NotConverged("double series stalled at (%g, %g)" % (z1, z2),
                       value=total, err=abs(diag))


def g_direct_2d(a1: float, a2: float, a3: float,
                b1: float, b2: float, b3: float, s: float,
                level: int = 5) -> float:
    """g(s) for q=3 by direct nested quadrature over the region
    t2*t3 > s, using only power functions.  Independent of the 2F1
    and F3 machinery; needs every b_i > a_i in the given pairing."""
    if not (b1 > a1 and b2 > a2 and b3 > a3):
        raise DomainError("needs b_i > a_i pairwise")
    if not 0.0 < s < 1.0:
        raise DomainError("s must lie in (0,1)")
    B13 = b1 + b3 - a1 - a3
    wn = de_nodes(level)
    xn = de_nodes(level)
    t2 = s + (1.0 - s) * wn.s
    # inner integral over x with weight x^(b1-a1-1) (1-x)^(b3-a3-1)
    base = 1.0 + xn.s[None, :] * (t2[:, None] / s - 1.0)
    log_core = -(b1 - a3) * np.log(base)
    log_fx = xn.log_w[None, :] + (b1 - a1 - 1.0) * xn.log_s[None, :] \
        + (b3 - a3 - 1.0) * xn.log_1ms[None, :] + log_core
    inner = np.exp(np.clip(log_fx, _LOG_CUT, None))
    inner[log_fx <= _LOG_CUT] = 0.0
    ix = inner.sum(axis=1)
    log_fw = wn.log_w + (B13 - 1.0) * wn.log_s \
        + (b2 - a2 - 1.0) * wn.log_1ms \
        + (a2 - b3) * np.log(t2) + np.log(np.maximum(ix, 1e-318))
    keep = log_fw > _LOG_CUT
    outer = float(np.sum(np.exp(log_fw[keep])))
    return s ** (a3 - b1) * (1.0 - s) ** (
        b1 + b2 + b3 - a1 - a2 - a3 - 1.0) * outer


def mc_reference(spec: HypSpec, x: float, n: int = 200_000,
                 seed: int = 0) -> tuple:
    """Monte-Carlo check of the cube representation for any q:
    the mean of (1 + x * prod(t_k))^(-sigma) with t_k Beta-distributed.
    Returns (estimate, standard_error); low accuracy by design."""
    a_sorted, b_sorted = _sorted_key(spec.a, spec.b)
    if not all(bk > ak > 0 for ak, bk in zip(a_sorted, b_sorted)):
        raise DomainError("need sorted b's to dominate sorted a's > 0")
    rng = np.random.default_rng(seed)
    prod = np.ones(n)
    for ak, bk in zip(a_sorted, b_sorted):
        prod *= rng.beta(ak, bk - ak, size=n)
    vals = (1.0 + x * prod) ** (-spec.sigma)
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(n))
