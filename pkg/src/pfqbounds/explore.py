"""Parameter sweeps probing the conjectured bounds, the relaxed-parameter
monotone ratio, and bound sharpness.

Parameter boxes are sampled with a seeded scrambled Halton sequence
rather than lattice grids, so a fixed budget covers the box more evenly.
Every per-point comparison carries an error estimate, and a point only
counts as a violation when its margin clears five times that estimate;
noise-level crossings are reported as inconclusive.  Each sweep embeds a
control sub-sweep drawn from the corresponding proven region, where any
violation is a bug in this package rather than a finding.

Reports serialize to JSON and flat CSV deterministically: identical
configs (including the seed) produce byte-identical files.  Wall-clock
runtime is kept on the report object but never serialized.
"""
from __future__ import annotations

import enum
import json
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .bounds import bound_pair, ratio_f_grid
from .errors import (DomainError, InvalidSpec, PfqError, PoleError,
                     ZeroError)
from .evaluate import evaluate_many
from .gammafn import gamma_ratio_log
from .params import BoundSource, HypSpec

_SCHEMA_VERSION = 1
_MAX_LISTED = 1000


class SweepTarget(enum.Enum):
    Conjecture1 = "Conjecture1"
    Conjecture2 = "Conjecture2"
    Thm1RelaxedParams = "Thm1RelaxedParams"
    BoundSharpness = "BoundSharpness"


@dataclass(frozen=True)
class SymbolRange:
    """One sampled symbol: a (lo, hi) box, optionally discretized to
    `count` equally spaced values, or an explicit value list."""
    lo: float = 0.0
    hi: float = 0.0
    count: int = 0          # 0 means continuous
    values: tuple = ()      # non-empty overrides lo/hi/count

    def __post_init__(self):
        if self.values:
            return
        if not self.lo < self.hi:
            raise InvalidSpec("symbol range needs lo < hi, got [%g, %g]"
                              % (self.lo, self.hi))
        if self.count < 0:
            raise InvalidSpec("count must be >= 0")

    def map_unit(self, u: np.ndarray) -> np.ndarray:
        """Map uniform [0,1) samples onto this symbol's domain."""
        if self.values:
            idx = np.minimum((u * len(self.values)).astype(int),
                             len(self.values) - 1)
            return np.asarray(self.values, dtype=float)[idx]
        if self.count == 1:
            return np.full_like(u, 0.5 * (self.lo + self.hi))
        if self.count > 1:
            idx = np.minimum((u * self.count).astype(int), self.count - 1)
            return self.lo + idx * (self.hi - self.lo) / (self.count - 1)
        return self.lo + u * (self.hi - self.lo)

    def to_dict(self) -> dict:
        if self.values:
            return {"values": list(self.values)}
        d = {"lo": self.lo, "hi": self.hi}
        if self.count:
            d["count"] = self.count
        return d

    @staticmethod
    def from_obj(obj, where: str) -> "SymbolRange":
        if isinstance(obj, (list, tuple)) and obj \
                and all(isinstance(v, (int, float)) for v in obj):
            return SymbolRange(values=tuple(float(v) for v in obj))
        if isinstance(obj, (int, float)):
            return SymbolRange(values=(float(obj),))
        if isinstance(obj, dict):
            if "values" in obj:
                extra = set(obj) - {"values"}
                if extra:
                    raise InvalidSpec("%s: unexpected keys %s"
                                      % (where, sorted(extra)))
                vals = obj["values"]
                if not isinstance(vals, list) or not vals:
                    raise InvalidSpec("%s: values must be a non-empty list"
                                      % where)
                return SymbolRange(values=tuple(float(v) for v in vals))
            extra = set(obj) - {"lo", "hi", "count"}
            if extra:
                raise InvalidSpec("%s: unexpected keys %s"
                                  % (where, sorted(extra)))
            try:
                return SymbolRange(lo=float(obj["lo"]), hi=float(obj["hi"]),
                                   count=int(obj.get("count", 0)))
            except KeyError as k:
                raise InvalidSpec("%s: missing key %s" % (where, k))
        raise InvalidSpec("%s: expected {lo, hi[, count]}, {values}, "
                          "a number, or a list" % where)


@dataclass(frozen=True)
class XGrid:
    lo: float
    hi: float
    count: int = 16
    scale: str = "log"

    def __post_init__(self):
        if self.count < 1:
            raise InvalidSpec("x grid count must be >= 1")
        if not self.lo < self.hi:
            raise InvalidSpec("x grid needs lo < hi")
        if self.scale not in ("linear", "log"):
            raise InvalidSpec("x grid scale must be 'linear' or 'log'")
        if self.scale == "log" and self.lo <= 0.0:
            raise InvalidSpec("log-scale x grid needs lo > 0")

    def nodes(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.lo])
        if self.scale == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "count": self.count,
                "scale": self.scale}

    @staticmethod
    def from_obj(obj, where: str) -> "XGrid":
        if not isinstance(obj, dict):
            raise InvalidSpec("%s: expected {lo, hi, count, scale}" % where)
        extra = set(obj) - {"lo", "hi", "count", "scale"}
        if extra:
            raise InvalidSpec("%s: unexpected keys %s" % (where, sorted(extra)))
        try:
            return XGrid(lo=float(obj["lo"]), hi=float(obj["hi"]),
                         count=int(obj.get("count", 16)),
                         scale=str(obj.get("scale", "log")))
        except KeyError as k:
            raise InvalidSpec("%s: missing key %s" % (where, k))


@dataclass(frozen=True)
class SweepConfig:
    target: SweepTarget
    q: int
    sigma: SymbolRange
    a: tuple          # q SymbolRange entries
    b: tuple          # q SymbolRange entries
    x: XGrid
    points: int = 10000
    tol: float = 1e-8
    seed: int = 20260101
    delta: SymbolRange = field(
        default_factory=lambda: SymbolRange(values=(1.0,)))
    control_points: int = 500
    # Restrict conjecture sweeps to points passing the small-x Taylor
    # admissibility condition (see the sweep docstrings).  Points
    # failing it are counterexamples to the unrestricted statements;
    # turning the filter off audits those statements literally.
    admissible_only: bool = True

    def __post_init__(self):
        if self.q < 1:
            raise InvalidSpec("q must be >= 1")
        if len(self.a) != self.q or len(self.b) != self.q:
            raise InvalidSpec("a and b must each list %d symbol ranges"
                              % self.q)
        if self.points < 1:
            raise InvalidSpec("points must be >= 1")
        if not self.tol > 0.0:
            raise InvalidSpec("tol must be > 0")

    def to_dict(self) -> dict:
        return {
            "target": self.target.value,
            "q": self.q,
            "sigma": self.sigma.to_dict(),
            "a": [r.to_dict() for r in self.a],
            "b": [r.to_dict() for r in self.b],
            "x": self.x.to_dict(),
            "points": self.points,
            "tol": self.tol,
            "seed": self.seed,
            "delta": self.delta.to_dict(),
            "control_points": self.control_points,
            "admissible_only": self.admissible_only,
        }

    @staticmethod
    def from_dict(d: dict) -> "SweepConfig":
        if not isinstance(d, dict):
            raise InvalidSpec("config root must be an object")
        known = {"target", "q", "sigma", "a", "b", "x", "points", "tol",
                 "seed", "delta", "control_points", "admissible_only"}
        extra = set(d) - known
        if extra:
            raise InvalidSpec("unknown config keys: %s" % sorted(extra))
        for key in ("target", "q", "sigma", "a", "b", "x"):
            if key not in d:
                raise InvalidSpec("config missing required key '%s'" % key)
        try:
            target = SweepTarget(d["target"])
        except ValueError:
            raise InvalidSpec(
                "target must be one of %s, got %r"
                % ([t.value for t in SweepTarget], d["target"]))
        q = int(d["q"])
        a_obj = d["a"] if isinstance(d["a"], list) else [d["a"]]
        b_obj = d["b"] if isinstance(d["b"], list) else [d["b"]]
        if isinstance(d["a"], list) and d["a"] \
                and all(isinstance(v, (int, float)) for v in d["a"]):
            # a flat numeric list for a/b means one fixed value per slot
            a_obj = [[v] for v in d["a"]]
        if isinstance(d["b"], list) and d["b"] \
                and all(isinstance(v, (int, float)) for v in d["b"]):
            b_obj = [[v] for v in d["b"]]
        kwargs = {}
        if "delta" in d:
            kwargs["delta"] = SymbolRange.from_obj(d["delta"], "delta")
        return SweepConfig(
            target=target,
            q=q,
            sigma=SymbolRange.from_obj(d["sigma"], "sigma"),
            a=tuple(SymbolRange.from_obj(o, "a[%d]" % i)
                    for i, o in enumerate(a_obj)),
            b=tuple(SymbolRange.from_obj(o, "b[%d]" % i)
                    for i, o in enumerate(b_obj)),
            x=XGrid.from_obj(d["x"], "x"),
            points=int(d.get("points", 10000)),
            tol=float(d.get("tol", 1e-8)),
            seed=int(d.get("seed", 20260101)),
            control_points=int(d.get("control_points", 500)),
            admissible_only=bool(d.get("admissible_only", True)),
            **kwargs,
        )


def config_from_file(path: str) -> SweepConfig:
    """Parse a JSON sweep config.  Syntax errors surface as InvalidSpec
    with the line and column; semantic errors as InvalidSpec naming the
    offending key."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidSpec(
                "config %s: line %d column %d: %s"
                % (path, exc.lineno, exc.colno, exc.msg)) from exc
    return SweepConfig.from_dict(data)


@dataclass
class SweepReport:
    config: SweepConfig
    target: SweepTarget
    points_evaluated: int = 0
    evaluations: int = 0
    holds: int = 0
    violations: list = field(default_factory=list)
    inconclusive: int = 0
    inconclusive_degenerate: int = 0
    skipped_constraints: int = 0
    skipped_inadmissible: int = 0
    failed_evaluations: int = 0
    nonpositive_f: int = 0
    min_margin: float = math.inf
    min_margin_point: dict | None = None
    extras: dict = field(default_factory=dict)
    control: dict | None = None
    rows: list = field(default_factory=list)
    runtime_seconds: float = 0.0

    @property
    def violation_count(self) -> int:
        return len(self.violations)

    def to_dict(self) -> dict:
        """JSON payload; excludes wall-clock runtime and raw rows so
        identical configs serialize to identical bytes."""
        d = {
            "schema_version": _SCHEMA_VERSION,
            "config": self.config.to_dict(),
            "target": self.target.value,
            "points_evaluated": self.points_evaluated,
            "evaluations": self.evaluations,
            "holds": self.holds,
            "violation_count": self.violation_count,
            "violations": self.violations[:_MAX_LISTED],
            "inconclusive": self.inconclusive,
            "inconclusive_degenerate": self.inconclusive_degenerate,
            "skipped_constraints": self.skipped_constraints,
            "skipped_inadmissible": self.skipped_inadmissible,
            "failed_evaluations": self.failed_evaluations,
            "nonpositive_f": self.nonpositive_f,
            "min_margin": _jnum(self.min_margin),
            "min_margin_point": self.min_margin_point,
            "extras": self.extras,
            "control": self.control,
        }
        return d


def _jnum(v: float):
    if v == math.inf:
        return "inf"
    if v == -math.inf:
        return "-inf"
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    return v


def _sample_matrix(cfg: SweepConfig, n: int, skip: int = 0) -> np.ndarray:
    """n joint samples over (sigma, a_1..a_q, b_1..b_q, delta), one
    Halton dimension per symbol, deterministic in the seed."""
    dims = 2 * cfg.q + 2
    sampler = qmc.Halton(d=dims, scramble=True, seed=cfg.seed)
    if skip:
        sampler.fast_forward(skip)
    u = sampler.random(n)
    cols = [cfg.sigma.map_unit(u[:, 0])]
    for i in range(cfg.q):
        cols.append(cfg.a[i].map_unit(u[:, 1 + i]))
    for i in range(cfg.q):
        cols.append(cfg.b[i].map_unit(u[:, 1 + cfg.q + i]))
    cols.append(cfg.delta.map_unit(u[:, 1 + 2 * cfg.q]))
    return np.column_stack(cols)


def _point_dict(sigma: float, a, b, extra: dict | None = None) -> dict:
    d = {"sigma": sigma, "a": list(a), "b": list(b)}
    if extra:
        d.update(extra)
    return d


def _classify(margin: float, err: float) -> str:
    if margin < -5.0 * err:
        return "violation"
    if margin > 5.0 * err:
        return "holds"
    return "inconclusive"


def _note_margin(report: SweepReport, margin: float, point: dict) -> None:
    if margin < report.min_margin:
        report.min_margin = margin
        report.min_margin_point = point


def _conjectured_upper_base(sigma: float, a, b) -> float:
    """x-coefficient of the conjectured upper bound: the product of
    gamma(a_i) gamma(b_i - sigma) / (gamma(b_i) gamma(a_i - sigma)),
    raised to 1/sigma.  The power makes the bound's large-x decay
    constant match the function's leading asymptotic term exactly and
    reduces to the proven product (a_i-1)/(b_i-1) at sigma = 1."""
    num = []
    den = []
    for ai, bi in zip(a, b):
        num.extend([ai, bi - sigma])
        den.extend([bi, ai - sigma])
    lg, sg = gamma_ratio_log(num, den)
    if sg <= 0.0 or not math.isfinite(lg):
        raise DomainError("coefficient is not a positive real here")
    return math.exp(lg / sigma)


def _eval_point(spec: HypSpec, xs: np.ndarray, tol: float):
    """(values, errors) arrays or None when evaluation fails."""
    try:
        return evaluate_many(spec, xs, tol=tol)
    except (PfqError, OverflowError):
        return None


def _row(idx, sigma, a, b, x, fval, ferr, lhs, rhs, margin, err, label,
         delta=None):
    r = {"index": idx, "sigma": sigma}
    for i, v in enumerate(a):
        r["a%d" % (i + 1)] = v
    for i, v in enumerate(b):
        r["b%d" % (i + 1)] = v
    if delta is not None:
        r["delta"] = delta
    r.update({"x": x, "f": fval, "f_err": ferr, "lhs": lhs, "rhs": rhs,
              "margin": margin, "err": err, "class": label})
    return r


def _sweep_lower_bound_target(cfg: SweepConfig,
                              report: SweepReport) -> None:
    """Shared engine for the conjectured lower bound: checks
    F > (1 + x prod(a/b))^(-sigma) at every admissible point."""
    xs = cfg.x.nodes()
    samples = _sample_matrix(cfg, cfg.points)
    for idx in range(samples.shape[0]):
        row = samples[idx]
        sigma = float(row[0])
        a = tuple(float(v) for v in row[1:1 + cfg.q])
        b = tuple(float(v) for v in row[1 + cfg.q:1 + 2 * cfg.q])
        if sigma <= 0.0 or min(a) <= 0.0 or min(b) <= 0.0 \
                or sum(b) - sum(a) <= 0.0:
            report.skipped_constraints += 1
            continue
        if cfg.admissible_only and not _admissible_lower(a, b):
            report.skipped_inadmissible += 1
            continue
        try:
            spec = HypSpec(sigma, a, b)
        except InvalidSpec:
            report.skipped_constraints += 1
            continue
        res = _eval_point(spec, xs, cfg.tol)
        if res is None:
            report.failed_evaluations += 1
            continue
        vals, errs = res
        report.points_evaluated += 1
        rho = _prod_ratio(a, b)
        for j, x in enumerate(xs):
            base = 1.0 + x * rho
            if base <= 0.0:
                report.skipped_constraints += 1
                continue
            fval = float(vals[j])
            ferr = float(errs[j])
            report.evaluations += 1
            if fval <= 0.0:
                report.nonpositive_f += 1
                continue
            bound = base ** (-sigma)
            margin = fval - bound
            err = ferr + 1e-14 * abs(bound)
            label = _classify(margin, err)
            point = _point_dict(sigma, a, b, {"x": float(x)})
            _note_margin(report, margin, point)
            _bump(report, label, point, fval, bound, margin, err)
            report.rows.append(_row(idx, sigma, a, b, float(x), fval,
                                    ferr, fval, bound, margin, err, label))


def _prod_ratio(a, b) -> float:
    r = 1.0
    for ai, bi in zip(a, b):
        r *= ai / bi
    return r


def _moment_condition(a, b) -> bool:
    """Second-moment necessary condition for the lower bound.

    Expanding both sides at x = 0 gives F - bound =
    sigma(sigma+1)(mu2 - mu1^2) x^2/2 + O(x^3), so the bound can only
    hold near zero when mu2 >= mu1^2, i.e. when
    prod(1 + 1/a_i) >= prod(1 + 1/b_i).  The sum constraint alone does
    not imply this: pushing one b_i far below the a's while another
    compensates the sum produces hard counterexamples."""
    lhs = 1.0
    rhs = 1.0
    for ai, bi in zip(a, b):
        lhs *= 1.0 + 1.0 / ai
        rhs *= 1.0 + 1.0 / bi
    return lhs >= rhs


def _admissible_lower(a, b) -> bool:
    """Admissibility screen for the conjectured lower bound.

    Combines the second-moment condition with the carrier condition
    min(a) <= min(b).  Neither follows from the sum constraint, and
    sampled counterexamples violate at least one of them: points that
    pass the moment test but have min(a) > min(b) can still dip below
    the bound at moderate x (the integral representation loses its
    nonnegative density exactly when the smallest numerator parameter
    leads)."""
    return _moment_condition(a, b) and min(a) <= min(b)


def _bump(report: SweepReport, label: str, point: dict, lhs: float,
          rhs: float, margin: float, err: float) -> None:
    if label == "holds":
        report.holds += 1
    elif label == "violation":
        report.violations.append({
            "parameters": point, "x": point.get("x"),
            "lhs": lhs, "rhs": rhs, "margin": margin, "err": err})
    else:
        report.inconclusive += 1


def sweep_conjecture1(cfg: SweepConfig) -> SweepReport:
    """Lower bound (1 + x prod a/b)^(-sigma) < F for sigma > 0 under the
    sum constraint sum(b - a) > 0, sampled beyond the pairwise-dominated
    region.  Points failing the constraints are skipped and counted;
    points where F <= 0 are logged separately.  With the default
    admissibility screen the sweep also requires the second-moment
    condition mu2 >= mu1^2 and the carrier condition min(a) <= min(b)
    (see _admissible_lower): without them the unrestricted statement
    is false, and the sweep will report those violations.  The control
    sub-sweep redraws points inside the proven region sigma >= 1,
    b_i > a_i > 0."""
    if cfg.target is not SweepTarget.Conjecture1:
        raise InvalidSpec("config target is %s" % cfg.target.value)
    t0 = time.perf_counter()
    report = SweepReport(config=cfg, target=cfg.target)
    _sweep_lower_bound_target(cfg, report)
    report.control = _control_lower_bound(cfg)
    report.runtime_seconds = time.perf_counter() - t0
    return report


def _control_lower_bound(cfg: SweepConfig) -> dict:
    """Proven-region control: sigma >= 1 and b_i > a_i > 0, where the
    lower bound is a theorem.  Any violation here is a bug."""
    n = min(cfg.control_points, cfg.points)
    samples = _sample_matrix(cfg, n, skip=cfg.points)
    xs = cfg.x.nodes()
    sub = SweepReport(config=cfg, target=cfg.target)
    for idx in range(samples.shape[0]):
        row = samples[idx]
        sigma = 1.0 + abs(float(row[0]))
        a = tuple(0.2 + abs(float(v)) for v in row[1:1 + cfg.q])
        b = tuple(ai + 0.1 + abs(float(v)) for ai, v in
                  zip(a, row[1 + cfg.q:1 + 2 * cfg.q]))
        spec = HypSpec(sigma, a, b)
        res = _eval_point(spec, xs, cfg.tol)
        if res is None:
            sub.failed_evaluations += 1
            continue
        vals, errs = res
        sub.points_evaluated += 1
        rho = _prod_ratio(a, b)
        for j, x in enumerate(xs):
            fval = float(vals[j])
            ferr = float(errs[j])
            sub.evaluations += 1
            bound = (1.0 + x * rho) ** (-sigma)
            margin = fval - bound
            err = ferr + 1e-14 * abs(bound)
            label = _classify(margin, err)
            point = _point_dict(sigma, a, b, {"x": float(x)})
            _note_margin(sub, margin, point)
            _bump(sub, label, point, fval, bound, margin, err)
    return {
        "region": "sigma >= 1, b_i > a_i > 0",
        "points_evaluated": sub.points_evaluated,
        "evaluations": sub.evaluations,
        "holds": sub.holds,
        "violation_count": sub.violation_count,
        "violations": sub.violations[:_MAX_LISTED],
        "inconclusive": sub.inconclusive,
        "failed_evaluations": sub.failed_evaluations,
        "min_margin": _jnum(sub.min_margin),
    }


def sweep_conjecture2(cfg: SweepConfig) -> SweepReport:
    """Upper bound (1 + x c)^(-sigma) with the asymptotically sharp
    coefficient c = [prod gamma(a_i) gamma(b_i-sigma) / (gamma(b_i)
    gamma(a_i-sigma))]^(1/sigma), for 0 < sigma <= min(a),
    sum(b - a) > 0, x > 0.  Near sigma = min(a) the coefficient's gamma
    pole degenerates the bound to 1; such points are classified
    inconclusive-degenerate.  The default admissibility screen requires
    c <= mu1 (the bound must start above the function at x = 0+) and
    min(a) <= min(b).  Records the sharpness ratio upper/F at the
    largest grid x."""
    if cfg.target is not SweepTarget.Conjecture2:
        raise InvalidSpec("config target is %s" % cfg.target.value)
    t0 = time.perf_counter()
    report = SweepReport(config=cfg, target=cfg.target)
    xs = cfg.x.nodes()
    if xs[0] <= 0.0:
        raise InvalidSpec("this sweep needs x > 0")
    samples = _sample_matrix(cfg, cfg.points)
    sharp: list = []
    for idx in range(samples.shape[0]):
        row = samples[idx]
        sigma = float(row[0])
        a = tuple(float(v) for v in row[1:1 + cfg.q])
        b = tuple(float(v) for v in row[1 + cfg.q:1 + 2 * cfg.q])
        if sigma <= 0.0 or min(a) <= 0.0 or min(b) <= 0.0 \
                or sum(b) - sum(a) <= 0.0 or sigma > min(a):
            report.skipped_constraints += 1
            continue
        if min(a) - sigma < 1e-8 or any(
                abs((ai - sigma) - round(ai - sigma)) < 1e-8
                and ai - sigma < 0.5 for ai in a):
            report.inconclusive_degenerate += 1
            continue
        try:
            spec = HypSpec(sigma, a, b)
            rho = _conjectured_upper_base(sigma, a, b)
        except (InvalidSpec, DomainError, PoleError, ZeroError):
            report.skipped_constraints += 1
            continue
        if cfg.admissible_only and (rho > _prod_ratio(a, b)
                                    or min(a) > min(b)):
            # the bound starts above the function at x = 0+ only when
            # its coefficient does not exceed the first moment; the
            # carrier condition min(a) <= min(b) screens out the
            # geometries where the approach to the asymptote overshoots
            report.skipped_inadmissible += 1
            continue
        res = _eval_point(spec, xs, cfg.tol)
        if res is None:
            report.failed_evaluations += 1
            continue
        vals, errs = res
        report.points_evaluated += 1
        for j, x in enumerate(xs):
            fval = float(vals[j])
            ferr = float(errs[j])
            base = 1.0 + x * rho
            if base <= 0.0:
                report.skipped_constraints += 1
                continue
            report.evaluations += 1
            if fval <= 0.0:
                report.nonpositive_f += 1
                continue
            bound = base ** (-sigma)
            margin = bound - fval
            err = ferr + 1e-14 * abs(bound)
            label = _classify(margin, err)
            point = _point_dict(sigma, a, b, {"x": float(x)})
            _note_margin(report, margin, point)
            _bump(report, label, point, bound, fval, margin, err)
            report.rows.append(_row(idx, sigma, a, b, float(x), fval,
                                    ferr, bound, fval, margin, err, label))
            if j == len(xs) - 1 and fval > 0.0:
                sharp.append(bound / fval)
    if sharp:
        arr = np.asarray(sharp)
        report.extras["sharpness_at_xmax"] = {
            "x": float(xs[-1]),
            "count": int(arr.size),
            "min": float(arr.min()),
            "median": float(np.median(arr)),
            "max": float(arr.max()),
        }
    report.control = _control_upper_sigma1(cfg)
    report.runtime_seconds = time.perf_counter() - t0
    return report


def _control_upper_sigma1(cfg: SweepConfig) -> dict:
    """Control at sigma = 1 with b_i > a_i > 1: the gamma recurrence
    collapses the coefficient to prod (a_i - 1)/(b_i - 1) and the bound
    is the proven pair's upper member."""
    n = min(cfg.control_points, cfg.points)
    samples = _sample_matrix(cfg, n, skip=cfg.points)
    xs = cfg.x.nodes()
    sub = SweepReport(config=cfg, target=cfg.target)
    coeff_dev_max = 0.0
    for idx in range(samples.shape[0]):
        row = samples[idx]
        a = tuple(1.05 + abs(float(v)) for v in row[1:1 + cfg.q])
        b = tuple(ai + 0.1 + abs(float(v)) for ai, v in
                  zip(a, row[1 + cfg.q:1 + 2 * cfg.q]))
        sigma = 1.0
        spec = HypSpec(sigma, a, b)
        rho = _conjectured_upper_base(sigma, a, b)
        rho_thm = _prod_ratio([ai - 1.0 for ai in a],
                              [bi - 1.0 for bi in b])
        coeff_dev_max = max(coeff_dev_max,
                            abs(rho - rho_thm) / abs(rho_thm))
        res = _eval_point(spec, xs, cfg.tol)
        if res is None:
            sub.failed_evaluations += 1
            continue
        vals, errs = res
        sub.points_evaluated += 1
        for j, x in enumerate(xs):
            fval = float(vals[j])
            ferr = float(errs[j])
            sub.evaluations += 1
            bound = (1.0 + x * rho) ** (-sigma)
            margin = bound - fval
            err = ferr + 1e-14 * abs(bound)
            label = _classify(margin, err)
            point = _point_dict(sigma, a, b, {"x": float(x)})
            _note_margin(sub, margin, point)
            _bump(sub, label, point, bound, fval, margin, err)
    return {
        "region": "sigma = 1, b_i > a_i > 1 (proven upper bound)",
        "coefficient_identity_max_dev": coeff_dev_max,
        "points_evaluated": sub.points_evaluated,
        "evaluations": sub.evaluations,
        "holds": sub.holds,
        "violation_count": sub.violation_count,
        "violations": sub.violations[:_MAX_LISTED],
        "inconclusive": sub.inconclusive,
        "failed_evaluations": sub.failed_evaluations,
        "min_margin": _jnum(sub.min_margin),
    }


def sweep_thm1_relaxed(cfg: SweepConfig) -> SweepReport:
    """Monotonicity of the shifted-over-base ratio on parameter points
    that deliberately break the pairwise b_k > a_k ordering while
    keeping the function evaluable.  Each point gets a verdict:
    monotone in the direction the sign of sigma dictates, a violation,
    or inconclusive.  Every sampled point is re-run with sigma negated
    to confirm the direction flips."""
    if cfg.target is not SweepTarget.Thm1RelaxedParams:
        raise InvalidSpec("config target is %s" % cfg.target.value)
    t0 = time.perf_counter()
    report = SweepReport(config=cfg, target=cfg.target)
    xs = cfg.x.nodes()
    samples = _sample_matrix(cfg, cfg.points)
    flip_consistent = 0
    flip_checked = 0
    for idx in range(samples.shape[0]):
        row = samples[idx]
        sigma = float(row[0])
        a = tuple(float(v) for v in row[1:1 + cfg.q])
        b = tuple(float(v) for v in row[1 + cfg.q:1 + 2 * cfg.q])
        delta = float(row[1 + 2 * cfg.q])
        if sigma == 0.0 or min(a) <= 0.0 or min(b) <= 0.0 or delta <= 0.0:
            report.skipped_constraints += 1
            continue
        verdict = _monotone_verdict(sigma, a, b, delta, xs, cfg.tol, report,
                                    idx, record_rows=True)
        if verdict is None:
            continue
        report.points_evaluated += 1
        other = _monotone_verdict(-sigma, a, b, delta, xs, cfg.tol, None,
                                  idx, record_rows=False)
        if other is not None and verdict != "inconclusive" \
                and other != "inconclusive":
            flip_checked += 1
            if (verdict == "monotone") == (other == "monotone"):
                flip_consistent += 1
    report.extras["sign_flip"] = {
        "checked": flip_checked, "consistent": flip_consistent}
    report.control = _control_monotone(cfg)
    report.runtime_seconds = time.perf_counter() - t0
    return report


def _monotone_verdict(sigma, a, b, delta, xs, tol, report, idx,
                      record_rows):
    """One ratio-monotonicity verdict; updates `report` when given."""
    try:
        spec = HypSpec(sigma, a, b)
        vals, errs = ratio_f_grid(spec, delta, xs, tol=tol)
    except (PfqError, OverflowError):
        if report is not None:
            report.failed_evaluations += 1
        return None
    decreasing = sigma > 0.0
    worst = math.inf
    verdict = "monotone"
    for j in range(len(xs) - 1):
        step = vals[j] - vals[j + 1] if decreasing \
            else vals[j + 1] - vals[j]
        err = float(errs[j] + errs[j + 1])
        label = _classify(step, err)
        if report is not None:
            report.evaluations += 1
            point = _point_dict(sigma, a, b, {
                "delta": delta, "x_from": float(xs[j]),
                "x_to": float(xs[j + 1])})
            _note_margin(report, step, point)
            if label == "violation":
                report.violations.append({
                    "parameters": point, "x": float(xs[j + 1]),
                    "lhs": float(vals[j]), "rhs": float(vals[j + 1]),
                    "margin": step, "err": err})
                verdict = "violation"
            elif label == "inconclusive" and verdict == "monotone":
                verdict = "inconclusive"
            if record_rows:
                report.rows.append(_row(
                    idx, sigma, a, b, float(xs[j + 1]), float(vals[j + 1]),
                    float(errs[j + 1]), float(vals[j]), float(vals[j + 1]),
                    step, err, label, delta=delta))
        else:
            if label == "violation":
                verdict = "violation"
            elif label == "inconclusive" and verdict == "monotone":
                verdict = "inconclusive"
        worst = min(worst, step)
    if report is not None:
        if verdict == "monotone":
            report.holds += 1
        elif verdict == "inconclusive":
            report.inconclusive += 1
    return verdict


def _control_monotone(cfg: SweepConfig) -> dict:
    """Proven region b_i > a_i > 0: ratio must be monotone."""
    n = min(cfg.control_points, cfg.points)
    samples = _sample_matrix(cfg, n, skip=cfg.points)
    xs = cfg.x.nodes()
    sub = SweepReport(config=cfg, target=cfg.target)
    monotone = 0
    for idx in range(samples.shape[0]):
        row = samples[idx]
        sigma = 0.2 + abs(float(row[0]))
        a = tuple(0.2 + abs(float(v)) for v in row[1:1 + cfg.q])
        b = tuple(ai + 0.1 + abs(float(v)) for ai, v in
                  zip(a, row[1 + cfg.q:1 + 2 * cfg.q]))
        delta = max(float(row[1 + 2 * cfg.q]), 0.25)
        verdict = _monotone_verdict(sigma, a, b, delta, xs, cfg.tol, sub,
                                    idx, record_rows=False)
        if verdict is None:
            continue
        sub.points_evaluated += 1
        if verdict == "monotone":
            monotone += 1
    return {
        "region": "sigma > 0, b_i > a_i > 0, delta > 0",
        "points_evaluated": sub.points_evaluated,
        "monotone": monotone,
        "violation_count": sub.violation_count,
        "violations": sub.violations[:_MAX_LISTED],
        "inconclusive": sub.inconclusive,
        "failed_evaluations": sub.failed_evaluations,
        "min_margin": _jnum(sub.min_margin),
    }


_SHARPNESS_SOURCES = (BoundSource.Thm2, BoundSource.Thm3Jensen,
                      BoundSource.Thm4Jensen, BoundSource.LukeSigma,
                      BoundSource.Carlson, BoundSource.Q1NegX,
                      BoundSource.Convergents)


def _source_applicable(source: BoundSource, spec: HypSpec) -> bool:
    """Whether a bound family even speaks about this spec: the product
    pair and the convergent chain are statements about sigma = 1, and
    the q = 1 families need a single parameter pair."""
    if source in (BoundSource.Thm2, BoundSource.Convergents) \
            and spec.sigma != 1.0:
        return False
    if source in (BoundSource.Carlson, BoundSource.Q1NegX,
                  BoundSource.Convergents) and spec.q != 1:
        return False
    return True


def sweep_bound_sharpness(cfg: SweepConfig) -> SweepReport:
    """Sandwich audit across the closed-form bound families: at each
    sampled point and grid x, every bound that declares itself valid is
    checked against the evaluated function, and the tightest valid
    lower/upper bounds are recorded.  Violations by declared-valid
    bounds are build-breaking by definition, so this target doubles as
    its own control."""
    if cfg.target is not SweepTarget.BoundSharpness:
        raise InvalidSpec("config target is %s" % cfg.target.value)
    t0 = time.perf_counter()
    report = SweepReport(config=cfg, target=cfg.target)
    xs = cfg.x.nodes()
    samples = _sample_matrix(cfg, cfg.points)
    per_source: dict = {s.value: {"checked": 0, "violations": 0,
                                  "tightest_lower": 0, "tightest_upper": 0}
                        for s in _SHARPNESS_SOURCES}
    gap_lo: list = []
    gap_up: list = []
    for idx in range(samples.shape[0]):
        row = samples[idx]
        sigma = float(row[0])
        a = tuple(float(v) for v in row[1:1 + cfg.q])
        b = tuple(float(v) for v in row[1 + cfg.q:1 + 2 * cfg.q])
        if sigma <= 0.0 or min(a) <= 0.0 or min(b) <= 0.0:
            report.skipped_constraints += 1
            continue
        try:
            spec = HypSpec(sigma, a, b)
        except InvalidSpec:
            report.skipped_constraints += 1
            continue
        res = _eval_point(spec, xs, cfg.tol)
        if res is None:
            report.failed_evaluations += 1
            continue
        vals, errs = res
        report.points_evaluated += 1
        for j, x in enumerate(xs):
            fval = float(vals[j])
            ferr = float(errs[j])
            report.evaluations += 1
            if fval <= 0.0:
                report.nonpositive_f += 1
                continue
            best_lo = (-math.inf, None)
            best_up = (math.inf, None)
            for source in _SHARPNESS_SOURCES:
                if not _source_applicable(source, spec):
                    continue
                try:
                    pair = bound_pair(source, spec, float(x))
                except (PfqError, OverflowError):
                    continue
                stats = per_source[source.value]
                if pair.lower_valid and math.isfinite(pair.lower):
                    stats["checked"] += 1
                    margin = fval - pair.lower
                    err = ferr + 1e-14 * abs(pair.lower)
                    label = _classify(margin, err)
                    point = _point_dict(sigma, a, b, {
                        "x": float(x), "source": source.value,
                        "side": "lower"})
                    _note_margin(report, margin, point)
                    if label == "violation":
                        stats["violations"] += 1
                    _bump(report, label, point, fval, pair.lower,
                          margin, err)
                    if pair.lower > best_lo[0]:
                        best_lo = (pair.lower, source)
                if pair.upper_valid and math.isfinite(pair.upper):
                    stats["checked"] += 1
                    margin = pair.upper - fval
                    err = ferr + 1e-14 * abs(pair.upper)
                    label = _classify(margin, err)
                    point = _point_dict(sigma, a, b, {
                        "x": float(x), "source": source.value,
                        "side": "upper"})
                    _note_margin(report, margin, point)
                    if label == "violation":
                        stats["violations"] += 1
                    _bump(report, label, point, pair.upper, fval,
                          margin, err)
                    if pair.upper < best_up[0]:
                        best_up = (pair.upper, source)
            if best_lo[1] is not None:
                per_source[best_lo[1].value]["tightest_lower"] += 1
                gap_lo.append((fval - best_lo[0]) / fval)
            if best_up[1] is not None:
                per_source[best_up[1].value]["tightest_upper"] += 1
                gap_up.append((best_up[0] - fval) / fval)
            report.rows.append(_row(
                idx, sigma, a, b, float(x), fval, ferr,
                best_lo[0] if best_lo[1] else float("nan"),
                best_up[0] if best_up[1] else float("nan"),
                float("nan"), ferr, "audit"))
    report.extras["per_source"] = per_source
    if gap_lo:
        arr = np.asarray(gap_lo)
        report.extras["lower_gap"] = {"median": float(np.median(arr)),
                                      "max": float(arr.max())}
    if gap_up:
        arr = np.asarray(gap_up)
        report.extras["upper_gap"] = {"median": float(np.median(arr)),
                                      "max": float(arr.max())}
    report.runtime_seconds = time.perf_counter() - t0
    return report


_TARGET_RUNNERS = {
    SweepTarget.Conjecture1: sweep_conjecture1,
    SweepTarget.Conjecture2: sweep_conjecture2,
    SweepTarget.Thm1RelaxedParams: sweep_thm1_relaxed,
    SweepTarget.BoundSharpness: sweep_bound_sharpness,
}


def run_sweep(cfg: SweepConfig) -> SweepReport:
    return _TARGET_RUNNERS[cfg.target](cfg)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_report_json(report: SweepReport, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_report_csv(report: SweepReport, path: str) -> None:
    """Flat per-evaluation margins with a header row; column set is
    fixed by the target so identical configs give identical bytes."""
    rows = report.rows
    if rows:
        cols = list(rows[0].keys())
    else:
        cols = ["index", "sigma", "x", "f", "f_err", "lhs", "rhs",
                "margin", "err", "class"]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(cols) + "\n")
        for r in rows:
            fh.write(",".join(_fmt(r.get(c, "")) for c in cols) + "\n")
