"""Command-line front end: eval, bounds, verify, sweep.

Exit codes are stable: 0 success, 1 usage or config error, 2 domain
error, 3 non-convergence.  Diagnostics go to stderr only; with --json
each command writes a single schema-versioned record to stdout whose
numeric fields round-trip through their decimal text exactly.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .bounds import bound_pair, ratio_f_grid
from .density import density_q1, density_q2, density_q3, stieltjes_eval
from .errors import (DomainError, InvalidSpec, NearIntegerDifference,
                     NotConverged, PfqError, PoleError, UnsupportedQ)
from .evaluate import evaluate
from .explore import (config_from_file, run_sweep, write_report_csv,
                      write_report_json)
from .identities import thomae_first_check, thomae_second_check
from .params import BoundSource, HypSpec, Method, ThomaeInstance

SCHEMA_VERSION = 1


def output_schema() -> dict:
    """The shipped JSON schema that --json records validate against."""
    from importlib import resources
    ref = resources.files("pfqbounds").joinpath("output_schema.json")
    with ref.open("r", encoding="utf-8") as fh:
        return json.load(fh)


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_NOCONV = 3


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print("%s: error: %s" % (self.prog, message), file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _float_list(text: str):
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            "expected a comma-separated list of decimals, got %r" % text)
    if not values:
        raise argparse.ArgumentTypeError("empty parameter list")
    return values


def _jsonable(obj):
    """Recursively make a record JSON-safe; non-finite floats become
    None since strict JSON has no tokens for them."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _emit(record: dict, as_json: bool, lines) -> None:
    if as_json:
        print(json.dumps(_jsonable(record), sort_keys=True,
                         allow_nan=False))
    else:
        for line in lines:
            print(line)


def _fmt(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, (np.floating, np.integer)):
        value = value.item()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _record(command: str, inputs: dict, status: int) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command,
            "inputs": inputs, "exit_status": status}


def _fail(args, record: dict, message: str, status: int) -> int:
    print("error: %s" % message, file=sys.stderr)
    record["exit_status"] = status
    record["error"] = message
    if args.json:
        print(json.dumps(_jsonable(record), sort_keys=True,
                         allow_nan=False))
    return status


def cmd_eval(args) -> int:
    inputs = {"sigma": args.sigma, "a": list(args.a), "b": list(args.b),
              "x": args.x, "method": args.method, "tol": args.tol}
    record = _record("eval", inputs, EXIT_OK)
    try:
        spec = HypSpec(args.sigma, args.a, args.b)
    except InvalidSpec as exc:
        return _fail(args, record, str(exc), EXIT_DOMAIN)
    method = None if args.method == "auto" else Method(args.method)
    try:
        res = evaluate(spec, args.x, tol=args.tol, method=method)
    except (DomainError, InvalidSpec, UnsupportedQ) as exc:
        return _fail(args, record, str(exc), EXIT_DOMAIN)
    except NotConverged as exc:
        return _fail(args, record, str(exc), EXIT_NOCONV)
    record["outputs"] = {"value": res.value}
    record["error_estimate"] = res.abs_err_estimate
    record["method"] = res.method.value
    _emit(record, args.json, [
        "value = %s" % _fmt(res.value),
        "error estimate = %s" % _fmt(res.abs_err_estimate),
        "method = %s" % res.method.value,
    ])
    return EXIT_OK


def cmd_bounds(args) -> int:
    inputs = {"source": args.source, "sigma": args.sigma,
              "a": list(args.a), "b": list(args.b), "x": args.x,
              "order": args.order, "tol": args.tol}
    record = _record("bounds", inputs, EXIT_OK)
    try:
        spec = HypSpec(args.sigma, args.a, args.b)
        pair = bound_pair(BoundSource(args.source), spec, args.x,
                          order=args.order)
    except (InvalidSpec, DomainError) as exc:
        return _fail(args, record, str(exc), EXIT_DOMAIN)
    except NotConverged as exc:
        return _fail(args, record, str(exc), EXIT_NOCONV)
    value = err = None
    try:
        res = evaluate(spec, args.x, tol=args.tol)
        value, err = res.value, res.abs_err_estimate
    except PfqError as exc:
        print("warning: no evaluator available for the sandwich check: "
              "%s" % exc, file=sys.stderr)
    if value is None or not (pair.lower_valid or pair.upper_valid):
        verdict = "N/A"
    else:
        slack = 5.0 * err
        ok = True
        if pair.lower_valid and not value >= pair.lower - slack:
            ok = False
        if pair.upper_valid and not value <= pair.upper + slack:
            ok = False
        verdict = "PASS" if ok else "FAIL"
    record["outputs"] = {
        "lower": pair.lower, "upper": pair.upper,
        "lower_valid": pair.lower_valid, "upper_valid": pair.upper_valid,
        "valid": pair.valid, "value": value, "verdict": verdict,
    }
    record["error_estimate"] = err
    _emit(record, args.json, [
        "source = %s" % args.source,
        "lower = %s (%s)" % (_fmt(pair.lower),
                             "valid" if pair.lower_valid else "invalid"),
        "upper = %s (%s)" % (_fmt(pair.upper),
                             "valid" if pair.upper_valid else "invalid"),
        "value = %s" % _fmt(value),
        "verdict = %s" % verdict,
    ])
    return EXIT_OK


def _draw_thomae(rng) -> ThomaeInstance:
    """One structurally safe instance: positive parameters, margin
    d+e-a-b-c well inside (0, 2), c-b kept away from integers, and
    the transformed denominator parameters kept positive."""
    for _ in range(200):
        a = float(rng.uniform(0.1, 1.9))
        if abs(a - 1.0) < 0.05:
            continue
        b = float(rng.uniform(0.2, 2.0))
        c = b + float(rng.uniform(0.1, 0.85))
        m = float(rng.uniform(0.2, 1.5))
        total = a + b + c + m
        d = float(rng.uniform(0.3, total - 0.3))
        e = total - d
        wd = d - a - c + 1.0
        we = e - a - c + 1.0
        if wd < 0.1 or we < 0.1:
            continue
        return ThomaeInstance(a=a, b=b, c=c, d=d, e=e)
    raise DomainError("could not draw a safe unit-argument instance")


def _verify_thomae(count: int, seed: int, tol: float) -> dict:
    rng = np.random.default_rng(seed)
    npass = nfail = nincon = 0
    failures = []
    for _ in range(count):
        try:
            inst = _draw_thomae(rng)
            first = thomae_first_check(inst, tol=tol)
            second = thomae_second_check(inst, tol=max(tol, 1e-8))
        except (NearIntegerDifference, PoleError, DomainError):
            nincon += 1
            continue
        if first["passed"] and second["passed"]:
            npass += 1
        else:
            nfail += 1
            failures.append({
                "instance": {"a": inst.a, "b": inst.b, "c": inst.c,
                             "d": inst.d, "e": inst.e},
                "first_deviation": first["deviation"],
                "second_deviation": second["deviation"],
            })
    return {"pass": npass, "fail": nfail, "inconclusive": nincon,
            "failures": failures[:20]}


def _draw_pairwise_spec(rng, q: int, sigma: float = None) -> HypSpec:
    a = tuple(float(v) for v in rng.uniform(0.3, 2.5, size=q))
    b = tuple(ai + float(g) for ai, g in
              zip(a, rng.uniform(0.2, 1.5, size=q)))
    if sigma is None:
        sigma = float(rng.uniform(0.3, 2.5))
    return HypSpec(sigma, a, b)


def _verify_stieltjes(count: int, seed: int, tol: float) -> dict:
    """Normalization (the weight integrates to one) and invariance of
    the bare density factor under a simultaneous shift of every
    parameter."""
    rng = np.random.default_rng(seed)
    npass = nfail = nincon = 0
    failures = []
    for i in range(count):
        q = 1 + i % 3
        try:
            spec = _draw_pairwise_spec(rng, q)
            norm = stieltjes_eval(spec, 0.0)
            s = float(rng.uniform(0.05, 0.95))
            delta = float(rng.uniform(0.1, 1.0))
            shifted_a = tuple(v + delta for v in spec.a)
            shifted_b = tuple(v + delta for v in spec.b)
            if q == 1:
                g0 = density_q1(spec.a[0], spec.b[0], s).g_value
                g1 = density_q1(shifted_a[0], shifted_b[0], s).g_value
            elif q == 2:
                g0 = density_q2(*spec.a, *spec.b, s).g_value
                g1 = density_q2(*shifted_a, *shifted_b, s).g_value
            else:
                g0 = density_q3(*spec.a, *spec.b, s).g_value
                g1 = density_q3(*shifted_a, *shifted_b, s).g_value
        except (DomainError, NotConverged, PoleError):
            nincon += 1
            continue
        norm_dev = abs(norm.value - 1.0)
        shift_dev = abs(g0 - g1) / max(abs(g0), abs(g1), 1e-300)
        if norm_dev <= max(tol, 10.0 * norm.abs_err_estimate) \
                and shift_dev <= 100.0 * tol:
            npass += 1
        else:
            nfail += 1
            failures.append({
                "sigma": spec.sigma, "a": list(spec.a), "b": list(spec.b),
                "normalization_deviation": norm_dev,
                "shift_deviation": shift_dev,
            })
    return {"pass": npass, "fail": nfail, "inconclusive": nincon,
            "failures": failures[:20]}


def _verify_monotone(count: int, seed: int, tol: float) -> dict:
    """Shifted-over-unshifted ratio sampled on a log grid must fall for
    positive sigma and rise for negative sigma inside the pairwise
    region."""
    rng = np.random.default_rng(seed)
    xs = np.geomspace(0.05, 20.0, 12)
    npass = nfail = nincon = 0
    failures = []
    for i in range(count):
        sign = 1.0 if i % 2 == 0 else -1.0
        try:
            spec = _draw_pairwise_spec(
                rng, 1 + i % 2, sigma=sign * float(rng.uniform(0.3, 2.5)))
            delta = float(rng.uniform(0.1, 1.2))
            vals, errs = ratio_f_grid(spec, delta, xs, tol=tol)
        except (DomainError, NotConverged, PoleError):
            nincon += 1
            continue
        steps = np.diff(vals) * sign
        slack = 5.0 * (errs[1:] + errs[:-1]) + 10.0 * tol
        if np.all(steps <= slack):
            npass += 1
        else:
            nfail += 1
            failures.append({
                "sigma": spec.sigma, "a": list(spec.a), "b": list(spec.b),
                "delta": delta,
                "worst_step": float((steps - slack).max()),
            })
    return {"pass": npass, "fail": nfail, "inconclusive": nincon,
            "failures": failures[:20]}


_SUITES = {
    "thomae": _verify_thomae,
    "stieltjes": _verify_stieltjes,
    "monotone": _verify_monotone,
}


def cmd_verify(args) -> int:
    inputs = {"suite": args.suite, "count": args.count,
              "seed": args.seed, "tol": args.tol}
    record = _record("verify", inputs, EXIT_OK)
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    suites = {}
    for offset, name in enumerate(names):
        suites[name] = _SUITES[name](args.count, args.seed + offset,
                                     args.tol)
    total_pass = sum(s["pass"] for s in suites.values())
    total_fail = sum(s["fail"] for s in suites.values())
    total_incon = sum(s["inconclusive"] for s in suites.values())
    status = EXIT_OK if total_fail == 0 else EXIT_NOCONV
    record["exit_status"] = status
    record["outputs"] = {"suites": suites, "pass": total_pass,
                         "fail": total_fail,
                         "inconclusive": total_incon}
    lines = []
    for name in names:
        s = suites[name]
        lines.append("suite %s: %d pass, %d fail, %d inconclusive"
                     % (name, s["pass"], s["fail"], s["inconclusive"]))
    lines.append("total: %d/%d pass (%d inconclusive)"
                 % (total_pass, total_pass + total_fail, total_incon))
    _emit(record, args.json, lines)
    if total_fail:
        print("error: %d verification case(s) failed" % total_fail,
              file=sys.stderr)
    return status


def cmd_sweep(args) -> int:
    inputs = {"config": args.config, "out": args.out}
    record = _record("sweep", inputs, EXIT_OK)
    try:
        cfg = config_from_file(args.config)
    except (InvalidSpec, OSError) as exc:
        return _fail(args, record, str(exc), EXIT_USAGE)
    try:
        report = run_sweep(cfg)
    except (InvalidSpec, DomainError) as exc:
        return _fail(args, record, str(exc), EXIT_DOMAIN)
    os.makedirs(args.out, exist_ok=True)
    json_path = os.path.join(args.out, "report.json")
    csv_path = os.path.join(args.out, "report.csv")
    write_report_json(report, json_path)
    write_report_csv(report, csv_path)
    if report.failed_evaluations:
        print("warning: %d point(s) failed to evaluate and were skipped"
              % report.failed_evaluations, file=sys.stderr)
    record["outputs"] = {
        "target": cfg.target.value,
        "points_evaluated": report.points_evaluated,
        "evaluations": report.evaluations,
        "holds": report.holds,
        "violations": len(report.violations),
        "inconclusive": report.inconclusive,
        "min_margin": report.min_margin,
        "json_report": json_path,
        "csv_report": csv_path,
    }
    _emit(record, args.json, [
        "target = %s" % cfg.target.value,
        "points evaluated = %d" % report.points_evaluated,
        "evaluations = %d" % report.evaluations,
        "holds = %d" % report.holds,
        "violations = %d" % len(report.violations),
        "min margin = %s" % _fmt(report.min_margin),
        "wrote %s and %s" % (json_path, csv_path),
    ])
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(
        prog="pfqbounds",
        description="Evaluate F(sigma,(a);(b);-x), its two-sided "
                    "bounds, verification suites, and parameter sweeps.")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_eval = sub.add_parser("eval", help="evaluate the function")
    p_eval.add_argument("--sigma", type=float, required=True)
    p_eval.add_argument("--a", type=_float_list, required=True,
                        metavar="A1,A2,...")
    p_eval.add_argument("--b", type=_float_list, required=True,
                        metavar="B1,B2,...")
    p_eval.add_argument("--x", type=float, required=True)
    p_eval.add_argument("--method", default="auto",
                        choices=["auto", "series", "cf", "stieltjes",
                                 "asymptotic"])
    p_eval.add_argument("--tol", type=float, default=1e-10)
    p_eval.add_argument("--json", action="store_true")
    p_eval.set_defaults(func=cmd_eval)

    p_bounds = sub.add_parser("bounds", help="two-sided bounds")
    p_bounds.add_argument("--source", required=True,
                          choices=[s.value for s in BoundSource])
    p_bounds.add_argument("--sigma", type=float, default=1.0)
    p_bounds.add_argument("--a", type=_float_list, required=True,
                          metavar="A1,A2,...")
    p_bounds.add_argument("--b", type=_float_list, required=True,
                          metavar="B1,B2,...")
    p_bounds.add_argument("--x", type=float, required=True)
    p_bounds.add_argument("--order", type=int, default=2,
                          help="convergent order for source=convergents")
    p_bounds.add_argument("--tol", type=float, default=1e-10)
    p_bounds.add_argument("--json", action="store_true")
    p_bounds.set_defaults(func=cmd_bounds)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("--suite", required=True,
                          choices=["thomae", "stieltjes", "monotone",
                                   "all"])
    p_verify.add_argument("--count", type=int, default=20)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--tol", type=float, default=1e-8)
    p_verify.add_argument("--json", action="store_true")
    p_verify.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="run a sweep from a config")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--json", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
