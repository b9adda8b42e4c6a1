"""Command-line front-end: norm evaluation, operator probes, verification suites.

Exit codes: 0 success (all asserted checks pass), 1 failed verification
assertion, 2 configuration parse failure, 3 precondition violation (the
message names the violated hypothesis).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from ._kernels import BACKEND
from .exponent import check_log_holder, make_exponent
from .norms import (
    HerzMorreyParams,
    herz_morrey_norm,
    herz_norm,
    luxemburg_norm,
    luxemburg_norm_with_curve,
)
from .operators import get_operator
from .sampling import (
    Grid,
    SampledFunction,
    annulus_indicator,
    ball_indicator,
    indicator_box,
    radial_bump,
)
from .verify import (
    DeltaEstimate,
    InequalityReport,
    estimate_delta,
    verify_ball_norm_product,
    verify_ball_sobolev_scaling,
    verify_duality,
    verify_fractional_lebesgue,
    verify_herz_morrey_fractional,
    verify_herz_morrey_sublinear,
    verify_holder,
    verify_maximal_lebesgue,
)

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_CONFIG = 2
EXIT_PRECONDITION = 3

DEFAULT_POINTS = {1: 4096, 2: 512}


class ConfigError(Exception):
    pass


def fmt_scalar(value):
    """Six decimal places with trailing zeros trimmed (at least one kept)."""
    text = f"{float(value):.6f}".rstrip("0")
    if text.endswith("."):
        text += "0"
    return text


def load_config(path):
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    known = {"grid", "exponents", "operators", "spaces", "suites", "seed", "output", "params"}
    unknown = set(cfg) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return cfg


def build_grid(cfg, args):
    gcfg = dict(cfg.get("grid", {}))
    n = int(getattr(args, "n", None) or gcfg.get("n", gcfg.get("dimension", 1)))
    radius = float(getattr(args, "R", None) or gcfg.get("R", gcfg.get("radius", 8.0)))
    m = getattr(args, "m", None) or gcfg.get("m", gcfg.get("points", DEFAULT_POINTS.get(n, 4096)))
    k_min = gcfg.get("k_min")
    return Grid(dimension=n, radius=radius, points_per_axis=int(m), k_min=k_min)


def resolve_exponent(descriptor, cfg, grid):
    exponents = cfg.get("exponents", {})
    if isinstance(descriptor, str) and descriptor in exponents:
        descriptor = exponents[descriptor]
    return make_exponent(descriptor, domain_radius=grid.radius, dimension=grid.dimension)


def parse_function(spec, grid):
    """Function descriptors: indicator:a:b, annulus:k, ball:k, bump:k."""
    head, _, rest = str(spec).partition(":")
    args = [float(tok) for tok in rest.split(":") if tok != ""]
    if head == "indicator":
        if len(args) != 2:
            raise ConfigError("indicator spec needs two bounds, e.g. indicator:-1:1")
        return indicator_box(grid, args[0], args[1])
    if head == "annulus":
        return annulus_indicator(grid, int(args[0]))
    if head == "ball":
        return ball_indicator(grid, int(args[0]))
    if head == "bump":
        return radial_bump(grid, int(args[0]))
    raise ConfigError(f"unknown function spec {spec!r}")


def _delta_report(q, grid, role, beta):
    est = estimate_delta(q, grid, role=role, beta=beta)
    report = InequalityReport(
        f"delta-{role}",
        {"q": q.label, "beta": beta, "window_sup": est.window_sup,
         "fit_residual": est.fit_residual, "n_pairs": est.n_pairs},
    )
    report.add_case({"fit": role}, est.delta, est.window_sup)
    report.finalize_c()
    report.admissible = est.in_window
    report.stable = True
    report.notes["delta"] = est.delta
    report.passed = bool(np.isfinite(est.delta))
    return report


def run_suite(name, grid, q, params, seed):
    """Yield InequalityReports for one named suite."""
    alpha = params.get("alpha", 0.5)
    lam = params.get("lambda", 0.5)
    beta = params.get("beta", 0.25)
    p1 = params.get("p1", 1.0)
    p2 = params.get("p2", params.get("p1", 1.0))
    trials = int(params.get("trials", 20))
    operators = params.get("operators", None)

    if name == "lemmas":
        yield verify_holder(q, grid, trials=trials, seed=seed)
        yield verify_duality(q, grid, trials=max(5, trials // 2), seed=seed)
        yield _delta_report(q, grid, "primal", 0.0)
        yield _delta_report(q, grid, "conjugate", 0.0)
        yield verify_ball_norm_product(q, grid)
    elif name == "props":
        yield verify_ball_sobolev_scaling(q, beta, grid)
        yield verify_fractional_lebesgue(
            q, beta, get_operator("ibeta", beta=beta), grid, trials=trials, seed=seed
        )
        yield verify_maximal_lebesgue(q, get_operator("maximal"), grid, trials=trials, seed=seed)
    elif name == "theorem31":
        for op_name in operators or ("maximal",):
            op = get_operator(op_name)
            yield verify_herz_morrey_sublinear(
                op, HerzMorreyParams(alpha=alpha, lam=lam, p=p1, q=q),
                grid, trials=trials, seed=seed,
            )
    elif name == "theorem32":
        for op_name in operators or ("ibeta", "fractional-maximal"):
            op = get_operator(op_name, beta=beta)
            yield verify_herz_morrey_fractional(
                op, q, beta, alpha, lam, p1, p2, grid, trials=trials, seed=seed
            )
    elif name == "all":
        for sub in ("lemmas", "props", "theorem31", "theorem32"):
            yield from run_suite(sub, grid, q, params, seed)
    else:
        raise ConfigError(f"unknown suite {name!r}")


def write_reports(reports, outdir, seed, grid):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / "cases.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["statement_id", "case", "lhs", "rhs", "ratio"])
        for report in reports:
            for case in report.cases:
                writer.writerow(
                    [report.statement_id, case["case"], repr(case["lhs"]),
                     repr(case["rhs"]), repr(case["ratio"])]
                )
    for report in reports:
        doc = report.to_dict()
        doc["metadata"] = {
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
            "backend": BACKEND,
            "version": __version__,
            "seed": seed,
            "grid": repr(grid),
        }
        path = outdir / f"{report.statement_id}.json"
        with open(path, "w") as fh:
            json.dump(doc, fh, sort_keys=True, indent=2)
            fh.write("\n")
    return csv_path


def cmd_norm(args, cfg):
    grid = build_grid(cfg, args)
    q = resolve_exponent(args.q, cfg, grid)
    f = parse_function(args.f, grid)
    if args.space == "lq":
        if args.curve:
            value, curve = luxemburg_norm_with_curve(f, q)
            with open(args.curve, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["eta", "modular"])
                for eta, rho in curve.sorted_curve():
                    writer.writerow([repr(eta), repr(rho)])
        else:
            value = luxemburg_norm(f, q)
    elif args.space == "herz":
        value = herz_norm(f, args.alpha, args.p, q)
    elif args.space == "herz-morrey":
        value = herz_morrey_norm(
            f, HerzMorreyParams(alpha=args.alpha, lam=args.lam, p=args.p, q=q)
        )
    else:
        raise ConfigError(f"unknown space {args.space!r}")
    print(fmt_scalar(value))
    return EXIT_OK


def cmd_operator(args, cfg):
    grid = build_grid(cfg, args)
    f = parse_function(args.f, grid)
    kwargs = {}
    if args.beta is not None:
        kwargs["beta"] = args.beta
    handle = get_operator(args.name, **kwargs)
    image = handle(f)
    if args.dump:
        with open(args.dump, "w", newline="") as fh:
            writer = csv.writer(fh)
            if grid.dimension == 1:
                writer.writerow(["x", "value"])
                for x, v in zip(grid.axis, image.values):
                    writer.writerow([repr(float(x)), repr(float(v))])
            else:
                writer.writerow(["x", "y", "value"])
                for (x, y), v in zip(grid.coords, image.flat):
                    writer.writerow([repr(float(x)), repr(float(y)), repr(float(v))])
        return EXIT_OK
    points = args.at or []
    if not points:
        raise ConfigError("give --at points or --dump path")
    for token in points:
        coords = [float(tok) for tok in str(token).split(",")]
        if len(coords) != grid.dimension:
            raise ConfigError(f"point {token!r} does not match grid dimension {grid.dimension}")
        if grid.dimension == 1:
            idx = int(np.argmin(np.abs(grid.axis - coords[0])))
            value = image.values[idx]
        else:
            dist = np.sum((grid.coords - np.asarray(coords)) ** 2, axis=1)
            value = image.flat[int(np.argmin(dist))]
        print(fmt_scalar(value))
    return EXIT_OK


def cmd_verify(args, cfg):
    grid = build_grid(cfg, args)
    q = resolve_exponent(args.q, cfg, grid)
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    params = dict(cfg.get("params", {}))
    for key, value in (
        ("alpha", args.alpha), ("lambda", args.lam), ("beta", args.beta),
        ("p1", args.p1), ("p2", args.p2), ("trials", args.trials),
    ):
        if value is not None:
            params[key] = value
    if cfg.get("operators"):
        params.setdefault("operators", [op["name"] if isinstance(op, dict) else op
                                        for op in cfg["operators"]])

    suites = [args.suite] if args.suite else list(cfg.get("suites", ["lemmas"]))
    reports = []
    for suite in suites:
        reports.extend(run_suite(suite, grid, q, params, seed))

    outdir = args.output or cfg.get("output", "reports")
    csv_path = write_reports(reports, outdir, seed, grid)

    width = max(len(r.statement_id) for r in reports)
    print(f"{'statement':<{width}}  {'c_estimate':>12}  {'stable':>6}  {'admissible':>10}  result")
    failed = False
    for r in reports:
        adm = "-" if r.admissible is None else str(r.admissible)
        result = "pass" if r.passed else "FAIL"
        failed |= not r.passed
        print(f"{r.statement_id:<{width}}  {fmt_scalar(r.c_estimate):>12}  "
              f"{str(r.stable):>6}  {adm:>10}  {result}")
    print(f"reports written to {Path(outdir).resolve()} (cases: {csv_path.name})")
    return EXIT_ASSERTION if failed else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="herzmorrey",
        description="Variable-exponent Lebesgue / Herz-Morrey norms, sublinear "
        "operators, and numerical inequality verification.",
    )
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--n", type=int, help="dimension (1 or 2)")
    parser.add_argument("--R", type=float, help="box half-width (power of two)")
    parser.add_argument("--m", type=int, help="grid points per axis")
    sub = parser.add_subparsers(dest="command", required=True)

    p_norm = sub.add_parser("norm", help="evaluate a norm")
    p_norm.add_argument("--space", required=True, choices=["lq", "herz", "herz-morrey"])
    p_norm.add_argument("--q", required=True, help="exponent descriptor, e.g. const:2")
    p_norm.add_argument("--f", required=True, help="function spec, e.g. indicator:-1:1")
    p_norm.add_argument("--alpha", type=float, default=0.0)
    p_norm.add_argument("--p", type=float, default=1.0)
    p_norm.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p_norm.add_argument("--curve", help="CSV path for the modular curve")
    p_norm.set_defaults(func=cmd_norm)

    p_op = sub.add_parser("operator", help="apply a named operator")
    p_op.add_argument("name", help="operator name (maximal, fractional-maximal, ibeta, ...)")
    p_op.add_argument("--f", required=True)
    p_op.add_argument("--beta", type=float)
    p_op.add_argument("--at", action="append", help="evaluation point, repeatable")
    p_op.add_argument("--dump", help="CSV path for the full field")
    p_op.set_defaults(func=cmd_operator)

    p_ver = sub.add_parser("verify", help="run verification suites")
    p_ver.add_argument("--suite", help="lemmas, props, theorem31, theorem32, all")
    p_ver.add_argument("--q", default="const:2")
    p_ver.add_argument("--alpha", type=float)
    p_ver.add_argument("--lambda", dest="lam", type=float)
    p_ver.add_argument("--beta", type=float)
    p_ver.add_argument("--p1", type=float)
    p_ver.add_argument("--p2", type=float)
    p_ver.add_argument("--trials", type=int)
    p_ver.add_argument("--seed", type=int)
    p_ver.add_argument("--output", help="report directory")
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
