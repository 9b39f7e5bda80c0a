"""Command-line entry point: ``radial-synth {eval,check,synthesize,rule-info}``.

Exit codes: 0 success, 1 a gated residual check failed, 2 a mechanical
error (bad input, series budget, rank-deficient dictionary).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys

import numpy as np

from . import checks
from . import measure_algebra as ma
from . import radial_ops as ro
from .bessel_core import MonomialGenerator, SeriesBudgetExceeded, SphericalFunction, eval_monomial
from .config import DEFAULT_TOLERANCES, ENV_VAR, RunConfig, load_config, parse_complex, parse_grid, parse_list
from .sphere_quadrature import build_rule
from .synthesis import ConditioningError, SynthesisProblem, fit, parse_spectrum

EXIT_OK, EXIT_CHECK_FAILED, EXIT_ERROR = 0, 1, 2

CHECK_NAMES = list(checks.SUITES) + ["all"]

_VALUE_FLAGS = {"--lambda", "--dim", "--r", "--s", "--grid", "--words", "--degree"}
_NUMERIC_LIST = re.compile(r"^-[\d.]")


def _glue_negative_values(argv):
    # argparse reads "--lambda -1,2" as two options; rewrite to "--lambda=-1,2"
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv) and _NUMERIC_LIST.match(argv[i + 1]):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def _tolerance_help():
    rows = ", ".join(f"{k}={v:g}" for k, v in DEFAULT_TOLERANCES.items())
    return f"default tolerances: {rows}; override with --tol or a config file"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"JSON config merged over defaults and ${ENV_VAR}")
    common.add_argument("--quad-order", type=int, help="sphere-average nodes (default 64)")
    common.add_argument("--tol", type=float, help="tolerance override for the selected check")
    common.add_argument("--seed", type=int, help="RNG seed (default 0)")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), help="output format (default json)")

    p = argparse.ArgumentParser(
        prog="radial-synth",
        description="Spherical functions, radial convolution checks and monomial synthesis on (R^n, SO(n)).",
        epilog=_tolerance_help(),
    )
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate J_lam and its lambda-derivatives")
    e.add_argument("--dim", default="3", help="dimension(s), comma list")
    e.add_argument("--lambda", dest="lam", default="0", help="eigenvalue(s), comma list, a+bi syntax")
    e.add_argument("--r", help="radii, comma list")
    e.add_argument("--grid", help="radii as lo:hi:step")
    e.add_argument("--degree", default="0", help="derivative order(s) in lambda, comma list")

    c = sub.add_parser("check", parents=[common], help="run a residual suite", epilog=_tolerance_help())
    c.add_argument("suite", choices=CHECK_NAMES)
    c.add_argument("--dim", help="dimension(s), comma list")
    c.add_argument("--lambda", dest="lam", help="eigenvalue(s), comma list, a+bi syntax")
    c.add_argument("--r", help="translation radii (product-formula, eigenfunction)")
    c.add_argument("--s", help="base radii (product-formula)")
    c.add_argument("--grid", help="radius grid lo:hi:step")
    c.add_argument("--degree", help="monomial degree(s) to verify")
    c.add_argument("--words", help="atom radii for commutativity words")
    c.add_argument("--h", type=float, help="finite-difference step (laplacian)")
    c.add_argument("--mu", help="LineMeasure JSON file (lift)")
    c.add_argument("--nu", help="LineMeasure JSON file (lift)")

    s = sub.add_parser("synthesize", parents=[common], help="least-squares fit from a problem JSON")
    s.add_argument("problem", help="problem JSON file")
    s.add_argument("--csv", help="residual CSV path (default: --out with .csv suffix)")

    r = sub.add_parser("rule-info", parents=[common], help="show a sphere-average rule")
    r.add_argument("--dim", type=int, default=3)
    return p


def _config_from(args) -> RunConfig:
    cfg = load_config(args.config)
    over = {}
    if args.quad_order is not None:
        over["quad_order"] = args.quad_order
    if args.seed is not None:
        over["seed"] = args.seed
    if args.format is not None:
        over["format"] = args.format
    if getattr(args, "grid", None) and args.command == "check":
        key = "laplacian_grid" if getattr(args, "suite", None) == "laplacian" else "grid"
        over[key] = args.grid
    return cfg.merged(over) if over else cfg


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _rows_to_csv(rows) -> str:
    keys = []
    for row in rows:
        for k in row:
            if k not in keys:
                keys.append(k)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
    return buf.getvalue()


def _emit(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_eval(args, cfg: RunConfig) -> int:
    dims = parse_list(args.dim, int)
    lams = parse_list(args.lam, parse_complex)
    degrees = parse_list(args.degree, int)
    if args.grid:
        radii = parse_grid(args.grid)
    elif args.r:
        radii = np.array(parse_list(args.r))
    else:
        raise ValueError("eval needs --r or --grid")
    rows = []
    for n in dims:
        for lam in lams:
            s = SphericalFunction(lam, n, cfg.series_tol, cfg.max_terms)
            for m in degrees:
                vals = eval_monomial(MonomialGenerator(s, m), radii)
                for r, v in zip(radii, np.atleast_1d(vals)):
                    rows.append({"dim": n, "lambda": [lam.real, lam.imag], "degree": m, "r": float(r),
                                 "value": [v.real, v.imag]})
    if cfg.format == "csv":
        flat = [{"dim": x["dim"], "lambda_re": x["lambda"][0], "lambda_im": x["lambda"][1],
                 "degree": x["degree"], "r": x["r"], "value_re": x["value"][0], "value_im": x["value"][1]}
                for x in rows]
        _emit(_rows_to_csv(flat), args.out)
    else:
        _emit(_dump_json({"command": "eval", "results": rows}), args.out)
    return EXIT_OK


def _suite_kwargs(args) -> dict:
    kw = {}
    suite = args.suite
    if args.dim:
        kw["dims"] = tuple(parse_list(args.dim, int))
    if args.lam:
        kw["lambdas"] = tuple(parse_list(args.lam, parse_complex))
    if suite == "product-formula":
        if args.r:
            kw["rs"] = tuple(parse_list(args.r))
        if args.s:
            kw["rhos"] = tuple(parse_list(args.s))
    if suite == "eigenfunction" and args.r:
        kw["rs"] = tuple(parse_list(args.r))
    if suite == "laplacian" and args.h:
        kw["h"] = args.h
    if suite == "monomial" and args.degree:
        kw["degrees"] = tuple(parse_list(args.degree, int))
    if suite == "commutativity":
        if args.words:
            kw["radii"] = tuple(parse_list(args.words))
        kw.pop("lambdas", None)
    if suite == "lift":
        kw.pop("lambdas", None)
        for side in ("mu", "nu"):
            path = getattr(args, side)
            if path:
                with open(path) as fh:
                    kw[side] = ma.LineMeasure.from_json(json.load(fh))
    return kw


_TOL_KEY = {"lift": "lift-axis"}


def _cmd_check(args, cfg: RunConfig) -> int:
    if args.tol is not None:
        if args.suite == "all":
            raise ValueError("--tol is per suite; use a config file to override several")
        cfg = cfg.merged({"tolerances": {_TOL_KEY.get(args.suite, args.suite): args.tol}})
    if args.suite == "all":
        report = checks.run_all(cfg)
        rows = [dict(c, check=r["check"]) for r in report["reports"] for c in r["cases"]]
    else:
        report = checks.SUITES[args.suite](cfg, **_suite_kwargs(args))
        rows = [dict(c, check=report["check"]) for c in report["cases"]]
    if cfg.format == "csv":
        _emit(_rows_to_csv(rows), args.out)
    else:
        _emit(_dump_json(report), args.out)
    return EXIT_OK if report["passed"] is not False else EXIT_CHECK_FAILED


def target_from_json(desc: dict, dim: int, cfg: RunConfig) -> ro.RadialFunction:
    """Build a target RadialFunction from a JSON descriptor."""
    kind = desc.get("kind")
    if kind == "gaussian":
        return ro.gaussian(dim, desc.get("sigma", 1.0))
    if kind == "bump":
        return ro.bump(dim, desc.get("radius", 1.0))
    if kind == "polynomial":
        return ro.polynomial(dim, [_json_complex(c) for c in desc["coeffs"]])
    if kind in ("spherical", "monomial"):
        s = SphericalFunction(_json_complex(desc["lambda"]), dim, cfg.series_tol, cfg.max_terms)
        return ro.monomial(s.monomial(desc.get("degree", 0) if kind == "monomial" else 0))
    if kind == "sampled":
        return ro.read_profile_csv(desc["path"], dim, desc.get("interpolation", "linear"), desc.get("fill_value"))
    if kind == "sum":
        parts = [(_json_complex(t.get("c", 1.0)), target_from_json(t["target"], dim, cfg)) for t in desc["terms"]]

        def profile(r):
            return sum(c * f(r) for c, f in parts)

        return ro.RadialFunction(profile, dim, ("builtin", "sum", tuple(f.provenance for _, f in parts)))
    raise ValueError(f"unknown target kind {kind!r}")


def _json_complex(x) -> complex:
    if isinstance(x, (list, tuple)):
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, str):
        return parse_complex(x)
    return complex(x)


def problem_from_json(data: dict, cfg: RunConfig) -> SynthesisProblem:
    dim = int(data["dim"])
    radius = float(data["R"])
    spectrum = parse_spectrum(data.get("spectrum", "auto:modes=8"), dim, radius)
    return SynthesisProblem(
        dim=dim,
        radius=radius,
        target=target_from_json(data["target"], dim, cfg),
        spectrum=spectrum,
        max_degree=int(data.get("max_degree", 0)),
        collocation=data.get("collocation"),
        ridge=data.get("ridge"),
    )


def _cmd_synthesize(args, cfg: RunConfig) -> int:
    with open(args.problem) as fh:
        problem = problem_from_json(json.load(fh), cfg)
    result = fit(problem)
    _emit(_dump_json(result.to_json()), args.out)
    csv_path = args.csv or (args.out.rsplit(".", 1)[0] + ".csv" if args.out else None)
    if csv_path:
        with open(csv_path, "w") as fh:
            fh.write(result.residual_csv())
    return EXIT_OK


def _cmd_rule_info(args, cfg: RunConfig) -> int:
    rule = build_rule(args.dim, cfg.quad_order)
    c = rule.cos_nodes
    info = {
        "dim": rule.dim,
        "order": rule.order,
        "weight_sum": float(rule.weights.sum()),
        "min_weight": float(rule.weights.min()),
        "mean_cos": float(rule.weights @ c),
        "mean_cos2": float(rule.weights @ c**2),
        "exact_mean_cos2": 1.0 / rule.dim,
        "nodes": [float(x) for x in rule.nodes],
        "weights": [float(x) for x in rule.weights],
    }
    if cfg.format == "csv":
        rows = [{"theta": t, "weight": w} for t, w in zip(info["nodes"], info["weights"])]
        _emit(_rows_to_csv(rows), args.out)
    else:
        _emit(_dump_json(info), args.out)
    return EXIT_OK


COMMANDS = {
    "eval": _cmd_eval,
    "check": _cmd_check,
    "synthesize": _cmd_synthesize,
    "rule-info": _cmd_rule_info,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        cfg = _config_from(args)
        return COMMANDS[args.command](args, cfg)
    except (SeriesBudgetExceeded, ConditioningError, ValueError, OSError, KeyError) as exc:
        print(f"radial-synth: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
