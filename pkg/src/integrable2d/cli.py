"""Command-line front end.

Subcommands: ``catalog`` lists the named models, ``verify`` samples
structure- or master-equation residuals and writes a JSON report,
``integrate`` runs one trajectory and writes a CSV, ``sweep`` aggregates
trajectory summaries over a parameter grid.

Exit codes: 0 success/pass, 1 verification fail, 2 usage or configuration
error, 3 runtime error (domain violation, singularity, quadrature
failure).  Environment overrides: ``INTEGRABLE2D_TOL`` for the default
verification tolerance, ``INTEGRABLE2D_OUTDIR`` for the default output
directory.  Identical arguments and seed produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import ast
import itertools
import json
import math
import os
import sys

from . import dynamics, models, verify
from .errors import (ConstructionError, DomainError, PathError,
                     QuadratureError, SingularityError)
from .prepotential import BETA0, BETA_PM, PrepotentialParams

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3

_RUNTIME_ERRORS = (DomainError, SingularityError, PathError,
                   QuadratureError, ConstructionError)


class UsageError(Exception):
    pass


def _default_tol():
    raw = os.environ.get("INTEGRABLE2D_TOL")
    if raw is None:
        return 1e-8
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"INTEGRABLE2D_TOL is not a float: {raw!r}")


def _outpath(path, default_name):
    if path is None:
        outdir = os.environ.get("INTEGRABLE2D_OUTDIR", ".")
        return os.path.join(outdir, default_name)
    return path


def _parse_region(text):
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed region {text!r}; expected x0,y0,x1,y1")
    if len(parts) != 4:
        raise UsageError(f"malformed region {text!r}; expected 4 numbers")
    return tuple(parts)


def _parse_point(text):
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed point {text!r}; expected x,y")
    if len(parts) != 2:
        raise UsageError(f"malformed point {text!r}; expected 2 numbers")
    return tuple(parts)


_ALLOWED_NODES = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Add, ast.Sub,
                  ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd,
                  ast.Constant, ast.Name, ast.Load)


def parse_genfun(spec):
    """Parse 'E:<expr>' or 'F:<expr>' into (kind, jet-callable).

    The expression may use x, y, numbers and + - * / ^ (integer powers).
    """
    if ":" not in spec:
        raise UsageError("genfun spec must look like E:x^4 or F:x^4+y^4")
    head, expr = spec.split(":", 1)
    head = head.strip()
    if head == "E":
        kind = "cubic"
    elif head == "F":
        kind = "quartic"
    else:
        raise UsageError(f"genfun kind must be E or F, got {head!r}")
    source = expr.replace("^", "**").strip()
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError:
        raise UsageError(f"cannot parse genfun expression {expr!r}")
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise UsageError(f"unsupported syntax in genfun expression: "
                             f"{type(node).__name__}")
        if isinstance(node, ast.Name) and node.id not in ("x", "y"):
            raise UsageError(f"unknown name {node.id!r} in genfun expression")
        if isinstance(node, ast.Constant) \
                and not isinstance(node.value, (int, float)):
            raise UsageError("genfun constants must be numbers")
    code = compile(tree, "<genfun>", "eval")

    def fn(X, Y):
        return eval(code, {"__builtins__": {}}, {"x": X, "y": Y})

    return kind, fn


def _load_model(args):
    if getattr(args, "descriptor", None):
        try:
            with open(args.descriptor) as fh:
                d = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read descriptor: {exc}")
        except json.JSONDecodeError as exc:
            raise UsageError(f"descriptor is not valid JSON: {exc}")
        return models.from_descriptor(d)
    if getattr(args, "model", None):
        lam = getattr(args, "lam", None)
        return models.catalog(args.model, lam=lam)
    raise UsageError("specify --model NAME or --descriptor FILE")


def cmd_catalog(args):
    entries = [{"name": name, "kind": kind, "default_lambda": lam,
                "description": desc}
               for name, (kind, lam, desc) in models.CATALOG_INFO.items()]
    if args.json:
        print(json.dumps(entries, indent=2, sort_keys=True))
    else:
        width = max(len(e["name"]) for e in entries)
        for e in entries:
            lam = "" if e["default_lambda"] is None \
                else f" (lambda={e['default_lambda']:g})"
            print(f"{e['name']:<{width}}  [{e['kind']}]{lam} "
                  f"{e['description']}")
    return EXIT_OK


def cmd_verify(args):
    tol = args.tol if args.tol is not None else _default_tol()
    region = _parse_region(args.region)
    if args.genfun:
        kind, fn = parse_genfun(args.genfun)
        report = verify.grid_report(fn, region, args.n, tol, seed_=args.seed,
                                    kind=kind, label=args.genfun)
    else:
        model = _load_model(args)
        target = model
        if args.equations == "master":
            if model.genfun is None:
                raise UsageError("model has no generating scalar to test")
            kind = "cubic" if model.kind == "cubic" else "quartic"
            target = model.genfun
            report = verify.grid_report(target, region, args.n, tol,
                                        seed_=args.seed, kind=kind,
                                        label=model.label)
        else:
            report = verify.grid_report(model, region, args.n, tol,
                                        seed_=args.seed)
    text = report.to_json()
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_integrate(args):
    model = _load_model(args)
    x0, y0 = _parse_point(args.start)
    state = dynamics.zero_energy_state(model, x0, y0, args.theta)
    report = dynamics.integrate(model, state, dt=args.dt, T=args.T,
                                method=args.method, tol=args.tol,
                                stride=args.stride)
    out = _outpath(args.out, "trajectory.csv")
    dynamics.write_trajectory_csv(report, out)
    print(f"I1_max={report.I1_max_abs:.17g} I2_drift={report.I2_drift:.17g} "
          f"termination={report.termination}")
    return EXIT_OK


_SWEEP_KEYS = ("lambda", "mu", "epsilon", "sigma", "theta")


def _parse_grid(text):
    grid = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise UsageError(f"malformed grid cell spec {part!r}")
        key, vals = part.split("=", 1)
        key = key.strip()
        if key not in _SWEEP_KEYS:
            raise UsageError(f"unknown grid key {key!r}; allowed: "
                             + ", ".join(_SWEEP_KEYS))
        try:
            values = [float(v) for v in vals.split(",") if v.strip()]
        except ValueError:
            raise UsageError(f"malformed grid values in {part!r}")
        if not values:
            raise UsageError(f"empty grid values in {part!r}")
        grid.append((key, values))
    if not grid:
        raise UsageError("empty grid")
    return grid


def cmd_sweep(args):
    grid = _parse_grid(args.grid)
    x0, y0 = _parse_point(args.start)
    keys = [k for k, _ in grid]
    out = _outpath(args.out, "sweep.csv")
    lines = [",".join(keys + ["I1_max", "I2_drift", "termination", "status"])]
    for combo in itertools.product(*(vals for _, vals in grid)):
        cell = dict(zip(keys, combo))
        theta = cell.get("theta", args.theta)
        row = [format(v, ".17g") for v in combo]
        try:
            model = _cell_model(args, cell)
            state = dynamics.zero_energy_state(model, x0, y0, theta)
            rep = dynamics.integrate(model, state, dt=args.dt, T=args.T,
                                     method=args.method, tol=args.tol)
            row += [format(rep.I1_max_abs, ".17g"),
                    format(rep.I2_drift, ".17g"), rep.termination, "ok"]
        except _RUNTIME_ERRORS:
            row += ["nan", "nan", "none", "domain_error"]
        lines.append(",".join(row))
    with open(out, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {len(lines) - 1} rows to {out}")
    return EXIT_OK


def _cell_model(args, cell):
    """Model for one sweep cell: catalog lambda override or family params."""
    if args.model in models.CATALOG_INFO:
        lam = cell.get("lambda")
        return models.catalog(args.model, lam=lam)
    if args.model in ("cubic", "quartic"):
        family = BETA_PM if args.family == "beta-pm" else BETA0
        params = PrepotentialParams(
            family=family, lam=cell.get("lambda", 1.0),
            mu=cell.get("mu", 1.0), epsilon=int(cell.get("epsilon", 1)),
            sigma=int(cell.get("sigma", 1)))
        builder = models.build_cubic if args.model == "cubic" \
            else models.build_quartic
        return builder(params)
    raise UsageError(f"unknown sweep base model {args.model!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="integrable2d",
        description="Construct and verify planar integrable models with "
                    "cubic or quartic invariants.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list the named catalog models")
    p.add_argument("--json", action="store_true",
                   help="machine-readable output")
    p.set_defaults(fn=cmd_catalog)

    p = sub.add_parser("verify", help="sample residuals and write a report")
    p.add_argument("--model", help="catalog model name")
    p.add_argument("--descriptor", help="path to a model descriptor JSON")
    p.add_argument("--genfun", help="generating scalar, e.g. E:x^4")
    p.add_argument("--lam", type=float, default=None,
                   help="override the catalog model's scale")
    p.add_argument("--equations", choices=("structure", "master"),
                   default="structure")
    p.add_argument("--region", default="1,1,2,2",
                   help="sampling rectangle x0,y0,x1,y1")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="report path (default: stdout)")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("integrate",
                       help="integrate one zero-energy trajectory")
    p.add_argument("--model", help="catalog model name")
    p.add_argument("--descriptor", help="path to a model descriptor JSON")
    p.add_argument("--lam", type=float, default=None)
    p.add_argument("--start", default="1,1", help="start point x,y")
    p.add_argument("--theta", type=float, default=0.0,
                   help="velocity direction in radians")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--method", choices=("rk4", "rk45"), default="rk4")
    p.add_argument("--tol", type=float, default=1e-10,
                   help="rk45 per-step error tolerance")
    p.add_argument("--stride", type=int, default=None)
    p.add_argument("--out", help="trajectory CSV path")
    p.set_defaults(fn=cmd_integrate)

    p = sub.add_parser("sweep",
                       help="trajectory summaries over a parameter grid")
    p.add_argument("--model", required=True,
                   help="catalog name, or 'cubic'/'quartic' for families")
    p.add_argument("--family", choices=("beta0", "beta-pm"),
                   default="beta0")
    p.add_argument("--grid", required=True,
                   help="e.g. 'lambda=0.5,1,2;theta=0.3,0.7'")
    p.add_argument("--start", default="1,1")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--method", choices=("rk4", "rk45"), default="rk4")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", help="sweep CSV path")
    p.set_defaults(fn=cmd_sweep)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _RUNTIME_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
