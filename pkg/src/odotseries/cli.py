"""Command-line front end.

Exit codes: 0 on success, 2 on invalid input, 1 on internal errors or a
failed ``verify`` run.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import extremal, series, verify
from .multiindex import DimensionError
from .norms import as_rho, conjugate
from .seriesfile import SeriesFileError, parse_series_file

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


def _fmt(x, full=False) -> str:
    if isinstance(x, complex) or np.iscomplexobj(x):
        x = complex(x)
        if x.imag == 0:
            return _fmt(x.real, full)
        return f"({_fmt(x.real, full)}{'+' if x.imag >= 0 else '-'}{_fmt(abs(x.imag), full)}j)"
    x = float(x)
    return repr(x) if full else f"{x:.9g}"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(np.real(x)), "im": float(np.imag(x))}
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


def parse_point(text: str) -> np.ndarray:
    """Comma-separated reals or complex numbers such as ``0.3,0.1+0.2j``."""
    try:
        parts = [p.strip().replace("i", "j") for p in text.split(",") if p.strip()]
        vals = [complex(p) for p in parts]
    except ValueError:
        raise InputError(f"cannot parse point {text!r}") from None
    if not vals:
        raise InputError("empty point")
    if all(v.imag == 0 for v in vals):
        return np.array([v.real for v in vals])
    return np.array(vals)


def _rho(text: str):
    try:
        return as_rho(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load(args) -> series.BlockSeries:
    if args.input is None:
        raise InputError("--input is required")
    coeffs = parse_series_file(args.input)
    M = coeffs.max_degree if args.max_degree is None else args.max_degree
    if M < coeffs.max_degree:
        raise InputError(f"--max-degree {M} is below the file's degree {coeffs.max_degree}")
    return series.from_coefficients(coeffs, M)


def _verdict_dict(v: series.ConvergenceVerdict) -> dict:
    return {
        "status": v.status,
        "grouped_status": v.grouped_status,
        "point_norm": v.point_norm,
        "certificate": v.certificate,
        "components": v.components,
        "grouped_components": v.grouped_components,
    }


def cmd_radius(args, out):
    s = _load(args)
    est = series.radius_estimate(s, args.rho, args.window)
    f = lambda x: _fmt(x, args.full)  # noqa: E731
    out(f"rho = {args.rho}, M = {s.M}, window = {list(est.window)}")
    out(f"r_hat = {f(est.r_hat)}")
    out(f"R_hat = {f(est.R_hat)}")
    return {"r_hat": est.r_hat, "R_hat": est.R_hat, "window": est.window,
            "per_block_roots": est.per_block_roots, "M": s.M}


def cmd_eval(args, out):
    s = _load(args)
    h = _point(args, s)
    val = series.evaluate(s, h).entries[0]
    out(f"value = [{', '.join(_fmt(v, args.full) for v in val)}]")
    return {"point": h, "value": val}


def _point(args, s):
    if args.point is None:
        raise InputError("--point is required")
    h = parse_point(args.point)
    if len(h) != s.n:
        raise InputError(f"point has {len(h)} coordinates, series has n={s.n}")
    return h


def cmd_converges(args, out):
    s = _load(args)
    h = _point(args, s)
    v = series.converges_at(s, h, args.rho, window=args.window)
    out(f"||h||_{conjugate(args.rho)} = {_fmt(v.point_norm, args.full)}")
    out(f"status = {v.status}")
    out(f"grouped-by-degree status = {v.grouped_status}")
    return {"point": h, **_verdict_dict(v)}


def cmd_layer(args, out):
    s = _load(args)
    lo, hi = series.indeterminacy_layer(s, args.rho, args.window)
    out(f"layer = [{_fmt(lo, args.full)}, {_fmt(hi, args.full)}]")
    return {"layer": [lo, hi]}


def cmd_witness(args, out):
    s = _load(args)
    if args.R1 is None:
        raise InputError("--R1 is required")
    rep = series.layer_witness_scan(s, args.rho, args.R1, args.samples, seed=args.seed, window=args.window)
    f = lambda x: _fmt(x, args.full)  # noqa: E731
    out(f"layer = [{f(rep.layer[0])}, {f(rep.layer[1])}], R1 = {f(rep.R1)}"
        f"{' (beyond layer)' if rep.beyond_layer else ''}")
    out(f"diagonal [{', '.join(f(x) for x in rep.diagonal)}]: {rep.diagonal_verdict.status}")
    counts = {}
    for v in rep.sample_verdicts:
        counts[v.status] = counts.get(v.status, 0) + 1
    out(f"samples: {counts}")
    return {
        "R1": rep.R1, "layer": rep.layer, "diagonal": rep.diagonal,
        "diagonal_verdict": _verdict_dict(rep.diagonal_verdict),
        "samples": [{"point": p, "status": v.status} for p, v in zip(rep.samples, rep.sample_verdicts)],
    }


def _problem(*args, **kw) -> extremal.ExtremalProblem:
    try:
        return extremal.ExtremalProblem(*args, **kw)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_lambda(args, out):
    prob = _problem(
        args.n, args.n_prime, args.p, args.p_prime, args.q, args.q_prime,
        rho=args.rho.value, field=args.field, restarts=args.restarts,
        iterations=args.iters, seed=args.seed,
    )
    res = extremal.lambda_estimate(prob)
    out(f"lambda({args.p},{args.p_prime},{args.q},{args.q_prime}) ~ {_fmt(res.value, args.full)}"
        f"  [n={args.n}, n'={args.n_prime}, rho={args.rho}, field={args.field}]")
    for fld, v in res.per_field.items():
        if fld != res.field:
            out(f"  {fld} sphere: {_fmt(v, args.full)}")
    if args.n == 1 and args.n_prime == 1:
        out(f"  one-variable closed form: "
            f"{_fmt(extremal.lambda_scalar_closed_form(args.p_prime, args.q_prime, args.rho), args.full)}")
    A, B = res.argument
    return {"value": res.value, "per_field": res.per_field, "converged": res.converged,
            "trace": res.trace, "A": A.entries, "B": B.entries}


def cmd_opnorm(args, out):
    s = _load(args)
    rows = []
    degrees = [args.degree] if args.degree is not None else range(1, s.M + 1)
    f = lambda x: _fmt(x, args.full)  # noqa: E731
    out(f"{'m':>3}  {'opnorm^(1/m)':>15}  {'rho-norm^(1/m)':>15}")
    for m in degrees:
        if not 0 <= m <= s.M:
            raise InputError(f"--degree {m} outside [0, {s.M}]")
        A = s.blocks[m]
        prob = _problem(
            s.n, s.n_prime, m, s.q_prime, 0, 0, rho=args.rho.value, field=s.field,
            restarts=args.restarts, iterations=args.iters, seed=args.seed + m,
        )
        op = extremal.opnorm_estimate(prob, A).value
        nr = series.block_norms(series.BlockSeries(s.n, s.n_prime, s.q_prime, s.blocks[: m + 1], s.field),
                                args.rho)[m]
        root = (lambda x: x ** (1.0 / m)) if m > 0 else (lambda x: x)
        rows.append({"m": m, "opnorm": op, "rho_norm": nr, "op_root": root(op), "rho_root": root(nr)})
        out(f"{m:>3}  {f(root(op)):>15}  {f(root(nr)):>15}")
    return {"rows": rows}


def cmd_verify(args, out):
    results = verify.run_suite(args.seed, args.algebra_count, args.count)
    for r in results:
        out(r.line())
    failed = [r.name for r in results if not r.ok]
    out(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return {"checks": [r.__dict__ | {"ok": r.ok} for r in results], "failed": failed}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="odotseries",
        description="Radii of absolute convergence and odot-product norms for power series in many variables",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rho", type=_rho, default=as_rho(2), help="norm exponent in [1, inf] (accepts 'inf')")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--report", type=Path, help="write a JSON run report here")
    common.add_argument("--full", action="store_true", help="print full precision")

    with_series = argparse.ArgumentParser(add_help=False, parents=[common])
    with_series.add_argument("--input", type=Path, help="series JSON file")
    with_series.add_argument("--max-degree", type=int, help="truncation degree M (default: file degree)")
    with_series.add_argument("--window", type=int, help="trailing blocks used for the limsup")

    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--restarts", type=int, default=64)
    budget.add_argument("--iters", type=int, default=2000)

    p = sub.add_parser("radius", parents=[with_series], help="estimate R = 1/limsup ||A(m)||^(1/m)")
    p.set_defaults(func=cmd_radius)
    p = sub.add_parser("eval", parents=[with_series], help="evaluate the truncated series")
    p.add_argument("--point", help="comma-separated coordinates")
    p.set_defaults(func=cmd_eval)
    p = sub.add_parser("converges", parents=[with_series], help="absolute convergence verdict at a point")
    p.add_argument("--point", help="comma-separated coordinates")
    p.set_defaults(func=cmd_converges)
    p = sub.add_parser("layer", parents=[with_series], help="the indeterminacy layer")
    p.set_defaults(func=cmd_layer)
    p = sub.add_parser("witness", parents=[with_series], help="verdicts on a conj-norm sphere")
    p.add_argument("--R1", type=float, help="sphere radius")
    p.add_argument("--samples", type=int, default=16)
    p.set_defaults(func=cmd_witness)
    p = sub.add_parser("lambda", parents=[common, budget], help="estimate lambda(p,p',q,q')")
    for name in ("n", "n-prime"):
        p.add_argument(f"--{name}", type=int, default=1)
    for name in ("p", "p-prime", "q", "q-prime"):
        p.add_argument(f"--{name}", type=int, default=0)
    p.add_argument("--field", choices=("real", "complex"), default="real")
    p.set_defaults(func=cmd_lambda)
    p = sub.add_parser("opnorm", parents=[with_series, budget], help="multilinear operator norms of blocks")
    p.add_argument("--degree", type=int, help="single block degree m (default: all)")
    p.set_defaults(func=cmd_opnorm, restarts=8, iters=400)
    p = sub.add_parser("verify", parents=[common], help="randomized check of every law and inequality")
    p.add_argument("--count", type=int, default=1000, help="instances per inequality and rho")
    p.add_argument("--algebra-count", type=int, default=200)
    p.set_defaults(func=cmd_verify, seed=7)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = print
    try:
        results = args.func(args, out)
    except (InputError, SeriesFileError, DimensionError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    code = EXIT_INTERNAL if results.get("failed") else EXIT_OK
    if args.report is not None:
        params = {k: (str(v) if isinstance(v, Path) or k == "rho" else v)
                  for k, v in vars(args).items() if k not in ("func", "report")}
        report = {
            "command": ["odotseries", *(sys.argv[1:] if argv is None else argv)],
            "parameters": params,
            "results": _jsonable(results),
            "version": __version__,
            "seed": getattr(args, "seed", None),
            "exit_code": code,
        }
        args.report.write_text(json.dumps(report, indent=1) + "\n", encoding="utf-8")
    return code


if __name__ == "__main__":
    sys.exit(main())
