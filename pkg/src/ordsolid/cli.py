"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 bad input or a
violated hypothesis.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from .dualgraph import build_graph, stats_and_bounds
from .elliptic import Curve, CurvePoint, generate_cyclic_config, weierstrass_short_form
from .errors import GeneralPositionViolation, GeometryError, IdentityViolation
from .geom import FLOAT, RATIONAL, parse_scalar
from .io import RunManifest, dumps, graph_report_doc, point_set_doc, read_curve_descriptor, read_point_set, \
    verdict_doc
from .linalg import DEFAULT_TOL
from .structure import count_ordinary, count_ordinary_generic_d, detect_structure, generate_nrc_config, \
    perturb, random_config
from .verify import SUITES, run_suite


def _global_flags(parser: argparse.ArgumentParser, suppress: bool):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--mode", choices=("exact", "float"), default=default("exact"))
    parser.add_argument("--seed", type=int, default=default(0))
    parser.add_argument("--threads", type=int, default=default(1))
    parser.add_argument("--out", default=default(None), help="output file (default: stdout)")
    parser.add_argument("--tolerance", type=float, default=default(DEFAULT_TOL))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ordsolid",
                                     description="Ordinary hyperplanes, dual graphs and quadric structure in P^4.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a point-set file")
    _global_flags(gen, suppress=True)
    gen.add_argument("kind", choices=("elliptic", "nrc", "random", "perturbed"))
    gen.add_argument("--n", type=int)
    gen.add_argument("--a")
    gen.add_argument("--b")
    for k in ("a1", "a2", "a3", "a4", "a6"):
        gen.add_argument(f"--{k}")
    gen.add_argument("--gx")
    gen.add_argument("--gy")
    gen.add_argument("--curve", help="curve descriptor file")
    gen.add_argument("--dim", type=int, default=4)
    gen.add_argument("--height", type=int, default=20)
    gen.add_argument("--input", help="point-set file to perturb")
    gen.add_argument("--k", type=int, default=2, help="number of points to perturb")

    cnt = sub.add_parser("count", help="count ordinary hyperplanes")
    _global_flags(cnt, suppress=True)
    cnt.add_argument("input")
    cnt.add_argument("--dim", type=int)

    gr = sub.add_parser("graph", help="dual graph statistics and identities")
    _global_flags(gr, suppress=True)
    gr.add_argument("input")

    det = sub.add_parser("detect", help="structure detection")
    _global_flags(det, suppress=True)
    det.add_argument("input")
    det.add_argument("--c", type=float, default=10.0)

    ver = sub.add_parser("verify", help="run verification suites")
    _global_flags(ver, suppress=True)
    ver.add_argument("suite", choices=SUITES + ("all",))
    ver.add_argument("--input", help="point-set file used by the euler and bounds suites")
    return parser


def _load(path: str):
    with open(path) as fh:
        return json.load(fh)


def _emit(args, doc: dict):
    text = dumps(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _manifest(args, inputs=()) -> RunManifest:
    return RunManifest(args.command, list(inputs), args.out, args.seed, args.mode, args.tolerance)


def _curve_from_args(args):
    if args.curve:
        return read_curve_descriptor(_load(args.curve))[:3]
    gen = None
    if any(getattr(args, k) is not None for k in ("a1", "a2", "a3", "a4", "a6")):
        coeffs = [parse_scalar(getattr(args, k) or 0) for k in ("a1", "a2", "a3", "a4", "a6")]
        curve, cmap = weierstrass_short_form(*coeffs)
        if args.gx is not None:
            gen = cmap.forward(CurvePoint(parse_scalar(args.gx), parse_scalar(args.gy)))
    else:
        if args.a is None or args.b is None:
            raise GeometryError("an elliptic curve needs --a and --b (or long-form coefficients)")
        curve = Curve(parse_scalar(args.a), parse_scalar(args.b))
        if args.gx is not None:
            gen = CurvePoint(parse_scalar(args.gx), parse_scalar(args.gy))
    return curve, gen, args.n


def cmd_generate(args) -> int:
    inputs = []
    if args.kind == "elliptic":
        curve, gen, n = _curve_from_args(args)
        if n is None:
            raise GeometryError("--n is required")
        mode = FLOAT if args.mode == "float" else RATIONAL
        if mode == RATIONAL and gen is None:
            raise GeometryError("exact mode needs a generator (--gx, --gy)")
        cfg = generate_cyclic_config(curve, gen, n, mode, args.tolerance).lifted
        if args.curve:
            inputs.append(args.curve)
    elif args.kind == "nrc":
        if args.n is None:
            raise GeometryError("--n is required")
        cfg = generate_nrc_config(args.n)
    elif args.kind == "random":
        if args.n is None:
            raise GeometryError("--n is required")
        cfg = random_config(args.n, args.dim, args.seed, args.height)
    else:
        if not args.input:
            raise GeometryError("--input is required for perturbed")
        cfg = perturb(read_point_set(_load(args.input)), args.k, args.seed, args.height)
        inputs.append(args.input)
    _emit(args, point_set_doc(cfg, _manifest(args, inputs)))
    return 0


def cmd_count(args) -> int:
    cfg = read_point_set(_load(args.input))
    d = args.dim or cfg.dim
    res = count_ordinary(cfg, d, args.threads) if d <= 4 else count_ordinary_generic_d(cfg, d, args.threads)
    doc = {"n": res.n, "d": res.d, "ordinary": res.count, "total_hyperplanes": res.total, "K": res.K}
    if args.out:
        print(f"n={res.n} ordinary={res.count} total={res.total} K={res.K:.6g}")
    doc["manifest"] = asdict(_manifest(args, [args.input]))
    _emit(args, doc)
    return 0


def cmd_graph(args) -> int:
    cfg = read_point_set(_load(args.input))
    graph = build_graph(cfg, args.threads)
    try:
        stats = stats_and_bounds(graph)
    except IdentityViolation as exc:
        print(f"identity failure: {exc}", file=sys.stderr)
        return 1
    _emit(args, graph_report_doc(graph, stats, _manifest(args, [args.input])))
    return 0


def cmd_detect(args) -> int:
    cfg = read_point_set(_load(args.input))
    verdict = detect_structure(cfg, args.c, args.threads)
    doc = verdict_doc(verdict, _manifest(args, [args.input]))
    doc["parameters"]["tolerance"] = cfg.tol
    _emit(args, doc)
    return 0


def cmd_verify(args) -> int:
    configs = None
    inputs = []
    if args.input:
        configs = {args.input: read_point_set(_load(args.input))}
        inputs.append(args.input)
    checks = run_suite(args.suite, args.seed, configs)
    doc = {"suite": args.suite, "passed": all(c.passed for c in checks),
           "checks": [asdict(c) for c in checks], "manifest": asdict(_manifest(args, inputs))}
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.suite}: {c.name}", file=sys.stderr)
    _emit(args, doc)
    return 0 if doc["passed"] else 1


COMMANDS = {"generate": cmd_generate, "count": cmd_count, "graph": cmd_graph,
            "detect": cmd_detect, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except GeneralPositionViolation as exc:
        detail = f" {list(exc.tuple)}" if exc.tuple is not None else ""
        print(f"error: {exc}{detail}", file=sys.stderr)
        return 2
    except (GeometryError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
