"""Command-line entry point: ``ububble <subcommand> ...``.

Human-readable output goes to stdout, diagnostics to stderr, and ``--json``
switches stdout to a single run report::

    {"subcommand", "inputs", "parameters", "result", "elapsed_ms", "version"}

Exit codes: 0 ok, 1 bad input, 2 a checked property failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .bubble import PropertyViolation, build_model, model_to_intervals
from .cliquewidth import (
    ExpressionError,
    build_expr_columns,
    build_expr_groups,
    cwd_upper_bounds,
    eval_expression,
    format_sexp,
    group_structure,
    node_count,
    parse_sexp,
)
from .core import ValidationError, graph_of_model, graph_of_representation, validate_model
from .formats import format_muir, model_to_dict, read_model, read_muir, write_model
from .gen import GenParams, random_representation
from .maxcut import (
    SweepStats,
    TooLarge,
    counterexample,
    maxcut,
    maxcut_bounded_columns,
    maxcut_bruteforce,
)


class CheckFailed(Exception):
    """A verified property does not hold (exit code 2)."""


def _load_model(path: str):
    p = Path(path)
    if p.suffix == ".muir":
        return build_model(read_muir(p))
    return read_model(p)


def _emit(args, result: dict, human: str, inputs: list, params: dict, started: float) -> None:
    elapsed = round((time.perf_counter() - started) * 1000.0, 3)
    if args.json:
        report = {
            "subcommand": args.command,
            "inputs": inputs,
            "parameters": params,
            "result": result,
            "elapsed_ms": elapsed,
            "version": __version__,
        }
        print(json.dumps(report, sort_keys=True))
    else:
        print(human)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_build_model(args) -> int:
    t0 = time.perf_counter()
    rep = read_muir(args.input)
    model = build_model(
        rep, per_component=args.per_component, debug_properties=args.debug_properties, validate=False
    )
    violations = validate_model(model)
    if violations:
        raise CheckFailed("; ".join(v.message for v in violations))
    if args.output:
        write_model(model, args.output)
    result = {"k": model.k, "rows": model.rows, "n": model.n, "model": model_to_dict(model)}
    human = (
        f"model: {model.k} columns, {model.rows} rows, {model.n} vertices"
        + (f" -> {args.output}" if args.output else "")
    )
    if not args.output and not args.json:
        human = json.dumps(model_to_dict(model))
    _emit(args, result, human, [args.input], {"per_component": args.per_component}, t0)
    return 0


def cmd_maxcut(args) -> int:
    t0 = time.perf_counter()
    model = _load_model(args.model)
    cut = None
    threshold = None
    parts: list = []
    if args.algo == "brute":
        out = maxcut_bruteforce(graph_of_model(model), with_cut=args.with_cut)
    elif args.algo == "bounded":
        out = maxcut_bounded_columns(model, with_cut=args.with_cut)
        parts = [{"left": None, "right": None, "heavy": list(range(1, model.k + 1))}]
    else:
        stats = SweepStats(threshold=0)
        out = maxcut(
            model,
            threshold=args.threshold,
            with_cut=args.with_cut,
            parallel=args.parallel,
            stats=stats,
        )
        threshold, parts = stats.threshold, stats.parts
    value, cut = out if args.with_cut else (out, None)
    result = {"value": value, "algo": args.algo, "threshold": threshold, "parts": parts}
    if cut is not None:
        result["cut"] = sorted(cut.members)
    human = f"maxcut = {value}" + (f"  cut = {sorted(cut.members)}" if cut is not None else "")
    params = {"algo": args.algo, "threshold": args.threshold, "with_cut": args.with_cut}
    _emit(args, result, human, [args.model], params, t0)
    return 0


def cmd_cwd(args) -> int:
    t0 = time.perf_counter()
    model = _load_model(args.model)
    expr = build_expr_columns(model) if args.method == "columns" else build_expr_groups(model)
    text = format_sexp(expr)
    g, w = eval_expression(expr)
    if g != graph_of_model(model):
        raise CheckFailed("expression does not evaluate to the model graph")
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    result = {"method": args.method, "width": w, "nodes": node_count(expr), "output": args.output}
    if args.method == "columns":
        result["bound"] = model.k + 3
    else:
        result["bound"] = group_structure(model).phi + 2
    if not args.output:
        result["expression"] = text
    human = text if not args.output else f"width {w} (bound {result['bound']}) -> {args.output}"
    _emit(args, result, human, [args.model], {"method": args.method}, t0)
    return 0


def cmd_eval_expr(args) -> int:
    t0 = time.perf_counter()
    expr = parse_sexp(Path(args.expr).read_text(encoding="utf-8"))
    g, w = eval_expression(expr)
    result = {
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "width": w,
        "vertex_ids": list(g.vertices),
        "edge_list": sorted(list(e) for e in g.edges),
    }
    human = f"{g.n} vertices, {g.m} edges, width {w}"
    _emit(args, result, human, [args.expr], {}, t0)
    return 0


def cmd_bounds(args) -> int:
    t0 = time.perf_counter()
    model = _load_model(args.model)
    rep = cwd_upper_bounds(model)
    d = rep.as_dict()
    human = "\n".join(f"{key:>18}: {val}" for key, val in d.items())
    _emit(args, d, human, [args.model], {}, t0)
    return 0


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    model = read_model(args.model) if not args.model.endswith(".muir") else None
    checks: dict[str, bool] = {}
    if model is None:
        rep = read_muir(args.model)
        model = build_model(rep)
        checks["roundtrip_a"] = graph_of_model(model) == graph_of_representation(rep)
    violations = validate_model(model)
    checks["valid"] = not violations
    checks["roundtrip_b"] = (
        not violations and graph_of_representation(model_to_intervals(model)) == graph_of_model(model)
    )
    ok = all(checks.values())
    result = {"ok": ok, "checks": checks, "violations": [v.message for v in violations]}
    human = "\n".join([f"{name}: {'pass' if v else 'FAIL'}" for name, v in checks.items()])
    for v in violations:
        print(f"violation: {v.message}", file=sys.stderr)
    _emit(args, result, human, [args.model], {}, t0)
    return 0 if ok else 2


def _weights(text: str) -> tuple[float, ...]:
    try:
        ws = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad weights {text!r}") from None
    if len(ws) != 4:
        raise argparse.ArgumentTypeError("--kinds needs four comma-separated weights (++,+-,-+,--)")
    return ws


def cmd_gen(args) -> int:
    t0 = time.perf_counter()
    p = GenParams(
        n=args.n,
        seed=args.seed,
        grid=args.grid,
        window=args.window,
        kind_weights=args.kinds,
        twin_rate=args.twin_rate,
    )
    rep = random_representation(p)
    text = format_muir(rep)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    params = {
        "n": p.n,
        "seed": p.seed,
        "grid": p.grid,
        "window": p.window,
        "kinds": list(p.kind_weights),
        "twin_rate": p.twin_rate,
    }
    result = {"output": args.output, "muir": text}
    human = text.rstrip("\n") if not args.output else f"{p.n} intervals -> {args.output}"
    _emit(args, result, human, [], params, t0)
    return 0


def cmd_counterexample(args) -> int:
    t0 = time.perf_counter()
    rep = counterexample(with_cut=args.with_cut)
    ok = rep["bruteforce"] == rep["dp"] == rep["bounded"] == 7
    human = f"brute={rep['bruteforce']} dp={rep['dp']} claimed={rep['claimedByFlawedAlgorithm']}"
    if args.with_cut:
        human += f" cut={rep['cut']} size={rep['cutSize']}"
    _emit(args, rep, human, [], {"with_cut": args.with_cut}, t0)
    return 0 if ok else 2


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ububble",
        description="Bubble models, exact MaxCut and clique-width expressions for mixed unit interval graphs.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="emit a JSON run report")
        sp.set_defaults(func=func)
        return sp

    sp = add("build-model", cmd_build_model, "build a bubble model from a .muir representation")
    sp.add_argument("input")
    sp.add_argument("-o", "--output", help="write model JSON here")
    sp.add_argument("--per-component", action="store_true", help="build components separately")
    sp.add_argument("--debug-properties", action="store_true", help="check construction invariants after every insertion")

    sp = add("maxcut", cmd_maxcut, "exact maximum cut of a model (.json) or representation (.muir)")
    sp.add_argument("model")
    sp.add_argument("--algo", choices=("brute", "dp", "bounded"), default="dp")
    sp.add_argument("--threshold", type=int, default=None, help="heavy column threshold (default ceil(sqrt n))")
    sp.add_argument("--with-cut", action="store_true")
    sp.add_argument("--parallel", type=int, default=1, help="worker threads for border-cut enumeration")

    sp = add("cwd", cmd_cwd, "build a clique-width expression")
    sp.add_argument("model")
    sp.add_argument("--method", choices=("columns", "groups"), default="columns")
    sp.add_argument("-o", "--output", help="write the S-expression here")

    sp = add("eval-expr", cmd_eval_expr, "evaluate an S-expression")
    sp.add_argument("expr")

    sp = add("bounds", cmd_bounds, "clique-width upper bounds of a model")
    sp.add_argument("model")

    sp = add("verify", cmd_verify, "validate a model and check both round trips")
    sp.add_argument("model")

    sp = add("gen", cmd_gen, "generate a seeded random representation")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--grid", type=int, default=2)
    sp.add_argument("--window", type=int, default=4)
    sp.add_argument("--kinds", type=_weights, default=(1.0, 1.0, 1.0, 1.0), help="weights for ++,+-,-+,--")
    sp.add_argument("--twin-rate", type=float, default=0.0)
    sp.add_argument("-o", "--output")

    sp = add("counterexample", cmd_counterexample, "MaxCut on the two-column counterexample")
    sp.add_argument("--with-cut", action="store_true")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "parallel", 1) < 1:
        print("error: --parallel must be at least 1", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except (PropertyViolation, CheckFailed) as exc:
        print(f"property violation: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, ExpressionError, TooLarge, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
