"""Command-line front end: ``eoturan <command> ...``.

Exit status is 0 when the pattern is found (or is OCN-2, or the command just
reports numbers), 1 when it is avoided (or not OCN-2, or only a certificate is
produced) and 2 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any

from . import driver, exmax, increment
from .graph import EdgeOrderedGraph, GraphError, parse, parse_path_notation
from .oracle import BudgetExceeded, contains
from .pattern import NotOcn2, certify, close_vertices, ocn2_witness

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


def load_graph(spec: str) -> EdgeOrderedGraph:
    """An EOG file path, or P-notation such as ``P5^1342``."""
    path = Path(spec)
    if path.is_file():
        try:
            return parse(path.read_text())
        except GraphError as exc:
            where = f":{exc.line}" if exc.line is not None else ""
            raise GraphError(f"{spec}{where}: {exc}") from None
    if spec.upper().startswith("P"):
        return parse_path_notation(spec)
    raise GraphError(f"{spec}: no such file and not P-notation")


def _emb(e) -> dict[str, int]:
    return {str(v): x for v, x in enumerate(e)}


# ---------------------------------------------------------------- commands


def cmd_contains(args) -> tuple[int, dict[str, Any]]:
    g, h = load_graph(args.host), load_graph(args.pattern)
    emb = contains(g, h, budget=args.budget)
    if emb is None:
        return EXIT_NO, {"result": "avoids"}
    return EXIT_YES, {"result": "contains", "embedding": _emb(emb)}


def cmd_classify(args) -> tuple[int, dict[str, Any]]:
    h = load_graph(args.pattern)
    report: dict[str, Any] = {"n": h.n, "m": h.m, "close": sorted(close_vertices(h))}
    try:
        w = ocn2_witness(h)
    except GraphError as exc:
        report.update(ocn2=False, reason=str(exc))
        return EXIT_NO, report
    if w is None:
        report.update(ocn2=False, reason="no all-close colour class")
        return EXIT_NO, report
    report.update(
        ocn2=True,
        left=sorted(w.close_side),
        right=sorted(w.other_side),
        left_order=list(w.left_order),
        k=w.k,
        ell=h.n,
        star=w.k == 1,
    )
    return EXIT_YES, report


def cmd_step(args) -> tuple[int, dict[str, Any]]:
    g, h = load_graph(args.host), load_graph(args.pattern)
    forest = certify(h)
    try:
        out = increment.increment_step(g, forest, seed=args.seed, grid_cap=args.grid_cap, f=args.f)
    except increment.IncrementDiagnostic as exc:
        return EXIT_ERROR, {"outcome": "diagnostic", "message": str(exc), "audit": exc.audit.to_dict()}
    report: dict[str, Any] = {"outcome": out.kind, "audit": out.audit.to_dict()}
    if isinstance(out, increment.DenseSubgraph):
        report["subgraph"] = {
            "vertices": sorted(out.subgraph.vertices),
            "edges": [list(e) for e in out.subgraph.edges],
            "edge_count": out.edge_count,
            "average_degree": str(out.average_degree),
        }
        return EXIT_NO, report
    if isinstance(out, increment.FoundEmbedding):
        report["embedding"] = _emb(out.embedding)
        report["grid"] = list(out.grid.thresholds)
        return EXIT_YES, report
    report["reason"] = out.reason
    return EXIT_NO, report


def cmd_drive(args) -> tuple[int, dict[str, Any]]:
    g, h = load_graph(args.host), load_graph(args.pattern)
    forest = certify(h)
    budget = driver.DriverBudget(max_iterations=args.max_iterations, grid_cap=args.grid_cap, seed=args.seed)
    out = driver.find_or_certify(g, forest, budget)
    report: dict[str, Any] = {"outcome": out.kind, "trace": out.trace.as_dict()}
    if isinstance(out, driver.Found):
        report.update(method=out.method, embedding=_emb(out.embedding))
        return EXIT_YES, report
    report.update(
        avoidance_proved=out.avoidance_proved,
        final={"n": out.final.n, "m": out.final.m, "ids": list(out.final_ids)},
    )
    return EXIT_NO, report


def cmd_bound(args) -> tuple[int, dict[str, Any]]:
    const = driver.RecursionConstants(args.k, args.ell)
    lo, hi = driver.exp_branch(args.n, args.k, args.ell)
    report = {
        "n": args.n,
        "k": args.k,
        "ell": args.ell,
        "constants": const.as_dict(),
        "linear_branch": str(const.c4 * args.n),
        "exp_branch": str(hi) if lo == hi else [float(lo), float(hi)],
        "bound": driver.bound(args.n, args.k, args.ell),
    }
    return EXIT_YES, report


def cmd_exmax(args) -> tuple[int, dict[str, Any]]:
    h = load_graph(args.pattern)
    cache = args.cache
    try:
        res = exmax.brute_force_ex(args.n, h, budget=args.budget, allow_n7=args.allow_n7, cache=cache)
    except exmax.ExmaxBudgetExceeded as exc:
        return EXIT_ERROR, {"error": str(exc), "lower": exc.lower, "upper": exc.upper}
    report = res.as_dict()
    report["cached"] = res.cached
    # search time is not reproducible; it goes with the rest of the metadata
    args.search_seconds = report.pop("seconds")
    return EXIT_YES, report


# ---------------------------------------------------------------- output


def _text(report: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(report, dict):
        for key, val in report.items():
            if isinstance(val, (dict, list)) and val and any(isinstance(x, (dict, list)) for x in _values(val)):
                lines.append(f"{pad}{key}:")
                lines.extend(_text(val, indent + 1))
            elif isinstance(val, str) and "\n" in val:
                lines.append(f"{pad}{key}:")
                lines.extend(pad + "  " + s for s in val.rstrip("\n").split("\n"))
            else:
                lines.append(f"{pad}{key}: {_flat(val)}")
    elif isinstance(report, list):
        for item in report:
            if isinstance(item, dict):
                lines.append(pad + "  ".join(f"{k}={_flat(v)}" for k, v in item.items()))
            else:
                lines.append(pad + _flat(item))
    return lines


def _values(val):
    return val.values() if isinstance(val, dict) else val


def _flat(val: Any) -> str:
    if isinstance(val, dict):
        return ", ".join(f"{k}->{_flat(v)}" for k, v in val.items())
    if isinstance(val, list):
        return " ".join(_flat(x) for x in val)
    if isinstance(val, bool):
        return "yes" if val else "no"
    return "-" if val is None else str(val)


def _meta(started: float) -> dict[str, Any]:
    try:
        ver = version("eoturan")
    except PackageNotFoundError:
        ver = "unknown"
    return {
        "version": ver,
        "generated": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "elapsed_seconds": round(time.perf_counter() - started, 3),
    }


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=lambda s: int(s, 0) % 2**64, default=0, help="64-bit seed for grid sampling")
    common.add_argument("--grid-cap", type=int, default=increment.DEFAULT_GRID_CAP,
                        help="enumerate grids exhaustively up to this many, else sample this many")
    common.add_argument("--threads", type=int, default=1, help="worker cap (searches run single-threaded)")
    common.add_argument("--no-meta", action="store_true", help="omit version and timing so output is reproducible")
    common.add_argument("--cache", help=f"exmax result cache (overrides ${exmax.CACHE_ENV})")

    p = argparse.ArgumentParser(prog="eoturan", description="Edge-ordered forests of order chromatic number 2.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("contains", parents=[common], help="does HOST contain PATTERN?")
    s.add_argument("host")
    s.add_argument("pattern")
    s.add_argument("--budget", type=int, default=10_000_000, help="search node budget")
    s.set_defaults(func=cmd_contains)

    s = sub.add_parser("classify", parents=[common], help="OCN-2 test and witness")
    s.add_argument("pattern")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("step", parents=[common], help="one density-increment step with its audit")
    s.add_argument("host")
    s.add_argument("pattern")
    s.add_argument("--f", type=int, default=None, help="override the slice width")
    s.set_defaults(func=cmd_step)

    s = sub.add_parser("drive", parents=[common], help="iterate the step until a verdict")
    s.add_argument("host")
    s.add_argument("pattern")
    s.add_argument("--max-iterations", type=int, default=64)
    s.set_defaults(func=cmd_drive)

    s = sub.add_parser("bound", parents=[common], help="constants c1..c5 and the extremal bound")
    s.add_argument("n", type=int)
    s.add_argument("k", type=int)
    s.add_argument("ell", type=int)
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("exmax", parents=[common], help="exact ex_<(n, PATTERN) for n <= 6")
    s.add_argument("n", type=int)
    s.add_argument("pattern")
    s.add_argument("--budget", type=int, default=exmax.DEFAULT_BUDGET)
    s.add_argument("--allow-n7", action="store_true", help="permit the long n = 7 search")
    s.set_defaults(func=cmd_exmax)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        code, report = args.func(args)
    except (GraphError, NotOcn2, ValueError, OSError, BudgetExceeded) as exc:
        print(f"eoturan {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    report = {"command": args.command, **report}
    if not args.no_meta:
        report["meta"] = _meta(started)
        if hasattr(args, "search_seconds"):
            report["meta"]["search_seconds"] = args.search_seconds
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print("\n".join(_text(report)))
    return code
