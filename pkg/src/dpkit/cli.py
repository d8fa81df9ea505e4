"""Command-line entry point: run corpus problems, serve traces, export pages.

Exit codes: 0 success, 1 runtime/I-O failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from .export import export_static
from .problems import (
    EditCosts,
    TimeAllocInstance,
    WISInstance,
    load_instance,
    random_edit_pair,
    random_time_allocation,
    random_wis_instance,
    solve_edit_distance,
    solve_time_allocation,
    solve_wis,
)
from .server import PORT_ENV_VAR, TraceServer, resolve_port
from .trace import TraceParseError, _json_num, deserialize_trace, serialize_trace

PROBLEM_ALIASES = {
    "wis": "wis",
    "edit": "edit_distance",
    "edit_distance": "edit_distance",
    "alloc": "time_allocation",
    "time_allocation": "time_allocation",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dpkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="solve a bundled problem and record its trace")
    run.add_argument("problem", choices=sorted(PROBLEM_ALIASES), help="which problem to solve")
    run.add_argument("--instance", type=Path, help="JSON instance file")
    run.add_argument("--export", type=Path, help="write the trace JSON here")
    run.add_argument("--n", type=int, help="random instance size")
    run.add_argument("--seed", type=int, help="random generator seed")
    run.add_argument("--hours", type=int, help="time_allocation: total study hours")
    run.add_argument("--x", help="edit: source string")
    run.add_argument("--y", help="edit: target string")
    run.add_argument("--insert-cost", type=float, default=10, help="edit: insertion cost")
    run.add_argument("--delete-cost", type=float, default=12, help="edit: deletion cost")
    run.add_argument("--replace-cost", type=float, default=7, help="edit: replacement cost")

    serve = sub.add_parser("serve", help="serve a recorded trace over HTTP")
    serve.add_argument("trace", type=Path, help="trace JSON file")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, help=f"default {PORT_ENV_VAR} or 8050")
    serve.add_argument("--ui", type=Path, help="directory of built web UI assets to serve at /")

    export = sub.add_parser("export", help="render a trace into a standalone HTML page")
    export.add_argument("trace", type=Path, help="trace JSON file")
    export.add_argument("--out", type=Path, required=True, help="output HTML path")

    return parser


def _intcost(value: float):
    return int(value) if float(value).is_integer() else value


def _rng(parser, args) -> random.Random:
    seed = args.seed if args.seed is not None else random.randrange(2**32)
    print(f"seed: {seed}", file=sys.stderr)
    return random.Random(seed)


def _cmd_run(parser: argparse.ArgumentParser, args) -> int:
    problem = PROBLEM_ALIASES[args.problem]
    generator_flags = [args.n, args.seed, args.hours, args.x, args.y]
    if args.instance is not None and any(v is not None for v in generator_flags):
        parser.error("pass either --instance or generator parameters, not both")

    if args.instance is not None:
        try:
            file_problem, payload = load_instance(args.instance)
        except (OSError, ValueError) as err:
            print(f"dpkit: {err}", file=sys.stderr)
            return 1
        if file_problem != problem:
            print(f"dpkit: instance file is for {file_problem!r}, not {args.problem!r}", file=sys.stderr)
            return 1
    elif problem == "wis":
        if args.n is None:
            parser.error("wis needs --instance or --n")
        payload = random_wis_instance(_rng(parser, args), args.n)
    elif problem == "edit_distance":
        costs = EditCosts(
            insert=_intcost(args.insert_cost),
            delete=_intcost(args.delete_cost),
            replace=_intcost(args.replace_cost),
        )
        if args.x is not None or args.y is not None:
            payload = (args.x or "", args.y or "", costs)
        elif args.n is not None:
            x, y = random_edit_pair(_rng(parser, args), max_len=args.n)
            payload = (x, y, costs)
        else:
            parser.error("edit needs --instance, --x/--y, or --n")
    else:
        if args.n is None or args.hours is None:
            parser.error("alloc needs --instance or both --n and --hours")
        payload = random_time_allocation(_rng(parser, args), args.n, args.hours)

    try:
        if problem == "wis":
            value, _, trace = solve_wis(payload)
        elif problem == "edit_distance":
            value, trace = solve_edit_distance(*payload)
        else:
            value, trace = solve_time_allocation(payload)
        if args.export is not None:
            args.export.write_bytes(serialize_trace(trace))
    except (OSError, ValueError) as err:
        print(f"dpkit: {err}", file=sys.stderr)
        return 1
    print(_json_num(value))
    return 0


def _load_trace(path: Path):
    try:
        return deserialize_trace(path.read_bytes())
    except OSError as err:
        print(f"dpkit: {err}", file=sys.stderr)
        return None
    except TraceParseError as err:
        print(f"dpkit: {path}: {err}", file=sys.stderr)
        return None


def _cmd_serve(args) -> int:
    trace = _load_trace(args.trace)
    if trace is None:
        return 1
    port = resolve_port(args.port)
    try:
        server = TraceServer(trace, host=args.host, port=port, ui_dir=args.ui)
    except OSError as err:
        print(f"dpkit: cannot bind port {port}: {err}", file=sys.stderr)
        return 1
    print(f"serving {args.trace} at {server.url}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def _cmd_export(args) -> int:
    trace = _load_trace(args.trace)
    if trace is None:
        return 1
    try:
        export_static(trace, args.out)
    except OSError as err:
        print(f"dpkit: {err}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(parser, args)
    if args.command == "serve":
        return _cmd_serve(args)
    return _cmd_export(args)


if __name__ == "__main__":
    sys.exit(main())
