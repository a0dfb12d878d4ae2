"""Command-line entry point: scenario runner, tracer, registry listing and demo."""

from __future__ import annotations

import argparse
import difflib
import sys
from typing import List, Optional

from . import registry
from .scenario import ScenarioError, execute, load_scenario, parse_ticks

OK, MISMATCH, BAD_INPUT = 0, 1, 2


def _compare_golden(text: str, path: str) -> int:
    try:
        with open(path, encoding="utf-8") as fh:
            golden = fh.read()
    except OSError as exc:
        print(f"error: cannot read golden file: {exc}", file=sys.stderr)
        return BAD_INPUT
    if golden == text:
        return OK
    diff = difflib.unified_diff(golden.splitlines(True), text.splitlines(True),
                                fromfile=path, tofile="actual")
    sys.stderr.writelines(diff)
    return MISMATCH


def _join(lines: List[str]) -> str:
    return "".join(line + "\n" for line in lines)


def cmd_list(args) -> int:
    width = max(len(pid) for pid in registry.program_ids())
    for e in registry.entries():
        print(f"{e.program_id:<{width}}  {e.description}")
    return OK


def cmd_run(args) -> int:
    try:
        sc = load_scenario(args.file)
        outcome = execute(sc.program_id, sc.ticks, sc.seed if args.seed is None else args.seed)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    for f in outcome.failures:
        print(f"FAIL {f}", file=sys.stderr)
    status = OK if outcome.ok else MISMATCH
    if args.golden:
        status = max(status, _compare_golden(_join(outcome.trace), args.golden))
    print(f"{'PASS' if status == OK else 'FAIL'} {args.file} "
          f"({sc.program_id}, {len(sc.ticks)} ticks)")
    return status


def cmd_trace(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if lines and '"program"' in lines[0]:
            lines = lines[1:]
        ticks = parse_ticks(lines, args.file)
        outcome = execute(args.program_id, ticks, args.seed or 0)
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return BAD_INPUT
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    text = _join(outcome.trace)
    sys.stdout.write(text)
    if args.golden:
        return _compare_golden(text, args.golden)
    return OK


def cmd_demo_run(args) -> int:
    from .demo import DemoConfigError, load_catalog, run_demo
    try:
        catalog = load_catalog(args.catalog)
        run = run_demo(seed=args.seed or 0, ticks=args.ticks, stop_at=args.stop_at,
                       genre=args.genre, catalog=catalog)
    except DemoConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    sys.stdout.write(run.trace)
    if args.golden:
        return _compare_golden(run.trace, args.golden)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hiphop", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--golden", metavar="PATH", help="compare the trace with this file")
        sp.add_argument("--seed", type=int, default=None, help="scheduler / mock seed")

    sp = sub.add_parser("list", help="list built-in programs")
    sp.set_defaults(func=cmd_list)

    sp = sub.add_parser("run", help="run a scenario file and check its expectations")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("trace", help="print the reaction trace of a program over a tick file")
    sp.add_argument("program_id")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(func=cmd_trace)

    demo = sub.add_parser("demo", help="music player orchestration demo")
    demo_sub = demo.add_subparsers(dest="demo_command", required=True)
    sp = demo_sub.add_parser("run", help="run the demo and print its trace")
    common(sp)
    sp.add_argument("--ticks", type=int, default=200)
    sp.add_argument("--stop-at", type=int, default=None)
    sp.add_argument("--genre", default="jazz")
    sp.add_argument("--catalog", default=None, help="catalog JSON file (default: bundled)")
    sp.set_defaults(func=cmd_demo_run)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
