"""Command-line entry point: ``assocbrain <subcommand> ...``."""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from assocbrain import nanocode
from assocbrain.errors import AssocBrainError
from assocbrain.scenario import load_scenario
from assocbrain.world import render_trace, run_simulation


def _read(path: str) -> str:
    p = Path(path)
    if p.exists():
        return p.read_text()
    bundled = resources.files("assocbrain") / "scenarios" / p.name
    if bundled.is_file():
        return bundled.read_text()
    raise FileNotFoundError(f"no such file: {path}")


def _world(args):
    overrides = {}
    if args.policy:
        overrides["multi_match_policy"] = args.policy
    if args.dream:
        overrides["dream_mode"] = True
    if args.pair_removal:
        overrides["pair_removal"] = True
    world = load_scenario(_read(args.scenario), overrides)
    for w in world.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return world


def cmd_run(args, out):
    world = _world(args)
    run_simulation(world, args.ticks, sink=lambda ev: out.write(ev.render() + "\n"))
    return 0


def cmd_step(args, out):
    world = _world(args)
    stdin = args.stdin or sys.stdin
    out.write(world.describe() + "\n")
    for _ in range(args.ticks):
        out.write("-- press Enter for the next tick (EOF quits) --\n")
        out.flush()
        if not stdin.readline():
            break
        start = len(world.trace)
        run_simulation(world, 1)
        out.write(render_trace(world.trace[start:]))
        out.write(world.describe() + "\n")
    return 0


def cmd_inspect(args, out):
    out.write(_world(args).describe() + "\n")
    return 0


def _program(path):
    return nanocode.assemble(_read(path), Path(path).stem)


def cmd_assemble(args, out):
    prog = _program(args.file)
    out.write(f"# {prog.name}: {len(prog)} ops, {2 * len(prog)} lines\n")
    out.write(prog.text())
    return 0


def cmd_verify(args, out):
    prog = _program(args.file)
    problems = nanocode.verify(prog, args.width)
    if problems:
        for p in problems:
            out.write(f"violation: {p}\n")
        return 1
    out.write(f"ok: {len(prog)} ops on a {args.width}-bit bus\n")
    return 0


def cmd_run_nano(args, out):
    prog = _program(args.file)
    bits, width = nanocode.parse_bus(args.bus, args.width)
    problems = nanocode.verify(prog, width)
    if problems:
        for p in problems:
            out.write(f"violation: {p}\n")
        return 1
    result = nanocode.run(bits, prog, width)
    out.write(nanocode.format_bus(result, width) + "\n")
    return 0


def cmd_reverse(args, out):
    out.write(nanocode.reverse(_program(args.file)).text())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="assocbrain", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_cmd(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("scenario")
        p.add_argument("--ticks", type=int, default=10)
        p.add_argument("--policy", choices=["first", "sequential", "importance_max"])
        p.add_argument("--dream", action="store_true")
        p.add_argument("--pair-removal", action="store_true")
        p.add_argument("--seed", type=int, help="accepted for harness use; the simulator is deterministic")
        p.set_defaults(func=func, stdin=None)
        return p

    scenario_cmd("run", cmd_run, "run a scenario and print its trace")
    scenario_cmd("step", cmd_step, "single-step a scenario tick by tick")
    scenario_cmd("inspect", cmd_inspect, "dump a loaded scenario")

    p = sub.add_parser("nano-assemble", help="assemble and pretty-print nanocode")
    p.add_argument("file")
    p.set_defaults(func=cmd_assemble)
    p = sub.add_parser("nano-verify", help="check FM/TO disjointness and bounds")
    p.add_argument("file")
    p.add_argument("--width", type=int, default=64)
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("nano-run", help="run nanocode on a bus given MSB first")
    p.add_argument("file")
    p.add_argument("--bus", required=True)
    p.add_argument("--width", type=int)
    p.set_defaults(func=cmd_run_nano)
    p = sub.add_parser("nano-reverse", help="print the inverse program")
    p.add_argument("file")
    p.set_defaults(func=cmd_reverse)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command in ("run", "step") and args.ticks < 0:
        print("error: --ticks must be >= 0", file=sys.stderr)
        return 2
    try:
        return args.func(args, out)
    except (AssocBrainError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
