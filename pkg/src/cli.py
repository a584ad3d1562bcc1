import argparse
import io
import sys
import os
from typing import List

# Ensure we can import the package (project root is ../ from src/)
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "../")))

from rich.console import Console
from rich.markup import escape
from rich.table import Table

from backend.infra.config import Config
from backend.lattice.exceptions import InstanceParseError, LatticeError
from backend.utils.logger import Logger
from src import commands
from src.core.instance import CHAMBER, WEYL, load_source
from src.core.schema import Report

EXIT_OK = 0
EXIT_INTERNAL = 4

# Options whose values are coordinate lists and may start with "-"
VECTOR_OPTIONS = ("--point", "--xi")


def _add_instance_args(parser: argparse.ArgumentParser):
    parser.add_argument("--file", type=str, default=None, help="Instance file (YAML or JSON)")
    parser.add_argument("--builtin", type=str, default=None, help="Builtin root system name, e.g. co2222")


def _add_output_args(parser: argparse.ArgumentParser):
    parser.add_argument("--out", type=str, default=None, help="Report path (default: stdout)")
    parser.add_argument("--format", choices=["json", "table"], default="json", help="Report format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weyl-lab", description="Exact Weyl group and cone computations")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in [("validate", "Check the root axioms"), ("coxeter", "Coxeter matrix")]:
        p = sub.add_parser(name, help=help_text)
        _add_instance_args(p)
        _add_output_args(p)

    p = sub.add_parser("relations", help="Verify reflection orders against the Coxeter matrix")
    _add_instance_args(p)
    p.add_argument("--power-bound", type=int, default=None, help="Largest power tried for infinite orders")
    _add_output_args(p)

    p = sub.add_parser("growth", help="New elements per word length")
    _add_instance_args(p)
    p.add_argument("--depth", type=int, required=True)
    _add_output_args(p)

    p = sub.add_parser("orbit", help="Orbit of a point over the word ball")
    _add_instance_args(p)
    p.add_argument("--point", type=str, required=True, help="Comma-separated rationals, e.g. -1,1/2,3")
    p.add_argument("--depth", type=int, required=True)
    _add_output_args(p)

    p = sub.add_parser("dominant", help="Reflect a point into the closed chamber")
    _add_instance_args(p)
    p.add_argument("--point", type=str, required=True)
    p.add_argument("--cap", type=int, default=None, help="Step cap (default from settings)")
    p.add_argument("--xi", type=str, default=None, help="Optional progress functional")
    _add_output_args(p)

    p = sub.add_parser("tile", help="Audit overlaps and coverage of cone translates")
    _add_instance_args(p)
    p.add_argument("--cone", type=str, default=CHAMBER, help="Base cone name")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=None, help="Worker processes for overlap checks")
    _add_output_args(p)

    p = sub.add_parser("pixi", help="Looijenga cone of a functional")
    _add_instance_args(p)
    p.add_argument("--action", type=str, default=WEYL)
    p.add_argument("--xi", type=str, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--samples", type=int, default=None, help="Also run the sampled polyhedral check")
    p.add_argument("--sample-depth", type=int, default=None,
                   help="Draw samples from translates of Pi over this ball (default: --depth)")
    p.add_argument("--seed", type=int, default=None)
    _add_output_args(p)

    p = sub.add_parser("builtin", help="List builtin root systems")
    _add_output_args(p)
    return parser


def run_command(args: argparse.Namespace) -> Report:
    if args.command == "builtin":
        return commands.cmd_builtin_list()

    instance, label = load_source(args.file, args.builtin)
    if args.command == "validate":
        return commands.cmd_validate(instance, label)
    if args.command == "coxeter":
        return commands.cmd_coxeter(instance, label)
    if args.command == "relations":
        return commands.cmd_relations(instance, label, args.power_bound)
    if args.command == "growth":
        return commands.cmd_growth(instance, label, args.depth)
    if args.command == "orbit":
        return commands.cmd_orbit(instance, label, args.point, args.depth)
    if args.command == "dominant":
        return commands.cmd_dominant(instance, label, args.point, args.cap, args.xi)
    if args.command == "tile":
        return commands.cmd_tile(instance, label, args.cone, args.depth, args.samples, args.seed, args.jobs)
    if args.command == "pixi":
        return commands.cmd_pixi(instance, label, args.action, args.xi, args.depth, args.samples, args.seed,
                                  args.sample_depth)
    raise InstanceParseError(f"Unknown command: {args.command}")


def _cell(value) -> str:
    if isinstance(value, list):
        if len(value) > 8:
            return f"[{len(value)} entries]"
        return ", ".join(_cell(v) for v in value)
    if isinstance(value, dict):
        return "; ".join(f"{k}={_cell(v)}" for k, v in value.items())
    return str(value)


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return report.model_dump_json(indent=2) + "\n"
    table = Table(title=f"{report.command} {report.instance or ''}".strip())
    table.add_column("field")
    table.add_column("value")
    for key in ("digest", "seed"):
        value = getattr(report, key)
        if value is not None:
            table.add_row(key, escape(str(value)))
    for key, value in report.result.model_dump(mode="json").items():
        table.add_row(key, escape(_cell(value)))
    buffer = io.StringIO()
    Console(file=buffer, force_terminal=False, width=200).print(table)
    return buffer.getvalue()


def attach_vector_values(argv: List[str]) -> List[str]:
    """Rewrite `--point -1,2` as `--point=-1,2` so argparse does not read the value as an option."""
    result = []
    i = 0
    while i < len(argv):
        if argv[i] in VECTOR_OPTIONS and i + 1 < len(argv):
            result.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            result.append(argv[i])
            i += 1
    return result


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(attach_vector_values(list(sys.argv[1:] if argv is None else argv)))
    Config.initialize()

    try:
        report = run_command(args)
    except LatticeError as e:
        Logger.error("command failed", command=args.command, exit_code=e.exit_code, reason=e)
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        Logger.error("command crashed", command=args.command, error=type(e).__name__, reason=e)
        print(f"Internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL

    text = render(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
