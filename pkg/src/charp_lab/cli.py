"""Command-line entry point ``charp-lab``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .errors import CharpLabError
from .groebner import DEFAULT_PAIR_BUDGET
from .scenario import bundled_fixtures, canonical_json, load_scenario, run_scenario


def _resolve(target: str) -> Path:
    path = Path(target)
    if path.exists():
        return path
    fixtures = bundled_fixtures()
    name = target[len("fixture:"):] if target.startswith("fixture:") else target
    if name in fixtures:
        return fixtures[name]
    raise FileNotFoundError(f"no such scenario file or bundled fixture: {target}")


def render_text(report: dict) -> str:
    lines = [f"charp-lab {report['version']}  status: {report['status']}"]
    sc = report["scenario"]
    for key in ("description", "characteristic", "variables", "defining_ideal"):
        if key in sc:
            lines.append(f"  {key}: {sc[key]}")
    if "minimal_primes" in sc:
        lines.append(f"  minimal primes: {'; '.join(sc['minimal_primes'])}")
    if "error" in report:
        lines.append(f"error: {report['error']}")
    for i, task in enumerate(report["tasks"]):
        head = f"[{i}] {task['kind']} (line {task['line']})"
        if "error" in task:
            lines.append(f"{head}: ERROR {task['error']}")
            continue
        if "expect" in task:
            head += "  expect: " + ("ok" if task["expect"]["ok"] else "FALSIFIED")
        lines.append(head)
        for key, value in sorted(task.get("result", {}).items()):
            if isinstance(value, list):
                value = "; ".join(map(str, value)) if value and not isinstance(value[0], (list, dict)) else value
            lines.append(f"    {key}: {value}")
        if "expect" in task and not task["expect"]["ok"]:
            lines.append(f"    expected: {task['expect']}")
        for w in task.get("warnings", []):
            lines.append(f"    warning: {w}")
    for n in report.get("notices", []):
        lines.append(f"note: {n}")
    lines.append(f"determinism hash: {report['determinism_hash']}")
    return "\n".join(lines)


def cmd_run(args) -> int:
    try:
        path = _resolve(args.scenario)
        scenario = load_scenario(path)
    except (OSError, CharpLabError) as exc:
        print(f"charp-lab: {exc}", file=sys.stderr)
        return 1
    report, code = run_scenario(scenario, levels=args.levels, degree_cap=args.degree_cap,
                                pair_budget=args.pair_budget, alt_u=args.alt_u)
    text = canonical_json(report) if args.format == "json" else render_text(report)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return code


def cmd_fixtures(args) -> int:
    fixtures = bundled_fixtures()
    for name, path in fixtures.items():
        desc = ""
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.startswith("description:"):
                desc = line.split(":", 1)[1].strip()
                break
        print(f"{name:10s} {desc}")
        if args.paths:
            print(f"           {path}")
    return 0


def cmd_check(args) -> int:
    from .acceptance import run_all
    results = run_all(verbose=True, stream=sys.stdout)
    return 0 if all(ok for _, ok, _ in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="charp-lab",
                                     description="Prime-characteristic commutative algebra toolkit.")
    parser.add_argument("--version", action="version", version=f"charp-lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a scenario file (or a bundled fixture name)")
    run.add_argument("scenario")
    run.add_argument("--levels", type=int, default=None, help="Frobenius level bound N")
    run.add_argument("--degree-cap", type=int, default=None, help="degree cap D for truncations")
    run.add_argument("--pair-budget", type=int, default=DEFAULT_PAIR_BUDGET,
                     help="maximum S-pairs per Groebner basis")
    run.add_argument("--alt-u", default=None, metavar="POLY",
                     help="rerun special-ideal lattices with this splitting element and diff")
    fmt = run.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--text", dest="format", action="store_const", const="text")
    run.set_defaults(format="json", func=cmd_run)
    run.add_argument("-o", "--output", default=None, help="write the report to a file")

    fx = sub.add_parser("fixtures", help="list bundled example scenarios")
    fx.add_argument("--paths", action="store_true")
    fx.set_defaults(func=cmd_fixtures)

    chk = sub.add_parser("check", help="run the acceptance suite")
    chk.set_defaults(func=cmd_check)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
