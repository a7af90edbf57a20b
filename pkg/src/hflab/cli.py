"""Command-line front end: ``hflab run|validate|verify|growth|twist|fiber|scenarios``.

Exit codes: 0 every check passed, 1 some check failed, 2 bad input (schema,
parse or support errors), 3 an internal theorem check was violated.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import HflabError, TheoremViolation
from .qls import Character, build_fiber
from .scenario import (GRADED_CHECKS, Runner, bundled_names, build_report, dumps_report,
                       load_scenario)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUG = 0, 1, 2, 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hflab", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def scenario_cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("scenario", help="scenario JSON path or bundled scenario name")
        sp.add_argument("--out", help="write the JSON report here")
        sp.add_argument("--jobs", type=int, default=1, help="run checks concurrently")
        sp.add_argument("--quiet", action="store_true", help="no summary table")
        return sp

    scenario_cmd("run", "run every check declared by the scenario")
    scenario_cmd("validate", "datum checks only")
    scenario_cmd("verify", "graded-system checks on the scenario support")
    scenario_cmd("growth", "ball growth and verdicts for the generators")
    scenario_cmd("twist", "graded-system checks on the cocycle-twisted system")
    fp = sub.add_parser("fiber", help="dump the fiber Hopf algebra at a character as JSON")
    fp.add_argument("scenario")
    fp.add_argument("--char", required=True, help='character JSON, e.g. \'{"t":["2"],"s":["0"]}\' or eps')
    fp.add_argument("--out")
    sub.add_parser("scenarios", help="list bundled scenarios")
    return p


def _summary(report: dict, command: str) -> str:
    lines = [f"scenario {report['scenario']} ({command}): {report['status'].upper()}"]
    width = max([len(c["name"]) for c in report["checks"]] + [5])
    for c in report["checks"]:
        n = len(c["entries"])
        bad = sum(e["status"] != "pass" for e in c["entries"])
        lines.append(f"  {c['name']:<{width}}  {c['status'].upper():<4}  "
                     f"{n - bad}/{n} entries, {report['timing'].get(c['name'], 0):.2f}s")
    return "\n".join(lines)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _run(args) -> int:
    sc = load_scenario(args.scenario)
    runner = Runner(sc)
    cmd = args.command
    if cmd == "run":
        results = runner.run(sc.checks, jobs=args.jobs)
    elif cmd == "validate":
        results = runner.run(["validate"])
    elif cmd == "growth":
        results = runner.run(["growth"])
    else:
        checks = [c for c in sc.checks if c in GRADED_CHECKS] or list(GRADED_CHECKS)
        system = runner.twisted_system() if cmd == "twist" else None
        results = runner.run(checks, jobs=args.jobs, system=system)
    report = build_report(sc, results)
    out = args.out or sc.output
    text = dumps_report(report)
    if out:
        Path(out).write_text(text)
    if not args.quiet:
        print(_summary(report, cmd))
    if not out and args.quiet:
        sys.stdout.write(text)
    return EXIT_OK if report["status"] == "pass" else EXIT_FAIL


def _fiber(args) -> int:
    sc = load_scenario(args.scenario)
    raw = args.char.strip()
    obj = raw if raw in ("eps", "epsilon", "e", "1") else json.loads(raw)
    kappa = Character.from_json(sc.datum, obj)
    fib = build_fiber(sc.datum, kappa)
    doc = {"character": kappa.to_json(), "datum": sc.datum.to_json(), "hopf": fib.hopf.to_json()}
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "scenarios":
            print("\n".join(bundled_names()))
            return EXIT_OK
        if args.command == "fiber":
            return _fiber(args)
        return _run(args)
    except TheoremViolation as exc:
        print(f"error: internal consistency violated: {exc}", file=sys.stderr)
        return EXIT_BUG
    except (HflabError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
