"""``prevlab`` command line: scenario tasks, single-task subcommands and fuzz campaigns.

Exit status: 0 when every verdict passes, 1 on a verification failure,
2 on usage, parse or schema errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import PrevlabError
from .fuzz import SUITES, fuzz
from .serialize import loads_json
from .tasks import TASK_FIELDS, Scenario, execute, parse_scenario

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SUBCOMMANDS = (
    "eval", "integrate", "member", "compare", "rs-check", "sr-hull", "fork-check",
    "sandwich", "minimax", "minkowski", "lift",
)
INT_FIELDS = {"trials", "bound", "screen"}
LIST_FIELDS = {"generators", "probes"}


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("PREVLAB_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"PREVLAB_SEED must be an integer, got {raw!r}") from None


def _global_flags(ap: argparse.ArgumentParser, default) -> None:
    ap.add_argument("--seed", type=int, default=default, help="seed for sampling (default: $PREVLAB_SEED or 0)")
    ap.add_argument("--pretty", action="store_true", default=default or False, help="indent the JSON report")
    ap.add_argument("--max-elems", type=int, default=default, help="poset size limit (fuzz default 4)")
    ap.add_argument(
        "--timings", action="store_true", default=default or False,
        help="add per-task elapsed seconds (reports are then no longer byte-identical)",
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="prevlab", description="Exact checks for previsions, forks and powercones.")
    _global_flags(ap, None)
    # the same flags are accepted after the subcommand; SUPPRESS keeps earlier values
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="run every task of a scenario file")
    run.add_argument("scenario", help="scenario JSON file, or - for stdin")

    for kind in SUBCOMMANDS:
        sp = sub.add_parser(kind, parents=[common], help=f"run one {kind} task against a scenario's bindings")
        sp.add_argument("scenario", help="scenario JSON file providing the poset and bindings, or -")
        for name in TASK_FIELDS[kind]:
            opt = "--" + name
            if name in INT_FIELDS:
                sp.add_argument(opt, type=int)
            elif name in LIST_FIELDS:
                sp.add_argument(opt, nargs="+", metavar="NAME")
            else:
                sp.add_argument(opt, metavar="NAME" if name not in ("shape", "flavor") else name.upper())
        sp.add_argument("--expect", help="expected value as JSON; turns the verdict into pass/fail")

    fz = sub.add_parser("fuzz", parents=[common], help="seeded random campaign over one property suite")
    fz.add_argument("suite", help="one of: " + ", ".join(SUITES))
    fz.add_argument("--trials", type=int, default=100)
    fz.add_argument("--max-gens", type=int, default=3)
    return ap


def _read_scenario(path: str, max_elems) -> Scenario:
    if path == "-":
        text, source = sys.stdin.read(), "<stdin>"
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        source = path
    return parse_scenario(loads_json(text, source), max_elems)


def _single_task(args) -> dict:
    task = {"kind": args.command, "id": args.command}
    for name in TASK_FIELDS[args.command]:
        value = getattr(args, name.replace("-", "_"))
        if value is not None:
            task[name] = value
    if args.expect is not None:
        try:
            task["expect"] = json.loads(args.expect)
        except json.JSONDecodeError:
            task["expect"] = args.expect
    return task


def _emit(report: dict, pretty: bool) -> None:
    if pretty:
        text = json.dumps(report, indent=2)
    else:
        text = json.dumps(report, separators=(",", ":"))
    sys.stdout.write(text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        seed = args.seed if args.seed is not None else _default_seed()
        if args.command == "fuzz":
            max_elems = args.max_elems if args.max_elems is not None else 4
            report = fuzz(args.suite, args.trials, seed, max_elems, args.max_gens)
            _emit(report, args.pretty)
            return EXIT_OK if report["failed"] == 0 else EXIT_FAIL
        sc = _read_scenario(args.scenario, args.max_elems)
        if args.command != "run":
            sc = Scenario(sc.poset, sc.bindings, [_single_task(args)])
        report = execute(sc, seed, args.timings)
    except (PrevlabError, UsageError, ValueError) as exc:
        where = getattr(exc, "position", None)
        err = {"error": type(exc).__name__, "message": str(exc)}
        if where is not None:
            err["position"] = where
        sys.stderr.write(json.dumps(err) + "\n")
        return EXIT_USAGE
    _emit(report, args.pretty)
    return EXIT_OK if report["summary"]["ok"] else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
