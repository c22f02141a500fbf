"""Command line front end: build games from formulas, solve them, run
benchmark sweeps and summarize result files.

`solve` prints a few human-readable lines and ends with a single
machine-readable line of the form `RESULT {...}`.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import game as game_mod
from .bench import ALGOS, CLASSES, read_csv, report, run_bench, write_csv
from .construction import BuildSizeError, FragmentError, build
from .game import ENVIRONMENT, SYSTEM, GameFormatError
from .ltl import ParseError
from .ql import q_learn
from .si import SolveTimeout, strategy_improvement


def _ap_list(text: str):
    return [s.strip() for s in text.split(",") if s.strip()]


def _read_ltl(value: str) -> str:
    if os.path.exists(value):
        with open(value) as fh:
            return fh.read().strip()
    return value


def _cmd_build(args) -> int:
    text = _read_ltl(args.ltl)
    try:
        g = build(
            text,
            inputs=_ap_list(args.inputs),
            outputs=_ap_list(args.outputs),
            order=args.order,
            max_vertices=args.max_vertices,
        )
    except (ParseError, FragmentError, BuildSizeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    game_mod.save(g, args.output)
    print(
        f"{len(g.vertices)} vertices, {len(g.edges)} edges, "
        f"max priority {g.max_priority()} -> {args.output}"
    )
    return 0


def _winner_name(w) -> str:
    if w == SYSTEM:
        return "system"
    if w == ENVIRONMENT:
        return "environment"
    return "none"


def _cmd_solve(args) -> int:
    try:
        g = game_mod.load(args.game)
    except (OSError, GameFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    deadline = None if args.timeout is None else time.monotonic() + args.timeout
    out = {"algo": args.algo, "timeout": False}
    try:
        if args.algo in ("si", "si-sem"):
            res = strategy_improvement(
                g,
                init="random" if args.algo == "si" else "trueness",
                seed=args.seed,
                deadline=deadline,
            )
            out["iterations"] = res["iterations"]
            out["immediately_solved"] = res["immediately_solved"]
        else:
            mode = {"ql-win": "win", "ql-pri": "priority", "ql-sem": "semantic"}[
                args.algo
            ]
            res = q_learn(
                g,
                reward=mode,
                seed=args.seed,
                alpha=args.alpha,
                epsilon=args.epsilon,
                check_period=args.check_period,
                budget=args.budget,
                deadline=deadline,
            )
            out["episodes"] = res["episodes"]
            out["updates"] = res["updates"]
    except SolveTimeout:
        out["timeout"] = True
        out["winner"] = "none"
        print("timed out")
        print("RESULT " + json.dumps(out, sort_keys=True))
        return 0
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out["winner"] = _winner_name(res["winner"])
    out["eval_steps"] = res["eval_steps"]
    out["solution_size"] = (
        str(res["solution_size"]) if res["solution_size"] is not None else None
    )
    strategy = res.get("strategy")
    out["strategy"] = (
        {str(v): ei for v, ei in sorted(strategy.items())}
        if strategy is not None
        else None
    )

    print(f"winner: {out['winner']}")
    print(f"evaluation steps: {out['eval_steps']}")
    if out["solution_size"] is not None:
        print(f"solution size: {out['solution_size']}")
    if "iterations" in out:
        print(
            f"iterations: {out['iterations']}, "
            f"immediately solved: {out['immediately_solved']}"
        )
    else:
        print(f"episodes: {out['episodes']}, updates: {out['updates']}")
    print("RESULT " + json.dumps(out, sort_keys=True))
    return 0


def _cmd_bench(args) -> int:
    classes = (
        tuple(args.classes)
        if args.classes
        else ("safety", "cosafety", "near-safety", "near-cosafety")
    )
    rows, skipped = run_bench(
        classes=classes,
        count=args.count,
        runs=args.runs,
        timeout=args.timeout,
        master_seed=args.seed,
        size=args.size,
        n_aps=args.aps,
        ql_budget=args.budget,
        max_vertices=args.max_vertices,
    )
    write_csv(rows, args.output)
    for model, reason in skipped:
        print(f"skipped {model}: {reason}")
    print(f"{len(rows)} rows -> {args.output} ({len(skipped)} models skipped)")
    return 0


def _cmd_report(args) -> int:
    try:
        rows = read_csv(args.csv)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report(rows, out_dir=args.out_dir)
    return 0


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="semgame",
        description="Turn temporal formulas into labelled parity games "
        "and solve them.",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    b = sub.add_parser("build", help="translate a formula into a game file")
    b.add_argument(
        "--ltl",
        required=True,
        help="formula text, or a path to a file containing it",
    )
    b.add_argument("--inputs", default="", help="comma-separated environment atoms")
    b.add_argument("--outputs", default="", help="comma-separated system atoms")
    b.add_argument(
        "--order",
        choices=("env", "sys"),
        default="env",
        help="which side moves first in each round",
    )
    b.add_argument("--max-vertices", type=int, default=None)
    b.add_argument("-o", "--output", default="game.json")
    b.set_defaults(fn=_cmd_build)

    s = sub.add_parser("solve", help="solve a game file")
    s.add_argument("game")
    s.add_argument("--algo", choices=ALGOS, required=True)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--alpha", type=float, default=0.1)
    s.add_argument("--epsilon", type=float, default=0.1)
    s.add_argument("--check-period", type=int, default=10)
    s.add_argument("--budget", type=int, default=100_000)
    s.add_argument("--timeout", type=float, default=None)
    s.set_defaults(fn=_cmd_solve)

    n = sub.add_parser("bench", help="run the randomized benchmark")
    n.add_argument(
        "--class",
        dest="classes",
        action="append",
        choices=sorted(CLASSES),
        help="formula class to include (repeatable; default: all but parity)",
    )
    n.add_argument("--count", type=int, default=10, help="formulas per class")
    n.add_argument("--runs", type=int, default=5, help="runs per formula and algorithm")
    n.add_argument("--timeout", type=float, default=60.0, help="seconds per solve")
    n.add_argument("--seed", type=int, default=0, help="master seed")
    n.add_argument("--size", type=int, default=10, help="formula node budget")
    n.add_argument("--aps", type=int, default=4, help="alphabet size")
    n.add_argument("--budget", type=int, default=100_000, help="learning budget")
    n.add_argument("--max-vertices", type=int, default=10_000)
    n.add_argument("-o", "--output", default="bench.csv")
    n.set_defaults(fn=_cmd_bench)

    r = sub.add_parser("report", help="summarize a benchmark CSV")
    r.add_argument("csv")
    r.add_argument("--out-dir", default=None, help="also write step curves here")
    r.set_defaults(fn=_cmd_report)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
