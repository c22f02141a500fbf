"""Randomized benchmarking: formula classes, deterministic seeding,
solver sweeps, CSV rows and aggregate tables.

Every random draw is derived from the master seed by hashing, so a
bench run is reproducible row for row; only wall_ms varies between
runs of the same seed.
"""

from __future__ import annotations

import csv
import hashlib
import math
import os
import random
import sys
import time
from fractions import Fraction

from . import ltl
from .construction import BuildSizeError, FragmentError, build
from .game import SYSTEM
from .ql import q_learn
from .si import SolveTimeout, strategy_improvement

# operator weights in the order: and, or, always, eventually, next, until
CLASSES = {
    "safety": (7, 7, 10, 0, 5, 0),
    "cosafety": (7, 7, 0, 10, 5, 0),
    "near-safety": (7, 7, 10, 1, 5, 1),
    "near-cosafety": (7, 7, 1, 10, 5, 1),
    "parity": (1, 1, 1, 1, 1, 1),
}

ALGOS = ("si", "si-sem", "ql-win", "ql-pri", "ql-sem")

CSV_FIELDS = (
    "model",
    "class",
    "algo",
    "run",
    "seed",
    "winner",
    "eval_steps",
    "solution_size",
    "immediate",
    "wall_ms",
    "timeout",
)

_BINARY = (0, 1, 5)
_OP_NAMES = ("and", "or", "always", "eventually", "next", "until")


def atom_names(n_aps: int):
    if not 1 <= n_aps <= 26:
        raise ValueError("supported atom counts are 1 to 26")
    return [chr(ord("a") + i) for i in range(n_aps)]


def ap_split(n_aps: int):
    """Alternating input/output split of the atom alphabet."""
    names = atom_names(n_aps)
    return names[0::2], names[1::2]


def random_formula(rng: random.Random, budget: int, n_aps: int, weights) -> ltl.Formula:
    """Weight-driven random formula spending exactly `budget` nodes
    before simplification. Leaves are positive atoms; binary operators
    split the remaining budget uniformly."""
    names = atom_names(n_aps)

    def gen(b: int) -> ltl.Formula:
        if b <= 1:
            return ltl.atom(names[rng.randrange(n_aps)])
        ops = []
        ws = []
        for i, w in enumerate(weights):
            if w <= 0:
                continue
            if i in _BINARY and b < 3:
                continue
            ops.append(i)
            ws.append(w)
        if not ops:
            return ltl.atom(names[rng.randrange(n_aps)])
        op = rng.choices(ops, weights=ws, k=1)[0]
        if op in _BINARY:
            lb = rng.randint(1, b - 2)
            lhs = gen(lb)
            rhs = gen(b - 1 - lb)
            if op == 0:
                return ltl.conj(lhs, rhs)
            if op == 1:
                return ltl.disj(lhs, rhs)
            return ltl.until(lhs, rhs)
        body = gen(b - 1)
        if op == 2:
            return ltl.always(body)
        if op == 3:
            return ltl.eventually(body)
        return ltl.nxt(body)

    return gen(budget)


def cell_seed(master_seed, *parts) -> int:
    """Stable 64-bit seed for one cell of the experiment grid."""
    key = ":".join(str(p) for p in (master_seed, *parts))
    return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "big")


# ------------------------------------------------------------ the protocol


def run_bench(
    classes=("safety", "cosafety", "near-safety", "near-cosafety"),
    count: int = 10,
    runs: int = 5,
    timeout=60.0,
    master_seed: int = 0,
    size: int = 10,
    n_aps: int = 4,
    ql_budget: int = 100_000,
    max_vertices: int = 10_000,
):
    """Generates `count` formulas per class, builds their games and
    runs every algorithm `runs` times. Returns (rows, skipped) where
    rows are CSV-ready dicts and skipped lists (model, reason) pairs
    for formulas outside the supported fragment or over the size cap.
    """
    for cls in classes:
        if cls not in CLASSES:
            raise ValueError(f"unknown formula class {cls!r}")
    inputs, outputs = ap_split(n_aps)
    rows = []
    skipped = []
    for cls in classes:
        weights = CLASSES[cls]
        for idx in range(count):
            frng = random.Random(cell_seed(master_seed, cls, "formula", idx))
            f = random_formula(frng, size, n_aps, weights)
            model = f"{cls}-{idx:03d}"
            try:
                game = build(
                    f, inputs=inputs, outputs=outputs, max_vertices=max_vertices
                )
            except FragmentError as exc:
                skipped.append((model, f"fragment: {exc}"))
                continue
            except BuildSizeError as exc:
                skipped.append((model, f"size: {exc}"))
                continue
            for algo in ALGOS:
                for run in range(runs):
                    seed = cell_seed(master_seed, cls, idx, algo, run)
                    rows.append(
                        _run_one(game, model, cls, algo, run, seed, timeout, ql_budget)
                    )
    return rows, skipped


def _run_one(game, model, cls, algo, run, seed, timeout, ql_budget):
    deadline = None if timeout is None else time.monotonic() + timeout
    row = {
        "model": model,
        "class": cls,
        "algo": algo,
        "run": run,
        "seed": seed,
        "winner": "none",
        "eval_steps": "",
        "solution_size": "",
        "immediate": "",
        "wall_ms": "",
        "timeout": "0",
    }
    t0 = time.perf_counter()
    try:
        if algo in ("si", "si-sem"):
            res = strategy_improvement(
                game,
                init="random" if algo == "si" else "trueness",
                seed=seed,
                deadline=deadline,
            )
            row["immediate"] = "1" if res["immediately_solved"] else "0"
        elif algo in ("ql-win", "ql-pri", "ql-sem"):
            mode = {"ql-win": "win", "ql-pri": "priority", "ql-sem": "semantic"}[algo]
            res = q_learn(
                game, reward=mode, seed=seed, budget=ql_budget, deadline=deadline
            )
        else:
            raise ValueError(f"unknown algorithm {algo!r}")
        row["eval_steps"] = str(res["eval_steps"])
        if res["winner"] is not None:
            row["winner"] = "system" if res["winner"] == SYSTEM else "environment"
            row["solution_size"] = str(res["solution_size"])
    except SolveTimeout:
        row["timeout"] = "1"
    row["wall_ms"] = str(round((time.perf_counter() - t0) * 1000))
    return row


# -------------------------------------------------------------------- csv


def write_csv(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        w.writeheader()
        for r in rows:
            w.writerow(r)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# ------------------------------------------------------------- aggregation


def aggregate(rows):
    """Per (class, algo) summary: geometric mean of evaluation steps
    over decided runs, mean solution size, immediate-solve rate where
    applicable and timeout rate."""
    groups: dict = {}
    for r in rows:
        groups.setdefault((r["class"], r["algo"]), []).append(r)
    table = {}
    for key in sorted(groups):
        rs = groups[key]
        decided = [
            r for r in rs if r["timeout"] != "1" and r["winner"] != "none"
        ]
        steps = [int(r["eval_steps"]) for r in decided if r["eval_steps"]]
        geo = (
            math.exp(sum(math.log(s) for s in steps) / len(steps))
            if steps
            else None
        )
        sizes = [
            Fraction(r["solution_size"]) for r in decided if r["solution_size"]
        ]
        mean_size = float(sum(sizes) / len(sizes)) if sizes else None
        imm = [r for r in rs if r["immediate"] != ""]
        imm_pct = (
            100.0 * sum(r["immediate"] == "1" for r in imm) / len(imm)
            if imm
            else None
        )
        table[key] = {
            "n": len(rs),
            "decided": len(decided),
            "geo_steps": geo,
            "mean_size": mean_size,
            "immediate_pct": imm_pct,
            "timeout_pct": 100.0 * sum(r["timeout"] == "1" for r in rs) / len(rs),
        }
    return table


def _cell(x, width, prec):
    if x is None:
        return "-".rjust(width)
    return format(x, f"{width}.{prec}f")


def report(rows, out_dir=None, stream=None):
    """Prints one table per formula class and optionally writes the
    sorted evaluation-step curves as .dat files (one per class/algo,
    lines of "rank steps")."""
    out = stream if stream is not None else sys.stdout
    table = aggregate(rows)
    classes = sorted({k[0] for k in table})
    for cls in classes:
        print(f"== {cls} ==", file=out)
        print(
            f"{'algo':<8} {'n':>4} {'dec':>4} {'geo steps':>12} "
            f"{'mean size':>10} {'imm %':>7} {'t/o %':>7}",
            file=out,
        )
        for algo in ALGOS:
            st = table.get((cls, algo))
            if st is None:
                continue
            print(
                f"{algo:<8} {st['n']:>4} {st['decided']:>4} "
                f"{_cell(st['geo_steps'], 12, 1)} "
                f"{_cell(st['mean_size'], 10, 3)} "
                f"{_cell(st['immediate_pct'], 7, 1)} "
                f"{st['timeout_pct']:>7.1f}",
                file=out,
            )
        print(file=out)
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        groups: dict = {}
        for r in rows:
            if r["timeout"] != "1" and r["winner"] != "none" and r["eval_steps"]:
                groups.setdefault((r["class"], r["algo"]), []).append(
                    int(r["eval_steps"])
                )
        for (cls, algo), steps in sorted(groups.items()):
            path = os.path.join(out_dir, f"{cls}-{algo}.dat")
            with open(path, "w") as fh:
                for i, s in enumerate(sorted(steps), start=1):
                    fh.write(f"{i} {s}\n")
    return table
