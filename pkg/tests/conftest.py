"""Shared helpers: seeded random game generation for solver tests and
the acceptance summary section."""

import random

from semgame import ltl
from semgame.game import Edge, Game, Vertex

# one line per acceptance criterion, echoed after the run
acceptance_lines = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)

_POOL_TEXTS = [
    "a",
    "b",
    "!a",
    "a & b",
    "a | b",
    "a & X b",
    "X (a | b)",
    "G a",
    "F b",
    "G (a | b)",
    "F (a & b)",
    "a U b",
    "b U a",
    "G F a",
    "F (b & X a)",
]
_POOL = None


def formula_pool():
    global _POOL
    if _POOL is None:
        _POOL = [ltl.canonical(ltl.parse(t)) for t in _POOL_TEXTS]
    return _POOL


def random_game(
    rng: random.Random,
    min_n: int = 4,
    max_n: int = 50,
    max_prio: int = 6,
    labelled: bool = False,
) -> Game:
    """A random parity game: arbitrary owners, out-degree 1 to 3,
    edge priorities up to max_prio. With labelled=True every vertex
    gets a master formula and a monitor tuple, and the two highest ids
    may become constant-labelled sinks."""
    n = rng.randint(min_n, max_n)
    masters = [None] * n
    mons = [None] * n
    sink_tt = sink_ff = None
    if labelled:
        pool = formula_pool()
        for i in range(n):
            masters[i] = pool[rng.randrange(len(pool))]
            mons[i] = tuple(
                tuple(
                    pool[rng.randrange(len(pool))]
                    for _ in range(rng.randint(1, 2))
                )
                for _ in range(rng.randint(0, 2))
            )
        if rng.random() < 0.5:
            sink_tt = n - 1
            masters[sink_tt] = ltl.TT
            mons[sink_tt] = ()
        if rng.random() < 0.5:
            sink_ff = n - 2
            masters[sink_ff] = ltl.FF
            mons[sink_ff] = ()
    vertices = [
        Vertex(i, rng.randint(0, 1), master=masters[i], monitors=mons[i])
        for i in range(n)
    ]
    edges = []
    for v in range(n):
        if v == sink_tt:
            edges.append(Edge(v, v, 1))
            continue
        if v == sink_ff:
            edges.append(Edge(v, v, 2))
            continue
        for _ in range(rng.randint(1, 3)):
            edges.append(Edge(v, rng.randrange(n), rng.randint(0, max_prio)))
    return Game(("a",), ("b",), 0, vertices, edges)
