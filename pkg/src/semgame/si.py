"""Parity game solving: strategy verification, Zielonka recursion and
strategy improvement.

The system (player 0) wins a play iff the highest edge priority seen
infinitely often is odd. Since priorities live on edges, the iterative
algorithms run on a subdivided arena: every edge gets a midpoint node
carrying its priority, original vertices carry 0, and relevance is the
pair (priority, node id) with midpoints numbered after the originals.

Strategy improvement follows the classic valuation scheme: with both
positional strategies fixed the play graph is functional, and every
node is valued by (w, P, l) where w is the most relevant node on the
cycle it reaches, P the set of nodes more relevant than w visited
before the first hit of w, and l the number of steps to that hit. The
environment is driven to a best response by all-switch rounds, then the
system makes one all-switch pass, until neither moves. Every valuation
round counts as one iteration; evaluation steps are iterations times
the number of game vertices.
"""

from __future__ import annotations

import random
import sys as _sys
import time

from .game import ENVIRONMENT, SYSTEM, Game
from .trueness import trueness


class SolveTimeout(RuntimeError):
    pass


def _check_deadline(deadline):
    if deadline is not None and time.monotonic() > deadline:
        raise SolveTimeout("solve deadline exceeded")


# ------------------------------------------------------ strategy checking


def check_winning(game: Game, strategy: dict, player: int) -> bool:
    """Whether `strategy` wins the game for `player` from the start
    vertex against every opponent behaviour.

    The strategy graph is unwinnable only if the opponent can reach a
    cycle whose maximal priority has its parity; that is detected per
    priority with a strongly-connected-component pass over the edges of
    at most that priority.
    """
    seen = {game.start}
    stack = [game.start]
    reach_edges = []
    while stack:
        v = stack.pop()
        if game.vertices[v].owner == player:
            ei = strategy.get(v)
            if ei is None:
                raise ValueError(f"strategy undefined at vertex {v}")
            eis = [ei]
        else:
            eis = game.out[v]
        for ei in eis:
            e = game.edges[ei]
            reach_edges.append(e)
            if e.dst not in seen:
                seen.add(e.dst)
                stack.append(e.dst)

    bad_parity = 0 if player == SYSTEM else 1
    bad = sorted({e.prio for e in reach_edges if e.prio % 2 == bad_parity})
    for p in bad:
        sub = [e for e in reach_edges if e.prio <= p]
        adj: dict = {}
        for e in sub:
            adj.setdefault(e.src, []).append(e.dst)
            adj.setdefault(e.dst, [])
        comp = _sccs(list(adj), adj)
        for e in sub:
            if e.prio == p and comp[e.src] == comp[e.dst]:
                return False
    return True


def _sccs(nodes, adj):
    """Tarjan, iterative. Returns node -> component id."""
    index: dict = {}
    low: dict = {}
    on: set = set()
    stack: list = []
    comp: dict = {}
    ncomp = 0
    for root in nodes:
        if root in index:
            continue
        index[root] = low[root] = len(index)
        stack.append(root)
        on.add(root)
        work = [(root, iter(adj.get(root, ())))]
        while work:
            v, it = work[-1]
            advanced = False
            for u in it:
                if u not in index:
                    index[u] = low[u] = len(index)
                    stack.append(u)
                    on.add(u)
                    work.append((u, iter(adj.get(u, ()))))
                    advanced = True
                    break
                if u in on and index[u] < low[v]:
                    low[v] = index[u]
            if advanced:
                continue
            work.pop()
            if work:
                p = work[-1][0]
                if low[v] < low[p]:
                    low[p] = low[v]
            if low[v] == index[v]:
                while True:
                    x = stack.pop()
                    on.discard(x)
                    comp[x] = ncomp
                    if x == v:
                        break
                ncomp += 1
    return comp


# ------------------------------------------------------------ subdivision


class _Arena:
    __slots__ = ("n", "nverts", "owner", "prio", "succ", "pred")

    def __init__(self, game: Game):
        V, E = len(game.vertices), len(game.edges)
        self.nverts = V
        self.n = V + E
        self.owner = [v.owner for v in game.vertices] + [0] * E
        self.prio = [0] * V + [e.prio for e in game.edges]
        self.succ = [[] for _ in range(self.n)]
        for v in range(V):
            self.succ[v] = [V + ei for ei in game.out[v]]
        for ei, e in enumerate(game.edges):
            self.succ[V + ei] = [e.dst]
        self.pred = [[] for _ in range(self.n)]
        for x in range(self.n):
            for y in self.succ[x]:
                self.pred[y].append(x)

    def rel(self, x: int):
        return (self.prio[x], x)


# --------------------------------------------------------------- zielonka


def zielonka(game: Game):
    """Full winning regions (system set, environment set) of the game's
    vertices."""
    arena = _Arena(game)
    limit = _sys.getrecursionlimit()
    _sys.setrecursionlimit(max(limit, 4 * arena.n + 200))
    try:
        w0, w1 = _zielonka(arena, set(range(arena.n)))
    finally:
        _sys.setrecursionlimit(limit)
    V = arena.nverts
    return (
        frozenset(x for x in w0 if x < V),
        frozenset(x for x in w1 if x < V),
    )


def _zielonka(arena, sub: set):
    if not sub:
        return set(), set()
    p = max(arena.prio[v] for v in sub)
    who = SYSTEM if p % 2 == 1 else ENVIRONMENT
    target = {v for v in sub if arena.prio[v] == p}
    a = _attract(arena, sub, target, who)
    w0, w1 = _zielonka(arena, sub - a)
    opp = w1 if who == SYSTEM else w0
    if not opp:
        return (set(sub), set()) if who == SYSTEM else (set(), set(sub))
    b = _attract(arena, sub, opp, 1 - who)
    w0b, w1b = _zielonka(arena, sub - b)
    if who == SYSTEM:
        return w0b, w1b | b
    return w0b | b, w1b


def _attract(arena, sub: set, target: set, player: int) -> set:
    attr = set(target)
    cnt: dict = {}
    stack = list(target)
    while stack:
        u = stack.pop()
        for w in arena.pred[u]:
            if w not in sub or w in attr:
                continue
            if arena.owner[w] == player:
                attr.add(w)
                stack.append(w)
            else:
                c = cnt.get(w)
                if c is None:
                    c = sum(1 for x in arena.succ[w] if x in sub)
                c -= 1
                cnt[w] = c
                if c == 0:
                    attr.add(w)
                    stack.append(w)
    return attr


# ------------------------------------------------------------- valuations


def _valuation(arena, choice):
    """Values every node of the functional graph induced by `choice`."""
    n = arena.n
    w = [0] * n
    P = [None] * n
    l = [0] * n
    state = bytearray(n)  # 0 new, 1 on path, 2 done
    rel = arena.rel
    for s in range(n):
        if state[s]:
            continue
        path = []
        v = s
        while state[v] == 0:
            state[v] = 1
            path.append(v)
            v = choice[v]
        if state[v] == 1:
            i = path.index(v)
            cycle = path[i:]
            top = max(cycle, key=rel)
            k = cycle.index(top)
            ordered = cycle[k:] + cycle[:k]
            m = len(ordered)
            w[top] = top
            P[top] = frozenset()
            l[top] = 0
            state[top] = 2
            acc: set = set()
            rtop = rel(top)
            for j in range(m - 1, 0, -1):
                x = ordered[j]
                if rel(x) > rtop:
                    acc.add(x)
                w[x] = top
                P[x] = frozenset(acc)
                l[x] = m - j
                state[x] = 2
            stem = path[:i]
        else:
            stem = path
        for x in reversed(stem):
            nx = choice[x]
            w[x] = w[nx]
            if rel(x) > rel(w[x]):
                P[x] = P[nx] | {x}
            else:
                P[x] = P[nx]
            l[x] = l[nx] + 1
            state[x] = 2
    return w, P, l


def _better(arena, val, x: int, y: int) -> bool:
    """Whether node x's valuation is strictly better than node y's for
    the system."""
    w, P, l = val
    rel = arena.rel
    wx, wy = w[x], w[y]
    if wx != wy:
        ox = arena.prio[wx] % 2 == 1
        oy = arena.prio[wy] % 2 == 1
        if ox != oy:
            return ox
        if ox:
            return rel(wx) > rel(wy)
        return rel(wx) < rel(wy)
    if P[x] != P[y]:
        z = max(P[x] ^ P[y], key=rel)
        if arena.prio[z] % 2 == 1:
            return z in P[x]
        return z in P[y]
    if l[x] != l[y]:
        if arena.prio[wx] % 2 == 1:
            return l[x] < l[y]
        return l[x] > l[y]
    return False


# --------------------------------------------------------- initialization


def init_random(game: Game, rng: random.Random):
    """Uniform positional strategies for both players."""
    sigma: dict = {}
    tau: dict = {}
    for v in game.vertices:
        ei = game.out[v.id][rng.randrange(len(game.out[v.id]))]
        (sigma if v.owner == SYSTEM else tau)[v.id] = ei
    return sigma, tau


def init_trueness(game: Game):
    """Label-driven strategies: the system moves towards the highest
    master trueness, the environment towards the lowest; ties fall to
    the larger (resp. smaller) progress, then the smallest target id."""
    from .ql import progress  # local import breaks the module cycle

    if not game.labelled:
        raise ValueError("trueness initialization needs a labelled game")
    aps = game.aps
    sigma: dict = {}
    tau: dict = {}
    for v in game.vertices:
        system = v.owner == SYSTEM
        best = None
        best_key = None
        for ei in game.out[v.id]:
            e = game.edges[ei]
            theta = trueness(game.vertices[e.dst].master, aps)
            prog = progress(game, ei)
            if system:
                key = (-theta, -prog, e.dst, ei)
            else:
                key = (theta, prog, e.dst, ei)
            if best is None or key < best_key:
                best, best_key = ei, key
        (sigma if system else tau)[v.id] = best
    return sigma, tau


# ----------------------------------------------------- strategy improvement


def strategy_improvement(
    game: Game,
    init: str = "random",
    seed=None,
    deadline=None,
) -> dict:
    """Solves the game by iterated strategy improvement.

    init is "random" or "trueness". Returns winner, winning strategy,
    iteration and evaluation-step counts, whether an initial strategy
    was already winning, and the winner's solution size.
    """
    if init == "random":
        rng = random.Random(seed)
        sigma, tau = init_random(game, rng)
    elif init == "trueness":
        sigma, tau = init_trueness(game)
    else:
        raise ValueError(f"unknown initialization {init!r}")

    immediate = check_winning(game, sigma, SYSTEM) or check_winning(
        game, tau, ENVIRONMENT
    )

    arena = _Arena(game)
    V = arena.nverts
    choice = [0] * arena.n
    for ei, e in enumerate(game.edges):
        choice[V + ei] = e.dst
    for v, ei in sigma.items():
        choice[v] = V + ei
    for v, ei in tau.items():
        choice[v] = V + ei

    by_owner = {SYSTEM: [], ENVIRONMENT: []}
    for v in game.vertices:
        if len(game.out[v.id]) > 1:
            by_owner[v.owner].append(v.id)

    def candidates(v):
        return sorted(game.out[v], key=lambda ei: (game.edges[ei].dst, ei))

    guard = 10_000 + 100 * arena.n
    rounds = 0
    val = None
    while True:
        # environment all-switch rounds until it is a best response
        while True:
            rounds += 1
            if rounds > guard:
                raise RuntimeError("strategy improvement did not converge")
            _check_deadline(deadline)
            val = _valuation(arena, choice)
            changed = False
            for v in by_owner[ENVIRONMENT]:
                cur = tau[v]
                best = cur
                for ei in candidates(v):
                    if _better(arena, val, V + best, V + ei):
                        best = ei
                if best != cur:
                    tau[v] = best
                    choice[v] = V + best
                    changed = True
            if not changed:
                break
        # one system all-switch pass on the best-response valuation
        changed = False
        for v in by_owner[SYSTEM]:
            cur = sigma[v]
            best = cur
            for ei in candidates(v):
                if _better(arena, val, V + ei, V + best):
                    best = ei
            if best != cur:
                sigma[v] = best
                choice[v] = V + best
                changed = True
        if not changed:
            break

    w, _, _ = val
    winner = SYSTEM if arena.prio[w[game.start]] % 2 == 1 else ENVIRONMENT
    strategy = sigma if winner == SYSTEM else tau
    return {
        "winner": winner,
        "strategy": dict(strategy),
        "iterations": rounds,
        "eval_steps": rounds * V,
        "immediately_solved": immediate,
        "solution_size": game.solution_size(strategy, winner),
    }
