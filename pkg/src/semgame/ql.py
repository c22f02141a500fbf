"""Q-learning over parity games, with win, priority-scaled and
label-driven reward signals.

Q-values live on edges and are clamped to [-1, 1] after every update.
Edges into constant-labelled sinks are pinned to +1 (true) or -1
(false) and never updated. An episode is an epsilon-greedy self-play
walk from the start vertex up to its first vertex revisit; the edge
closing the cycle is pulled straight towards the sign of the best
priority on that cycle, and the remaining path is swept backwards with
one bootstrapped update per edge.

Priority rewards scale so that one occurrence of a priority outweighs
any number of occurrences of all lower ones; the sign follows the
parity, computed exactly over rationals before conversion to float.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .game import ENVIRONMENT, SYSTEM, Game
from .ltl import FF, TT
from .si import _check_deadline, check_winning
from .trueness import trueness


# -------------------------------------------------------- reward shaping


def m_e_from_priority(p: int) -> int:
    """Index of the monitor a priority refers to, -1 for interior
    priorities. Success at monitor i yields 2i + 3, failure 2i + 2."""
    if p <= 1:
        return -1
    if p % 2:
        return (p - 3) // 2
    return (p - 2) // 2


def _min_trueness(obligations, aps) -> Fraction:
    if not obligations:
        return Fraction(1)
    return min(trueness(o, aps) for o in obligations)


def progress(game: Game, edge_index: int) -> Fraction:
    """How much an edge raises the satisfaction odds of the monitors it
    does not already reward: the best trueness gain over monitor pairs
    behind the edge's own event position, matched from the back."""
    e = game.edges[edge_index]
    src = game.vertices[e.src].monitors or ()
    dst = game.vertices[e.dst].monitors or ()
    if not src or not dst:
        return Fraction(0)
    me = m_e_from_priority(e.prio)
    aps = game.aps
    best = None
    for t in range(min(len(src), len(dst))):
        si = len(src) - 1 - t
        if si <= me:
            break
        gain = _min_trueness(dst[len(dst) - 1 - t], aps) - _min_trueness(
            src[si], aps
        )
        if best is None or gain > best:
            best = gain
    return best if best is not None else Fraction(0)


def scaling_factors(counts: dict):
    """Per-priority weights and the normalizer for a priority
    multiset given as {priority: edge count}."""
    ps = sorted(counts)
    bars: dict = {}
    prev = None
    for p in ps:
        bars[p] = p if prev is None else 2 * counts[prev] * bars[prev] + 1
        prev = p
    norm = 1 + sum(bars[p] * counts[p] for p in ps)
    return bars, norm


def reward_table(counts: dict) -> dict:
    bars, norm = scaling_factors(counts)
    return {p: Fraction((-1) ** (p + 1) * bars[p], norm) for p in counts}


def priority_rewards(game: Game) -> dict:
    counts: dict = {}
    for e in game.edges:
        counts[e.prio] = counts.get(e.prio, 0) + 1
    return reward_table(counts)


# ------------------------------------------------------------- learning

_REWARDS = ("win", "priority", "semantic")


def q_learn(
    game: Game,
    reward: str = "win",
    seed=None,
    alpha: float = 0.1,
    epsilon: float = 0.1,
    check_period: int = 10,
    budget: int = 100_000,
    deadline=None,
) -> dict:
    """Plays the game against itself until a greedy strategy of either
    player verifies as winning or the budget of visited vertices runs
    out.

    reward is "win" (pure cycle signal), "priority" (scaled edge
    priorities) or "semantic" (priorities plus label progress, with
    trueness-initialized Q-values; needs a labelled game). Returns the
    winner (or None if undecided), the verified strategy, episode,
    visited-vertex and update counts, and the final Q-vector.
    """
    if reward not in _REWARDS:
        raise ValueError(f"unknown reward mode {reward!r}")
    labelled = game.labelled
    if reward == "semantic" and not labelled:
        raise ValueError("semantic rewards need a labelled game")

    rng = random.Random(seed)
    edges = game.edges
    out = game.out
    owner = [v.owner for v in game.vertices]
    aps = game.aps
    E = len(edges)

    q = [0.0] * E
    if reward == "semantic":
        for ei, e in enumerate(edges):
            q[ei] = float(2 * trueness(game.vertices[e.dst].master, aps) - 1)
    pin: dict = {}
    if labelled:
        for ei, e in enumerate(edges):
            m = game.vertices[e.dst].master
            if m is TT:
                pin[ei] = 1.0
            elif m is FF:
                pin[ei] = -1.0
        for ei, v in pin.items():
            q[ei] = v

    r_edge = [0.0] * E
    if reward == "priority":
        table = priority_rewards(game)
        r_edge = [float(table[e.prio]) for e in edges]
    elif reward == "semantic":
        table = priority_rewards(game)
        for ei, e in enumerate(edges):
            x = table[e.prio] + Fraction(1, 2) * progress(game, ei)
            r_edge[ei] = float(max(Fraction(-1), min(Fraction(1), x)))

    updates = 0

    def qval(v: int) -> float:
        vals = [q[x] for x in out[v]]
        return max(vals) if owner[v] == SYSTEM else min(vals)

    def update(ei: int, target: float):
        nonlocal updates
        if ei in pin:
            return
        x = (1 - alpha) * q[ei] + alpha * target
        q[ei] = -1.0 if x < -1.0 else (1.0 if x > 1.0 else x)
        updates += 1

    def greedy_strategies():
        sigma = {}
        tau = {}
        for v in game.vertices:
            eis = out[v.id]
            if v.owner == SYSTEM:
                best = min(eis, key=lambda x: (-q[x], edges[x].dst, x))
                sigma[v.id] = best
            else:
                best = min(eis, key=lambda x: (q[x], edges[x].dst, x))
                tau[v.id] = best
        return sigma, tau

    def try_check():
        sigma, tau = greedy_strategies()
        if check_winning(game, sigma, SYSTEM):
            return SYSTEM, sigma
        if check_winning(game, tau, ENVIRONMENT):
            return ENVIRONMENT, tau
        return None, None

    episodes = 0
    consumed = 0
    winner = None
    strategy = None
    while consumed < budget:
        _check_deadline(deadline)
        pos = game.start
        visited = {pos}
        path = []
        while True:
            eis = out[pos]
            if rng.random() < epsilon:
                ei = eis[rng.randrange(len(eis))]
            else:
                if owner[pos] == SYSTEM:
                    best = max(q[x] for x in eis)
                else:
                    best = min(q[x] for x in eis)
                ties = [x for x in eis if q[x] == best]
                ei = ties[0] if len(ties) == 1 else ties[rng.randrange(len(ties))]
            path.append(ei)
            pos = edges[ei].dst
            if pos in visited:
                break
            visited.add(pos)
        episodes += 1
        consumed += len(path) + 1

        # the walk revisited `pos`; its unique outgoing path edge opens
        # the cycle that path[-1] just closed
        start_i = 0
        for i in range(len(path) - 1, -1, -1):
            if edges[path[i]].src == pos:
                start_i = i
                break
        top = max(edges[x].prio for x in path[start_i:])
        update(path[-1], 1.0 if top % 2 else -1.0)
        for x in reversed(path[:-1]):
            update(x, r_edge[x] + qval(edges[x].dst))

        if episodes % check_period == 0:
            winner, strategy = try_check()
            if winner is not None:
                break
    if winner is None:
        winner, strategy = try_check()

    return {
        "winner": winner,
        "strategy": strategy,
        "episodes": episodes,
        "eval_steps": consumed,
        "updates": updates,
        "q": q,
        "solution_size": (
            game.solution_size(strategy, winner) if winner is not None else None
        ),
    }
