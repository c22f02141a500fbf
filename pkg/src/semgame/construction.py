"""Translation of formulas into semantically labelled parity games.

A game step is split into two half-moves: from a full vertex the first
player fixes its propositions, moving to an intermediate vertex, and
the second player completes the letter, moving to the next full vertex.
With order "env" the environment (inputs) moves first and owns the full
vertices; "sys" swaps the roles.

Vertex labels track the master formula by one-step unfolding:

  * full vertex: the master obligation for the remaining play,
  * intermediate: the master after unfolding and fixing the first half
    of the letter (not yet advanced to the next step).

Supported shapes:

  * safety (no F or U anywhere): master evolution only. Interior edges
    get priority 1, so a play that never violates the master wins.
  * cosafety (no G anywhere): master evolution only, interior priority
    0; the play must reach tt to win.
  * general: every G subformula must sit at the top boolean level (below
    And/Or only) with a G-free body. Each such goal gets a monitor and
    the master keeps the goal as an opaque leaf; a monitor failure
    replaces the leaf with ff.

Monitors watch one goal G psi each and report one event per full step:

  * body psi = F chi: the monitor tracks one attempt at a time. It
    succeeds when the attempt (or a fresh one) is discharged by the
    letter, restarts on a dead end and never fails.
  * otherwise: the monitor holds all pending residuals of psi; any
    residual hitting ff is a failure, discharging the oldest residual
    is a success.

On a transition the highest eventful monitor position i (0 = front of
the list) determines the edge priority: 2i+3 on success, 2i+2 on
failure; 0 without events. Monitors whose goal leaf disappeared from
the master are dropped, positions close up. The two sinks use
priorities 2m+1 (tt) and 2m+2 (ff) on their self-loops, where m is the
number of goals, so they dominate every monitor event.
"""

from __future__ import annotations

from collections import deque

from . import ltl
from .game import ENVIRONMENT, SYSTEM, Edge, Game, Vertex
from .ltl import FF, TT, Always, And, Eventually, Next, Or, Until

SAFETY = "safety"
COSAFETY = "cosafety"
GENERAL = "general"

# monitor events
NONE, SUCCESS, FAIL = 0, 1, 2


class BuildSizeError(ValueError):
    def __init__(self, limit: int):
        super().__init__(f"construction exceeded {limit} vertices")
        self.limit = limit


class FragmentError(ValueError):
    pass


def fragment(f: ltl.Formula):
    """Classifies a formula and returns (kind, goals).

    goals is the tuple of monitored G subformulas (empty unless
    general). Raises FragmentError outside the supported shapes.
    """
    has_fu = _contains(f, (Eventually, Until))
    has_g = _contains(f, Always)
    if not has_fu:
        return SAFETY, ()
    if not has_g:
        return COSAFETY, ()
    goals: list = []
    _collect_goals(f, goals, True)
    return GENERAL, tuple(goals)


def _contains(f, kinds) -> bool:
    if isinstance(f, kinds):
        return True
    if isinstance(f, (And, Or)):
        return any(_contains(a, kinds) for a in f.args)
    if isinstance(f, (Next, Eventually, Always)):
        return _contains(f.body, kinds)
    if isinstance(f, Until):
        return _contains(f.lhs, kinds) or _contains(f.rhs, kinds)
    return False


def _collect_goals(f, goals: list, at_top: bool):
    if isinstance(f, (And, Or)):
        for a in f.args:
            _collect_goals(a, goals, at_top)
    elif isinstance(f, Always):
        if not at_top:
            raise FragmentError(
                f"G subformula is not at the top boolean level: {f}"
            )
        if _contains(f.body, Always):
            raise FragmentError(f"monitored G body contains another G: {f}")
        if f not in goals:
            goals.append(f)
    elif isinstance(f, (Next, Eventually)):
        _collect_goals(f.body, goals, False)
    elif isinstance(f, Until):
        _collect_goals(f.lhs, goals, False)
        _collect_goals(f.rhs, goals, False)


# ---------------------------------------------------------------- monitors


def _step_hold(body, pending, letter):
    """Advances all pending residuals and starts a fresh copy of the
    body. Returns (event, new pending)."""
    rs = [ltl.after(o, letter) for o in pending]
    rs.append(ltl.after(body, letter))
    if any(r is FF for r in rs):
        return FAIL, ()
    if pending:
        success = rs[0] is TT
    else:
        success = rs[-1] is TT
    out = []
    for r in rs:
        if r is not TT and r not in out:
            out.append(r)
    return (SUCCESS if success else NONE), tuple(out)


def _step_recur(chi, attempt, letter):
    """Single-attempt mode for bodies F chi. Returns (event, new attempt).

    The letter may discharge the running attempt or a freshly started
    one; if both die the monitor simply restarts, it never fails.
    """
    advanced = ltl.canonical(
        ltl.disj(ltl.after(attempt, letter), ltl.after(chi, letter))
    )
    if advanced is TT:
        fresh = ltl.after(chi, letter)
        return SUCCESS, (fresh if not isinstance(fresh, ltl.Const) else chi)
    if advanced is FF:
        return NONE, chi
    return NONE, advanced


def _monitor_views(mons):
    """Obligation lists as stored on vertices: one tuple per monitor."""
    return tuple(payload for _, payload in mons)


# ------------------------------------------------------------ construction


def build(formula, inputs, outputs, order="env", max_vertices=None) -> Game:
    """Constructs the labelled parity game for a formula.

    inputs/outputs are the environment's and system's propositions;
    order "env" lets the environment move first (the default), "sys"
    the system.
    """
    if isinstance(formula, str):
        formula = ltl.parse(formula)
    inputs = tuple(dict.fromkeys(inputs))
    outputs = tuple(dict.fromkeys(outputs))
    overlap = set(inputs) & set(outputs)
    if overlap:
        raise ValueError(f"propositions cannot be both input and output: {sorted(overlap)}")
    undeclared = ltl.atoms(formula) - set(inputs) - set(outputs)
    if undeclared:
        raise ValueError(f"formula uses undeclared propositions: {sorted(undeclared)}")
    if order not in ("env", "sys"):
        raise ValueError(f"order must be 'env' or 'sys', got {order!r}")

    master0 = ltl.canonical(formula)
    kind, goals = fragment(master0)
    frozen = frozenset(goals)
    bodies = {i: g.body for i, g in enumerate(goals)}
    recur = {i: isinstance(b, Eventually) for i, b in bodies.items()}
    m = len(goals)
    interior = 1 if kind == SAFETY else 0
    tt_prio, ff_prio = 2 * m + 1, 2 * m + 2

    if order == "env":
        first, second = sorted(inputs), sorted(outputs)
        full_owner = ENVIRONMENT
    else:
        first, second = sorted(outputs), sorted(inputs)
        full_owner = SYSTEM
    int_owner = 1 - full_owner
    first_set, second_set = set(first), set(second)

    vertices: list = []
    edges: list = []
    full_ids: dict = {}
    int_ids: dict = {}
    sink_ids: dict = {}
    queue = deque()

    def new_vertex(owner, master, monitors) -> int:
        vid = len(vertices)
        if max_vertices is not None and vid >= max_vertices:
            raise BuildSizeError(max_vertices)
        vertices.append(Vertex(vid, owner, master, monitors))
        return vid

    def sink(value: bool) -> int:
        vid = sink_ids.get(value)
        if vid is None:
            vid = new_vertex(full_owner, TT if value else FF, tuple())
            sink_ids[value] = vid
            edges.append(Edge(vid, vid, tt_prio if value else ff_prio, {}))
        return vid

    def full_vertex(master, mons) -> int:
        if master is TT:
            return sink(True)
        if master is FF:
            return sink(False)
        key = (master, mons)
        vid = full_ids.get(key)
        if vid is None:
            vid = new_vertex(full_owner, master, _monitor_views(mons))
            full_ids[key] = vid
            queue.append(("full", vid, master, mons))
        return vid

    def live_monitors(master, mons):
        _, temps = ltl.skeleton_vars(master)
        alive = set(temps)
        return tuple((gi, payload) for gi, payload in mons if goals[gi] in alive)

    def init_payload(gi: int):
        if recur[gi]:
            return (bodies[gi].body,)
        return tuple()

    mons0 = live_monitors(master0, tuple((i, init_payload(i)) for i in range(m))) \
        if kind == GENERAL else tuple()
    start = full_vertex(master0, mons0)

    while queue:
        what, vid, master, *rest = queue.popleft()
        if what == "full":
            (mons,) = rest
            unfolded = ltl.unfold(master, frozen)
            for h1 in _letters(first):
                mi = ltl.canonical(ltl.subst_atoms(unfolded, h1, universe=first_set))
                key = (mi, mons, h1)
                ivid = int_ids.get(key)
                if ivid is None:
                    ivid = new_vertex(int_owner, mi, _monitor_views(mons))
                    int_ids[key] = ivid
                    queue.append(("int", ivid, mi, mons, h1))
                edges.append(Edge(vid, ivid, interior, {p: p in h1 for p in first}))
        else:
            mons, h1 = rest
            for h2 in _letters(second):
                letter = h1 | h2
                core = ltl.canonical(
                    ltl.strip_x(ltl.subst_atoms(master, h2, universe=second_set))
                )
                events = []
                stepped = []
                for gi, payload in mons:
                    if recur[gi]:
                        ev, attempt = _step_recur(bodies[gi].body, payload[0], letter)
                        stepped.append((gi, (attempt,)))
                    else:
                        ev, pend = _step_hold(bodies[gi], payload, letter)
                        stepped.append((gi, pend))
                    events.append(ev)
                failed = {mons[pos][0] for pos, ev in enumerate(events) if ev == FAIL}
                if failed:
                    core = ltl.canonical(
                        ltl.subst_nodes(core, {goals[gi]: FF for gi in failed})
                    )
                eventful = [pos for pos, ev in enumerate(events) if ev != NONE]
                if eventful:
                    pos = max(eventful)
                    prio = 2 * pos + 3 if events[pos] == SUCCESS else 2 * pos + 2
                else:
                    prio = interior
                if core is TT:
                    dst = sink(True)
                elif core is FF:
                    dst = sink(False)
                else:
                    dst = full_vertex(core, live_monitors(core, tuple(stepped)))
                edges.append(Edge(vid, dst, prio, {p: p in h2 for p in second}))

    return Game(inputs, outputs, start, vertices, edges)


def _letters(props):
    # all subsets in a fixed order: bit i of the mask is props[i]
    for mask in range(1 << len(props)):
        yield frozenset(p for i, p in enumerate(props) if mask >> i & 1)
