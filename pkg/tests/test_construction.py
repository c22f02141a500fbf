import pytest

from semgame.construction import (
    COSAFETY,
    GENERAL,
    SAFETY,
    BuildSizeError,
    FragmentError,
    _step_hold,
    _step_recur,
    build,
    fragment,
)
from semgame.game import ENVIRONMENT, SYSTEM
from semgame.ltl import FF, TT, atom, canonical, conj, nxt, parse

a, b = atom("a"), atom("b")


# ------------------------------------------------------------- fragments


def test_fragment_classification():
    assert fragment(parse("G (a & X b)")) == (SAFETY, ())
    assert fragment(parse("a & X b")) == (SAFETY, ())
    assert fragment(parse("G G a")) == (SAFETY, ())
    assert fragment(parse("F (a U b)")) == (COSAFETY, ())
    assert fragment(parse("a U b")) == (COSAFETY, ())
    kind, goals = fragment(parse("G F a & F b"))
    assert kind == GENERAL
    assert goals == (parse("G F a"),)
    kind, goals = fragment(parse("G a | G F b"))
    assert goals == (parse("G a"), parse("G F b"))


def test_fragment_rejections():
    for text in ["F G a", "X G a | F b", "a U G b", "G F a & F G b", "G (F a & G b) & F c"]:
        with pytest.raises(FragmentError):
            fragment(parse(text))


def test_fragment_dedups_goals():
    kind, goals = fragment(parse("G F a & (b | G F a) & F b"))
    assert kind == GENERAL
    assert goals == (parse("G F a"),)


# -------------------------------------------------------- monitor stepping


def test_hold_monitor_on_two_step_body():
    body = conj(a, nxt(b))  # a & X b
    ev, pend = _step_hold(body, (), {"a"})
    assert (ev, pend) == (0, (b,))
    # oldest residual discharged while a fresh copy starts
    ev, pend = _step_hold(body, (b,), {"a", "b"})
    assert (ev, pend) == (1, (b,))
    # the fresh copy dies when a is absent, even if b discharges
    ev, pend = _step_hold(body, (b,), {"b"})
    assert ev == 2
    ev, pend = _step_hold(body, (), {"b"})
    assert ev == 2


def test_hold_monitor_neutral_accumulation():
    body = conj(a, parse("F b"))
    ev, pend = _step_hold(body, (), {"a"})
    assert (ev, pend) == (0, (parse("F b"),))
    # no duplicate residuals
    ev, pend = _step_hold(body, (parse("F b"),), {"a"})
    assert (ev, pend) == (0, (parse("F b"),))
    # discharging the oldest is a success
    ev, pend = _step_hold(body, (parse("F b"),), {"a", "b"})
    assert (ev, pend) == (1, ())


def test_recur_monitor_cycle():
    chi = conj(a, nxt(b))  # goal G F (a & X b)
    ev, att = _step_recur(chi, chi, {"a"})
    assert (ev, att) == (0, b)
    ev, att = _step_recur(chi, b, {"b"})
    assert (ev, att) == (1, chi)
    ev, att = _step_recur(chi, b, {"a", "b"})
    assert (ev, att) == (1, b)
    ev, att = _step_recur(chi, b, {"a"})
    assert (ev, att) == (0, b)
    ev, att = _step_recur(chi, chi, set())
    assert (ev, att) == (0, chi)


def test_recur_monitor_never_fails():
    chi = atom("a")
    for letter in [set(), {"a"}]:
        ev, att = _step_recur(chi, chi, letter)
        assert ev != 2


# ----------------------------------------------------------- construction


def owners(g):
    return [v.owner for v in g.vertices]


def prios(g):
    return sorted({e.prio for e in g.edges})


def test_recurrence_game_system_output():
    g = build("G F a", inputs=[], outputs=["a"])
    assert len(g.vertices) == 2
    assert owners(g) == [ENVIRONMENT, SYSTEM]
    assert all(v.master is parse("G F a") for v in g.vertices)
    assert g.vertices[0].monitors == ((a,),)
    assert prios(g) == [0, 3]
    moves = {(e.src, e.prio): e.move for e in g.edges}
    assert moves[(1, 3)] == {"a": True}
    assert moves[(1, 0)] == {"a": False}


def test_recurrence_game_adversarial_input():
    g = build("G F a", inputs=["a"], outputs=[])
    assert len(g.vertices) == 3
    assert g.vertices[0].owner == ENVIRONMENT
    assert prios(g) == [0, 3]


def test_recurrence_two_step_goal():
    g = build("G F (a & X b)", inputs=[], outputs=["a", "b"])
    assert len(g.vertices) == 4
    # the master never moves, only the monitor does
    assert all(v.master is parse("G F (a & X b)") for v in g.vertices)
    labels = {v.id: v.monitors for v in g.vertices}
    fulls = [v.id for v in g.vertices if v.owner == ENVIRONMENT]
    assert {labels[v] for v in fulls} == {((conj(a, nxt(b)),),), ((b,),)}
    # success edges leave only the intermediate behind the [b] vertex
    succ_srcs = {e.src for e in g.edges if e.prio == 3}
    assert len(succ_srcs) == 1
    assert len([e for e in g.edges if e.prio == 3]) == 2
    assert prios(g) == [0, 3]


def test_safety_two_step_game():
    g = build("G (a & X b)", inputs=[], outputs=["a", "b"])
    assert len(g.vertices) == 5
    sinks = [v.id for v in g.vertices if v.master is FF]
    assert len(sinks) == 1
    loop = [e for e in g.edges if e.src == sinks[0]]
    assert len(loop) == 1 and loop[0].dst == sinks[0] and loop[0].prio == 2
    # all interior edges carry the safety priority 1
    assert all(e.prio == 1 for e in g.edges if e.src != sinks[0])
    # no tt sink: the obligation never discharges completely
    assert all(v.master is not TT for v in g.vertices)


def test_cosafety_game_reaches_tt():
    g = build("F a", inputs=[], outputs=["a"])
    tt_sink = [v for v in g.vertices if v.master is TT]
    assert len(tt_sink) == 1
    loops = [e for e in g.edges if e.src == tt_sink[0].id]
    assert loops[0].prio == 1 and loops[0].dst == tt_sink[0].id
    # interior edges are neutral
    assert all(e.prio == 0 for e in g.edges if e.src != tt_sink[0].id)


def test_general_hold_goal_with_reachability():
    g = build("G (a & X b) & F c", inputs=[], outputs=["a", "b", "c"])
    assert g.vertices[g.start].master is canonical(parse("G (a & X b) & F c"))
    assert g.vertices[g.start].monitors == ((),)
    by_prio = {}
    for e in g.edges:
        by_prio.setdefault(e.prio, []).append(e)
    # failure edges (2*0+2) and success edges (2*0+3) both occur
    assert 2 in by_prio and 3 in by_prio
    # the ff sink loop dominates with 2m+2 = 4
    ff_sink = [v for v in g.vertices if v.master is FF][0]
    loop = [e for e in g.edges if e.src == ff_sink.id][0]
    assert loop.prio == 4
    # failing the hold monitor also kills the master
    assert all(g.vertices[e.dst].master is FF for e in by_prio[2])


def test_sinks_only_when_reachable():
    g = build("G F a", inputs=[], outputs=["a"])
    assert all(v.master not in (TT, FF) for v in g.vertices)


def test_constant_formulas():
    g = build("tt", inputs=[], outputs=[])
    assert len(g.vertices) == 1
    assert g.edges[0].prio == 1
    g = build("ff", inputs=[], outputs=[])
    assert g.edges[0].prio == 2


def test_alternation_except_sink_loops():
    for text, ins, outs in [
        ("G F a", ["a"], []),
        ("G (a & X b) & F c", [], ["a", "b", "c"]),
        ("a U b", ["a"], ["b"]),
        ("G (a | X b)", ["a"], ["b"]),
    ]:
        g = build(text, inputs=ins, outputs=outs)
        for e in g.edges:
            if e.src == e.dst:
                assert g.vertices[e.src].master in (TT, FF) or (
                    g.vertices[e.src].owner != g.vertices[e.dst].owner
                )
            else:
                assert g.vertices[e.src].owner != g.vertices[e.dst].owner


def test_out_degrees_match_half_letters():
    g = build("G (a | X b)", inputs=["a"], outputs=["b"])
    for v in g.vertices:
        if v.master in (TT, FF):
            continue
        assert len(g.out[v.id]) == 2  # one proposition per half


def test_sys_order_swaps_roles():
    g = build("G F a", inputs=[], outputs=["a"], order="sys")
    assert g.vertices[g.start].owner == SYSTEM
    assert len(g.vertices) == 3


def test_build_checks_declarations():
    with pytest.raises(ValueError):
        build("a & b", inputs=["a"], outputs=[])
    with pytest.raises(ValueError):
        build("a", inputs=["a"], outputs=["a"])
    with pytest.raises(FragmentError):
        build("F G a", inputs=[], outputs=["a"])


def test_max_vertices_guard():
    with pytest.raises(BuildSizeError):
        build("G (a & X b) & F c", inputs=[], outputs=["a", "b", "c"], max_vertices=3)


def test_from_roundtrip_through_json():
    from semgame.game import Game

    g = build("G F (a & X b)", inputs=[], outputs=["a", "b"])
    g2 = Game.from_json(g.to_json())
    assert [v.monitors for v in g2.vertices] == [v.monitors for v in g.vertices]
    assert [v.master for v in g2.vertices] == [v.master for v in g.vertices]
