import json
import os
from fractions import Fraction

import pytest

from semgame.game import Edge, Game, GameFormatError, Vertex, load
from semgame.ltl import parse

DATA = os.path.join(os.path.dirname(__file__), "data")


def edge_index(game, src, dst):
    for ei in game.out[src]:
        if game.edges[ei].dst == dst:
            return ei
    raise AssertionError(f"no edge {src}->{dst}")


@pytest.fixture
def sample():
    return load(os.path.join(DATA, "sample_game.json"))


def test_legacy_vertex_priorities_move_to_edges(sample):
    assert len(sample.vertices) == 5
    assert len(sample.edges) == 10
    # every outgoing edge inherits the source vertex priority
    for e in sample.edges:
        assert e.prio == [4, 2, 1, 3, 5][e.src]


def test_sample_structure(sample):
    assert sample.start == 0
    assert [v.owner for v in sample.vertices] == [0, 1, 0, 1, 0]
    assert sorted(sample.out[0]) == [0, 1, 2]
    assert not sample.labelled
    assert sample.max_priority() == 5


def test_reachable_and_solution_size(sample):
    # fixed system strategy: 0 -> 2, 2 -> 3, 4 -> 4
    sigma = {
        0: edge_index(sample, 0, 2),
        2: edge_index(sample, 2, 3),
        4: edge_index(sample, 4, 4),
    }
    reach = sample.reachable(sigma, player=0)
    # vertex 1 is bypassed: its only sources choose other targets
    assert reach == {0, 2, 3, 4}
    assert sample.solution_size(sigma, player=0) == Fraction(4, 5)


def test_strategy_must_cover_reachable_player_vertices(sample):
    with pytest.raises(ValueError):
        sample.reachable({0: edge_index(sample, 0, 2)}, player=0)


def test_roundtrip_labelled():
    g = Game(
        inputs=["a"],
        outputs=["b"],
        start=0,
        vertices=[
            Vertex(0, 1, parse("G (a | b)"), (tuple(), (parse("F b"),))),
            Vertex(1, 0, parse("tt"), tuple()),
        ],
        edges=[
            Edge(0, 1, 0, {"a": True}),
            Edge(1, 0, 3, {"b": False}),
            Edge(1, 1, 1, {}),
        ],
    )
    g2 = Game.from_json(g.to_json())
    assert g2.inputs == ("a",)
    assert g2.outputs == ("b",)
    assert g2.vertices[0].master is parse("G (a | b)")
    assert g2.vertices[0].monitors == (tuple(), (parse("F b"),))
    assert g2.vertices[1].monitors == tuple()
    assert [e.prio for e in g2.edges] == [0, 3, 1]
    assert g2.edges[0].move == {"a": True}
    # serialization is stable
    assert g2.to_json() == g.to_json()


def test_format_errors_carry_paths():
    cases = [
        ({"start": 0, "vertices": [], "edges": []}, "/vertices"),
        (
            {"start": 0, "vertices": [{"id": 0, "owner": 2}], "edges": []},
            "/vertices/0/owner",
        ),
        (
            {
                "start": 0,
                "vertices": [{"id": 0, "owner": 0}],
                "edges": [{"src": 0, "dst": 0}],
            },
            "/edges/0/prio",
        ),
        (
            {
                "start": 0,
                "vertices": [{"id": 0, "owner": 0}],
                "edges": [{"src": 0, "dst": 1, "prio": 0}],
            },
            "/edges/0/dst",
        ),
        (
            {
                "start": 5,
                "vertices": [{"id": 0, "owner": 0}],
                "edges": [{"src": 0, "dst": 0, "prio": 0}],
            },
            "/start",
        ),
        (
            {
                "start": 0,
                "vertices": [{"id": 0, "owner": 0, "master": "G ("}],
                "edges": [{"src": 0, "dst": 0, "prio": 0}],
            },
            "/vertices/0/master",
        ),
        (
            {
                "start": 0,
                "vertices": [{"id": 0, "owner": 0}, {"id": 7, "owner": 0}],
                "edges": [{"src": 0, "dst": 0, "prio": 0}],
            },
            "/vertices/1/id",
        ),
    ]
    for doc, path in cases:
        with pytest.raises(GameFormatError) as exc:
            Game.from_json(json.dumps(doc))
        assert str(exc.value).startswith(path + ":"), (path, str(exc.value))


def test_mixed_priorities_rejected():
    doc = {
        "start": 0,
        "vertices": [{"id": 0, "owner": 0, "prio": 1}, {"id": 1, "owner": 1}],
        "edges": [
            {"src": 0, "dst": 1},
            {"src": 1, "dst": 0, "prio": 2},
        ],
    }
    with pytest.raises(GameFormatError):
        Game.from_json(json.dumps(doc))


def test_vertex_without_outgoing_edge_rejected():
    doc = {
        "start": 0,
        "vertices": [{"id": 0, "owner": 0}, {"id": 1, "owner": 1}],
        "edges": [{"src": 0, "dst": 1, "prio": 0}],
    }
    with pytest.raises(GameFormatError) as exc:
        Game.from_json(json.dumps(doc))
    assert "/vertices/1" in str(exc.value)
