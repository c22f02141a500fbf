"""Parity game graphs with optional semantic labels.

Vertices are owned by the system (0) or the environment (1); priorities
sit on edges and the system wins a play iff the highest priority seen
infinitely often is odd. A labelled vertex carries its master formula
and a list of monitors, each serialized as its current obligation list.

The JSON shape is

    {"aps": {"inputs": [...], "outputs": [...]},
     "start": 0,
     "vertices": [{"id": 0, "owner": 0, "master": "G a", "monitors": [["F b"]]}, ...],
     "edges": [{"src": 0, "dst": 1, "prio": 2, "move": {"a": true}}, ...]}

master/monitors/move are optional. Files with priorities on vertices
instead of edges are accepted: each vertex priority is copied onto all
of its outgoing edges.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import ltl

SYSTEM = 0
ENVIRONMENT = 1


class GameFormatError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class Vertex:
    __slots__ = ("id", "owner", "master", "monitors")

    def __init__(self, id: int, owner: int, master=None, monitors=None):
        self.id = id
        self.owner = owner
        self.master = master
        # tuple of obligation tuples, one per monitor, or None
        self.monitors = monitors

    def __repr__(self):
        return f"Vertex({self.id}, owner={self.owner}, master={self.master})"


class Edge:
    __slots__ = ("src", "dst", "prio", "move")

    def __init__(self, src: int, dst: int, prio: int, move=None):
        self.src = src
        self.dst = dst
        self.prio = prio
        self.move = move

    def __repr__(self):
        return f"Edge({self.src}->{self.dst}, prio={self.prio})"


class Game:
    def __init__(self, inputs, outputs, start, vertices, edges):
        self.inputs = tuple(inputs)
        self.outputs = tuple(outputs)
        self.start = start
        self.vertices = list(vertices)
        self.edges = list(edges)
        self.out = [[] for _ in self.vertices]
        for i, e in enumerate(self.edges):
            self.out[e.src].append(i)
        self.validate()

    # ------------------------------------------------------------ basics

    @property
    def aps(self):
        return tuple(sorted(set(self.inputs) | set(self.outputs)))

    @property
    def labelled(self) -> bool:
        return all(v.master is not None for v in self.vertices)

    def max_priority(self) -> int:
        return max(e.prio for e in self.edges)

    def validate(self):
        n = len(self.vertices)
        if n == 0:
            raise GameFormatError("/vertices", "game has no vertices")
        for i, v in enumerate(self.vertices):
            if v.id != i:
                raise GameFormatError(f"/vertices/{i}/id", f"expected dense id {i}, got {v.id}")
            if v.owner not in (SYSTEM, ENVIRONMENT):
                raise GameFormatError(f"/vertices/{i}/owner", f"owner must be 0 or 1, got {v.owner!r}")
        if not 0 <= self.start < n:
            raise GameFormatError("/start", f"start {self.start} out of range")
        for i, e in enumerate(self.edges):
            if not 0 <= e.src < n:
                raise GameFormatError(f"/edges/{i}/src", f"vertex {e.src} out of range")
            if not 0 <= e.dst < n:
                raise GameFormatError(f"/edges/{i}/dst", f"vertex {e.dst} out of range")
            if not isinstance(e.prio, int) or e.prio < 0:
                raise GameFormatError(f"/edges/{i}/prio", f"priority must be a nonnegative integer, got {e.prio!r}")
        for i, outs in enumerate(self.out):
            if not outs:
                raise GameFormatError(f"/vertices/{i}", "vertex has no outgoing edge")

    # ------------------------------------------------------- strategies

    def reachable(self, strategy: dict, player: int) -> set:
        """Vertices reachable from start when `player` follows
        `strategy` (vertex id -> edge index) and the opponent moves
        freely."""
        seen = {self.start}
        stack = [self.start]
        while stack:
            v = stack.pop()
            if self.vertices[v].owner == player:
                ei = strategy.get(v)
                if ei is None:
                    raise ValueError(f"strategy undefined at vertex {v}")
                succs = [self.edges[ei].dst]
            else:
                succs = [self.edges[ei].dst for ei in self.out[v]]
            for u in succs:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return seen

    def solution_size(self, strategy: dict, player: int) -> Fraction:
        return Fraction(len(self.reachable(strategy, player)), len(self.vertices))

    # ---------------------------------------------------- serialization

    def to_json(self) -> str:
        vs = []
        for v in self.vertices:
            d = {"id": v.id, "owner": v.owner}
            if v.master is not None:
                d["master"] = str(v.master)
            if v.monitors is not None:
                d["monitors"] = [[str(o) for o in mon] for mon in v.monitors]
            vs.append(d)
        es = []
        for e in self.edges:
            d = {"src": e.src, "dst": e.dst, "prio": e.prio}
            if e.move is not None:
                d["move"] = {k: e.move[k] for k in sorted(e.move)}
            es.append(d)
        doc = {
            "aps": {"inputs": list(self.inputs), "outputs": list(self.outputs)},
            "start": self.start,
            "vertices": vs,
            "edges": es,
        }
        return json.dumps(doc, indent=2) + "\n"

    @classmethod
    def from_json(cls, text):
        if isinstance(text, (dict, list)):
            doc = text
        else:
            try:
                doc = json.loads(text)
            except json.JSONDecodeError as exc:
                raise GameFormatError("/", f"not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise GameFormatError("/", "top level must be an object")

        aps = doc.get("aps", {})
        if not isinstance(aps, dict):
            raise GameFormatError("/aps", "must be an object")
        inputs = _str_list(aps.get("inputs", []), "/aps/inputs")
        outputs = _str_list(aps.get("outputs", []), "/aps/outputs")

        raw_vs = doc.get("vertices")
        if not isinstance(raw_vs, list) or not raw_vs:
            raise GameFormatError("/vertices", "must be a non-empty array")
        raw_es = doc.get("edges")
        if not isinstance(raw_es, list):
            raise GameFormatError("/edges", "must be an array")

        vertex_prios = {}
        vertices = []
        for i, rv in enumerate(raw_vs):
            path = f"/vertices/{i}"
            if not isinstance(rv, dict):
                raise GameFormatError(path, "must be an object")
            vid = rv.get("id")
            if not isinstance(vid, int):
                raise GameFormatError(f"{path}/id", "missing integer id")
            owner = rv.get("owner")
            if owner not in (0, 1):
                raise GameFormatError(f"{path}/owner", f"owner must be 0 or 1, got {owner!r}")
            master = None
            if "master" in rv:
                master = _parse_formula(rv["master"], f"{path}/master")
            monitors = None
            if "monitors" in rv:
                raw_mons = rv["monitors"]
                if not isinstance(raw_mons, list):
                    raise GameFormatError(f"{path}/monitors", "must be an array")
                monitors = tuple(
                    tuple(
                        _parse_formula(o, f"{path}/monitors/{j}/{k}")
                        for k, o in enumerate(_list_at(mon, f"{path}/monitors/{j}"))
                    )
                    for j, mon in enumerate(raw_mons)
                )
            if "prio" in rv:
                p = rv["prio"]
                if not isinstance(p, int) or p < 0:
                    raise GameFormatError(f"{path}/prio", f"priority must be a nonnegative integer, got {p!r}")
                vertex_prios[vid] = p
            vertices.append(Vertex(vid, owner, master, monitors))

        legacy = bool(vertex_prios)
        if legacy and len(vertex_prios) != len(vertices):
            raise GameFormatError("/vertices", "either all or no vertices may carry a priority")

        edges = []
        for i, re_ in enumerate(raw_es):
            path = f"/edges/{i}"
            if not isinstance(re_, dict):
                raise GameFormatError(path, "must be an object")
            src, dst = re_.get("src"), re_.get("dst")
            if not isinstance(src, int):
                raise GameFormatError(f"{path}/src", "missing integer src")
            if not isinstance(dst, int):
                raise GameFormatError(f"{path}/dst", "missing integer dst")
            if "prio" in re_:
                if legacy:
                    raise GameFormatError(f"{path}/prio", "edge priorities cannot be mixed with vertex priorities")
                prio = re_["prio"]
                if not isinstance(prio, int) or prio < 0:
                    raise GameFormatError(f"{path}/prio", f"priority must be a nonnegative integer, got {prio!r}")
            elif legacy:
                prio = vertex_prios.get(src)
                if prio is None:
                    raise GameFormatError(f"{path}/prio", f"no priority for source vertex {src}")
            else:
                raise GameFormatError(f"{path}/prio", "missing priority")
            move = None
            if "move" in re_:
                raw_move = re_["move"]
                if not isinstance(raw_move, dict) or not all(
                    isinstance(k, str) and isinstance(b, bool) for k, b in raw_move.items()
                ):
                    raise GameFormatError(f"{path}/move", "must map proposition names to booleans")
                move = dict(raw_move)
            edges.append(Edge(src, dst, prio, move))

        start = doc.get("start")
        if not isinstance(start, int):
            raise GameFormatError("/start", "missing integer start vertex")
        return cls(inputs, outputs, start, vertices, edges)


def _str_list(x, path):
    if not isinstance(x, list) or not all(isinstance(s, str) for s in x):
        raise GameFormatError(path, "must be an array of strings")
    return x


def _list_at(x, path):
    if not isinstance(x, list):
        raise GameFormatError(path, "must be an array")
    return x


def _parse_formula(x, path):
    if not isinstance(x, str):
        raise GameFormatError(path, "must be a formula string")
    try:
        return ltl.parse(x)
    except ltl.ParseError as exc:
        raise GameFormatError(path, str(exc)) from exc


def load(path: str) -> Game:
    with open(path, "r", encoding="utf-8") as fh:
        return Game.from_json(fh.read())


def save(game: Game, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(game.to_json())
