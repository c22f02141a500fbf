import random
from fractions import Fraction

import pytest

from semgame.ltl import FF, TT, atom, conj, disj, eventually, negate, nxt, parse, until
from semgame.trueness import trueness


def bitmask_models(f, names):
    """Independent oracle: evaluates the boolean level over all
    assignments using bitmask integers, one bit per assignment."""
    n = len(names)
    total = 1 << n
    full = (1 << total) - 1
    masks = {}
    for i, name in enumerate(names):
        m = 0
        for asg in range(total):
            if asg >> i & 1:
                m |= 1 << asg
        masks[name] = m

    def ev(g):
        from semgame import ltl

        if isinstance(g, ltl.Const):
            return full if g.value else 0
        if isinstance(g, ltl.Atom):
            return masks[g.name]
        if isinstance(g, ltl.Neg):
            return full ^ masks[g.arg.name]
        if isinstance(g, ltl.And):
            r = full
            for x in g.args:
                r &= ev(x)
            return r
        if isinstance(g, ltl.Or):
            r = 0
            for x in g.args:
                r |= ev(x)
            return r
        raise AssertionError("boolean level only")

    return bin(ev(f)).count("1"), total


def test_constants_and_literals():
    assert trueness(TT) == 1
    assert trueness(FF) == 0
    assert trueness(atom("a")) == Fraction(1, 2)
    assert trueness(negate(atom("a"))) == Fraction(1, 2)
    assert trueness(conj(atom("a"), atom("b"))) == Fraction(1, 4)
    assert trueness(disj(atom("a"), atom("b"))) == Fraction(3, 4)


def test_temporal_leaves_are_variables():
    assert trueness(parse("G a & G !a"), aps=["a"]) == Fraction(1, 4)
    assert trueness(parse("F a")) == Fraction(1, 2)
    assert trueness(parse("X (a & b & c)")) == Fraction(1, 2)
    # space is {a, b, X b}: two models (a true, X b true, b free)
    assert trueness(parse("a & X b"), aps=["a", "b"]) == Fraction(1, 4)
    assert trueness(parse("b"), aps=["a", "b"]) == Fraction(1, 2)


def test_eventually_always_half():
    rng = random.Random(3)
    names = ["a", "b", "c"]

    def gen(d):
        r = rng.random()
        if d == 0 or r < 0.3:
            return atom(rng.choice(names))
        if r < 0.6:
            return conj(gen(d - 1), gen(d - 1))
        if r < 0.8:
            return disj(gen(d - 1), gen(d - 1))
        return nxt(gen(d - 1))

    for _ in range(20):
        body = gen(3)
        assert trueness(eventually(body), aps=names) == Fraction(1, 2)
        assert trueness(until(gen(2), body), aps=names) == Fraction(1, 2)


def test_padding_invariance():
    f = parse("a | b & c")
    base = trueness(f, aps=["a", "b", "c"])
    assert trueness(f) == base
    assert trueness(f, aps=["a", "b", "c", "x", "y"]) == base


def test_declared_only_padding_still_counts():
    # a appears only under G, yet the declared ap spans the space
    assert trueness(parse("G a"), aps=["a"]) == Fraction(1, 2)


def test_against_bitmask_oracle():
    rng = random.Random(20260817)
    names = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l"]

    def gen(vs, d):
        r = rng.random()
        if d == 0 or r < 0.3:
            g = atom(rng.choice(vs))
            return negate(g) if rng.random() < 0.4 else g
        if r < 0.65:
            return conj(gen(vs, d - 1), gen(vs, d - 1))
        return disj(gen(vs, d - 1), gen(vs, d - 1))

    for _ in range(300):
        vs = names[: rng.randint(1, 12)]
        f = gen(vs, rng.randint(1, 5))
        got = trueness(f, aps=vs)
        models, total = bitmask_models(f, vs)
        assert got == Fraction(models, total)


def test_capacity_cap():
    f = conj(*[atom(f"v{i}") for i in range(65)])
    with pytest.raises(ValueError):
        trueness(f)
