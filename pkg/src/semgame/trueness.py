"""Trueness: the fraction of propositional models of a formula.

The formula's top boolean level is read as a propositional function
whose variables are the atomic propositions plus the temporal leaves
(each temporal subterm counts as one opaque variable). Trueness is the
exact model count over the space spanned by those variables together
with all declared propositions, as a Fraction in [0, 1].

Padding the declared proposition set with unused names does not change
the value: an unused variable doubles both the model count and the
space. Constants have trueness 0 and 1, a single F or U leaf has 1/2.
"""

from __future__ import annotations

from fractions import Fraction

from .bdd import Bdd
from .ltl import Formula, encode_bool, skeleton_vars

_cache: dict = {}


def trueness(f: Formula, aps=()) -> Fraction:
    """Model-count ratio of the boolean level of f over the declared
    propositions plus the formula's own variables."""
    key = (f, frozenset(aps))
    r = _cache.get(key)
    if r is not None:
        return r
    names, temps = skeleton_vars(f)
    space = sorted(set(names) | set(aps))
    nvars = len(space) + len(temps)
    mgr = Bdd(nvars)
    varmap: dict = {n: i for i, n in enumerate(space)}
    for j, t in enumerate(temps):
        varmap[t] = len(space) + j
    node = encode_bool(f, mgr, varmap)
    r = Fraction(mgr.count(node), 1 << nvars)
    _cache[key] = r
    return r
