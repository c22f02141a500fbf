"""Reduced ordered binary decision diagrams.

Minimal self-contained implementation used for propositional reasoning:
canonical forms, equivalence and implication checks, and exact model
counting. Variables are the integers 0..n-1; the variable index doubles
as the decision level, so the ordering is fixed at manager creation.
"""

from __future__ import annotations

FALSE = 0
TRUE = 1


class Bdd:
    """BDD manager with a fixed variable count.

    Nodes are plain integers; 0 and 1 are the terminals. Each manager
    owns its unique table and ite cache, so node ids from different
    managers must never be mixed.
    """

    def __init__(self, nvars: int):
        if nvars < 0:
            raise ValueError("negative variable count")
        if nvars > 64:
            raise ValueError(f"variable count {nvars} exceeds capacity (64)")
        self.nvars = nvars
        # _nodes[u] = (var, lo, hi); slots 0 and 1 pad for the terminals
        self._nodes: list = [None, None]
        self._unique: dict = {}
        self._cache: dict = {}

    def var(self, i: int) -> int:
        if not 0 <= i < self.nvars:
            raise ValueError(f"variable {i} out of range")
        return self._mk(i, FALSE, TRUE)

    def level(self, u: int) -> int:
        # terminals sit below every variable
        return self.nvars if u <= TRUE else self._nodes[u][0]

    def node(self, u: int):
        """(var, lo, hi) triple of a non-terminal node."""
        return self._nodes[u]

    def _mk(self, var: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        key = (var, lo, hi)
        u = self._unique.get(key)
        if u is None:
            self._nodes.append(key)
            u = len(self._nodes) - 1
            self._unique[key] = u
        return u

    def ite(self, f: int, g: int, h: int) -> int:
        if f == TRUE:
            return g
        if f == FALSE:
            return h
        if g == h:
            return g
        if g == TRUE and h == FALSE:
            return f
        key = (f, g, h)
        r = self._cache.get(key)
        if r is not None:
            return r
        top = min(self.level(f), self.level(g), self.level(h))
        f0, f1 = self._cofactors(f, top)
        g0, g1 = self._cofactors(g, top)
        h0, h1 = self._cofactors(h, top)
        lo = self.ite(f0, g0, h0)
        hi = self.ite(f1, g1, h1)
        r = self._mk(top, lo, hi)
        self._cache[key] = r
        return r

    def _cofactors(self, u: int, level: int):
        if u <= TRUE or self._nodes[u][0] != level:
            return u, u
        _, lo, hi = self._nodes[u]
        return lo, hi

    def not_(self, u: int) -> int:
        return self.ite(u, FALSE, TRUE)

    def and_(self, u: int, v: int) -> int:
        return self.ite(u, v, FALSE)

    def or_(self, u: int, v: int) -> int:
        return self.ite(u, TRUE, v)

    def implies(self, u: int, v: int) -> bool:
        """Whether u -> v is valid."""
        return self.ite(u, v, TRUE) == TRUE

    def count(self, u: int) -> int:
        """Number of satisfying assignments over all nvars variables."""
        memo: dict = {}

        def sat(x: int) -> int:
            # counts assignments to variables level(x)..nvars-1
            if x == FALSE:
                return 0
            if x == TRUE:
                return 1
            r = memo.get(x)
            if r is None:
                var, lo, hi = self._nodes[x]
                r = (sat(lo) << (self.level(lo) - var - 1)) + (
                    sat(hi) << (self.level(hi) - var - 1)
                )
                memo[x] = r
            return r

        return sat(u) << self.level(u)
