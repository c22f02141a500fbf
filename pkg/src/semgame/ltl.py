"""Linear temporal logic formulas in negation normal form.

Formula objects are immutable and hash-consed: structurally equal terms
are the same object, so `is` comparison and dict keys are cheap. The
smart constructors (conj, disj, nxt, eventually, always, until) apply
cheap local simplifications only: flattening, constant folding,
duplicate removal and complementary literals. They keep the argument
order as written. Full propositional canonicalization is `canonical`,
which rebuilds each boolean level from a BDD.

The temporal operators are X, F, G and U over named atomic
propositions. Negation only ever sits on atoms; `negate` rewrites an
arbitrary formula into this shape, eliminating negated U through

    !(l U r) == (!r U (!l & !r)) | G !r

so no dual release operator is needed.

Concrete syntax accepted by `parse` (and produced by str()):

    f := "tt" | "ff" | atom | "!" f | f "&" f | f "|" f
       | "X" f | "F" f | "G" f | f "U" f | "(" f ")"

where atoms match [a-z][a-zA-Z0-9_]*. Unary operators bind tightest,
then U (right associative), then &, then |.
"""

from __future__ import annotations

import itertools
import re

from .bdd import FALSE, TRUE, Bdd

_counter = itertools.count()
_table: dict = {}


def _intern(key, make):
    node = _table.get(key)
    if node is None:
        node = make()
        node.idx = next(_counter)
        _table[key] = node
    return node


class Formula:
    __slots__ = ("idx",)

    def __str__(self) -> str:
        return _fmt(self, 0)

    def __repr__(self) -> str:
        return _fmt(self, 0)


class Const(Formula):
    __slots__ = ("value",)


class Atom(Formula):
    __slots__ = ("name",)


class Neg(Formula):
    """Negated atom. The only place negation can occur."""

    __slots__ = ("arg",)


class And(Formula):
    __slots__ = ("args",)


class Or(Formula):
    __slots__ = ("args",)


class Next(Formula):
    __slots__ = ("body",)


class Eventually(Formula):
    __slots__ = ("body",)


class Always(Formula):
    __slots__ = ("body",)


class Until(Formula):
    __slots__ = ("lhs", "rhs")


def _mk_const(v: bool) -> Const:
    def make():
        n = Const()
        n.value = v
        return n

    return _intern(("const", v), make)


TT = _mk_const(True)
FF = _mk_const(False)


def atom(name: str) -> Atom:
    if not re.fullmatch(r"[a-z][a-zA-Z0-9_]*", name) or name in ("tt", "ff"):
        raise ValueError(f"invalid atom name {name!r}")

    def make():
        n = Atom()
        n.name = name
        return n

    return _intern(("atom", name), make)


def _neg(a: Atom) -> Neg:
    def make():
        n = Neg()
        n.arg = a
        return n

    return _intern(("neg", a), make)


def conj(*parts: Formula) -> Formula:
    out: list = []
    for p in parts:
        if isinstance(p, And):
            out.extend(p.args)
        elif p is TT:
            continue
        elif p is FF:
            return FF
        else:
            out.append(p)
    seen: set = set()
    args: list = []
    for p in out:
        if p in seen:
            continue
        seen.add(p)
        args.append(p)
    for p in args:
        if isinstance(p, Atom) and _neg(p) in seen:
            return FF
    if not args:
        return TT
    if len(args) == 1:
        return args[0]

    def make():
        n = And()
        n.args = tuple(args)
        return n

    return _intern(("and", tuple(args)), make)


def disj(*parts: Formula) -> Formula:
    out: list = []
    for p in parts:
        if isinstance(p, Or):
            out.extend(p.args)
        elif p is FF:
            continue
        elif p is TT:
            return TT
        else:
            out.append(p)
    seen: set = set()
    args: list = []
    for p in out:
        if p in seen:
            continue
        seen.add(p)
        args.append(p)
    for p in args:
        if isinstance(p, Atom) and _neg(p) in seen:
            return TT
    if not args:
        return FF
    if len(args) == 1:
        return args[0]

    def make():
        n = Or()
        n.args = tuple(args)
        return n

    return _intern(("or", tuple(args)), make)


def nxt(body: Formula) -> Formula:
    if isinstance(body, Const):
        return body

    def make():
        n = Next()
        n.body = body
        return n

    return _intern(("next", body), make)


def eventually(body: Formula) -> Formula:
    if isinstance(body, Const):
        return body

    def make():
        n = Eventually()
        n.body = body
        return n

    return _intern(("ev", body), make)


def always(body: Formula) -> Formula:
    if isinstance(body, Const):
        return body

    def make():
        n = Always()
        n.body = body
        return n

    return _intern(("alw", body), make)


def until(lhs: Formula, rhs: Formula) -> Formula:
    if isinstance(rhs, Const):
        return rhs
    if lhs is FF:
        return rhs

    def make():
        n = Until()
        n.lhs = lhs
        n.rhs = rhs
        return n

    return _intern(("until", lhs, rhs), make)


def is_temporal(f: Formula) -> bool:
    return isinstance(f, (Next, Eventually, Always, Until))


# ---------------------------------------------------------------- printing

# precedence: | < & < U < unary/leaf
_PREC_OR, _PREC_AND, _PREC_UNTIL, _PREC_UNARY = 1, 2, 3, 4


def _prec(f: Formula) -> int:
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, And):
        return _PREC_AND
    if isinstance(f, Until):
        return _PREC_UNTIL
    return _PREC_UNARY


def _fmt(f: Formula, ctx: int) -> str:
    if isinstance(f, Const):
        return "tt" if f.value else "ff"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Neg):
        return "!" + f.arg.name
    if isinstance(f, And):
        s = " & ".join(_fmt(a, _PREC_AND) for a in f.args)
        return f"({s})" if ctx > _PREC_AND else s
    if isinstance(f, Or):
        s = " | ".join(_fmt(a, _PREC_OR) for a in f.args)
        return f"({s})" if ctx > _PREC_OR else s
    if isinstance(f, Until):
        # lhs one notch tighter keeps right associativity on reparse
        s = f"{_fmt(f.lhs, _PREC_UNTIL + 1)} U {_fmt(f.rhs, _PREC_UNTIL)}"
        return f"({s})" if ctx > _PREC_UNTIL else s
    op = {Next: "X", Eventually: "F", Always: "G"}[type(f)]
    return f"{op} {_fmt(f.body, _PREC_UNARY)}"


# ----------------------------------------------------------------- parsing


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"[a-z][a-zA-Z0-9_]*|[UXFG!&|()]")


def _tokenize(text: str):
    out = []
    pos, n = 0, len(text)
    while True:
        while pos < n and text[pos] in " \t\r\n":
            pos += 1
        if pos == n:
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r} at column {pos}")
        out.append((m.group(), pos))
        pos = m.end()
    out.append((None, n))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, want: str):
        tok, pos = self.take()
        if tok != want:
            raise ParseError(f"expected {want!r} at column {pos}, found {tok!r}")

    def parse(self) -> Formula:
        f = self.or_expr()
        tok, pos = self.take()
        if tok is not None:
            raise ParseError(f"trailing input at column {pos}: {tok!r}")
        return f

    def or_expr(self) -> Formula:
        parts = [self.and_expr()]
        while self.peek() == "|":
            self.take()
            parts.append(self.and_expr())
        return disj(*parts)

    def and_expr(self) -> Formula:
        parts = [self.until_expr()]
        while self.peek() == "&":
            self.take()
            parts.append(self.until_expr())
        return conj(*parts)

    def until_expr(self) -> Formula:
        lhs = self.unary_expr()
        if self.peek() == "U":
            self.take()
            return until(lhs, self.until_expr())
        return lhs

    def unary_expr(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.take()
            return negate(self.unary_expr())
        if tok == "X":
            self.take()
            return nxt(self.unary_expr())
        if tok == "F":
            self.take()
            return eventually(self.unary_expr())
        if tok == "G":
            self.take()
            return always(self.unary_expr())
        return self.primary()

    def primary(self) -> Formula:
        tok, pos = self.take()
        if tok == "(":
            f = self.or_expr()
            self.expect(")")
            return f
        if tok == "tt":
            return TT
        if tok == "ff":
            return FF
        if tok is not None and tok[0].islower():
            return atom(tok)
        raise ParseError(f"expected a formula at column {pos}, found {tok!r}")


def parse(text: str) -> Formula:
    """Parses concrete syntax into a hash-consed NNF formula."""
    return _Parser(text).parse()


# ------------------------------------------------------------ NNF negation


def negate(f: Formula) -> Formula:
    if isinstance(f, Const):
        return FF if f.value else TT
    if isinstance(f, Atom):
        return _neg(f)
    if isinstance(f, Neg):
        return f.arg
    if isinstance(f, And):
        return disj(*[negate(a) for a in f.args])
    if isinstance(f, Or):
        return conj(*[negate(a) for a in f.args])
    if isinstance(f, Next):
        return nxt(negate(f.body))
    if isinstance(f, Eventually):
        return always(negate(f.body))
    if isinstance(f, Always):
        return eventually(negate(f.body))
    if isinstance(f, Until):
        nl, nr = negate(f.lhs), negate(f.rhs)
        return disj(until(nr, conj(nl, nr)), always(nr))
    raise TypeError(f"not a formula: {f!r}")


# ----------------------------------------------------- stepwise evaluation


def unfold(f: Formula, frozen: frozenset = frozenset()) -> Formula:
    """One-step expansion exposing the current letter at the boolean level.

    G psi  becomes  unfold(psi) & G psi
    F psi  becomes  unfold(psi) | F psi
    l U r  becomes  unfold(r) | (unfold(l) & (l U r))

    X bodies and atoms are untouched; the propositional structure is
    rebuilt through the smart constructors. Formulas in `frozen` (used
    for monitored subterms) are kept as opaque leaves.
    """
    if f in frozen:
        return f
    if isinstance(f, (Const, Atom, Neg, Next)):
        return f
    if isinstance(f, And):
        return conj(*[unfold(a, frozen) for a in f.args])
    if isinstance(f, Or):
        return disj(*[unfold(a, frozen) for a in f.args])
    if isinstance(f, Always):
        return conj(unfold(f.body, frozen), f)
    if isinstance(f, Eventually):
        return disj(unfold(f.body, frozen), f)
    if isinstance(f, Until):
        return disj(unfold(f.rhs, frozen), conj(unfold(f.lhs, frozen), f))
    raise TypeError(f"not a formula: {f!r}")


def subst_atoms(f: Formula, true_set, universe=None) -> Formula:
    """Substitutes atoms at the boolean level with constants.

    Atoms named in `true_set` become tt, other atoms in `universe`
    become ff; with universe=None every atom is substituted. Temporal
    subterms are opaque: their atoms refer to later steps.
    """
    if isinstance(f, Atom):
        if universe is not None and f.name not in universe:
            return f
        return TT if f.name in true_set else FF
    if isinstance(f, Neg):
        if universe is not None and f.arg.name not in universe:
            return f
        return FF if f.arg.name in true_set else TT
    if isinstance(f, And):
        return conj(*[subst_atoms(a, true_set, universe) for a in f.args])
    if isinstance(f, Or):
        return disj(*[subst_atoms(a, true_set, universe) for a in f.args])
    return f


def subst_nodes(f: Formula, mapping: dict) -> Formula:
    """Replaces whole subterms at the boolean level (temporal leaves stay
    opaque unless they are themselves keys)."""
    r = mapping.get(f)
    if r is not None:
        return r
    if isinstance(f, And):
        return conj(*[subst_nodes(a, mapping) for a in f.args])
    if isinstance(f, Or):
        return disj(*[subst_nodes(a, mapping) for a in f.args])
    return f


def strip_x(f: Formula) -> Formula:
    """Advances one step: X bodies are exposed, F/G/U leaves carry over.

    Only valid once the current letter is substituted away; a remaining
    atom is a usage error.
    """
    if isinstance(f, Const):
        return f
    if isinstance(f, Next):
        return f.body
    if isinstance(f, (Eventually, Always, Until)):
        return f
    if isinstance(f, And):
        return conj(*[strip_x(a) for a in f.args])
    if isinstance(f, Or):
        return disj(*[strip_x(a) for a in f.args])
    raise ValueError(f"cannot advance past free atom in {f}")


def after(f: Formula, letter, frozen: frozenset = frozenset()) -> Formula:
    """Strongest obligation for the suffix after reading one letter.

    `letter` is the set of atom names true in the current step; all
    other atoms are false.
    """
    return canonical(strip_x(subst_atoms(unfold(f, frozen), letter)))


# ------------------------------------------------------------- inspection


def atoms(f: Formula) -> frozenset:
    """All atom names occurring anywhere in the formula."""
    out: set = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add(g.name)
        elif isinstance(g, Neg):
            out.add(g.arg.name)
        elif isinstance(g, (And, Or)):
            stack.extend(g.args)
        elif isinstance(g, (Next, Eventually, Always)):
            stack.append(g.body)
        elif isinstance(g, Until):
            stack.append(g.lhs)
            stack.append(g.rhs)
    return frozenset(out)


def skeleton_vars(f: Formula):
    """Variables of the top boolean level: (sorted atom names, temporal
    leaves in creation order)."""
    names: set = set()
    temps: dict = {}

    def walk(g):
        if isinstance(g, Atom):
            names.add(g.name)
        elif isinstance(g, Neg):
            names.add(g.arg.name)
        elif isinstance(g, (And, Or)):
            for a in g.args:
                walk(a)
        elif is_temporal(g):
            temps[g] = True

    walk(f)
    return sorted(names), sorted(temps, key=lambda t: t.idx)


def encode_bool(f: Formula, mgr: Bdd, varmap: dict) -> int:
    """Encodes the boolean level into `mgr`; varmap sends atom names and
    temporal leaves to variable indices."""
    if isinstance(f, Const):
        return TRUE if f.value else FALSE
    if isinstance(f, Atom):
        return mgr.var(varmap[f.name])
    if isinstance(f, Neg):
        return mgr.not_(mgr.var(varmap[f.arg.name]))
    if isinstance(f, And):
        node = TRUE
        for a in f.args:
            node = mgr.and_(node, encode_bool(a, mgr, varmap))
        return node
    if isinstance(f, Or):
        node = FALSE
        for a in f.args:
            node = mgr.or_(node, encode_bool(a, mgr, varmap))
        return node
    return mgr.var(varmap[f])


# -------------------------------------------------------- canonical forms

_canon_cache: dict = {}


def canonical(f: Formula) -> Formula:
    """Fixed canonical representative of the propositional equivalence
    class, at every boolean level of the formula.

    Temporal subterms are canonicalized first and then treated as opaque
    variables; the boolean level is rebuilt from its BDD with atoms
    ordered by name before temporal leaves in creation order. NNF keeps
    every formula monotone in its temporal leaves, so the rebuild never
    needs a negated temporal variable.
    """
    r = _canon_cache.get(f)
    if r is not None:
        return r
    if isinstance(f, (Const, Atom, Neg)):
        out = f
    elif isinstance(f, Next):
        out = nxt(canonical(f.body))
    elif isinstance(f, Eventually):
        out = eventually(canonical(f.body))
    elif isinstance(f, Always):
        out = always(canonical(f.body))
    elif isinstance(f, Until):
        out = until(canonical(f.lhs), canonical(f.rhs))
    else:
        frep = _canon_args(f)
        names, temps = skeleton_vars(frep)
        nvars = len(names) + len(temps)
        mgr = Bdd(nvars)
        varmap: dict = {n: i for i, n in enumerate(names)}
        for j, t in enumerate(temps):
            varmap[t] = len(names) + j
        node = encode_bool(frep, mgr, varmap)
        rev = list(names) + temps
        out = _rebuild(mgr, node, rev, len(names))
    _canon_cache[f] = out
    _canon_cache[out] = out
    return out


def _canon_args(f: Formula) -> Formula:
    if isinstance(f, And):
        return conj(*[_canon_args(a) for a in f.args])
    if isinstance(f, Or):
        return disj(*[_canon_args(a) for a in f.args])
    if is_temporal(f):
        return canonical(f)
    return f


def _rebuild(mgr: Bdd, node: int, rev: list, n_atoms: int) -> Formula:
    memo: dict = {}

    def rec(u: int) -> Formula:
        if u == TRUE:
            return TT
        if u == FALSE:
            return FF
        r = memo.get(u)
        if r is not None:
            return r
        var, lo, hi = mgr.node(u)
        leaf = rev[var]
        if var < n_atoms:
            a = atom(leaf)
            if lo == FALSE:
                r = conj(a, rec(hi))
            elif hi == FALSE:
                r = conj(_neg(a), rec(lo))
            elif hi == TRUE:
                r = disj(a, rec(lo))
            elif lo == TRUE:
                r = disj(_neg(a), rec(hi))
            else:
                r = disj(conj(a, rec(hi)), conj(_neg(a), rec(lo)))
        else:
            # NNF guarantees monotonicity in temporal leaves
            assert mgr.implies(lo, hi), "non-monotone temporal variable"
            if lo == FALSE:
                r = conj(leaf, rec(hi))
            elif hi == TRUE:
                r = disj(leaf, rec(lo))
            else:
                r = disj(conj(leaf, rec(hi)), rec(lo))
        memo[u] = r
        return r

    return rec(node)
