"""Kripke and heap models, and formulas interpreted through Day extension.

Propositions are up-sets of worlds (frozensets).  The connectives beyond the
Heyting ones come from constructions on copresheaves:

* ``nom(a)``: extension of the nullary operation picking ``a``.
* ``@a phi``: extension of a one-point partial operation on a rooted frame,
  or of the span ``W <- W -> W`` whose left leg is constant at ``a``.
* ``emp``: extension of the nullary operation picking the unit heap.
* ``phi * psi``: extension of the partial join.
* ``phi -* psi``: residual of the join in its first argument at ``psi``,
  with ``phi`` in the second slot, so that ``- * phi`` is left adjoint to
  ``phi -* -``.

A Day extension of subterminal inputs need not be subterminal (a heap may
split in several ways), so a proposition is read off as its support.
:func:`oracle_eval` evaluates the same formulas by direct quantification.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from . import config
from .day import day_extend, day_extend_span, indicator, residual
from .errors import DomainMismatch, MissingStructure, NotAPoset, UnknownSymbol
from .finbase import canon, canon_sorted
from .fincat import (
    FinCategory,
    Functor,
    PartialOp,
    SpanOp,
    constant_op,
    identity_functor,
    identity_op,
    partial_op,
    strong_equal,
)
from .report import Report, show


# -- models ------------------------------------------------------------------


def _check_poset(C: FinCategory, what: str) -> None:
    if not C.is_thin():
        raise NotAPoset(f"{what} {C.name or ''} has parallel morphisms")
    for m in C.morphisms:
        a, b = C.src[m], C.tgt[m]
        if a != b and C.hom(b, a):
            raise NotAPoset(f"{what} {C.name or ''} is not antisymmetric at {show(a)}, {show(b)}")


class KripkeFrame:
    """A poset of worlds, optionally with a least world (the root)."""

    def __init__(self, worlds: FinCategory, root=None, name=None):
        _check_poset(worlds, "frame")
        if root is not None:
            if root not in worlds.objects:
                raise UnknownSymbol(f"root {show(root)} is not a world")
            if not all(worlds.leq(root, w) for w in worlds.objects):
                raise DomainMismatch(f"root {show(root)} is not below every world")
        self.worlds = worlds
        self.root = root
        self.name = name or worlds.name
        self.join = None
        self.unit = None

    def up(self, a) -> frozenset:
        return frozenset(w for w in self.worlds.objects if self.worlds.leq(a, w))

    def up_sets(self) -> list:
        return up_sets(self.worlds)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} |W|={len(self.worlds.objects)}>"


class HeapModel(KripkeFrame):
    """Heaps (a poset, possibly discrete) with a monotone partial join.

    The domain of ``join`` is the disjointness relation.  Declared laws are
    checked by :meth:`validate`; ``unit`` names the heap used for ``emp``.
    """

    def __init__(self, heaps: FinCategory, join: PartialOp, root=None, unit=None,
                 commutative=False, associative=False, name=None):
        super().__init__(heaps, root=root, name=name)
        if join.base != heaps or join.arity != 2:
            raise DomainMismatch("join must be a binary partial operation on the heaps")
        if unit is not None and unit not in heaps.objects:
            raise UnknownSymbol(f"unit {show(unit)} is not a heap")
        self.join = join
        self.unit = unit
        self.commutative = commutative
        self.associative = associative

    def disjoint(self, h1, h2) -> bool:
        return self.join.defined_at(h1, h2)

    def validate(self) -> Report:
        rep = Report(f"heap model {self.name}")
        if self.commutative:
            swapped = partial_op(
                self.worlds, 2, {(y, x): v for (x, y), v in self.join.action.obj.items()}, name="swap"
            )
            bad = [x for x in self.join.domain.objects if not swapped.defined_at(*x) or swapped(*x) != self.join(*x)]
            rep.add("join commutative", strong_equal(swapped, self.join), counterexample=bad[:1] or None)
        if self.associative:
            from .operad import multi_compose_pullback

            one = identity_op(self.worlds)
            lhs = multi_compose_pullback(self.join, [self.join, one])
            rhs = multi_compose_pullback(self.join, [one, self.join])
            diff = sorted(set(lhs.domain.objects) ^ set(rhs.domain.objects), key=canon)
            diff += [x for x in lhs.domain.objects if x in rhs.domain.objects and lhs(*x) != rhs(*x)]
            rep.add("join associative", strong_equal(lhs, rhs), counterexample=diff[:1] or None)
        if self.unit is not None:
            e = self.unit
            bad = [h for h in self.worlds.objects
                   if not (self.disjoint(e, h) and self.join(e, h) == h and self.disjoint(h, e) and self.join(h, e) == h)]
            rep.add("unit heap", not bad, counterexample=bad[:1] or None)
        return rep


def up_sets(C: FinCategory) -> list:
    """All upward-closed sets of objects, in a fixed order."""
    objs = canon_sorted(C.objects)
    config.check_enum("up-sets", 2 ** len(objs))
    above = {a: frozenset(C.tgt[m] for m in C.out_of(a)) for a in objs}
    out = []
    for bits in itertools.product((0, 1), repeat=len(objs)):
        s = frozenset(o for o, b in zip(objs, bits) if b)
        if all(above[a] <= s for a in s):
            out.append(s)
    return out


def is_up_set(frame: KripkeFrame, s) -> bool:
    C = frame.worlds
    return all(C.tgt[m] in s for m in C.morphisms if C.src[m] in s)


# -- formulas ----------------------------------------------------------------


_BINARY = {"and": "&", "or": "|", "imp": "->", "star": "*", "wand": "-*"}
_PREC = {"wand": 1, "imp": 2, "or": 3, "and": 4, "star": 5}
_RIGHT = {"wand", "imp"}


@dataclass(frozen=True)
class Formula:
    kind: str
    args: tuple = ()
    name: object = None

    def __str__(self):
        return _show(self)

    def depth(self) -> int:
        return 1 + max(a.depth() for a in self.args) if self.args else 0

    def atoms(self) -> set:
        if self.kind == "atom":
            return {self.name}
        out = set()
        for a in self.args:
            out |= a.atoms()
        return out


def _show(f: Formula, ctx: int = 0) -> str:
    k = f.kind
    if k == "atom":
        return str(f.name)
    if k in ("top", "bot", "emp"):
        return k
    if k == "nom":
        return f"nom({f.name})"
    if k == "at":
        return f"@{f.name} {_show(f.args[0], 6)}"
    p = _PREC[k]
    lhs_ctx, rhs_ctx = (p + 1, p) if k in _RIGHT else (p, p + 1)
    s = f"{_show(f.args[0], lhs_ctx)} {_BINARY[k]} {_show(f.args[1], rhs_ctx)}"
    return f"({s})" if p < ctx else s


def atom(name) -> Formula:
    return Formula("atom", (), name)


TOP = Formula("top")
BOT = Formula("bot")
EMP = Formula("emp")


def nom(a) -> Formula:
    return Formula("nom", (), a)


def at(a, phi: Formula) -> Formula:
    return Formula("at", (phi,), a)


def conj(a, b):
    return Formula("and", (a, b))


def disj(a, b):
    return Formula("or", (a, b))


def imp(a, b):
    return Formula("imp", (a, b))


def star(a, b):
    return Formula("star", (a, b))


def wand(a, b):
    return Formula("wand", (a, b))


# -- Heyting structure ---------------------------------------------------------


@dataclass(frozen=True)
class HeytingOps:
    top: frozenset
    bot: frozenset
    meet: object
    join: object
    implies: object


def heyting_ops(model: KripkeFrame) -> HeytingOps:
    """Meet, join and implication on the up-sets of a poset frame."""
    W = model.worlds
    worlds = frozenset(W.objects)
    above = {w: frozenset(W.tgt[m] for m in W.out_of(w)) for w in worlds}

    def implies(p, q):
        return frozenset(w for w in worlds if all(v in q for v in above[w] if v in p))

    return HeytingOps(worlds, frozenset(), lambda p, q: p & q, lambda p, q: p | q, implies)


# -- evaluation through Day extension ---------------------------------------------


class Evaluator:
    """Evaluates formulas on one model; remembers results per connective and arguments.

    ``at_mode`` selects the construction for ``@``: ``"rooted"``, ``"span"``
    or ``"auto"`` (rooted when the frame has a root).
    """

    def __init__(self, model: KripkeFrame, at_mode: str = "auto"):
        if at_mode not in ("auto", "rooted", "span"):
            raise ValueError(f"unknown @ mode {at_mode!r}")
        self.model = model
        self.at_mode = at_mode
        self.ops = heyting_ops(model)
        self._memo = {}
        self._middle = None  # hom composite for the join, reused across calls

    def _cached(self, key, fn):
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    def _prop(self, s) -> "Profunctor":
        return indicator(self.model.worlds, s)

    def _world(self, a):
        if a not in self.model.worlds.objects:
            raise UnknownSymbol(f"{show(a)} is not a world of {self.model.name}")
        return a

    def nominal(self, a) -> frozenset:
        a = self._world(a)
        return self._cached(("nom", a), lambda: day_extend(constant_op(self.model.worlds, a), []).support())

    def emp(self) -> frozenset:
        if self.model.unit is None:
            raise MissingStructure(f"emp needs a unit heap; {self.model.name} declares none")
        e = self.model.unit
        return self._cached(("emp",), lambda: day_extend(constant_op(self.model.worlds, e, name="emp"), []).support())

    def at_rooted(self, a, p: frozenset) -> frozenset:
        a = self._world(a)
        w0 = self.model.root
        if w0 is None:
            raise MissingStructure(f"rooted @ needs a root; {self.model.name} declares none")
        op = partial_op(self.model.worlds, 1, {(a,): w0}, name=f"@{a}")
        return self._cached(("at-rooted", a, p), lambda: day_extend(op, [self._prop(p)]).support())

    def at_span(self, a, p: frozenset) -> frozenset:
        a = self._world(a)
        W = self.model.worlds
        left = Functor(W, W.power(1), {w: (a,) for w in W.objects}, {m: (W.ident[a],) for m in W.morphisms}, check=False)
        s = SpanOp(W, 1, W, left, identity_functor(W), name=f"@{a}")
        return self._cached(("at-span", a, p), lambda: day_extend_span(s, [self._prop(p)]).support())

    def at(self, a, p: frozenset) -> frozenset:
        mode = self.at_mode
        if mode == "auto":
            mode = "rooted" if self.model.root is not None else "span"
        return self.at_rooted(a, p) if mode == "rooted" else self.at_span(a, p)

    def _join(self, what):
        if self.model.join is None:
            raise MissingStructure(f"{what} needs a heap model with a join; {self.model.name} has none")
        return self.model.join

    def star(self, p: frozenset, q: frozenset) -> frozenset:
        j = self._join("*")

        def run():
            res = day_extend(j, [self._prop(p), self._prop(q)], middle=self._middle)
            self._middle = res.middle
            return res.support()

        return self._cached(("star", p, q), run)

    def wand(self, p: frozenset, q: frozenset) -> frozenset:
        j = self._join("-*")
        return self._cached(("wand", p, q), lambda: residual(j, 1, self._prop(q), [self._prop(p)]).support())

    def binary(self, kind, p, q) -> frozenset:
        if kind == "and":
            return self.ops.meet(p, q)
        if kind == "or":
            return self.ops.join(p, q)
        if kind == "imp":
            return self.ops.implies(p, q)
        if kind == "star":
            return self.star(p, q)
        if kind == "wand":
            return self.wand(p, q)
        raise ValueError(f"unknown connective {kind!r}")

    def eval(self, f: Formula, valuation: dict) -> frozenset:
        k = f.kind
        if k == "atom":
            if f.name not in valuation:
                raise UnknownSymbol(f"atom {f.name} has no valuation")
            return frozenset(valuation[f.name])
        if k == "top":
            return self.ops.top
        if k == "bot":
            return self.ops.bot
        if k == "emp":
            return self.emp()
        if k == "nom":
            return self.nominal(f.name)
        if k == "at":
            return self.at(f.name, self.eval(f.args[0], valuation))
        p, q = (self.eval(a, valuation) for a in f.args)
        return self.binary(k, p, q)


def check_valuation(model: KripkeFrame, valuation: dict) -> None:
    for name, s in valuation.items():
        s = frozenset(s)
        extra = [w for w in s if w not in model.worlds.objects]
        if extra:
            raise UnknownSymbol(f"atom {name}: {show(extra[0])} is not a world")
        if not is_up_set(model, s):
            raise DomainMismatch(f"atom {name} is not upward closed")


def eval(formula: Formula, model: KripkeFrame, valuation: dict, at_mode: str = "auto") -> frozenset:  # noqa: A001
    """The up-set of worlds satisfying ``formula``."""
    check_valuation(model, valuation)
    return Evaluator(model, at_mode).eval(formula, valuation)


# -- oracle ----------------------------------------------------------------------


class Oracle:
    """Direct quantifier semantics, sharing nothing with the copresheaf route."""

    def __init__(self, model: KripkeFrame):
        self.model = model
        W = model.worlds
        self.worlds = frozenset(W.objects)
        self.le = {(a, b) for a in self.worlds for b in self.worlds if W.hom(a, b)}
        self.discrete = all(a == b for a, b in self.le)

    def up(self, a):
        return frozenset(w for w in self.worlds if (a, w) in self.le)

    def implies(self, p, q):
        return frozenset(w for w in self.worlds if all(v in q for v in self.up(w) if v in p))

    def star(self, p, q):
        j = self.model.join
        if j is None:
            raise MissingStructure("* needs a join")
        hits = [j(h1, h2) for (h1, h2) in j.domain.objects if h1 in p and h2 in q]
        return frozenset(h for h in self.worlds if any((x, h) in self.le for x in hits))

    def wand(self, p, q):
        j = self.model.join
        if j is None:
            raise MissingStructure("-* needs a join")
        if self.discrete:
            return frozenset(
                h for h in self.worlds
                if all(j(h, h2) in q for (h1, h2) in j.domain.objects if h1 == h and h2 in p)
            )
        # the largest r with r * p inside q, tested world by world
        return frozenset(h for h in self.worlds if self.star(self.up(h), p) <= q)

    def eval(self, f: Formula, valuation: dict) -> frozenset:
        k = f.kind
        if k == "atom":
            if f.name not in valuation:
                raise UnknownSymbol(f"atom {f.name} has no valuation")
            return frozenset(valuation[f.name])
        if k == "top":
            return self.worlds
        if k == "bot":
            return frozenset()
        if k == "emp":
            if self.model.unit is None:
                raise MissingStructure("emp needs a unit heap")
            return self.up(self.model.unit)
        if k == "nom":
            if f.name not in self.worlds:
                raise UnknownSymbol(f"{show(f.name)} is not a world")
            return self.up(f.name)
        if k == "at":
            if f.name not in self.worlds:
                raise UnknownSymbol(f"{show(f.name)} is not a world")
            return self.worlds if f.name in self.eval(f.args[0], valuation) else frozenset()
        p, q = (self.eval(a, valuation) for a in f.args)
        return self.binary(k, p, q)

    def binary(self, k, p, q):
        if k == "and":
            return p & q
        if k == "or":
            return p | q
        if k == "imp":
            return self.implies(p, q)
        if k == "star":
            return self.star(p, q)
        if k == "wand":
            return self.wand(p, q)
        raise ValueError(f"unknown connective {k!r}")


def oracle_eval(formula: Formula, model: KripkeFrame, valuation: dict) -> frozenset:
    check_valuation(model, valuation)
    return Oracle(model).eval(formula, valuation)


# -- checks ------------------------------------------------------------------------


def bi_adjunction_check(model: HeapModel, phi: frozenset, samples: int = 2000, seed: int = 0) -> Report:
    """``psi * phi <= chi`` iff ``psi <= phi -* chi`` over pairs of up-sets.

    Exhaustive when there are at most ``samples`` pairs, otherwise a seeded sample.
    Both sides are computed through Day extension and compared with the oracle.
    """
    if model.join is None:
        raise MissingStructure("the Galois check needs a join")
    props = up_sets(model.worlds)
    ev, orc = Evaluator(model), Oracle(model)
    phi = frozenset(phi)
    pairs = list(itertools.product(props, props))
    exhaustive = len(pairs) <= samples
    if not exhaustive:
        pairs = random.Random(seed).sample(pairs, samples)
    rep = Report(f"Galois connection for {show(sorted(phi, key=canon))} on {model.name}")
    bad = oracle_bad = None
    for psi, chi in pairs:
        lhs = ev.star(psi, phi) <= chi
        rhs = psi <= ev.wand(phi, chi)
        if lhs != rhs and bad is None:
            bad = (psi, chi)
        if (ev.star(psi, phi), ev.wand(phi, chi)) != (orc.star(psi, phi), orc.wand(phi, chi)) and oracle_bad is None:
            oracle_bad = (psi, chi)
    fmt = lambda pc: None if pc is None else [canon_sorted(pc[0]), canon_sorted(pc[1])]
    rep.add("adjunction", bad is None, pairs=len(pairs), exhaustive=exhaustive, counterexample=fmt(bad))
    rep.add("agrees with oracle", oracle_bad is None, counterexample=fmt(oracle_bad))
    return rep


def hybrid_check(frame: KripkeFrame) -> Report:
    """Nominals and both ``@`` constructions against their direct definitions,
    for every world and every up-set as the value of one atom."""
    rep = Report(f"hybrid connectives on {frame.name}")
    ev_r = Evaluator(frame, "rooted") if frame.root is not None else None
    ev_s = Evaluator(frame, "span")
    orc = Oracle(frame)
    props = up_sets(frame.worlds)
    for a in canon_sorted(frame.worlds.objects):
        rep.add(f"nom({show(a)})", ev_s.nominal(a) == orc.up(a))
        bad_r = bad_s = None
        for p in props:
            want = orc.eval(at(a, atom("p")), {"p": p})
            if ev_r is not None and ev_r.at(a, p) != want and bad_r is None:
                bad_r = canon_sorted(p)
            if ev_s.at(a, p) != want and bad_s is None:
                bad_s = canon_sorted(p)
        if ev_r is not None:
            rep.add(f"@{show(a)} rooted", bad_r is None, valuations=len(props), counterexample=bad_r)
        rep.add(f"@{show(a)} span", bad_s is None, valuations=len(props), counterexample=bad_s)
    return rep


def semantic_closure_check(model: KripkeFrame, valuation: dict, depth: int = 3, connectives=None) -> Report:
    """Compare :class:`Evaluator` with :class:`Oracle` on every formula up to ``depth``.

    Both semantics are compositional, so it suffices to grow the set of
    denotations level by level and compare each connective on every pair of
    denotations from the previous level.
    """
    check_valuation(model, valuation)
    ev, orc = Evaluator(model), Oracle(model)
    if connectives is None:
        connectives = ["and", "or", "imp"] + (["star", "wand"] if model.join is not None else [])
    base = [atom(n) for n in sorted(valuation)] + [TOP, BOT] + ([EMP] if model.unit is not None else [])
    rep = Report(f"eval against oracle on {model.name}, depth <= {depth}")
    seen = {}
    bad = None
    for f in base:
        a, b = ev.eval(f, valuation), orc.eval(f, valuation)
        if a != b and bad is None:
            bad = str(f)
        seen.setdefault(a, f)
    level = dict(seen)
    compared = 0
    for _ in range(depth):
        new = {}
        items = sorted(level.items(), key=lambda kv: canon(kv[0]))
        for k in connectives:
            for (p, fp), (q, fq) in itertools.product(items, items):
                compared += 1
                a, b = ev.binary(k, p, q), orc.binary(k, p, q)
                if a != b and bad is None:
                    bad = str(Formula(k, (fp, fq)))
                if a not in level and a not in new:
                    new[a] = Formula(k, (fp, fq))
        level.update(new)
    rep.add("eval = oracle", bad is None, comparisons=compared, propositions=len(level), counterexample=bad)
    return rep
