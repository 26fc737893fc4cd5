"""Finite categories, functors and natural transformations.

Objects and morphisms are hashable tags.  Composition is stored densely for
composable pairs only; ``comp[(g, f)]`` is ``g . f`` and is defined exactly
when ``tgt(f) == src(g)``.

n-fold products are flat: objects of ``C^n`` are n-tuples of objects of
``C`` and morphisms are n-tuples of morphisms, so ``C^0`` is the terminal
category with object ``()`` and multi-composition arities add by tuple
concatenation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from . import config
from .errors import CategoryError, DomainMismatch, FunctorError, NotAPoset, ShapeMismatch
from .finbase import FinSet, canon, canon_sorted
from .report import Report, show

_VIOLATION_CAP = 25


class FinCategory:
    def __init__(
        self,
        objects: Iterable,
        arrows: Mapping,
        identities: Mapping,
        comp: Mapping,
        name: str | None = None,
        check: bool | None = None,
    ):
        """``arrows`` maps each morphism to ``(src, tgt)``."""
        self.name = name
        self.objects = FinSet(objects)
        self.morphisms = FinSet(arrows)
        self.src = {m: st[0] for m, st in arrows.items()}
        self.tgt = {m: st[1] for m, st in arrows.items()}
        self.ident = dict(identities)
        self.comp = dict(comp)
        hom: dict = {}
        for m in self.morphisms:
            hom.setdefault((self.src[m], self.tgt[m]), []).append(m)
        self._hom = {k: tuple(v) for k, v in hom.items()}
        self._by_src: dict = {}
        self._by_tgt: dict = {}
        for m in self.morphisms:
            self._by_src.setdefault(self.src[m], []).append(m)
            self._by_tgt.setdefault(self.tgt[m], []).append(m)
        self._powers: dict = {}
        self._gens = None
        if check is None:
            check = config.current().validate
        if check:
            report = validate_category(self)
            if not report.passed:
                raise CategoryError(
                    f"invalid category {name or ''}".strip(),
                    [c.detail for c in report.failures],
                )

    # -- lookups -----------------------------------------------------------
    def hom(self, a, b) -> tuple:
        return self._hom.get((a, b), ())

    def id(self, a):
        return self.ident[a]

    def compose(self, g, f):
        """``g . f``; raises ShapeMismatch when not composable."""
        try:
            return self.comp[(g, f)]
        except KeyError:
            raise ShapeMismatch(f"cannot compose {show(g)} . {show(f)}") from None

    def chain(self, *ms):
        """``chain(h, g, f) == h . g . f``."""
        out = ms[-1]
        for m in reversed(ms[:-1]):
            out = self.compose(m, out)
        return out

    def out_of(self, a) -> list:
        return self._by_src.get(a, [])

    def into(self, a) -> list:
        return self._by_tgt.get(a, [])

    def non_identities(self) -> list:
        idents = set(self.ident.values())
        return [m for m in self.morphisms if m not in idents]

    def generators(self) -> list:
        """Non-identity morphisms generating the category under composition.

        Defaults to all non-identities; products and posets supply smaller
        sets (single-component arrows, covering pairs).
        """
        if self._gens is None:
            self._gens = self.non_identities()
        return self._gens

    def is_identity(self, m) -> bool:
        return self.ident.get(self.src[m]) == m

    def is_thin(self) -> bool:
        return all(len(v) <= 1 for v in self._hom.values())

    def is_discrete(self) -> bool:
        return len(self.morphisms) == len(self.objects)

    def leq(self, a, b) -> bool:
        """Thin-category order: there is a morphism ``a -> b``."""
        return bool(self.hom(a, b))

    def power(self, n: int) -> "FinCategory":
        cat = self._powers.get(n)
        if cat is None:
            cat = product_category([self] * n)[0]
            if self.name:
                cat.name = f"{self.name}^{n}"
            self._powers[n] = cat
        return cat

    def table_key(self):
        return (self.objects, self.morphisms, tuple(sorted(self.comp.items(), key=canon)))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, FinCategory)
            and self.objects == other.objects
            and self.morphisms == other.morphisms
            and self.src == other.src
            and self.tgt == other.tgt
            and self.ident == other.ident
            and self.comp == other.comp
        )

    __hash__ = object.__hash__

    def __repr__(self):
        label = self.name or "FinCategory"
        return f"<{label}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"


def validate_category(c: FinCategory) -> Report:
    """Exhaustively check typing, identity and associativity laws."""
    r = Report(f"category {c.name or ''}".strip())
    objs = set(c.objects)
    bad = []

    def violation(kind, **detail):
        bad.append(dict(kind=kind, **detail))

    for m in c.morphisms:
        if c.src.get(m) not in objs or c.tgt.get(m) not in objs:
            violation("typing", morphism=m)
    for a in c.objects:
        i = c.ident.get(a)
        if i is None or i not in c.src or c.src[i] != a or c.tgt[i] != a:
            violation("identity-typing", object=a)
    for (g, f), h in c.comp.items():
        if f not in c.src or g not in c.src or c.tgt[f] != c.src[g]:
            violation("comp-not-composable", pair=(g, f))
        elif h not in c.src or c.src[h] != c.src[f] or c.tgt[h] != c.tgt[g]:
            violation("comp-typing", pair=(g, f), result=h)
    if not bad:
        for f in c.morphisms:
            for g in c.out_of(c.tgt[f]):
                if (g, f) not in c.comp:
                    violation("comp-missing", pair=(g, f))
    if not bad:
        for f in c.morphisms:
            a, b = c.src[f], c.tgt[f]
            if c.comp[(c.ident[b], f)] != f or c.comp[(f, c.ident[a])] != f:
                violation("identity-law", morphism=f)
        for f in c.morphisms:
            for g in c.out_of(c.tgt[f]):
                gf = c.comp[(g, f)]
                for h in c.out_of(c.tgt[g]):
                    if c.comp[(h, gf)] != c.comp[(c.comp[(h, g)], f)]:
                        violation("associativity", triple=(h, g, f))
                        if len(bad) > _VIOLATION_CAP:
                            break
    r.add("axioms", not bad, violations=len(bad))
    for v in bad[:_VIOLATION_CAP]:
        r.add(v["kind"], False, **{k: x for k, x in v.items() if k != "kind"})
    return r


# -- constructors ----------------------------------------------------------


def from_arrows(
    objects: Iterable,
    arrows: Mapping,
    composites: Mapping | None = None,
    name: str | None = None,
    check: bool | None = None,
) -> FinCategory:
    """Build a category from non-identity arrows plus a partial composition table.

    Identities are added as ``('id', a)``.  Pairs not listed in
    ``composites`` that involve an identity are filled in; any other missing
    composable pair is left for validation to report.
    """
    objects = list(objects)
    arrows = dict(arrows)
    ident = {a: ("id", a) for a in objects}
    all_arrows = dict(arrows)
    for a, i in ident.items():
        if i in arrows:
            raise CategoryError(f"arrow name {i!r} is reserved for identities")
        all_arrows[i] = (a, a)
    comp = {}
    for m, (a, b) in all_arrows.items():
        comp[(ident[b], m)] = m
        comp[(m, ident[a])] = m
    for (g, f), h in (composites or {}).items():
        comp[(g, f)] = h
    return FinCategory(objects, all_arrows, ident, comp, name=name, check=check)


def discrete(elements: Iterable, name: str | None = None) -> FinCategory:
    return poset_as_category(elements, (), name=name)


def poset_as_category(elements: Iterable, order_pairs: Iterable = (), name: str | None = None) -> FinCategory:
    """The poset generated by ``order_pairs`` (reflexive-transitive closure).

    The morphism ``a -> b`` is the tag ``(a, b)``.
    """
    elems = canon_sorted(set(elements))
    index = {x: i for i, x in enumerate(elems)}
    n = len(elems)
    reach = [[i == j for j in range(n)] for i in range(n)]
    for a, b in order_pairs:
        if a not in index or b not in index:
            raise NotAPoset(f"order pair mentions unknown element: {a!r} <= {b!r}")
        reach[index[a]][index[b]] = True
    for k in range(n):
        rk = reach[k]
        for i in range(n):
            if reach[i][k]:
                ri = reach[i]
                for j in range(n):
                    if rk[j]:
                        ri[j] = True
    for i in range(n):
        for j in range(i + 1, n):
            if reach[i][j] and reach[j][i]:
                raise NotAPoset(
                    f"antisymmetry fails: {elems[i]!r} and {elems[j]!r} are mutually related",
                    [dict(pair=(elems[i], elems[j]))],
                )
    le = [(elems[i], elems[j]) for i in range(n) for j in range(n) if reach[i][j]]
    arrows = {(a, b): (a, b) for a, b in le}
    ident = {a: (a, a) for a in elems}
    comp = {}
    for a, b in le:
        for c in elems:
            if reach[index[b]][index[c]]:
                comp[((b, c), (a, b))] = (a, c)
    P = FinCategory(elems, arrows, ident, comp, name=name)
    covers = []
    for a, b in le:
        if a != b and not any(c not in (a, b) and reach[index[a]][index[c]] and reach[index[c]][index[b]] for c in elems):
            covers.append((a, b))
    P._gens = canon_sorted(covers)
    return P


def product_category(cs: Sequence[FinCategory], flatten: bool = False, check: bool = False):
    """Product of categories with its projections.

    With ``flatten`` the factors must have tuple objects and morphisms, which
    are concatenated (so a product of full subcategories of powers of ``C`` is
    again a full subcategory of a power of ``C``).  Projections are only
    returned for unflattened products.
    """
    cs = list(cs)
    sizes = [len(c.morphisms) for c in cs]
    config.check_carrier("product category morphisms", math.prod(sizes))
    join = (lambda parts: tuple(itertools.chain.from_iterable(parts))) if flatten else tuple
    objs = [join(t) for t in itertools.product(*(c.objects.elements for c in cs))]
    arrows = {}
    for ms in itertools.product(*(c.morphisms.elements for c in cs)):
        arrows[join(ms)] = (
            join(tuple(c.src[m] for c, m in zip(cs, ms))),
            join(tuple(c.tgt[m] for c, m in zip(cs, ms))),
        )
    ident = {}
    for t in itertools.product(*(c.objects.elements for c in cs)):
        ident[join(t)] = join(tuple(c.ident[a] for c, a in zip(cs, t)))
    comp = {}
    for pairs in itertools.product(*(list(c.comp.items()) for c in cs)):
        g = join(tuple(p[0][0] for p in pairs))
        f = join(tuple(p[0][1] for p in pairs))
        comp[(g, f)] = join(tuple(p[1] for p in pairs))
    name = " x ".join(c.name or "?" for c in cs) if cs else "1"
    P = FinCategory(objs, arrows, ident, comp, name=name, check=check)
    gens = []
    for i, c in enumerate(cs):
        for g in c.generators():
            for rest in itertools.product(*(cs[k].objects.elements for k in range(len(cs)) if k != i)):
                ids = [cs[k].ident[x] for k, x in zip([k for k in range(len(cs)) if k != i], rest)]
                ids.insert(i, g)
                gens.append(join(tuple(ids)))
    P._gens = canon_sorted(gens)
    if flatten:
        return P, []
    projections = []
    for i, c in enumerate(cs):
        projections.append(
            Functor(
                P,
                c,
                {x: x[i] for x in P.objects},
                {m: m[i] for m in P.morphisms},
                check=False,
            )
        )
    return P, projections


ONE = product_category([])[0]
ONE.name = "1"


def opposite(c: FinCategory) -> FinCategory:
    """Same tags, source and target swapped; involutive on the nose."""
    arrows = {m: (c.tgt[m], c.src[m]) for m in c.morphisms}
    comp = {(f, g): h for (g, f), h in c.comp.items()}
    name = None
    if c.name:
        name = c.name[:-3] if c.name.endswith("^op") else c.name + "^op"
    op = FinCategory(c.objects, arrows, c.ident, comp, name=name, check=False)
    op._gens = c._gens
    return op


# -- functors --------------------------------------------------------------


class Functor:
    def __init__(self, dom: FinCategory, cod: FinCategory, obj: Mapping, mor: Mapping, name=None, check: bool | None = None):
        self.dom, self.cod = dom, cod
        self.obj = dict(obj)
        self.mor = dict(mor)
        self.name = name
        if check is None:
            check = config.current().validate
        if check:
            problems = functor_violations(self)
            if problems:
                raise FunctorError(f"invalid functor {name or ''}: {problems[0]}".strip())

    def __call__(self, x):
        return self.obj[x]

    def then(self, g: "Functor") -> "Functor":
        """Diagrammatic composite: first self, then g."""
        if self.cod is not g.dom and self.cod != g.dom:
            raise ShapeMismatch("functor composite: codomain/domain mismatch")
        return Functor(
            self.dom,
            g.cod,
            {x: g.obj[y] for x, y in self.obj.items()},
            {m: g.mor[n] for m, n in self.mor.items()},
            check=False,
        )

    def __eq__(self, other):
        return (
            isinstance(other, Functor)
            and self.dom == other.dom
            and self.cod == other.cod
            and self.obj == other.obj
            and self.mor == other.mor
        )

    __hash__ = object.__hash__

    def __repr__(self):
        return f"<Functor {self.name or ''} {self.dom!r} -> {self.cod!r}>"


def functor_violations(F: Functor) -> list:
    C, D = F.dom, F.cod
    out = []
    for x in C.objects:
        if F.obj.get(x) not in D.objects:
            out.append(f"object {show(x)} has no image in the codomain")
    if out:
        return out
    for m in C.morphisms:
        n = F.mor.get(m)
        if n is None or n not in D.src:
            out.append(f"morphism {show(m)} has no image")
        elif D.src[n] != F.obj[C.src[m]] or D.tgt[n] != F.obj[C.tgt[m]]:
            out.append(f"morphism {show(m)} image has wrong endpoints")
    if out:
        return out
    for x in C.objects:
        if F.mor[C.ident[x]] != D.ident[F.obj[x]]:
            out.append(f"identity at {show(x)} not preserved")
    for (g, f), h in C.comp.items():
        if D.comp[(F.mor[g], F.mor[f])] != F.mor[h]:
            out.append(f"composite {show(g)} . {show(f)} not preserved")
            break
    return out


def identity_functor(c: FinCategory) -> Functor:
    return Functor(c, c, {x: x for x in c.objects}, {m: m for m in c.morphisms}, check=False)


def constant_functor(dom: FinCategory, cod: FinCategory, x) -> Functor:
    return Functor(dom, cod, {a: x for a in dom.objects}, {m: cod.ident[x] for m in dom.morphisms}, check=False)


def point(c: FinCategory, x) -> Functor:
    """The functor ``1 -> C`` picking out ``x``."""
    return Functor(ONE, c, {(): x}, {(): c.ident[x]}, check=False)


def thin_functor(dom: FinCategory, cod: FinCategory, obj: Mapping, name=None) -> Functor:
    """Extend an object map to morphisms when the codomain is thin."""
    mor = {}
    for m in dom.morphisms:
        a, b = obj[dom.src[m]], obj[dom.tgt[m]]
        hs = cod.hom(a, b)
        if len(hs) != 1:
            raise FunctorError(
                f"{name or 'map'} is not monotone: {show(dom.src[m])} -> {show(dom.tgt[m])} "
                f"but no unique arrow {show(a)} -> {show(b)}"
            )
        mor[m] = hs[0]
    return Functor(dom, cod, obj, mor, name=name)


def tuple_functor(fs: Sequence[Functor], cod: FinCategory | None = None) -> Functor:
    """``<F1, ..., Fn>: A -> B1 x ... x Bn`` for functors with a common domain."""
    A = fs[0].dom
    if cod is None:
        cod = product_category([f.cod for f in fs])[0]
    return Functor(
        A,
        cod,
        {x: tuple(f.obj[x] for f in fs) for x in A.objects},
        {m: tuple(f.mor[m] for f in fs) for m in A.morphisms},
        check=False,
    )


class NatTrans:
    """A natural transformation ``source => target`` between parallel functors."""

    def __init__(self, source: Functor, target: Functor, components: Mapping, check: bool | None = None):
        self.source, self.target = source, target
        self.components = dict(components)
        if check is None:
            check = config.current().validate
        if check:
            problems = nat_violations(self)
            if problems:
                raise FunctorError(problems[0])

    def __getitem__(self, x):
        return self.components[x]

    @property
    def dom(self):
        return self.source.dom

    def __eq__(self, other):
        return (
            isinstance(other, NatTrans)
            and self.source == other.source
            and self.target == other.target
            and self.components == other.components
        )

    __hash__ = object.__hash__


def nat_violations(a: NatTrans) -> list:
    F, G = a.source, a.target
    if F.dom != G.dom or F.cod != G.cod:
        return ["natural transformation between non-parallel functors"]
    C, D = F.dom, F.cod
    out = []
    for x in C.objects:
        m = a.components.get(x)
        if m is None or D.src.get(m) != F.obj[x] or D.tgt.get(m) != G.obj[x]:
            out.append(f"component at {show(x)} has wrong type")
    if out:
        return out
    for f in C.morphisms:
        x, y = C.src[f], C.tgt[f]
        if D.comp[(a.components[y], F.mor[f])] != D.comp[(G.mor[f], a.components[x])]:
            out.append(f"naturality square at {show(f)} does not commute")
    return out


def identity_nat(F: Functor) -> NatTrans:
    return NatTrans(F, F, {x: F.cod.ident[F.obj[x]] for x in F.dom.objects}, check=False)


def vertical(beta: NatTrans, alpha: NatTrans) -> NatTrans:
    """``beta . alpha`` for ``alpha: F => G`` and ``beta: G => H``."""
    if alpha.target != beta.source:
        raise ShapeMismatch("vertical composite of non-matching transformations")
    D = alpha.source.cod
    return NatTrans(
        alpha.source,
        beta.target,
        {x: D.comp[(beta.components[x], alpha.components[x])] for x in alpha.dom.objects},
        check=False,
    )


def find_nat_iso(F: Functor, G: Functor) -> NatTrans | None:
    """Search for a natural isomorphism ``F => G`` (first in canonical order)."""
    if F.dom != G.dom or F.cod != G.cod:
        raise ShapeMismatch("find_nat_iso on non-parallel functors")
    C, D = F.dom, F.cod
    objs = list(C.objects)
    cands = {}
    for x in objs:
        a, b = F.obj[x], G.obj[x]
        isos = [
            m
            for m in D.hom(a, b)
            if any(D.comp[(n, m)] == D.ident[a] and D.comp[(m, n)] == D.ident[b] for n in D.hom(b, a))
        ]
        if not isos:
            return None
        cands[x] = isos
    chosen: dict = {}

    def consistent(x):
        for f in C.out_of(x):
            y = C.tgt[f]
            if y in chosen and D.comp[(chosen[y], F.mor[f])] != D.comp[(G.mor[f], chosen[x])]:
                return False
        for f in C.into(x):
            w = C.src[f]
            if w in chosen and D.comp[(chosen[x], F.mor[f])] != D.comp[(G.mor[f], chosen[w])]:
                return False
        return True

    def go(i):
        if i == len(objs):
            return True
        x = objs[i]
        for m in cands[x]:
            chosen[x] = m
            if consistent(x) and go(i + 1):
                return True
            del chosen[x]
        return False

    if go(0):
        return NatTrans(F, G, chosen, check=False)
    return None


# -- subcategories and operations -------------------------------------------


class FullSubcatInclusion:
    """The full subcategory of ``ambient`` on ``objects`` with its inclusion."""

    def __init__(self, ambient: FinCategory, objects: Iterable, name=None):
        objs = FinSet.unique(objects)
        for x in objs:
            if x not in ambient.objects:
                raise DomainMismatch(f"{show(x)} is not an object of {ambient!r}")
        self.ambient = ambient
        self.objects = objs
        chosen = set(objs)
        if len(objs) == len(ambient.objects):
            sub = ambient
        else:
            arrows = {
                m: (ambient.src[m], ambient.tgt[m])
                for m in ambient.morphisms
                if ambient.src[m] in chosen and ambient.tgt[m] in chosen
            }
            comp = {(g, f): h for (g, f), h in ambient.comp.items() if g in arrows and f in arrows}
            sub = FinCategory(objs, arrows, {x: ambient.ident[x] for x in objs}, comp, name=name, check=False)
        self.sub = sub
        self.inclusion = Functor(
            sub, ambient, {x: x for x in sub.objects}, {m: m for m in sub.morphisms}, check=False
        )

    @property
    def is_identity(self) -> bool:
        return len(self.objects) == len(self.ambient.objects)

    def __contains__(self, x):
        return x in self.objects

    def __eq__(self, other):
        return (
            isinstance(other, FullSubcatInclusion)
            and self.ambient == other.ambient
            and self.objects == other.objects
        )

    __hash__ = object.__hash__


def check_factors_through(g: Functor, incl: FullSubcatInclusion) -> Functor | None:
    """The unique lift of ``g`` through a full inclusion, or ``None``."""
    if g.cod != incl.ambient:
        raise ShapeMismatch("check_factors_through: codomain is not the ambient category")
    if not all(y in incl.objects for y in g.obj.values()):
        return None
    return Functor(g.dom, incl.sub, g.obj, g.mor, check=False)


class PartialOp:
    """An n-ary partial operation: a functor from a full subcategory of ``C^n`` to ``C``."""

    def __init__(self, base: FinCategory, arity: int, domain: FullSubcatInclusion, action: Functor, name=None):
        if domain.ambient != base.power(arity):
            raise DomainMismatch("partial operation domain must sit inside C^n")
        if action.dom != domain.sub or action.cod != base:
            raise DomainMismatch("partial operation action must go from its domain to C")
        self.base, self.arity = base, arity
        self.domain, self.action = domain, action
        self.name = name

    @property
    def is_total(self) -> bool:
        return self.domain.is_identity

    def __call__(self, *xs):
        return self.action.obj[tuple(xs)]

    def defined_at(self, *xs) -> bool:
        return tuple(xs) in self.domain.objects

    def as_span(self) -> "SpanOp":
        return SpanOp(self.base, self.arity, self.domain.sub, self.domain.inclusion, self.action, name=self.name)

    def __eq__(self, other):
        return isinstance(other, PartialOp) and strong_equal(self, other)

    __hash__ = object.__hash__

    def __repr__(self):
        kind = "total" if self.is_total else f"partial[{len(self.domain.objects)}]"
        return f"<PartialOp {self.name or ''} {self.arity}-ary {kind}>"


def partial_op(base: FinCategory, arity: int, obj_map: Mapping, mor_map: Mapping | None = None, name=None) -> PartialOp:
    """Partial operation from an object table; arrows inferred when ``base`` is thin."""
    amb = base.power(arity)
    obj_map = {(tuple(k) if isinstance(k, (tuple, list)) else (k,)): v for k, v in obj_map.items()}
    dom = FullSubcatInclusion(amb, obj_map.keys())
    if mor_map is None:
        action = thin_functor(dom.sub, base, obj_map, name=name)
    else:
        action = Functor(dom.sub, base, obj_map, mor_map, name=name)
    return PartialOp(base, arity, dom, action, name=name)


def total_op(base: FinCategory, arity: int, on_objects: Callable, on_morphisms: Callable | None = None, name=None) -> PartialOp:
    amb = base.power(arity)
    obj = {x: on_objects(*x) for x in amb.objects}
    mor = None
    if on_morphisms is not None:
        mor = {m: on_morphisms(*m) for m in amb.morphisms}
    return partial_op(base, arity, obj, mor, name=name)


def identity_op(base: FinCategory) -> PartialOp:
    amb = base.power(1)
    dom = FullSubcatInclusion(amb, amb.objects)
    action = Functor(dom.sub, base, {x: x[0] for x in amb.objects}, {m: m[0] for m in amb.morphisms}, check=False)
    return PartialOp(base, 1, dom, action, name="1")


def empty_op(base: FinCategory, arity: int, name="0") -> PartialOp:
    dom = FullSubcatInclusion(base.power(arity), ())
    action = Functor(dom.sub, base, {}, {}, check=False)
    return PartialOp(base, arity, dom, action, name=name)


def constant_op(base: FinCategory, x, name=None) -> PartialOp:
    """The nullary operation picking out ``x``."""
    return partial_op(base, 0, {(): x}, {(): base.ident[x]}, name=name or show(x))


def restrict_op(op: PartialOp, objects: Iterable, name=None) -> PartialOp:
    dom = FullSubcatInclusion(op.domain.ambient, objects)
    for x in dom.objects:
        if x not in op.domain.objects:
            raise DomainMismatch(f"{show(x)} is outside the domain being restricted")
    action = Functor(
        dom.sub,
        op.base,
        {x: op.action.obj[x] for x in dom.sub.objects},
        {m: op.action.mor[m] for m in dom.sub.morphisms},
        check=False,
    )
    return PartialOp(op.base, op.arity, dom, action, name=name or op.name)


def strong_equal(a: PartialOp, b: PartialOp) -> bool:
    """Same domain and identical action."""
    return (
        a.base == b.base
        and a.arity == b.arity
        and a.domain.objects == b.domain.objects
        and a.action.obj == b.action.obj
        and a.action.mor == b.action.mor
    )


def weak_equal(a: PartialOp, b: PartialOp) -> bool:
    """Agreement on the intersection of the domains."""
    if a.base != b.base or a.arity != b.arity:
        return False
    common = set(a.domain.objects) & set(b.domain.objects)
    if any(a.action.obj[x] != b.action.obj[x] for x in common):
        return False
    for m in a.domain.sub.morphisms:
        if m in b.action.mor and a.action.mor[m] != b.action.mor[m]:
            return False
    return True


class SpanOp:
    """A span ``C^n <- apex -> C``."""

    def __init__(self, base: FinCategory, arity: int, apex: FinCategory, left: Functor, right: Functor, name=None):
        if left.dom != apex or right.dom != apex:
            raise DomainMismatch("span legs must share the apex")
        if left.cod != base.power(arity) or right.cod != base:
            raise DomainMismatch("span legs must land in C^n and C")
        self.base, self.arity, self.apex = base, arity, apex
        self.left, self.right = left, right
        self.name = name

    def __repr__(self):
        return f"<SpanOp {self.name or ''} {self.arity}-ary apex={self.apex!r}>"


def identity_span(base: FinCategory) -> SpanOp:
    return identity_op(base).as_span()


# -- comma objects ---------------------------------------------------------


@dataclass
class Comma:
    category: FinCategory
    left: Functor  # projection to dom(f)
    right: Functor  # projection to dom(g)
    cell: NatTrans  # f . left => g . right


def comma_object(f: Functor, g: Functor, name=None) -> Comma:
    """The comma category ``f | g``: objects ``(d, e, phi: f d -> g e)``.

    A morphism ``(d,e,phi) -> (d',e',phi')`` is tagged
    ``(source, target, u, v)`` with ``g(v) . phi == phi' . f(u)``.
    """
    if f.cod != g.cod:
        raise ShapeMismatch("comma_object: functors must share a codomain")
    C, D, E = f.cod, f.dom, g.dom
    objs = []
    for d in D.objects:
        for e in E.objects:
            for phi in C.hom(f.obj[d], g.obj[e]):
                objs.append((d, e, phi))
    config.check_carrier("comma objects", len(objs))
    arrows = {}
    by_de: dict = {}
    for X in objs:
        by_de.setdefault((X[0], X[1]), []).append(X)
    for X in objs:
        d, e, phi = X
        for u in D.out_of(d):
            for v in E.out_of(e):
                lhs = C.comp[(g.mor[v], phi)]
                for Y in by_de.get((D.tgt[u], E.tgt[v]), ()):
                    if C.comp[(Y[2], f.mor[u])] == lhs:
                        arrows[(X, Y, u, v)] = (X, Y)
    config.check_carrier("comma morphisms", len(arrows))
    ident = {X: (X, X, D.ident[X[0]], E.ident[X[1]]) for X in objs}
    by_src: dict = {}
    for m in arrows:
        by_src.setdefault(m[0], []).append(m)
    comp = {}
    for m1 in arrows:
        X, Y, u, v = m1
        for m2 in by_src.get(Y, ()):
            _, Z, u2, v2 = m2
            comp[(m2, m1)] = (X, Z, D.comp[(u2, u)], E.comp[(v2, v)])
    cat = FinCategory(objs, arrows, ident, comp, name=name)
    P = Functor(cat, D, {X: X[0] for X in objs}, {m: m[2] for m in arrows}, check=False)
    Q = Functor(cat, E, {X: X[1] for X in objs}, {m: m[3] for m in arrows}, check=False)
    cell = NatTrans(P.then(f), Q.then(g), {X: X[2] for X in objs}, check=False)
    return Comma(cat, P, Q, cell)


def find_category_iso(a: FinCategory, b: FinCategory) -> Functor | None:
    """Search for an isomorphism of categories ``a -> b`` (small instances)."""
    if len(a.objects) != len(b.objects) or len(a.morphisms) != len(b.morphisms):
        return None
    ao, bo = list(a.objects), list(b.objects)

    def sig(c, x):
        return (len(c.hom(x, x)), len(c.out_of(x)), len(c.into(x)))

    for perm in itertools.permutations(bo):
        if any(sig(a, x) != sig(b, y) for x, y in zip(ao, perm)):
            continue
        om = dict(zip(ao, perm))
        found = _match_morphisms(a, b, om)
        if found is not None:
            return Functor(a, b, om, found, check=False)
    return None


def _match_morphisms(a, b, om):
    pairs = sorted({(a.src[m], a.tgt[m]) for m in a.morphisms}, key=canon)
    for x, y in pairs:
        if len(a.hom(x, y)) != len(b.hom(om[x], om[y])):
            return None
    mor: dict = {}
    for x in a.objects:
        mor[a.ident[x]] = b.ident[om[x]]
    free = [m for m in a.morphisms if m not in mor]

    def ok():
        for (g, f), h in a.comp.items():
            if g in mor and f in mor and h in mor and b.comp[(mor[g], mor[f])] != mor[h]:
                return False
        return True

    used: set = set(mor.values())

    def go(i):
        if i == len(free):
            return True
        m = free[i]
        for n in b.hom(om[a.src[m]], om[a.tgt[m]]):
            if n in used:
                continue
            mor[m] = n
            used.add(n)
            if ok() and go(i + 1):
                return True
            used.discard(n)
            del mor[m]
        return False

    return dict(mor) if go(0) else None
