"""Seeded random instances: small categories, profunctors, copresheaves and operations."""

from __future__ import annotations

import itertools
import random

from .fincat import FinCategory, Functor, PartialOp, partial_op, poset_as_category
from .prof import Profunctor, make_profunctor


def random_poset(rng: random.Random, n: int, p: float = 0.4, name=None) -> FinCategory:
    elems = list(range(n))
    pairs = [(a, b) for a in elems for b in elems if a < b and rng.random() < p]
    return poset_as_category(elems, pairs, name=name or f"P{n}")


def chain(n: int, name=None) -> FinCategory:
    return poset_as_category(range(n), [(i, i + 1) for i in range(n - 1)], name=name or f"chain{n}")


def random_concrete_category(rng: random.Random, max_objects: int = 4, max_morphisms: int = 20, tries: int = 50) -> FinCategory:
    """A category of functions between small sets, closed under composition.

    Morphisms are tagged ``(src, tgt, images)``.
    """
    for _ in range(tries):
        n = rng.randint(1, max_objects)
        size = {o: rng.randint(1, 2) for o in range(n)}
        gens = set()
        for _ in range(rng.randint(0, 4)):
            a, b = rng.randrange(n), rng.randrange(n)
            gens.add((a, b, tuple(rng.randrange(size[b]) for _ in range(size[a]))))
        ident = {o: (o, o, tuple(range(size[o]))) for o in range(n)}
        mors = set(gens) | set(ident.values())
        frontier = list(mors)
        ok = True
        while frontier and ok:
            new = []
            for f in list(mors):
                for g in list(mors):
                    if f[1] == g[0]:
                        h = (f[0], g[1], tuple(g[2][i] for i in f[2]))
                        if h not in mors:
                            mors.add(h)
                            new.append(h)
            frontier = new
            if len(mors) > max_morphisms:
                ok = False
        if not ok:
            continue
        arrows = {m: (m[0], m[1]) for m in mors}
        comp = {}
        for f in mors:
            for g in mors:
                if f[1] == g[0]:
                    comp[(g, f)] = (f[0], g[1], tuple(g[2][i] for i in f[2]))
        return FinCategory(range(n), arrows, ident, comp, name=f"K{n}")
    return poset_as_category([0], [], name="K1")


def random_monoid_category(rng: random.Random, size: int = 3) -> FinCategory:
    """A commutative monoid ``Z/n`` or a truncated ``N`` as a one-object category."""
    if rng.random() < 0.5:
        elems = list(range(size))
        op = lambda a, b: (a + b) % size
    else:
        elems = list(range(size))
        op = lambda a, b: min(a + b, size - 1)
    arrows = {("m", e): ("*", "*") for e in elems}
    comp = {(("m", a), ("m", b)): ("m", op(a, b)) for a in elems for b in elems}
    return FinCategory(["*"], arrows, {"*": ("m", 0)}, comp, name="M")


def random_category(rng: random.Random) -> FinCategory:
    k = rng.random()
    if k < 0.45:
        return random_poset(rng, rng.randint(1, 4))
    if k < 0.85:
        return random_concrete_category(rng)
    return random_monoid_category(rng, rng.randint(2, 3))


def random_profunctor(rng: random.Random, C: FinCategory, D: FinCategory, max_summands: int = 3) -> Profunctor:
    """Sum of representables ``(d, c) |-> D(d, d0) x C(c0, c)``."""
    k = rng.randint(0, max_summands)
    reps = [(rng.choice(D.objects.elements), rng.choice(C.objects.elements)) for _ in range(k)]

    def value(d, c):
        return [(i, (u, v)) for i, (d0, c0) in enumerate(reps) for u in D.hom(d, d0) for v in C.hom(c0, c)]

    return make_profunctor(
        C,
        D,
        value,
        lambda b, c, x: (x[0], (D.comp[(x[1][0], b)], x[1][1])),
        lambda g, d, x: (x[0], (x[1][0], C.comp[(g, x[1][1])])),
        name="rand",
        check=False,
    )


def random_cosieve(rng: random.Random, C: FinCategory) -> frozenset:
    """An upward-closed set of objects, generated from random seeds."""
    seeds = [c for c in C.objects if rng.random() < 0.35]
    out = set()
    todo = list(seeds)
    while todo:
        c = todo.pop()
        if c in out:
            continue
        out.add(c)
        todo.extend(C.tgt[m] for m in C.out_of(c))
    return frozenset(out)


def random_copresheaf(rng: random.Random, C: FinCategory, max_summands: int = 2) -> Profunctor:
    """Sum of representables and cosieve indicators."""
    from .day import coproduct, indicator, representable, empty_copresheaf

    parts = []
    for _ in range(rng.randint(0, max_summands)):
        if rng.random() < 0.5:
            parts.append(representable(C, rng.choice(C.objects.elements)))
        else:
            parts.append(indicator(C, random_cosieve(rng, C)))
    if not parts:
        return empty_copresheaf(C)
    if len(parts) == 1:
        return parts[0]
    return coproduct(parts)


def random_proposition(rng: random.Random, C: FinCategory) -> Profunctor:
    from .day import indicator

    return indicator(C, random_cosieve(rng, C))


def _monotone_map(rng, D: FinCategory, C: FinCategory, tries: int = 30):
    """A random functor from a thin ``D`` into a thin ``C``, on objects."""
    objs = list(D.objects)
    # linear extension of D
    order, seen = [], set()

    def visit(x):
        if x in seen:
            return
        seen.add(x)
        for m in D.into(x):
            visit(D.src[m])
        order.append(x)

    for x in objs:
        visit(x)
    for _ in range(tries):
        f = {}
        ok = True
        for x in order:
            lower = [f[D.src[m]] for m in D.into(x) if D.src[m] != x]
            cands = [c for c in C.objects if all(C.hom(l, c) for l in lower)]
            if not cands:
                ok = False
                break
            f[x] = rng.choice(cands)
        if ok:
            return f
    c = rng.choice(C.objects.elements)
    return {x: c for x in objs}


def random_partial_op(rng: random.Random, C: FinCategory, n: int, density: float = 0.6, name=None) -> PartialOp:
    """A monotone partial operation on a thin category with a random domain."""
    Cn = C.power(n)
    if density >= 1.0:
        dom = list(Cn.objects)
    else:
        dom = [x for x in Cn.objects if rng.random() < density]
    from .fincat import FullSubcatInclusion

    sub = FullSubcatInclusion(Cn, dom).sub
    f = _monotone_map(rng, sub, C)
    return partial_op(C, n, f, name=name)


def random_total_op(rng: random.Random, C: FinCategory, n: int, name=None) -> PartialOp:
    return random_partial_op(rng, C, n, 1.0, name=name)
