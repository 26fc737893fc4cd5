"""Profunctors between finite categories.

A profunctor ``P: C -|-> D`` is a functor ``D^op x C -> Set``, stored as a
table of value sets keyed by ``(d, c)`` together with its two actions:

* ``left[(b, c)]`` for ``b: d' -> d`` in ``D`` maps ``P(d, c) -> P(d', c)``;
* ``right[(g, d)]`` for ``g: c -> c'`` in ``C`` maps ``P(d, c) -> P(d, c')``.

Copresheaves are profunctors into the terminal category, keyed ``((), c)``.

Composites are coends.  An element of ``(Q . P)(e, c)`` is the least member,
in canonical order, of its class of tagged triples ``(d, (q, p))``; the
underlying carriers and quotients are kept in a :class:`CoendTrace`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import config, solve
from .errors import ShapeMismatch, UnknownElement
from .finbase import FinSet, QuotientResult, canon, quotient_by_generated
from .fincat import ONE, FinCategory, Functor, NatTrans, identity_functor
from .report import Report, show


@dataclass
class CoendTrace:
    """Carriers and quotients behind each value set of a composite."""

    parts: tuple  # (outer, inner) profunctors
    cells: dict = field(default_factory=dict)  # key -> QuotientResult

    def cls(self, key, element):
        try:
            return self.cells[key].project.map[element]
        except KeyError:
            raise UnknownElement(element, f"coend carrier at {show(key)}") from None


class Profunctor:
    def __init__(self, src: FinCategory, dst: FinCategory, values, left, right, name=None, check=None, trace=None):
        self.src, self.dst = src, dst
        self.values = {k: v if isinstance(v, FinSet) else FinSet(v) for k, v in values.items()}
        self.left = left
        self.right = right
        self.name = name
        self.trace: CoendTrace | None = trace
        if check is None:
            check = config.current().validate
        if check:
            problems = profunctor_violations(self, limit=1)
            if problems:
                raise ShapeMismatch(f"invalid profunctor {name or ''}: {problems[0]}")

    def value(self, d, c) -> FinSet:
        return self.values[(d, c)]

    def act_left(self, b, c, x):
        return self.left[(b, c)][x]

    def act_right(self, g, d, x):
        return self.right[(g, d)][x]

    def keys(self):
        return self.values.keys()

    def size(self) -> int:
        return sum(len(v) for v in self.values.values())

    def cls(self, key, element):
        """Canonical representative of a carrier element of a composite."""
        if self.trace is None:
            raise ShapeMismatch("cls() needs a composite profunctor")
        return self.trace.cls(key, element)

    def is_copresheaf(self) -> bool:
        return self.dst == ONE

    def at(self, c) -> FinSet:
        """Copresheaf value at ``c``."""
        return self.values[((), c)]

    def support(self) -> frozenset:
        """Objects with a nonempty value (copresheaves only)."""
        return frozenset(k[1] for k, v in self.values.items() if len(v))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Profunctor)
            and self.src == other.src
            and self.dst == other.dst
            and self.values == other.values
            and self.left == other.left
            and self.right == other.right
        )

    __hash__ = object.__hash__

    def __repr__(self):
        return f"<Profunctor {self.name or ''} {self.src!r} -|-> {self.dst!r} size={self.size()}>"


def make_profunctor(src, dst, value_fn, left_fn, right_fn, name=None, check=None) -> Profunctor:
    """Build from callables ``value_fn(d, c)``, ``left_fn(b, c, x)``, ``right_fn(g, d, x)``."""
    values = {(d, c): FinSet(value_fn(d, c)) for d in dst.objects for c in src.objects}
    left = {}
    for b in dst.morphisms:
        d1, d0 = dst.src[b], dst.tgt[b]
        for c in src.objects:
            left[(b, c)] = {x: left_fn(b, c, x) for x in values[(d0, c)]}
    right = {}
    for g in src.morphisms:
        c0 = src.src[g]
        for d in dst.objects:
            right[(g, d)] = {x: right_fn(g, d, x) for x in values[(d, c0)]}
    return Profunctor(src, dst, values, left, right, name=name, check=check)


def copresheaf(C: FinCategory, values, action, name=None, check=None) -> Profunctor:
    """A functor ``C -> Set`` from ``values[c]`` and ``action(g, x)``."""
    return make_profunctor(
        C,
        ONE,
        lambda d, c: values[c],
        lambda b, c, x: x,
        lambda g, d, x: action(g, x),
        name=name,
        check=check,
    )


def profunctor_violations(P: Profunctor, limit=None) -> list:
    C, D = P.src, P.dst
    out = []

    def bad(msg):
        out.append(msg)
        return limit is not None and len(out) >= limit

    for d in D.objects:
        for c in C.objects:
            if (d, c) not in P.values:
                if bad(f"missing value at {show((d, c))}"):
                    return out
    if out:
        return out
    for b in D.morphisms:
        d1, d0 = D.src[b], D.tgt[b]
        for c in C.objects:
            f = P.left.get((b, c))
            tgt = P.values[(d1, c)]
            if f is None or set(f) != set(P.values[(d0, c)]) or any(y not in tgt for y in f.values()):
                if bad(f"left action of {show(b)} at {show(c)} is not a function of the right type"):
                    return out
    for g in C.morphisms:
        c0, c1 = C.src[g], C.tgt[g]
        for d in D.objects:
            f = P.right.get((g, d))
            tgt = P.values[(d, c1)]
            if f is None or set(f) != set(P.values[(d, c0)]) or any(y not in tgt for y in f.values()):
                if bad(f"right action of {show(g)} at {show(d)} is not a function of the right type"):
                    return out
    if out:
        return out
    for d in D.objects:
        for c in C.objects:
            li, ri = P.left[(D.ident[d], c)], P.right[(C.ident[c], d)]
            if any(li[x] != x or ri[x] != x for x in P.values[(d, c)]):
                if bad(f"identity not preserved at {show((d, c))}"):
                    return out
    for (b2, b1), b in D.comp.items():
        for c in C.objects:
            f2, f1, f = P.left[(b2, c)], P.left[(b1, c)], P.left[(b, c)]
            if any(f1[f2[x]] != f[x] for x in f2):
                if bad(f"left action not functorial at {show((b2, b1))}"):
                    return out
    for (g2, g1), g in C.comp.items():
        for d in D.objects:
            f2, f1, f = P.right[(g2, d)], P.right[(g1, d)], P.right[(g, d)]
            if any(f2[f1[x]] != f[x] for x in f1):
                if bad(f"right action not functorial at {show((g2, g1))}"):
                    return out
    for b in D.generators():
        d1, d0 = D.src[b], D.tgt[b]
        for g in C.generators():
            c0, c1 = C.src[g], C.tgt[g]
            for x in P.values[(d0, c0)]:
                if P.left[(b, c1)][P.right[(g, d0)][x]] != P.right[(g, d1)][P.left[(b, c0)][x]]:
                    if bad(f"actions do not commute at {show((b, g))}"):
                        return out
    return out


def validate_profunctor(P: Profunctor) -> Report:
    r = Report(f"profunctor {P.name or ''}".strip())
    problems = profunctor_violations(P)
    r.add("functoriality", not problems, violations=len(problems))
    for p in problems[:25]:
        r.add("violation", False, message=p)
    return r


# -- hom profunctors -------------------------------------------------------


def hom_between(G: Functor, F: Functor, name=None) -> Profunctor:
    """``(e, c) |-> D(G e, F c)`` for ``F: C -> D`` and ``G: E -> D``."""
    if G.cod != F.cod:
        raise ShapeMismatch("hom_between: functors must share a codomain")
    D = F.cod
    return make_profunctor(
        F.dom,
        G.dom,
        lambda e, c: D.hom(G.obj[e], F.obj[c]),
        lambda b, c, u: D.comp[(u, G.mor[b])],
        lambda g, e, u: D.comp[(F.mor[g], u)],
        name=name,
        check=False,
    )


def hom_covariant(F: Functor, name=None) -> Profunctor:
    """``C -|-> D``, ``(d, c) |-> D(d, F c)``."""
    return hom_between(identity_functor(F.cod), F, name=name)


def hom_contravariant(F: Functor, name=None) -> Profunctor:
    """``D -|-> C``, ``(c, d) |-> D(F c, d)``."""
    return hom_between(F, identity_functor(F.cod), name=name)


def identity_prof(C: FinCategory) -> Profunctor:
    return hom_covariant(identity_functor(C), name=f"id[{C.name or ''}]")


# -- composition -----------------------------------------------------------


def compose(G: Profunctor, F: Profunctor, name=None) -> Profunctor:
    """``G . F`` for ``F: C -|-> D`` and ``G: D -|-> E`` via the coend over ``D``."""
    if G.src != F.dst:
        raise ShapeMismatch("compose: middle categories differ")
    C, D, E = F.src, F.dst, G.dst
    trace = CoendTrace((G, F))
    values = {}
    gens = D.generators()
    for e in E.objects:
        for c in C.objects:
            size = sum(len(G.values[(e, d)]) * len(F.values[(d, c)]) for d in D.objects)
            config.check_carrier("coend carrier", size)
            carrier = FinSet(
                (d, (g, f))
                for d in D.objects
                for g in G.values[(e, d)]
                for f in F.values[(d, c)]
            )
            pairs = []
            for h in gens:
                d0, d1 = D.src[h], D.tgt[h]
                gr = G.right[(h, e)]
                fl = F.left[(h, c)]
                for g in G.values[(e, d0)]:
                    g1 = gr[g]
                    for f in F.values[(d1, c)]:
                        pairs.append(((d1, (g1, f)), (d0, (g, fl[f]))))
            q = quotient_by_generated(carrier, pairs)
            trace.cells[(e, c)] = q
            values[(e, c)] = q.reps
    debug = config.current().debug
    left = {}
    for b in E.morphisms:
        e1, e0 = E.src[b], E.tgt[b]
        for c in C.objects:
            proj = trace.cells[(e1, c)].project.map
            m = {}
            for r in values[(e0, c)]:
                d, (g, f) = r
                m[r] = proj[(d, (G.left[(b, d)][g], f))]
            if debug:
                for members in trace.cells[(e0, c)].classes:
                    for d, (g, f) in members:
                        assert proj[(d, (G.left[(b, d)][g], f))] == m[members[0]], "left action not well defined"
            left[(b, c)] = m
    right = {}
    for k in C.morphisms:
        c0, c1 = C.src[k], C.tgt[k]
        for e in E.objects:
            proj = trace.cells[(e, c1)].project.map
            m = {}
            for r in values[(e, c0)]:
                d, (g, f) = r
                m[r] = proj[(d, (g, F.right[(k, d)][f]))]
            if debug:
                for members in trace.cells[(e, c0)].classes:
                    for d, (g, f) in members:
                        assert proj[(d, (g, F.right[(k, d)][f]))] == m[members[0]], "right action not well defined"
            right[(k, e)] = m
    return Profunctor(C, E, values, left, right, name=name, check=debug, trace=trace)


def compose_many(*ps: Profunctor) -> Profunctor:
    """``compose_many(h, g, f) == compose(h, compose(g, f))``."""
    out = ps[-1]
    for p in reversed(ps[:-1]):
        out = compose(p, out)
    return out


# -- 2-cells ---------------------------------------------------------------


class ProfCell:
    """A natural transformation between parallel profunctors."""

    def __init__(self, source: Profunctor, target: Profunctor, components, name=None, check=None):
        if source.src != target.src or source.dst != target.dst:
            raise ShapeMismatch("cell between non-parallel profunctors")
        self.source, self.target = source, target
        self.components = components
        self.name = name
        if check is None:
            check = config.current().validate
        if check:
            problems = cell_violations(self, limit=1)
            if problems:
                raise ShapeMismatch(f"invalid cell {name or ''}: {problems[0]}")

    def __call__(self, key, x):
        return self.components[key][x]

    def __eq__(self, other):
        return (
            isinstance(other, ProfCell)
            and self.source == other.source
            and self.target == other.target
            and self.components == other.components
        )

    __hash__ = object.__hash__

    def table(self) -> dict:
        return {k: dict(v) for k, v in self.components.items() if v}

    def __repr__(self):
        return f"<ProfCell {self.name or ''}>"


def cell_violations(a: ProfCell, limit=None) -> list:
    S, T = a.source, a.target
    C, D = S.src, S.dst
    out = []
    for k, xs in S.values.items():
        comp = a.components.get(k)
        if comp is None or set(comp) != set(xs) or any(y not in T.values[k] for y in comp.values()):
            out.append(f"component at {show(k)} has the wrong type")
            if limit and len(out) >= limit:
                return out
    if out:
        return out
    for b in D.generators():
        d1, d0 = D.src[b], D.tgt[b]
        for c in C.objects:
            s, t = S.left[(b, c)], T.left[(b, c)]
            a0, a1 = a.components[(d0, c)], a.components[(d1, c)]
            if any(a1[s[x]] != t[a0[x]] for x in s):
                out.append(f"not natural at {show(b)}, {show(c)}")
                if limit and len(out) >= limit:
                    return out
    for g in C.generators():
        c0, c1 = C.src[g], C.tgt[g]
        for d in D.objects:
            s, t = S.right[(g, d)], T.right[(g, d)]
            a0, a1 = a.components[(d, c0)], a.components[(d, c1)]
            if any(a1[s[x]] != t[a0[x]] for x in s):
                out.append(f"not natural at {show(g)}, {show(d)}")
                if limit and len(out) >= limit:
                    return out
    return out


def identity_cell(P: Profunctor) -> ProfCell:
    return ProfCell(P, P, {k: {x: x for x in v} for k, v in P.values.items()}, check=False)


def vertical_compose(b: ProfCell, a: ProfCell) -> ProfCell:
    """``b . a`` for ``a: P => Q`` and ``b: Q => R``."""
    if a.target != b.source:
        raise ShapeMismatch("vertical_compose: cells do not meet")
    comps = {k: {x: b.components[k][y] for x, y in m.items()} for k, m in a.components.items()}
    return ProfCell(a.source, b.target, comps, check=False)


def is_iso(a: ProfCell) -> bool:
    for k, m in a.components.items():
        if len(a.source.values[k]) != len(a.target.values[k]):
            return False
        if len(set(m.values())) != len(m):
            return False
    return True


def non_bijective_components(a: ProfCell) -> list:
    out = []
    for k in a.source.values:
        m = a.components[k]
        if len(set(m.values())) != len(m) or len(m) != len(a.target.values[k]):
            out.append(k)
    return out


def inverse(a: ProfCell) -> ProfCell:
    if not is_iso(a):
        raise ShapeMismatch("inverse of a non-invertible cell")
    comps = {k: {y: x for x, y in m.items()} for k, m in a.components.items()}
    return ProfCell(a.target, a.source, comps, check=False)


def whisker_left(G: Profunctor, a: ProfCell, source=None, target=None) -> ProfCell:
    """``G . a : G . P => G . Q`` for ``a: P => Q``."""
    source = source or compose(G, a.source)
    target = target or compose(G, a.target)
    comps = {}
    for k, reps in source.values.items():
        comps[k] = {r: target.cls(k, (r[0], (r[1][0], a.components[(r[0], k[1])][r[1][1]]))) for r in reps}
    return ProfCell(source, target, comps, check=False)


def whisker_right(b: ProfCell, F: Profunctor, source=None, target=None) -> ProfCell:
    """``b . F : P . F => Q . F`` for ``b: P => Q``."""
    source = source or compose(b.source, F)
    target = target or compose(b.target, F)
    comps = {}
    for k, reps in source.values.items():
        comps[k] = {r: target.cls(k, (r[0], (b.components[(k[0], r[0])][r[1][0]], r[1][1]))) for r in reps}
    return ProfCell(source, target, comps, check=False)


def horizontal_compose(b: ProfCell, a: ProfCell, source=None, target=None) -> ProfCell:
    """``b * a : P' . P => Q' . Q`` for ``a: P => Q`` and ``b: P' => Q'``."""
    source = source or compose(b.source, a.source)
    target = target or compose(b.target, a.target)
    comps = {}
    for k, reps in source.values.items():
        e, c = k
        comps[k] = {
            r: target.cls(k, (r[0], (b.components[(e, r[0])][r[1][0]], a.components[(r[0], c)][r[1][1]])))
            for r in reps
        }
    return ProfCell(source, target, comps, check=False)


def product_cell(cells, source: Profunctor, target: Profunctor) -> ProfCell:
    """Componentwise product of copresheaf cells, for tuple-valued sources."""
    comps = {}
    for k, xs in source.values.items():
        comps[k] = {x: tuple(a.components[((), c)][xi] for a, c, xi in zip(cells, k[1], x)) for x in xs}
    return ProfCell(source, target, comps, check=False)


# -- hom profunctors on 2-cells ----------------------------------------------


def hom_covariant_cell(alpha: NatTrans, source=None, target=None) -> ProfCell:
    """``D(1, alpha): D(1, F) => D(1, G)``, ``u |-> alpha_c . u``."""
    F, G = alpha.source, alpha.target
    D = F.cod
    source = source or hom_covariant(F)
    target = target or hom_covariant(G)
    comps = {(d, c): {u: D.comp[(alpha.components[c], u)] for u in xs} for (d, c), xs in source.values.items()}
    return ProfCell(source, target, comps, check=False)


def hom_contravariant_cell(alpha: NatTrans, source=None, target=None) -> ProfCell:
    """``D(alpha, 1): D(G, 1) => D(F, 1)``, ``u |-> u . alpha_c``."""
    F, G = alpha.source, alpha.target
    D = F.cod
    source = source or hom_contravariant(G)
    target = target or hom_contravariant(F)
    comps = {(c, d): {u: D.comp[(u, alpha.components[c])] for u in xs} for (c, d), xs in source.values.items()}
    return ProfCell(source, target, comps, check=False)


# -- canonical witnesses ---------------------------------------------------


def left_unitor(F: Profunctor, composite=None):
    """``id . F => F`` and its inverse."""
    D = F.dst
    src = composite or compose(identity_prof(D), F)
    comps = {}
    for k, reps in src.values.items():
        d, c = k
        comps[k] = {r: F.left[(r[1][0], c)][r[1][1]] for r in reps}
    fwd = ProfCell(src, F, comps, name="left unitor", check=False)
    inv = {(d, c): {x: src.cls((d, c), (d, (D.ident[d], x))) for x in xs} for (d, c), xs in F.values.items()}
    return fwd, ProfCell(F, src, inv, name="left unitor inverse", check=False)


def right_unitor(F: Profunctor, composite=None):
    """``F . id => F`` and its inverse."""
    C = F.src
    src = composite or compose(F, identity_prof(C))
    comps = {}
    for k, reps in src.values.items():
        d, c = k
        comps[k] = {r: F.right[(r[1][1], d)][r[1][0]] for r in reps}
    fwd = ProfCell(src, F, comps, name="right unitor", check=False)
    inv = {(d, c): {x: src.cls((d, c), (c, (x, C.ident[c]))) for x in xs} for (d, c), xs in F.values.items()}
    return fwd, ProfCell(F, src, inv, name="right unitor inverse", check=False)


def unitor_witness(side: str, F: Profunctor, composite=None):
    if side == "left":
        return left_unitor(F, composite)
    if side == "right":
        return right_unitor(F, composite)
    raise ValueError("side must be 'left' or 'right'")


def associator(H: Profunctor, G: Profunctor, F: Profunctor, lhs=None, rhs=None):
    """``(H . G) . F => H . (G . F)`` and its inverse.

    ``lhs``/``rhs`` may be supplied when the composites already exist; their
    inner composites are read from the traces.
    """
    lhs = lhs or compose(compose(H, G), F)
    rhs = rhs or compose(H, compose(G, F))
    HG = lhs.trace.parts[0]
    GF = rhs.trace.parts[1]
    fwd = {}
    for k, reps in lhs.values.items():
        dd, a = k
        m = {}
        for b, (hg, f) in reps:
            c, (h, g) = hg
            m[(b, (hg, f))] = rhs.cls(k, (c, (h, GF.cls((c, a), (b, (g, f))))))
        fwd[k] = m
    bwd = {}
    for k, reps in rhs.values.items():
        dd, a = k
        m = {}
        for c, (h, gf) in reps:
            b, (g, f) = gf
            m[(c, (h, gf))] = lhs.cls(k, (b, (HG.cls((dd, b), (c, (h, g))), f)))
        bwd[k] = m
    return (
        ProfCell(lhs, rhs, fwd, name="associator", check=False),
        ProfCell(rhs, lhs, bwd, name="associator inverse", check=False),
    )


def associator_witness(H, G, F, lhs=None, rhs=None):
    return associator(H, G, F, lhs, rhs)


def contravariant_bifunctoriality(g: Functor, f: Functor, composite=None, target=None):
    """``D(g, 1) . D(f, 1) => D(f g, 1)`` for ``g: A -> B``, ``f: B -> C``.

    ``[(b, (u, v))] |-> v . f(u)``; inverse ``w |-> [(g a, (id, w))]``.
    """
    C, B = f.cod, g.cod
    src = composite or compose(hom_contravariant(g), hom_contravariant(f))
    tgt = target or hom_contravariant(g.then(f))
    fwd = {}
    for k, reps in src.values.items():
        fwd[k] = {r: C.comp[(r[1][1], f.mor[r[1][0]])] for r in reps}
    bwd = {}
    for (a, c), ws in tgt.values.items():
        ga = g.obj[a]
        bwd[(a, c)] = {w: src.cls((a, c), (ga, (B.ident[ga], w))) for w in ws}
    return (
        ProfCell(src, tgt, fwd, name="bifunctoriality", check=False),
        ProfCell(tgt, src, bwd, name="bifunctoriality inverse", check=False),
    )


def covariant_bifunctoriality(g: Functor, f: Functor, composite=None, target=None):
    """``D(1, f) . D(1, g) => D(1, f g)``: ``[(b, (u, v))] |-> f(v) . u``."""
    C, B = f.cod, g.cod
    src = composite or compose(hom_covariant(f), hom_covariant(g))
    tgt = target or hom_covariant(g.then(f))
    fwd = {}
    for k, reps in src.values.items():
        fwd[k] = {r: C.comp[(f.mor[r[1][1]], r[1][0])] for r in reps}
    bwd = {}
    for (c, a), ws in tgt.values.items():
        ga = g.obj[a]
        bwd[(c, a)] = {w: src.cls((c, a), (ga, (w, B.ident[ga]))) for w in ws}
    return (
        ProfCell(src, tgt, fwd, name="bifunctoriality", check=False),
        ProfCell(tgt, src, bwd, name="bifunctoriality inverse", check=False),
    )


def bifunctoriality_witness(f: Functor, g: Functor, variance: str = "contravariant", composite=None, target=None):
    if variance == "contravariant":
        return contravariant_bifunctoriality(g, f, composite, target)
    if variance == "covariant":
        return covariant_bifunctoriality(g, f, composite, target)
    raise ValueError("variance must be 'contravariant' or 'covariant'")


def hom_composite_witness(G: Functor, F: Functor, composite=None, target=None):
    """``D(G, 1) . D(1, F) => D(G, F)``: ``[(d, (u, v))] |-> v . u``."""
    D = F.cod
    src = composite or compose(hom_contravariant(G), hom_covariant(F))
    tgt = target or hom_between(G, F)
    fwd = {k: {r: D.comp[(r[1][1], r[1][0])] for r in reps} for k, reps in src.values.items()}
    bwd = {}
    for (e, c), ws in tgt.values.items():
        fc = F.obj[c]
        bwd[(e, c)] = {w: src.cls((e, c), (fc, (w, D.ident[fc]))) for w in ws}
    return (
        ProfCell(src, tgt, fwd, name="hom composite", check=False),
        ProfCell(tgt, src, bwd, name="hom composite inverse", check=False),
    )


# -- isomorphism search ----------------------------------------------------


def _naturality_problem(P: Profunctor, Q: Profunctor, injective: bool) -> solve.Problem:
    C, D = P.src, P.dst
    prob = solve.Problem()
    for k in sorted(P.values, key=canon):
        for x in P.values[k]:
            prob.add_var((k, x), Q.values[k].elements)
        if injective:
            prob.add_injective([(k, x) for x in P.values[k]])
    for b in D.generators():
        d1, d0 = D.src[b], D.tgt[b]
        for c in C.objects:
            pl, ql = P.left[(b, c)], Q.left[(b, c)]
            for x in P.values[(d0, c)]:
                prob.add_edge(((d0, c), x), ((d1, c), pl[x]), ql)
    for g in C.generators():
        c0, c1 = C.src[g], C.tgt[g]
        for d in D.objects:
            pr, qr = P.right[(g, d)], Q.right[(g, d)]
            for x in P.values[(d, c0)]:
                prob.add_edge(((d, c0), x), ((d, c1), pr[x]), qr)
    return prob


def _cell_from(P, Q, sol, name=None) -> ProfCell:
    comps = {k: {x: sol[(k, x)] for x in xs} for k, xs in P.values.items()}
    return ProfCell(P, Q, comps, name=name, check=False)


def find_iso(P: Profunctor, Q: Profunctor) -> ProfCell | None:
    """An invertible cell ``P => Q``, or ``None`` when none exists."""
    if P.src != Q.src or P.dst != Q.dst:
        raise ShapeMismatch("find_iso: profunctors are not parallel")
    for k, xs in P.values.items():
        if len(xs) != len(Q.values[k]):
            return None
    config.check_carrier("iso search variables", P.size())
    sol = solve.solve_one(_naturality_problem(P, Q, injective=True))
    if sol is None:
        return None
    return _cell_from(P, Q, sol, name="found iso")


def enumerate_cells(P: Profunctor, Q: Profunctor) -> list:
    """All cells ``P => Q`` in deterministic order."""
    if P.src != Q.src or P.dst != Q.dst:
        raise ShapeMismatch("enumerate_cells: profunctors are not parallel")
    sols = solve.solve_all(_naturality_problem(P, Q, injective=False))
    return [_cell_from(P, Q, s) for s in sols]


def count_cells(P: Profunctor, Q: Profunctor) -> int:
    return solve.count(_naturality_problem(P, Q, injective=False))


def cells_equal(a: ProfCell, b: ProfCell) -> bool:
    return a.components == b.components


def is_identity_cell(a: ProfCell) -> bool:
    return all(k == v for m in a.components.values() for k, v in m.items())


def relation_profunctor(A, B, pairs, name=None) -> Profunctor:
    """The two-valued profunctor of a relation ``R ⊆ A x B`` between discrete categories.

    ``value(b, a)`` is ``{'*'}`` when ``(a, b) in R`` and empty otherwise.
    """
    rel = set(pairs)
    return make_profunctor(
        A,
        B,
        lambda b, a: ["*"] if (a, b) in rel else [],
        lambda m, a, x: x,
        lambda m, b, x: x,
        name=name,
    )


def support_pairs(P: Profunctor) -> set:
    """``{(c, d) : P(d, c) nonempty}``; inverse to :func:`relation_profunctor`."""
    return {(c, d) for (d, c), v in P.values.items() if len(v)}
