"""Day extension of total operations, partial operations and spans.

For ``theta: C^n ⇀ C`` with domain inclusion ``i: D -> C^n`` the extension
of ``F1..Fn`` is the composite of profunctors

    C --C(theta,1)--> D --C^n(1,i)--> C^n --F1 x .. x Fn--> 1

computed with two coends.  The same formula is used for total operations
(``i`` the identity).  :func:`day_coend_formula` is an independent path that
quotients one big disjoint union directly.

Residuals are ends, computed as the solution sets of the wedge conditions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import config, solve
from .errors import ArityMismatch, DomainMismatch, ShapeMismatch
from .finbase import FinSet, canon, quotient_by_generated
from .fincat import ONE, FinCategory, Functor, NatTrans, PartialOp, SpanOp, point
from .prof import (
    Profunctor,
    ProfCell,
    compose,
    copresheaf,
    count_cells,
    enumerate_cells,
    find_iso,
    hom_contravariant,
    hom_covariant,
    is_iso,
    make_profunctor,
    cell_violations,
)
from .report import Report, show

# -- copresheaves ----------------------------------------------------------


def representable(C: FinCategory, c) -> Profunctor:
    """``C(c, -)``."""
    return hom_contravariant(point(C, c), name=f"y({show(c)})")


def constant(C: FinCategory, elements, name=None) -> Profunctor:
    return copresheaf(C, {c: list(elements) for c in C.objects}, lambda g, x: x, name=name, check=False)


def empty_copresheaf(C: FinCategory) -> Profunctor:
    return constant(C, [], name="0")


def indicator(C: FinCategory, objects, name=None) -> Profunctor:
    """The subterminal copresheaf true exactly on ``objects`` (an up-closed set)."""
    s = set(objects)
    for g in C.morphisms:
        if C.src[g] in s and C.tgt[g] not in s:
            raise DomainMismatch(f"{show(sorted(s, key=canon))} is not closed upward along {show(g)}")
    return copresheaf(C, {c: ["*"] if c in s else [] for c in C.objects}, lambda g, x: x, name=name, check=False)


def is_subterminal(F: Profunctor) -> bool:
    return all(len(v) <= 1 for v in F.values.values())


def support(F: Profunctor) -> frozenset:
    return F.support()


def coproduct(fs, name=None) -> Profunctor:
    """Disjoint sum of copresheaves; elements are tagged by summand index."""
    C = fs[0].src
    return copresheaf(
        C,
        {c: [(i, x) for i, F in enumerate(fs) for x in F.at(c)] for c in C.objects},
        lambda g, t: (t[0], fs[t[0]].right[(g, ())][t[1]]),
        name=name,
        check=False,
    )


def product_copresheaf(fs, base: FinCategory) -> Profunctor:
    """``F1 x .. x Fn : C^n -|-> 1`` with tuple elements."""
    n = len(fs)
    Cn = base.power(n)
    return make_profunctor(
        Cn,
        ONE,
        lambda d, xs: itertools.product(*(F.at(x) for F, x in zip(fs, xs))),
        lambda b, xs, p: p,
        lambda gs, d, p: tuple(F.right[(g, ())][pi] for F, g, pi in zip(fs, gs, p)),
        name="product",
        check=False,
    )


def _check_inputs(base: FinCategory, arity: int, fs) -> None:
    if len(fs) != arity:
        raise ArityMismatch(f"expected {arity} arguments, got {len(fs)}")
    for F in fs:
        if F.src != base or F.dst != ONE:
            raise DomainMismatch("arguments must be copresheaves over the operation's base category")


# -- Day extension ---------------------------------------------------------


@dataclass
class DayResult:
    value: Profunctor
    route: str
    product: Profunctor  # F1 x .. x Fn
    middle: Profunctor  # C^n(1, i) . C(theta, 1)
    left: Functor  # i (or the left leg of a span)
    right: Functor  # theta (or the right leg)

    @property
    def trace(self):
        return self.value.trace

    def at(self, c) -> FinSet:
        return self.value.at(c)

    def support(self) -> frozenset:
        return self.value.support()

    def element(self, xs, p, d, v, u):
        """Canonical element ``[(xs, (p, [(d, (v, u))]))]`` at the target of ``u``."""
        c = self.right.cod.tgt[u]
        inner = self.middle.cls((xs, c), (d, (v, u)))
        return self.value.cls(((), c), (xs, (p, inner)))


def _extend(left: Functor, right: Functor, base: FinCategory, arity: int, fs, route: str, middle=None) -> DayResult:
    _check_inputs(base, arity, fs)
    P = product_copresheaf(fs, base)
    if middle is not None:
        JK = middle
    else:
        JK = compose(hom_covariant(left), hom_contravariant(right))
    out = compose(P, JK)
    return DayResult(out, route, P, JK, left, right)


def day_extend(theta: PartialOp, fs, middle: Profunctor | None = None) -> DayResult:
    """The total copresheaf ``theta_D(F1, .., Fn)``.

    ``middle`` may pass in ``C^n(1, i) . C(theta, 1)`` from an earlier result
    for the same operation; it does not depend on the inputs.
    """
    return _extend(theta.domain.inclusion, theta.action, theta.base, theta.arity, list(fs), "profunctor-composite", middle)


def day_extend_span(s: SpanOp, fs, middle: Profunctor | None = None) -> DayResult:
    return _extend(s.left, s.right, s.base, s.arity, list(fs), "span-composite", middle)


def day_coend_formula(theta: PartialOp, fs, order: str = "joint") -> Profunctor:
    """Direct evaluation of the double coend over ``d in D`` and ``c in C^n``.

    Carrier tags are ``(d, cs, u, v, x)`` with ``u: theta d -> a``,
    ``v: cs -> d`` in ``C^n`` and ``x in F1(c1) x .. x Fn(cn)``.
    ``order='joint'`` quotients by all generators at once; ``order='fubini'``
    quotients over ``D`` first and then over ``C^n``.
    """
    fs = list(fs)
    C, n = theta.base, theta.arity
    _check_inputs(C, n, fs)
    Cn = C.power(n)
    D = theta.domain.sub
    act = theta.action
    P = product_copresheaf(fs, C)
    d_gens = D.generators()
    c_gens = Cn.generators()
    values, projs = {}, {}
    for a in C.objects:
        elems = []
        for d in D.objects:
            us = C.hom(act.obj[d], a)
            if not us:
                continue
            for cs in Cn.objects:
                vs = Cn.hom(cs, d)
                if not vs:
                    continue
                xs = P.values[((), cs)].elements
                for u in us:
                    for v in vs:
                        for x in xs:
                            elems.append((d, cs, u, v, x))
        config.check_carrier("coend formula carrier", len(elems))
        carrier = FinSet(elems)
        d_pairs = []
        for delta in d_gens:
            d0, d1 = D.src[delta], D.tgt[delta]
            td = act.mor[delta]
            for u in C.hom(act.obj[d1], a):
                u1 = C.comp[(u, td)]
                for cs in Cn.objects:
                    for v in Cn.hom(cs, d0):
                        v1 = Cn.comp[(delta, v)]
                        for x in P.values[((), cs)]:
                            d_pairs.append(((d0, cs, u1, v, x), (d1, cs, u, v1, x)))
        c_pairs = []
        for gam in c_gens:
            c0, c1 = Cn.src[gam], Cn.tgt[gam]
            pr = P.right[(gam, ())]
            for d in D.objects:
                for v in Cn.hom(c1, d):
                    v1 = Cn.comp[(v, gam)]
                    for u in C.hom(act.obj[d], a):
                        for x in P.values[((), c0)]:
                            c_pairs.append(((d, c0, u, v1, x), (d, c1, u, v, pr[x])))
        if order == "joint":
            q = quotient_by_generated(carrier, d_pairs + c_pairs)
            proj = q.project.map
        elif order == "fubini":
            q1 = quotient_by_generated(carrier, d_pairs)
            p1 = q1.project.map
            q2 = quotient_by_generated(q1.reps, [(p1[x], p1[y]) for x, y in c_pairs])
            proj = {x: q2.project.map[p1[x]] for x in carrier}
            q = q2
        else:
            raise ValueError("order must be 'joint' or 'fubini'")
        values[((), a)] = q.reps
        projs[a] = proj
    right = {}
    for w in C.morphisms:
        a0, a1 = C.src[w], C.tgt[w]
        proj = projs[a1]
        right[(w, ())] = {
            r: proj[(r[0], r[1], C.comp[(w, r[2])], r[3], r[4])] for r in values[((), a0)]
        }
    left = {((), c): {x: x for x in values[((), c)]} for c in C.objects}
    return Profunctor(C, ONE, values, left, right, name=f"coend[{order}]", check=False)


def route_witness(theta: PartialOp, fs, formula: Profunctor | None = None, result: DayResult | None = None) -> ProfCell:
    """The explicit cell from the coend-formula value to the profunctor composite.

    ``(d, cs, u, v, x) |-> [(cs, (x, [(d, (v, u))]))]``.
    """
    formula = formula or day_coend_formula(theta, fs)
    result = result or day_extend(theta, fs)
    comps = {}
    for k, reps in formula.values.items():
        comps[k] = {r: result.element(r[1], r[4], r[0], r[3], r[2]) for r in reps}
    return ProfCell(formula, result.value, comps, name="route", check=False)


def route_equivalence(theta: PartialOp, fs) -> Report:
    r = Report(f"route equivalence {theta.name or ''}".strip())
    res = day_extend(theta, fs)
    joint = day_coend_formula(theta, fs, "joint")
    fub = day_coend_formula(theta, fs, "fubini")
    w = route_witness(theta, fs, joint, res)
    r.add("witness natural", not cell_violations(w))
    r.add("witness invertible", is_iso(w))
    r.add("find_iso succeeds", find_iso(joint, res.value) is not None)
    r.add("fubini order agrees", find_iso(fub, joint) is not None)
    r.data["table"] = {show(c): len(res.at(c)) for c in theta.base.objects}
    return r


# -- cells -----------------------------------------------------------------


def day_on_cells(theta: PartialOp, alphas, source: DayResult | None = None, target: DayResult | None = None) -> ProfCell:
    """``theta_D(alpha1, .., alphan): theta_D(F) => theta_D(G)``."""
    alphas = list(alphas)
    source = source or day_extend(theta, [a.source for a in alphas])
    target = target or day_extend(theta, [a.target for a in alphas])
    comps = {}
    for k, reps in source.value.values.items():
        m = {}
        for r in reps:
            xs, (p, inner) = r
            q = tuple(a.components[((), x)][pi] for a, x, pi in zip(alphas, xs, p))
            m[r] = target.value.cls(k, (xs, (q, inner)))
        comps[k] = m
    return ProfCell(source.value, target.value, comps, name="day on cells", check=False)


def day_contravariant(alpha: NatTrans, fs, source: DayResult | None = None, target: DayResult | None = None, theta=None, chi=None) -> ProfCell:
    """``alpha_D: chi_D(F) => theta_D(F)`` for ``alpha: theta => chi`` on a common domain.

    ``[(xs, (p, [(d, (v, u))]))] |-> [(xs, (p, [(d, (v, u . alpha_d))]))]``.
    """
    if alpha.source.dom != alpha.target.dom:
        raise DomainMismatch("day_contravariant: operations must share their domain")
    if theta is not None and chi is not None and theta.domain.objects != chi.domain.objects:
        raise DomainMismatch("day_contravariant: operations must share their domain")
    C = alpha.source.cod
    if source is None:
        source = _extend(_incl_of(alpha), alpha.target, C, _arity_of(alpha), fs, "profunctor-composite")
    if target is None:
        target = _extend(_incl_of(alpha), alpha.source, C, _arity_of(alpha), fs, "profunctor-composite")
    comps = {}
    for k, reps in source.value.values.items():
        m = {}
        for r in reps:
            xs, (p, inner) = r
            d, (v, u) = inner
            m[r] = target.element(xs, p, d, v, C.comp[(u, alpha.components[d])])
        comps[k] = m
    return ProfCell(source.value, target.value, comps, name="contravariant action", check=False)


def _incl_of(alpha: NatTrans) -> Functor:
    D = alpha.source.dom
    amb = None
    for x in D.objects:
        amb = len(x)
        break
    if amb is None:
        raise DomainMismatch("empty domain: pass the operations explicitly")
    Cn = alpha.source.cod.power(amb)
    return Functor(D, Cn, {x: x for x in D.objects}, {m: m for m in D.morphisms}, check=False)


def _arity_of(alpha: NatTrans) -> int:
    for x in alpha.source.dom.objects:
        return len(x)
    return 0


def op_cell(theta: PartialOp, chi: PartialOp, components) -> NatTrans:
    """A 2-cell ``theta => chi`` between operations with the same domain."""
    if theta.domain.objects != chi.domain.objects:
        raise DomainMismatch("2-cells need operations with the same domain")
    return NatTrans(theta.action, chi.action, components)


def day_contravariant_ops(alpha: NatTrans, theta: PartialOp, chi: PartialOp, fs) -> ProfCell:
    source = day_extend(chi, fs)
    target = day_extend(theta, fs)
    return day_contravariant(alpha, fs, source, target, theta, chi)


# -- residuals -------------------------------------------------------------


@dataclass
class ResidualResult:
    value: Profunctor
    variables: dict  # a -> list of (X, e)
    theta: PartialOp
    j: int
    G: Profunctor
    others: list
    solutions: dict = field(default_factory=dict)  # a -> list of dicts

    def at(self, c) -> FinSet:
        return self.value.at(c)

    def support(self) -> frozenset:
        return self.value.support()

    def element_of(self, a, family: dict):
        """Pack a family ``{(X, e): g}`` as an element of the value at ``a``."""
        return tuple(family[v] for v in self.variables[a])


def _residual_index(theta: PartialOp, j: int, others, a):
    """Variables ``(X, e)`` with ``X = (cs, d)`` and ``e`` in ``A(X, X)``."""
    C, n = theta.base, theta.arity
    Cn = C.power(n)
    D = theta.domain.sub
    act = theta.action
    jj = j - 1
    rest = [i for i in range(n) if i != jj]
    pos = {x: i for i, x in enumerate(Cn.objects)}
    found = []
    for di, d in enumerate(D.objects):
        to_a = C.hom(a, d[jj])
        if not to_a:
            continue
        # coordinates of cs that admit the required arrows
        cands = []
        for i in range(n):
            if i == jj:
                cands.append([c for c in C.objects if C.hom(act.obj[d], c)])
            else:
                cands.append([c for c in C.objects if C.hom(c, d[i])])
        for cs in itertools.product(*cands):
            homs = [C.hom(cs[i], d[i]) for i in rest]
            homs.append(to_a)
            homs.append(C.hom(act.obj[d], cs[jj]))
            for i, F in zip(rest, others):
                homs.append(F.at(cs[i]).elements)
            if any(not h for h in homs):
                continue
            found.append((pos[cs], di, cs, d, homs))
    found.sort(key=lambda t: (t[0], t[1]))
    out = []
    k = len(rest)
    for _, _, cs, d, homs in found:
        for t in itertools.product(*homs):
            e = (t[:k], t[k], t[k + 1], t[k + 2 :])
            out.append(((cs, d), e))
    return out


def residual(theta: PartialOp, j: int, G: Profunctor, others) -> ResidualResult:
    """Right adjoint of ``theta_D`` in argument ``j`` (1-based), evaluated at ``G``.

    The value at ``a`` is the set of families ``t_X: A(X, X) -> G(c_j)`` that
    satisfy every wedge condition; ``A(Y, X)`` is
    ``prod_{i != j} C(c'_i, d_i) x C(a, d_j) x C(theta d', c_j) x prod_{i != j} F_i(c_i)``.
    """
    C, n = theta.base, theta.arity
    others = list(others)
    if not 1 <= j <= n:
        raise ArityMismatch(f"residual index {j} out of range 1..{n}")
    _check_inputs(C, n - 1, others)
    _check_inputs(C, 1, [G])
    Cn = C.power(n)
    D = theta.domain.sub
    act = theta.action
    jj = j - 1
    rest = [i for i in range(n) if i != jj]
    gens = [(g, None) for g in Cn.generators()] + [(None, dl) for dl in D.generators()]
    values, variables, solutions = {}, {}, {}
    for a in C.objects:
        index = _residual_index(theta, j, others, a)
        config.check_carrier("end variables", len(index))
        prob = solve.Problem()
        for X, e in index:
            prob.add_var((X, e), G.at(X[0][jj]).elements)
        have = set(prob.values)
        for gam, dl in gens:
            # m = (gam, dl): X -> Y with X = (cs, d), Y = (cs', d')
            if gam is not None:
                pairs = [((Cn.src[gam], d), (Cn.tgt[gam], d)) for d in D.objects]
                gm = gam
            else:
                pairs = [((cs, D.src[dl]), (cs, D.tgt[dl])) for cs in Cn.objects]
                gm = None
            for (cs, d), (cs1, d1) in pairs:
                gvec = gm if gm is not None else Cn.ident[cs]
                dvec = dl if dl is not None else D.ident[d]
                fmap = G.right[(gvec[jj], ())]
                # e in A(Y, X): prod C(c'_i, d_i) x C(a, d_j) x C(theta d', c_j) x prod F_i(c_i)
                homs = [C.hom(cs1[i], d[i]) for i in rest]
                homs.append(C.hom(a, d[jj]))
                homs.append(C.hom(act.obj[d1], cs[jj]))
                homs.extend(F.at(cs[i]).elements for i, F in zip(rest, others))
                if any(not h for h in homs):
                    continue
                td = act.mor[dvec]
                k = len(rest)
                for t in itertools.product(*homs):
                    hs, hj, kk, xs = t[:k], t[k], t[k + 1], t[k + 2 :]
                    # A(m, X): first slot moves back along m
                    ex = (
                        tuple(C.comp[(h, gvec[i])] for h, i in zip(hs, rest)),
                        hj,
                        C.comp[(kk, td)],
                        xs,
                    )
                    # A(Y, m): second slot moves forward along m
                    ey = (
                        tuple(C.comp[(dvec[i], h)] for h, i in zip(hs, rest)),
                        C.comp[(dvec[jj], hj)],
                        C.comp[(gvec[jj], kk)],
                        tuple(F.right[(gvec[i], ())][x] for x, i, F in zip(xs, rest, others)),
                    )
                    u, v = ((cs, d), ex), ((cs1, d1), ey)
                    if u in have and v in have:
                        prob.add_edge(u, v, fmap)
        sols = solve.solve_all(prob)
        order = [v for v in prob.order]
        variables[a] = order
        solutions[a] = sols
        values[((), a)] = FinSet(tuple(s[v] for v in order) for s in sols)
    right = {}
    for w in C.morphisms:
        a0, a1 = C.src[w], C.tgt[w]
        pos0 = {v: i for i, v in enumerate(variables[a0])}
        m = {}
        for t in values[((), a0)]:
            img = []
            for X, e in variables[a1]:
                hs, hj, kk, xs = e
                img.append(t[pos0[(X, (hs, C.comp[(hj, w)], kk, xs))]])
            m[t] = tuple(img)
        right[(w, ())] = m
    left = {((), c): {x: x for x in values[((), c)]} for c in C.objects}
    R = Profunctor(C, ONE, values, left, right, name=f"residual[{j}]", check=config.current().validate)
    return ResidualResult(R, variables, theta, j, G, others, solutions)


def residual_on_cells(kappa: ProfCell, source: ResidualResult, target: ResidualResult) -> ProfCell:
    """Postcomposition with ``kappa: G => G'`` on residual families."""
    j = source.j - 1
    comps = {}
    for (_, a), ts in source.value.values.items():
        vs = source.variables[a]
        comps[((), a)] = {t: tuple(kappa.components[((), X[0][j])][g] for (X, _), g in zip(vs, t)) for t in ts}
    return ProfCell(source.value, target.value, comps, name="residual on cells", check=False)


def _insert(seq, j, x):
    seq = list(seq)
    seq.insert(j, x)
    return tuple(seq)


def transpose(sigma: ProfCell, res: ResidualResult, Fj: Profunctor, day: DayResult) -> ProfCell:
    """``sigma: theta_D(F) => G`` to its transpose ``F_j => R``."""
    theta, j = res.theta, res.j - 1
    C = theta.base
    comps = {}
    for a in C.objects:
        m = {}
        for y in Fj.at(a):
            fam = {}
            for X, e in res.variables[a]:
                (cs, d), (hs, hj, kk, xs) = X, e
                src = _insert(cs[:j] + cs[j + 1 :], j, a)
                v = _insert(hs, j, hj)
                p = _insert(xs, j, y)
                elem = day.element(src, p, d, v, kk)
                fam[(X, e)] = sigma.components[((), cs[j])][elem]
            m[y] = res.element_of(a, fam)
        comps[((), a)] = m
    return ProfCell(Fj, res.value, comps, name="transpose", check=False)


def untranspose(tau: ProfCell, res: ResidualResult, day: DayResult) -> ProfCell:
    """Inverse of :func:`transpose`."""
    theta, j = res.theta, res.j - 1
    C = theta.base
    pos = {a: {v: i for i, v in enumerate(res.variables[a])} for a in C.objects}
    comps = {}
    for k, reps in day.value.values.items():
        c = k[1]
        m = {}
        for r in reps:
            xs, (p, (d, (v, u))) = r
            a = xs[j]
            cs = _insert(xs[:j] + xs[j + 1 :], j, c)
            e = (v[:j] + v[j + 1 :], v[j], u, p[:j] + p[j + 1 :])
            t = tau.components[((), a)][p[j]]
            m[r] = t[pos[a][((cs, d), e)]]
        comps[k] = m
    return ProfCell(day.value, res.G, comps, name="untranspose", check=False)


def enumerate_nat_trans(F: Profunctor, G: Profunctor) -> list:
    return enumerate_cells(F, G)


def adjunction_check(theta: PartialOp, j: int, fs, G: Profunctor, G2: Profunctor | None = None) -> Report:
    """Hom-set bijection between ``theta_D(F) => G`` and ``F_j => R^j(F_-j, G)``."""
    fs = list(fs)
    r = Report(f"residual adjunction j={j}")
    others = fs[: j - 1] + fs[j:]
    Fj = fs[j - 1]
    day = day_extend(theta, fs)
    res = residual(theta, j, G, others)
    lhs = enumerate_cells(day.value, G)
    rhs = enumerate_cells(Fj, res.value)
    r.add("cardinalities agree", len(lhs) == len(rhs), lhs=len(lhs), rhs=len(rhs))
    trans = [transpose(s, res, Fj, day) for s in lhs]
    r.add("transposes are natural", all(not cell_violations(t) for t in trans))
    keys = {tuple(sorted(((k, tuple(sorted(m.items(), key=canon))) for k, m in t.components.items()), key=canon)) for t in trans}
    r.add("transpose injective", len(keys) == len(trans))
    back = [untranspose(t, res, day) for t in trans]
    r.add("round trip", all(b.components == s.components for b, s in zip(back, lhs)))
    if G2 is not None:
        res2 = residual(theta, j, G2, others)
        kappas = enumerate_cells(G, G2)
        ok = True
        for kappa in kappas:
            rk = residual_on_cells(kappa, res, res2)
            for s, t in zip(lhs, trans):
                comp = ProfCell(day.value, G2, {k: {x: kappa.components[k][y] for x, y in m.items()} for k, m in s.components.items()}, check=False)
                lhs_t = transpose(comp, res2, Fj, day)
                rhs_t = {k: {x: rk.components[k][y] for x, y in m.items()} for k, m in t.components.items()}
                if lhs_t.components != rhs_t:
                    ok = False
        r.add("transport natural in G", ok, cells=len(kappas))
    return r
