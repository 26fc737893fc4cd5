"""Backtracking search for assignments subject to functional constraints.

A problem has variables with finite candidate lists, edges ``v = f(u)`` and
optional injectivity blocks.  Naturality of a family of functions is exactly
such a system: one variable per element, one edge per (generator, element).
Propagation runs forward along edges, backward by preimage filtering and
across injectivity blocks.  Search order is deterministic.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict

from . import config
from .errors import SizeGuard


class Problem:
    def __init__(self):
        self.order: list = []
        self.values: dict = {}
        self.out: dict = defaultdict(list)
        self.inn: dict = defaultdict(list)
        self.blocks: list = []
        self.block_of: dict = {}

    def add_var(self, v, candidates) -> None:
        if v in self.values:
            raise ValueError(f"duplicate variable {v!r}")
        self.order.append(v)
        self.values[v] = list(candidates)

    def add_edge(self, u, v, fmap) -> None:
        """Require ``value(v) == fmap[value(u)]``; ``fmap`` is a dict."""
        self.out[u].append((v, fmap))
        self.inn[v].append((u, fmap))

    def add_injective(self, vs) -> None:
        vs = list(vs)
        idx = len(self.blocks)
        self.blocks.append(vs)
        for v in vs:
            self.block_of[v] = idx

    def components(self) -> list:
        """Connected components of the constraint graph, in variable order."""
        parent = {v: v for v in self.order}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def join(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra

        for u, es in self.out.items():
            for v, _ in es:
                join(u, v)
        for b in self.blocks:
            for v in b[1:]:
                join(b[0], v)
        groups: dict = {}
        for v in self.order:
            groups.setdefault(find(v), []).append(v)
        return list(groups.values())


class _Search:
    def __init__(self, p: Problem, variables):
        self.p = p
        self.vars = list(variables)
        self.pos = {v: i for i, v in enumerate(self.vars)}
        self.dom = {v: set(p.values[v]) for v in self.vars}
        self.val: dict = {}
        self.trail: list = []
        self.nodes = 0
        self.limit = config.current().enum

    def _shrink(self, v, new) -> bool:
        old = self.dom[v]
        if len(new) == len(old):
            return True
        self.trail.append(("d", v, old))
        self.dom[v] = new
        return bool(new)

    def _assign(self, v, x) -> bool:
        queue = [(v, x)]
        while queue:
            v, x = queue.pop()
            if v in self.val:
                if self.val[v] != x:
                    return False
                continue
            if x not in self.dom[v]:
                return False
            self.trail.append(("a", v, None))
            self.val[v] = x
            self._shrink(v, {x})
            for w, f in self.p.out.get(v, ()):
                y = f.get(x, _MISSING)
                if y is _MISSING:
                    return False
                queue.append((w, y))
            for u, f in self.p.inn.get(v, ()):
                if u in self.val:
                    if f.get(self.val[u], _MISSING) != x:
                        return False
                    continue
                keep = {a for a in self.dom[u] if f.get(a, _MISSING) == x}
                if not self._shrink(u, keep):
                    return False
                if len(keep) == 1:
                    queue.append((u, next(iter(keep))))
            b = self.p.block_of.get(v)
            if b is not None:
                for w in self.p.blocks[b]:
                    if w == v:
                        continue
                    if w in self.val:
                        if self.val[w] == x:
                            return False
                        continue
                    if x in self.dom[w]:
                        keep = self.dom[w] - {x}
                        if not self._shrink(w, keep):
                            return False
                        if len(keep) == 1:
                            queue.append((w, next(iter(keep))))
        return True

    def _undo(self, mark) -> None:
        while len(self.trail) > mark:
            kind, v, old = self.trail.pop()
            if kind == "a":
                del self.val[v]
            else:
                self.dom[v] = old

    def _choose(self):
        best, size = None, None
        for v in self.vars:
            if v in self.val:
                continue
            n = len(self.dom[v])
            if size is None or n < size:
                best, size = v, n
                if n <= 1:
                    break
        return best

    def _ordered(self, v):
        d = self.dom[v]
        return [x for x in self.p.values[v] if x in d]

    def run(self):
        if any(not self.dom[v] for v in self.vars):
            return
        for v in self.vars:
            if v not in self.val and len(self.dom[v]) == 1:
                if not self._assign(v, next(iter(self.dom[v]))):
                    return
        stack = []
        advance = True
        while True:
            if advance:
                v = self._choose()
                if v is None:
                    yield {u: self.val[u] for u in self.vars}
                    advance = False
                    if not stack:
                        return
                    continue
                stack.append([v, self._ordered(v), 0, len(self.trail)])
            frame = stack[-1]
            v, cands, i, mark = frame
            self._undo(mark)
            placed = False
            while i < len(cands):
                x = cands[i]
                i += 1
                self.nodes += 1
                if self.nodes > self.limit:
                    raise SizeGuard("constraint search nodes", self.nodes, self.limit)
                if self._assign(v, x):
                    placed = True
                    break
                self._undo(mark)
            frame[2] = i
            if placed:
                advance = True
                continue
            stack.pop()
            if not stack:
                return
            advance = False


_MISSING = object()


def solve_one(p: Problem) -> dict | None:
    for sol in _Search(p, p.order).run():
        return sol
    return None


def solve_all(p: Problem) -> list:
    """All solutions, in deterministic order.

    Without injectivity blocks the problem splits into independent
    components which are solved separately and recombined.
    """
    if p.blocks:
        out = []
        for sol in _Search(p, p.order).run():
            out.append(sol)
            config.check_enum("solutions", len(out))
        return out
    per = []
    for comp in p.components():
        sols = list(_Search(p, comp).run())
        if not sols:
            return []
        per.append(sols)
    config.check_enum("solutions", math.prod(len(s) for s in per))
    out = []
    for combo in itertools.product(*per):
        sol = {}
        for part in combo:
            sol.update(part)
        out.append({v: sol[v] for v in p.order})
    return out


def count(p: Problem) -> int:
    if p.blocks:
        return sum(1 for _ in _Search(p, p.order).run())
    total = 1
    for comp in p.components():
        n = sum(1 for _ in _Search(p, comp).run())
        if n == 0:
            return 0
        total *= n
    return total
