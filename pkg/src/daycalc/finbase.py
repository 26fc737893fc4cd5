"""Finite sets, finite functions, and quotients by generated equivalences.

Element identifiers are hashable tags (ints, strings, tuples, frozensets).
Mixed-type tags are ordered by :func:`canon`, which ranks types first and
compares payloads second, so every carrier has one reproducible order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Hashable, Iterable, Sequence

from . import config
from .errors import UnknownElement

__all__ = [
    "canon",
    "canon_sorted",
    "FinSet",
    "FinFn",
    "UnionFind",
    "QuotientResult",
    "disjoint_union",
    "product",
    "function_set",
    "quotient_by_generated",
]


@lru_cache(maxsize=1 << 18)
def canon(x: Hashable):
    if x is None:
        return (0,)
    if isinstance(x, bool):
        return (1, int(x))
    if isinstance(x, int):
        return (1, x)
    if isinstance(x, str):
        return (2, x)
    if isinstance(x, tuple):
        return (3, len(x), tuple(canon(y) for y in x))
    if isinstance(x, frozenset):
        return (4, len(x), tuple(sorted(canon(y) for y in x)))
    key = getattr(x, "_canon", None)
    if key is not None:
        return (5, key)
    raise TypeError(f"no canonical order for {type(x).__name__}: {x!r}")


def canon_sorted(xs: Iterable) -> list:
    return sorted(xs, key=canon)


class FinSet:
    """An immutable finite set with elements kept in canonical order."""

    __slots__ = ("elements", "_index")

    def __init__(self, elements: Iterable = ()):
        elems = canon_sorted(elements)
        index = {x: i for i, x in enumerate(elems)}
        if len(index) != len(elems):
            seen, dups = set(), []
            for x in elems:
                if x in seen:
                    dups.append(x)
                seen.add(x)
            raise ValueError(f"duplicate identifiers: {dups[:5]!r}")
        self.elements = tuple(elems)
        self._index = index

    @classmethod
    def unique(cls, elements: Iterable) -> "FinSet":
        return cls(set(elements))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        try:
            return x in self._index
        except TypeError:
            return False

    def index(self, x) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise UnknownElement(x) from None

    def __eq__(self, other):
        return isinstance(other, FinSet) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"FinSet({list(self.elements)!r})"

    @property
    def _canon(self):
        return tuple(canon(x) for x in self.elements)


class FinFn:
    """A total function between finite sets."""

    __slots__ = ("dom", "cod", "map", "_key")

    def __init__(self, dom: FinSet, cod: FinSet, mapping, check: bool = True):
        self.dom, self.cod = dom, cod
        self.map = dict(mapping)
        self._key = None
        if check:
            for x in dom:
                if x not in self.map:
                    raise UnknownElement(x, "function domain (missing image)")
                if self.map[x] not in cod:
                    raise UnknownElement(self.map[x], "function codomain")
            if len(self.map) != len(dom):
                extra = [x for x in self.map if x not in dom]
                raise UnknownElement(extra[0], "function domain")

    def __call__(self, x):
        try:
            return self.map[x]
        except KeyError:
            raise UnknownElement(x, "function domain") from None

    @classmethod
    def identity(cls, s: FinSet) -> "FinFn":
        return cls(s, s, {x: x for x in s}, check=False)

    def then(self, g: "FinFn") -> "FinFn":
        """Diagrammatic composite: first self, then g."""
        return FinFn(self.dom, g.cod, {x: g.map[y] for x, y in self.map.items()}, check=False)

    def images(self) -> tuple:
        return tuple(self.map[x] for x in self.dom)

    def is_injective(self) -> bool:
        return len(set(self.map.values())) == len(self.map)

    def is_surjective(self) -> bool:
        return set(self.map.values()) == set(self.cod)

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> "FinFn":
        if not self.is_bijective():
            raise ValueError("function is not a bijection")
        return FinFn(self.cod, self.dom, {y: x for x, y in self.map.items()}, check=False)

    @property
    def _canon(self):
        if self._key is None:
            self._key = (self.dom._canon, tuple(canon(y) for y in self.images()))
        return self._key

    def __eq__(self, other):
        return (
            isinstance(other, FinFn)
            and self.dom == other.dom
            and self.cod == other.cod
            and self.map == other.map
        )

    def __hash__(self):
        return hash((self.dom, self.images()))

    def __repr__(self):
        return f"FinFn({self.map!r})"


def disjoint_union(parts: Sequence[FinSet], labels: Sequence[Hashable] | None = None):
    """Coproduct of ``parts``; elements are tagged ``(label, x)``.

    Labels default to the part index. Returns the carrier and one injection
    per part.
    """
    if labels is None:
        labels = range(len(parts))
    labels = list(labels)
    if len(set(labels)) != len(labels):
        raise ValueError("disjoint_union labels must be distinct")
    config.check_carrier("disjoint union", sum(len(p) for p in parts))
    carrier = FinSet((lab, x) for lab, part in zip(labels, parts) for x in part)
    injections = [
        FinFn(part, carrier, {x: (lab, x) for x in part}, check=False)
        for lab, part in zip(labels, parts)
    ]
    return carrier, injections


def product(parts: Sequence[FinSet]):
    """Cartesian product in lexicographic order, with projections."""
    size = math.prod(len(p) for p in parts)
    config.check_carrier("product", size)
    carrier = FinSet(itertools.product(*(p.elements for p in parts)))
    projections = [
        FinFn(carrier, part, {t: t[i] for t in carrier}, check=False)
        for i, part in enumerate(parts)
    ]
    return carrier, projections


def function_set(a: FinSet, b: FinSet) -> FinSet:
    """All total functions ``a -> b``."""
    config.check_enum("function set", len(b) ** len(a))
    return FinSet(
        FinFn(a, b, dict(zip(a.elements, images)), check=False)
        for images in itertools.product(b.elements, repeat=len(a))
    )


class UnionFind:
    """Disjoint sets with path compression and union by size."""

    def __init__(self, elements: Iterable = ()):
        self.parent: dict = {}
        self.size: dict = {}
        for x in elements:
            self.add(x)

    def add(self, x) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        return True

    def groups(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


@dataclass(frozen=True)
class QuotientResult:
    carrier: FinSet
    classes: tuple  # tuple of tuples, each in canonical order, ordered by rep
    reps: FinSet
    project: FinFn

    def rep_of(self, x):
        return self.project(x)

    def class_of(self, x) -> tuple:
        rep = self.project(x)
        return self.classes[self.reps.index(rep)]


def quotient_by_generated(carrier: FinSet, generating_pairs: Iterable) -> QuotientResult:
    """Quotient ``carrier`` by the equivalence relation generated by the pairs.

    Each class is represented by its least member in canonical order.
    """
    uf = UnionFind(carrier)
    for x, y in generating_pairs:
        if x not in uf.parent:
            raise UnknownElement(x, "quotient carrier")
        if y not in uf.parent:
            raise UnknownElement(y, "quotient carrier")
        uf.union(x, y)
    classes = []
    project: dict[Any, Any] = {}
    for members in uf.groups().values():
        members = canon_sorted(members)
        rep = members[0]
        classes.append(tuple(members))
        for m in members:
            project[m] = rep
    classes.sort(key=lambda c: canon(c[0]))
    reps = FinSet(c[0] for c in classes)
    return QuotientResult(
        carrier, tuple(classes), reps, FinFn(carrier, reps, project, check=False)
    )
