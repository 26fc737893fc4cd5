"""Small fixed instances shared by the test modules."""

import itertools

from daycalc.fincat import discrete, partial_op, poset_as_category, total_op
from daycalc.kripke import HeapModel, KripkeFrame


def subsets(cells):
    return [frozenset(s) for r in range(len(cells) + 1) for s in itertools.combinations(cells, r)]


def label(s):
    return "".join(sorted(s)) or "e"


def heap_model(cells="xy", ordered=False, name=None):
    """Heaps are subsets of ``cells``; join is disjoint union."""
    subs = subsets(cells)
    names = [label(s) for s in subs]
    pairs = [(label(a), label(b)) for a in subs for b in subs if a < b] if ordered else []
    H = poset_as_category(names, pairs, name=name or f"H{cells}") if ordered else discrete(names, name=name or f"H{cells}")
    join = partial_op(H, 2, {(label(a), label(b)): label(a | b) for a in subs for b in subs if not a & b}, name="join")
    return HeapModel(H, join, unit="e", commutative=True, associative=True, name=name or f"H{cells}")


def chain3():
    return KripkeFrame(poset_as_category("abc", [("a", "b"), ("b", "c")], name="abc"), root="a")


def max_op(C):
    return total_op(C, 2, lambda a, b: max(a, b), name="max")
