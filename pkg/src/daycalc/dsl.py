"""Text format for workspaces: categories, operations, models, theories and formulas.

The format is line oriented.  ``#`` starts a comment; inside a block a
statement ends at a newline or ``;``.  See README.md for the grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import DayError, ParseError, SemanticError, SizeGuard
from .finbase import canon, canon_sorted
from .fincat import (
    FinCategory,
    Functor,
    PartialOp,
    SpanOp,
    from_arrows,
    identity_op,
    partial_op,
    poset_as_category,
    strong_equal,
    thin_functor,
    validate_category,
)
from .kripke import Formula, HeapModel, KripkeFrame, check_valuation
from .operad import Interpretation, Term, Theory, UNIT, app, var
from .prof import Profunctor, identity_prof, relation_profunctor

_LEX = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<nl>\n)"
    r"|(?P<kw>on-arrows|left-arrow|right-arrow)(?![A-Za-z0-9_'])"
    r"|(?P<sym>-\|->|->|-\*|<=|[{}();:,=.^@*&|~])"
    r"|(?P<name>[A-Za-z0-9_']+)"
)

KEYWORDS = {"top", "bot", "emp", "nom"}


@dataclass
class Tok:
    kind: str  # name | sym | nl | eof
    text: str
    line: int
    col: int


def lex(text: str, source=None) -> list:
    out = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _LEX.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1, source)
        kind = m.lastgroup
        col = pos - start + 1
        if kind == "nl":
            out.append(Tok("nl", "\n", line, col))
            line += 1
            start = m.end()
        elif kind in ("sym", "kw"):
            out.append(Tok("sym" if kind == "sym" else "name", m.group(), line, col))
        elif kind == "name":
            out.append(Tok("name", m.group(), line, col))
        pos = m.end()
    out.append(Tok("eof", "", line, pos - start + 1))
    return out


class _Parser:
    def __init__(self, text: str, source=None):
        self.toks = lex(text, source)
        self.i = 0
        self.source = source

    # -- token helpers

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col, self.source)

    def at(self, text) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def take(self, text=None) -> Tok:
        t = self.tok
        if text is not None and (t.text != text or t.kind == "eof"):
            got = "end of input" if t.kind == "eof" else ("newline" if t.kind == "nl" else repr(t.text))
            raise self.error(f"expected {text!r}, got {got}")
        self.i += 1
        return t

    def name(self, what="name") -> str:
        t = self.tok
        if t.kind != "name":
            got = "end of input" if t.kind == "eof" else ("newline" if t.kind == "nl" else repr(t.text))
            raise self.error(f"expected {what}, got {got}")
        self.i += 1
        return t.text

    def skip_nl(self):
        while self.tok.kind == "nl":
            self.i += 1

    def end_stmt(self):
        if self.tok.kind == "nl" or self.at(";"):
            self.i += 1
        elif not self.at("}"):
            raise self.error(f"expected end of statement, got {self.tok.text!r}")

    def block(self, stmt):
        self.skip_nl()
        self.take("{")
        while True:
            while self.tok.kind == "nl" or self.at(";"):
                self.i += 1
            if self.at("}"):
                self.i += 1
                return
            if self.tok.kind == "eof":
                raise self.error("unterminated block")
            stmt()
            self.end_stmt()

    def names_until_end(self) -> list:
        out = []
        while self.tok.kind == "name":
            out.append(self.name())
            if self.at(","):
                self.i += 1
        return out

    def tuple_(self) -> tuple:
        if not self.at("("):
            return (self.ref(),)
        self.take("(")
        out = []
        if not self.at(")"):
            out.append(self.ref())
            while self.at(","):
                self.i += 1
                out.append(self.ref())
        self.take(")")
        return tuple(out)

    def ref(self):
        """An object or arrow name; ``id(a)`` names an identity."""
        t = self.tok
        n = self.name()
        if n == "id" and self.at("("):
            self.take("(")
            a = self.name()
            self.take(")")
            return ("id", a)
        return n

    # -- formulas

    def formula(self) -> Formula:
        lhs = self.f_imp()
        if self.at("-*"):
            self.i += 1
            return Formula("wand", (lhs, self.formula()))
        return lhs

    def f_imp(self):
        lhs = self.f_or()
        if self.at("->"):
            self.i += 1
            return Formula("imp", (lhs, self.f_imp()))
        return lhs

    def _left(self, sym, kind, sub):
        out = sub()
        while self.at(sym):
            self.i += 1
            out = Formula(kind, (out, sub()))
        return out

    def f_or(self):
        return self._left("|", "or", self.f_and)

    def f_and(self):
        return self._left("&", "and", self.f_star)

    def f_star(self):
        return self._left("*", "star", self.f_unary)

    def f_unary(self):
        t = self.tok
        if self.at("("):
            self.i += 1
            f = self.formula()
            self.take(")")
            return f
        if self.at("@"):
            self.i += 1
            w = self.name("world after '@'")
            return Formula("at", (self.f_unary(),), w)
        if t.kind != "name":
            raise self.error(f"expected a formula, got {t.text!r}" if t.kind == "sym" else "expected a formula")
        self.i += 1
        if t.text == "nom":
            self.take("(")
            w = self.name("world")
            self.take(")")
            return Formula("nom", (), w)
        if t.text in ("top", "bot", "emp"):
            return Formula(t.text)
        return Formula("atom", (), t.text)

    # -- terms

    def term(self, signature) -> Term:
        t = self.tok
        if t.text == "1" and t.kind == "name":
            self.i += 1
            return UNIT
        n = self.name("term")
        if self.at("("):
            self.i += 1
            args = []
            if not self.at(")"):
                args.append(self.term(signature))
                while self.at(","):
                    self.i += 1
                    args.append(self.term(signature))
            self.take(")")
            return app(n, *args)
        if signature.get(n) == 0:
            return app(n)
        return var(n)


def parse_formula(text: str) -> Formula:
    """Parse one formula, e.g. ``p * q -* @a (r -> nom(b))``."""
    p = _Parser(text, "<formula>")
    p.skip_nl()
    f = p.formula()
    p.skip_nl()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after formula")
    return f


# -- workspace ------------------------------------------------------------------


KINDS = ("category", "op", "span", "frame", "heapmodel", "theory", "algebra", "valuation", "relation", "formula")


@dataclass
class Workspace:
    """Named declarations, one namespace per kind."""

    category: dict = field(default_factory=dict)
    op: dict = field(default_factory=dict)
    span: dict = field(default_factory=dict)
    frame: dict = field(default_factory=dict)
    heapmodel: dict = field(default_factory=dict)
    theory: dict = field(default_factory=dict)
    algebra: dict = field(default_factory=dict)  # name -> (theory name, base name, {sym: op ref}, Interpretation)
    valuation: dict = field(default_factory=dict)  # name -> (model name, {atom: frozenset})
    relation: dict = field(default_factory=dict)  # name -> (A name, B name, pairs, Profunctor)
    formula: dict = field(default_factory=dict)
    poset_names: set = field(default_factory=set)  # categories declared as posets
    order: list = field(default_factory=list)  # (kind, name) in declaration order

    # -- lookups

    def get_category(self, name) -> FinCategory:
        if name in self.category:
            return self.category[name]
        m = self.frame.get(name) or self.heapmodel.get(name)
        if m is not None:
            return m.worlds
        raise SemanticError(f"unknown category {name!r}", name)

    def get_model(self, name) -> KripkeFrame:
        m = self.frame.get(name) or self.heapmodel.get(name)
        if m is None:
            raise SemanticError(f"unknown model {name!r}", name)
        return m

    def get_op(self, ref) -> PartialOp:
        """An operation name, or ``id(C)`` for the identity operation on ``C``."""
        m = re.fullmatch(r"id\((.+)\)", ref.strip()) if isinstance(ref, str) else None
        if m:
            return identity_op(self.get_category(m.group(1)))
        if ref not in self.op:
            raise SemanticError(f"unknown operation {ref!r}", ref)
        return self.op[ref]

    def get_profunctor(self, ref) -> Profunctor:
        """A relation name, or ``hom(C)`` for the identity profunctor on ``C``."""
        m = re.fullmatch(r"hom\((.+)\)", ref.strip())
        if m:
            return identity_prof(self.get_category(m.group(1)))
        if ref not in self.relation:
            raise SemanticError(f"unknown profunctor {ref!r}", ref)
        return self.relation[ref][3]

    def get_valuation(self, name) -> dict:
        if name not in self.valuation:
            raise SemanticError(f"unknown valuation {name!r}", name)
        return self.valuation[name][1]

    def names(self, kind) -> list:
        return [n for k, n in self.order if k == kind]

    def __eq__(self, other):
        if not isinstance(other, Workspace) or sorted(self.order) != sorted(other.order):
            return False
        if self.category != other.category or self.poset_names != other.poset_names:
            return False
        for n, op in self.op.items():
            if not strong_equal(op, other.op[n]):
                return False
        for n, s in self.span.items():
            t = other.span[n]
            if (s.base, s.arity, s.apex, s.left.obj, s.left.mor, s.right.obj, s.right.mor) != (
                t.base, t.arity, t.apex, t.left.obj, t.left.mor, t.right.obj, t.right.mor
            ):
                return False
        for n, f in self.frame.items():
            g = other.frame[n]
            if (f.worlds, f.root) != (g.worlds, g.root):
                return False
        for n, h in self.heapmodel.items():
            g = other.heapmodel[n]
            if (h.worlds, h.root, h.unit, h.commutative, h.associative) != (g.worlds, g.root, g.unit, g.commutative, g.associative):
                return False
            if not strong_equal(h.join, g.join):
                return False
        for n, t in self.theory.items():
            u = other.theory[n]
            if (t.signature, t.equations) != (u.signature, u.equations):
                return False
        if {n: a[:3] for n, a in self.algebra.items()} != {n: a[:3] for n, a in other.algebra.items()}:
            return False
        if self.valuation != other.valuation or self.formula != other.formula:
            return False
        return {n: r[:3] for n, r in self.relation.items()} == {n: r[:3] for n, r in other.relation.items()}

    __hash__ = None


class _Loader(_Parser):
    def __init__(self, text, ws: Workspace, source=None):
        super().__init__(text, source)
        self.ws = ws

    def semantic(self, msg, culprit, tok=None):
        tok = tok or self.tok
        where = f"{self.source or '<input>'}:{tok.line}:{tok.col}: "
        return SemanticError(where + msg, culprit)

    def declare(self, kind, name, tok, value):
        if name in getattr(self.ws, kind):
            raise self.semantic(f"{kind} {name!r} is declared twice", name, tok)
        getattr(self.ws, kind)[name] = value
        self.ws.order.append((kind, name))

    def run(self):
        while True:
            self.skip_nl()
            if self.tok.kind == "eof":
                return
            t = self.tok
            kw = self.name("declaration keyword")
            handler = getattr(self, "d_" + kw, None)
            if handler is None:
                raise self.error(f"unknown declaration {kw!r}", t)
            handler(t)

    def _guard(self, fn, culprit, tok):
        try:
            return fn()
        except (SemanticError, SizeGuard):
            raise
        except DayError as e:
            raise self.semantic(str(e), culprit, tok) from e

    # -- blocks

    def d_category(self, t):
        name = self.name("category name")
        objects, arrows, comp = [], {}, {}

        def stmt():
            st = self.tok
            kw = self.name("statement")
            if kw == "objects":
                objects.extend(self.names_until_end())
            elif kw in ("arrows", "arrow"):
                while True:
                    at = self.tok
                    f = self.name("arrow name")
                    self.take(":")
                    a = self.name("object")
                    self.take("->")
                    b = self.name("object")
                    if f in arrows:
                        raise self.semantic(f"arrow {f!r} declared twice", f, at)
                    arrows[f] = (a, b)
                    if not self.at(","):
                        break
                    self.i += 1
            elif kw == "compose":
                g = self.ref()
                self.take(".")
                f = self.ref()
                self.take("=")
                comp[(g, f)] = self.ref()
            else:
                raise self.error(f"unknown category statement {kw!r}", st)

        self.block(stmt)
        for f, (a, b) in arrows.items():
            for x in (a, b):
                if x not in objects:
                    raise self.semantic(f"arrow {f!r} uses undeclared object {x!r}", x, t)
        for (g, f), h in comp.items():
            for x in (g, f, h):
                if x not in arrows and not (isinstance(x, tuple) and x[1] in objects):
                    raise self.semantic(f"composite mentions undeclared arrow {x!r}", x, t)
        C = self._guard(lambda: from_arrows(objects, arrows, comp, name=name, check=False), name, t)
        rep = validate_category(C)
        if not rep.passed:
            bad = rep.failures[0]
            raise self.semantic(f"category {name!r} is invalid: {bad.name} {bad.detail}", name, t)
        self.declare("category", name, t, C)

    def _order_block(self, extra=None):
        elems, pairs = [], []

        def stmt():
            st = self.tok
            if self.tok.kind == "name" and self.tok.text in ("elements", "worlds", "heaps"):
                self.i += 1
                elems.extend(self.names_until_end())
                return
            if extra and self.tok.kind == "name" and extra(self.tok.text):
                return
            if self.at("order"):
                self.i += 1
            chain_ = [self.name("element")]
            while self.at("<="):
                self.i += 1
                chain_.append(self.name("element"))
            if len(chain_) < 2:
                raise self.error("expected an order statement 'a <= b'", st)
            pairs.extend(zip(chain_, chain_[1:]))

        self.block(stmt)
        return elems, pairs

    def _poset(self, name, elems, pairs, t, declared_only=False):
        for a, b in pairs:
            for x in (a, b):
                if declared_only and x not in elems:
                    raise self.semantic(f"undeclared element {x!r}", x, t)
        allx = list(dict.fromkeys(elems + [x for p in pairs for x in p]))
        return self._guard(lambda: poset_as_category(allx, pairs, name=name), name, t)

    def d_poset(self, t):
        name = self.name("poset name")
        elems, pairs = self._order_block()
        self.declare("category", name, t, self._poset(name, elems, pairs, t))
        self.ws.poset_names.add(name)

    def d_frame(self, t):
        name = self.name("frame name")
        root = []

        def extra(kw):
            if kw == "root":
                self.i += 1
                root.append(self.name("root world"))
                return True
            return False

        elems, pairs = self._order_block(extra)
        W = self._poset(name, elems, pairs, t)
        if root and root[0] not in W.objects:
            raise self.semantic(f"root {root[0]!r} is not a world", root[0], t)
        self.declare("frame", name, t, self._guard(lambda: KripkeFrame(W, root[0] if root else None, name=name), name, t))

    def d_heapmodel(self, t):
        name = self.name("heap model name")
        heaps, pairs, joins = [], [], {}
        opts = {"root": None, "unit": None, "commutative": False, "associative": False}

        def stmt():
            st = self.tok
            kw = self.name("statement")
            if kw == "heaps":
                heaps.extend(self.names_until_end())
            elif kw == "order":
                ch = [self.name("heap")]
                while self.at("<="):
                    self.i += 1
                    ch.append(self.name("heap"))
                pairs.extend(zip(ch, ch[1:]))
            elif kw == "join":
                a, b = self.name("heap"), self.name("heap")
                self.take("=")
                c = self.name("heap")
                if (a, b) in joins:
                    raise self.semantic(f"join {a} {b} given twice", (a, b), st)
                joins[(a, b)] = (c, st)
            elif kw in ("root", "unit"):
                opts[kw] = self.name("heap")
            elif kw in ("commutative", "associative"):
                opts[kw] = True
            elif self.at("<="):
                ch = [kw]
                while self.at("<="):
                    self.i += 1
                    ch.append(self.name("heap"))
                pairs.extend(zip(ch, ch[1:]))
            else:
                raise self.error(f"unknown heapmodel statement {kw!r}", st)

        self.block(stmt)
        known = set(heaps)
        for a, b in pairs:
            for x in (a, b):
                if x not in known:
                    raise self.semantic(f"undeclared heap {x!r}", x, t)
        for (a, b), (c, st) in joins.items():
            for x in (a, b, c):
                if x not in known:
                    raise self.semantic(f"undeclared heap {x!r}", x, st)
        for k in ("root", "unit"):
            if opts[k] is not None and opts[k] not in known:
                raise self.semantic(f"undeclared heap {opts[k]!r}", opts[k], t)
        H = self._poset(name, heaps, pairs, t)
        join = self._guard(lambda: partial_op(H, 2, {k: v[0] for k, v in joins.items()}, name="join"), name, t)
        M = self._guard(
            lambda: HeapModel(H, join, root=opts["root"], unit=opts["unit"], commutative=opts["commutative"],
                              associative=opts["associative"], name=name),
            name,
            t,
        )
        rep = M.validate()
        if not rep.passed:
            bad = rep.failures[0]
            raise self.semantic(f"heap model {name!r}: {bad.name} fails at {bad.detail.get('counterexample')}", name, t)
        self.declare("heapmodel", name, t, M)

    def _signature(self):
        base = self.name("category")
        self.take("^")
        n = self.name("arity")
        if not n.isdigit():
            raise self.error(f"arity must be a number, got {n!r}")
        self.take("->")
        base2 = self.name("category")
        if base2 != base:
            raise self.semantic(f"operation must land in its base category {base!r}, not {base2!r}", base2)
        return base, int(n)

    def d_op(self, t):
        name = self.name("operation name")
        self.take(":")
        base, n = self._signature()
        C = self.ws.get_category(base) if self._has_category(base) else None
        if C is None:
            raise self.semantic(f"unknown category {base!r}", base, t)
        objmap, mormap, domain = {}, {}, []

        def stmt():
            st = self.tok
            kw = self.name("statement")
            if kw == "map":
                x = self.tuple_()
                self.take("=")
                objmap[x] = (self.ref(), st)
            elif kw == "on-arrows":
                x = self.tuple_()
                self.take("=")
                mormap[x] = self.ref()
            elif kw == "domain":
                domain.append(self.tuple_())
                while self.at(","):
                    self.i += 1
                    domain.append(self.tuple_())
            else:
                raise self.error(f"unknown op statement {kw!r}", st)

        self.block(stmt)
        for x, (v, st) in objmap.items():
            if len(x) != n:
                raise self.semantic(f"map entry {x} has {len(x)} components, expected {n}", x, st)
            for y in x + (v,):
                if y not in C.objects:
                    raise self.semantic(f"{y!r} is not an object of {base}", y, st)
        if domain and set(domain) != set(objmap):
            extra = sorted(set(domain) ^ set(objmap), key=canon)[0]
            raise self.semantic(f"domain and map entries disagree at {extra}", extra, t)
        objs = {x: v for x, (v, _) in objmap.items()}
        if C.is_thin() and not mormap:
            op = self._guard(lambda: partial_op(C, n, objs, name=name), name, t)
        else:
            op = self._guard(lambda: self._op_with_arrows(C, n, objs, mormap, name), name, t)
        self.declare("op", name, t, op)

    def _has_category(self, name):
        return name in self.ws.category or name in self.ws.frame or name in self.ws.heapmodel

    def _op_with_arrows(self, C, n, objs, mormap, name):
        from .fincat import FullSubcatInclusion

        dom = FullSubcatInclusion(C.power(n), objs.keys())
        mor = {}
        for m in dom.sub.morphisms:
            if all(C.is_identity(f) for f in m):
                mor[m] = C.ident[objs[dom.sub.src[m]]]
            elif m in mormap:
                mor[m] = mormap[m]
            else:
                raise SemanticError(f"operation {name!r} needs 'on-arrows {m} = ...'", m)
        return PartialOp(C, n, dom, Functor(dom.sub, C, objs, mor, name=name), name=name)

    def d_span(self, t):
        name = self.name("span name")
        self.take(":")
        base, n = self._signature()
        if not self._has_category(base):
            raise self.semantic(f"unknown category {base!r}", base, t)
        C = self.ws.get_category(base)
        apex, lobj, robj, lmor, rmor = [], {}, {}, {}, {}

        def stmt():
            st = self.tok
            kw = self.name("statement")
            if kw == "apex":
                apex.append(self.name("category"))
            elif kw in ("left", "right", "left-arrow", "right-arrow"):
                x = self.ref()
                self.take("=")
                target = {"left": lobj, "right": robj, "left-arrow": lmor, "right-arrow": rmor}[kw]
                target[x] = self.tuple_() if kw.startswith("left") else self.ref()
            else:
                raise self.error(f"unknown span statement {kw!r}", st)

        self.block(stmt)
        if not apex or not self._has_category(apex[0]):
            raise self.semantic(f"span {name!r} needs a declared apex category", apex[0] if apex else name, t)
        A = self.ws.get_category(apex[0])
        Cn = C.power(n)

        def leg(cod, obj, mor):
            missing = [x for x in A.objects if x not in obj]
            if missing:
                raise SemanticError(f"span {name!r} leaves apex object {missing[0]!r} unmapped", missing[0])
            if cod.is_thin() and not mor:
                return thin_functor(A, cod, obj)
            full = dict(mor)
            for m in A.morphisms:
                if m not in full:
                    if A.is_identity(m):
                        full[m] = cod.ident[obj[A.src[m]]]
                    else:
                        raise SemanticError(f"span {name!r} leaves apex arrow {m!r} unmapped", m)
            return Functor(A, cod, obj, full)

        left = self._guard(lambda: leg(Cn, lobj, lmor), name, t)
        right = self._guard(lambda: leg(C, robj, rmor), name, t)
        s = SpanOp(C, n, A, left, right, name=name)
        s.apex_name = apex[0]
        self.declare("span", name, t, s)

    def d_theory(self, t):
        name = self.name("theory name")
        sig, eqs = {}, []

        def stmt():
            st = self.tok
            kw = self.name("statement")
            if kw == "ops":
                while True:
                    s = self.name("symbol")
                    self.take(":")
                    k = self.name("arity")
                    if not k.isdigit():
                        raise self.error(f"arity must be a number, got {k!r}")
                    sig[s] = int(k)
                    if not self.at(","):
                        break
                    self.i += 1
            elif kw == "eq":
                lhs = self.term(sig)
                self.take("=")
                eqs.append((lhs, self.term(sig)))
            else:
                raise self.error(f"unknown theory statement {kw!r}", st)

        self.block(stmt)
        self.declare("theory", name, t, self._guard(lambda: Theory(name, sig, eqs), name, t))

    def d_algebra(self, t):
        name = self.name("algebra name")
        self.take(":")
        th = self.name("theory")
        if self.name("'on'") != "on":
            raise self.error("expected 'on'")
        base = self.name("category")
        refs = {}

        def stmt():
            s = self.name("symbol")
            self.take("=")
            r = self.name("operation")
            if r == "id" and self.at("("):
                self.take("(")
                r = f"id({self.name('category')})"
                self.take(")")
            refs[s] = r

        self.block(stmt)
        if th not in self.ws.theory:
            raise self.semantic(f"unknown theory {th!r}", th, t)
        if not self._has_category(base):
            raise self.semantic(f"unknown category {base!r}", base, t)
        C = self.ws.get_category(base)
        theory = self.ws.theory[th]
        ops = {}
        for sym in theory.signature:
            if sym not in refs:
                raise self.semantic(f"algebra {name!r} does not interpret {sym!r}", sym, t)
        for sym, r in refs.items():
            if sym not in theory.signature:
                raise self.semantic(f"{sym!r} is not a symbol of {th}", sym, t)
            op = self._guard(lambda: self.ws.get_op(r), r, t)
            if op.base != C:
                raise self.semantic(f"operation {r!r} is not on {base}", r, t)
            ops[sym] = op
        self.declare("algebra", name, t, (th, base, dict(sorted(refs.items())), Interpretation(C, ops)))

    def d_valuation(self, t):
        name = self.name("valuation name")
        if self.name("'on'") != "on":
            raise self.error("expected 'on'")
        model = self.name("model")
        atoms = {}

        def stmt():
            st = self.tok
            a = self.name("atom")
            if a == "atom":
                a = self.name("atom")
            if a in KEYWORDS:
                raise self.error(f"{a!r} is reserved", st)
            self.take("=")
            self.take("{")
            ws = self.names_until_end()
            self.take("}")
            atoms[a] = (frozenset(ws), st)

        self.block(stmt)
        if model not in self.ws.frame and model not in self.ws.heapmodel:
            raise self.semantic(f"unknown model {model!r}", model, t)
        M = self.ws.get_model(model)
        for a, (s, st) in atoms.items():
            bad = [w for w in s if w not in M.worlds.objects]
            if bad:
                raise self.semantic(f"atom {a!r} mentions unknown world {bad[0]!r}", bad[0], st)
            try:
                check_valuation(M, {a: s})
            except DayError as e:
                raise self.semantic(str(e), a, st) from e
        self.declare("valuation", name, t, (model, {a: s for a, (s, _) in atoms.items()}))

    def d_relation(self, t):
        name = self.name("relation name")
        self.take(":")
        A = self.name("category")
        self.take("-|->")
        B = self.name("category")
        pairs = []

        def stmt():
            a = self.name("element")
            self.take("~")
            pairs.append((a, self.name("element")))

        self.block(stmt)
        for x in (A, B):
            if not self._has_category(x):
                raise self.semantic(f"unknown category {x!r}", x, t)
        CA, CB = self.ws.get_category(A), self.ws.get_category(B)
        for a, b in pairs:
            if a not in CA.objects:
                raise self.semantic(f"{a!r} is not an object of {A}", a, t)
            if b not in CB.objects:
                raise self.semantic(f"{b!r} is not an object of {B}", b, t)
        P = self._guard(lambda: relation_profunctor(CA, CB, pairs, name=name), name, t)
        self.declare("relation", name, t, (A, B, frozenset(pairs), P))

    def d_formula(self, t):
        name = self.name("formula name")
        self.take("=")
        f = self.formula()
        if self.tok.kind not in ("nl", "eof") and not self.at(";"):
            raise self.error(f"unexpected {self.tok.text!r} after formula")
        self.declare("formula", name, t, f)


def parse_workspace(texts, sources=None) -> Workspace:
    """Load one or more workspace texts into a single validated :class:`Workspace`."""
    if isinstance(texts, str):
        texts = [texts]
    sources = sources or [None] * len(texts)
    ws = Workspace()
    for text, src in zip(texts, sources):
        _Loader(text, ws, src).run()
    return ws


def load_files(paths) -> Workspace:
    texts, names = [], []
    for p in paths:
        with open(p, encoding="utf-8") as fh:
            texts.append(fh.read())
        names.append(str(p))
    return parse_workspace(texts, names)


# -- serialization -------------------------------------------------------------


def _r(x) -> str:
    if isinstance(x, tuple) and len(x) == 2 and x[0] == "id":
        return f"id({x[1]})"
    return str(x)


def _tup(x) -> str:
    return "(" + ", ".join(_r(y) for y in x) + ")"


def _names(xs) -> str:
    return " ".join(str(x) for x in canon_sorted(xs))


def _covers(P: FinCategory) -> list:
    return [m for m in P.generators()]


def serialize(ws: Workspace) -> str:
    """Canonical text for ``ws``; parsing it gives back an equal workspace."""
    out = []
    for kind, name in ws.order:
        fn = globals()["_ser_" + kind]
        out.append(fn(ws, name))
    return "\n".join(out)


def _ser_category(ws, name):
    C = ws.category[name]
    if name in ws.poset_names:
        lines = [f"poset {name} {{", f"  elements {_names(C.objects)}"]
        lines += [f"  {a} <= {b}" for a, b in _covers(C)]
        return "\n".join(lines + ["}"]) + "\n"
    lines = [f"category {name} {{", f"  objects {_names(C.objects)}"]
    for m in C.non_identities():
        lines.append(f"  arrow {m}: {C.src[m]} -> {C.tgt[m]}")
    for (g, f), h in sorted(C.comp.items(), key=lambda kv: canon(kv[0])):
        if not C.is_identity(g) and not C.is_identity(f):
            lines.append(f"  compose {g}.{f} = {_r(h)}")
    return "\n".join(lines + ["}"]) + "\n"


def _ser_frame(ws, name):
    F = ws.frame[name]
    lines = [f"frame {name} {{", f"  worlds {_names(F.worlds.objects)}"]
    lines += [f"  {a} <= {b}" for a, b in _covers(F.worlds)]
    if F.root is not None:
        lines.append(f"  root {F.root}")
    return "\n".join(lines + ["}"]) + "\n"


def _ser_heapmodel(ws, name):
    M = ws.heapmodel[name]
    lines = [f"heapmodel {name} {{", f"  heaps {_names(M.worlds.objects)}"]
    lines += [f"  order {a} <= {b}" for a, b in _covers(M.worlds)]
    for x in canon_sorted(M.join.domain.objects):
        lines.append(f"  join {x[0]} {x[1]} = {M.join(*x)}")
    for k in ("unit", "root"):
        if getattr(M, k) is not None:
            lines.append(f"  {k} {getattr(M, k)}")
    for k in ("commutative", "associative"):
        if getattr(M, k):
            lines.append(f"  {k}")
    return "\n".join(lines + ["}"]) + "\n"


def _base_name(ws, C):
    for n in ws.names("category") + ws.names("frame") + ws.names("heapmodel"):
        if ws.get_category(n) == C:
            return n
    raise SemanticError("operation base category is not declared", C.name)


def _ser_op(ws, name):
    op = ws.op[name]
    C = op.base
    lines = [f"op {name} : {_base_name(ws, C)}^{op.arity} -> {_base_name(ws, C)} {{"]
    for x in canon_sorted(op.domain.objects):
        lines.append(f"  map {_tup(x)} = {op(*x)}")
    if not C.is_thin():
        D = op.domain.sub
        for m in canon_sorted(D.morphisms):
            if not all(C.is_identity(f) for f in m):
                lines.append(f"  on-arrows {_tup(m)} = {_r(op.action.mor[m])}")
    return "\n".join(lines + ["}"]) + "\n"


def _ser_span(ws, name):
    s = ws.span[name]
    C = s.base
    b = _base_name(ws, C)
    lines = [f"span {name} : {b}^{s.arity} -> {b} {{", f"  apex {s.apex_name}"]
    for x in canon_sorted(s.apex.objects):
        lines.append(f"  left {_r(x)} = {_tup(s.left.obj[x])}")
        lines.append(f"  right {_r(x)} = {_r(s.right.obj[x])}")
    if not C.is_thin():
        for m in canon_sorted(s.apex.morphisms):
            if not s.apex.is_identity(m):
                lines.append(f"  left-arrow {_r(m)} = {_tup(s.left.mor[m])}")
                lines.append(f"  right-arrow {_r(m)} = {_r(s.right.mor[m])}")
    return "\n".join(lines + ["}"]) + "\n"


def _ser_theory(ws, name):
    th = ws.theory[name]
    lines = [f"theory {name} {{"]
    if th.signature:
        lines.append("  ops " + ", ".join(f"{s}:{k}" for s, k in th.signature.items()))
    for lhs, rhs in th.equations:
        lines.append(f"  eq {lhs} = {rhs}")
    return "\n".join(lines + ["}"]) + "\n"


def _ser_algebra(ws, name):
    th, base, refs, _ = ws.algebra[name]
    lines = [f"algebra {name} : {th} on {base} {{"] + [f"  {s} = {r}" for s, r in refs.items()]
    return "\n".join(lines + ["}"]) + "\n"


def _ser_valuation(ws, name):
    model, atoms = ws.valuation[name]
    lines = [f"valuation {name} on {model} {{"]
    lines += [f"  atom {a} = {{{_names(s).replace(' ', ', ')}}}" for a, s in atoms.items()]
    return "\n".join(lines + ["}"]) + "\n"


def _ser_relation(ws, name):
    A, B, pairs, _ = ws.relation[name]
    lines = [f"relation {name} : {A} -|-> {B} {{"] + [f"  {a} ~ {b}" for a, b in canon_sorted(pairs)]
    return "\n".join(lines + ["}"]) + "\n"


def _ser_formula(ws, name):
    return f"formula {name} = {ws.formula[name]}\n"
