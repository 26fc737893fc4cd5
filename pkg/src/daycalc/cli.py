"""Command line front end.

    daycalc eval FILES --model M --valuation V --formula TEXT
    daycalc check KIND FILES [options]
    daycalc compose FILES --prof S,R | --op T --args A,B
    daycalc parse FILES

Exit status: 0 when every check passes, 1 when some check fails, 2 for
usage, syntax or semantic errors, 3 when a size guard is exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from importlib import resources

from . import config
from .day import adjunction_check, indicator, representable, route_equivalence
from .dsl import Workspace, load_files, parse_formula, parse_workspace, serialize
from .errors import DayError, SizeGuard
from .fincat import strong_equal, validate_category
from .kripke import Evaluator, Oracle, bi_adjunction_check, check_valuation
from .operad import (
    DayWitness,
    PerturbedWitness,
    check_algebra,
    coherence_check,
    day_pseudomorphism_check,
    lax_witness_search,
    multi_compose,
    multi_compose_pullback,
)
from .prof import (
    associator_witness,
    cell_violations,
    compose,
    is_iso,
    profunctor_violations,
    support_pairs,
    unitor_witness,
)
from .report import Report, show

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3

CHECKS = ("category", "algebra", "pseudomorphism", "coherence", "adjunction", "route-equivalence", "lax-witness", "galois")


def bundled_files() -> list:
    """Paths of the example workspace shipped with the package."""
    root = resources.files("daycalc") / "workspace"
    return sorted(str(p) for p in root.iterdir() if p.name.endswith(".day"))


class UsageError(DayError):
    pass


def _workspace(args) -> Workspace:
    files = list(args.files)
    if args.bundled:
        files = bundled_files() + files
    if not files:
        return Workspace()
    return load_files(files)


def _op_list(ws, text):
    return [ws.get_op(r) for r in _split_refs(text)]


def _split_refs(text) -> list:
    """Split on commas outside parentheses, so ``id(C),max`` has two items."""
    out, depth, cur = [], 0, ""
    for ch in text or "":
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def _copresheaf(ws, C, ref):
    """``VALUATION.atom``, ``rep(x)`` or ``up(x)``."""
    if ref.startswith("rep(") and ref.endswith(")"):
        x = ref[4:-1]
        if x not in C.objects:
            raise UsageError(f"{x!r} is not an object of {C.name}")
        return representable(C, x)
    if ref.startswith("up(") and ref.endswith(")"):
        x = ref[3:-1]
        if x not in C.objects:
            raise UsageError(f"{x!r} is not an object of {C.name}")
        return indicator(C, [C.tgt[m] for m in C.out_of(x)])
    if "." in ref:
        vname, atom = ref.split(".", 1)
        model, atoms = ws.valuation.get(vname, (None, None))
        if atoms is None or atom not in atoms:
            raise UsageError(f"unknown input {ref!r}")
        if ws.get_model(model).worlds != C:
            raise UsageError(f"valuation {vname} is not over {C.name}")
        return indicator(C, atoms[atom])
    raise UsageError(f"cannot read input {ref!r}; use VALUATION.atom, rep(x) or up(x)")


def _inputs(ws, C, args, n, rng):
    refs = _split_refs(args.inputs)
    if refs:
        if len(refs) != n:
            raise UsageError(f"expected {n} inputs, got {len(refs)}")
        return [_copresheaf(ws, C, r) for r in refs]
    from .gen import random_copresheaf

    out = []
    for _ in range(n):
        # empty inputs make every check vacuous, so draw again
        for _ in range(50):
            F = random_copresheaf(rng, C)
            if F.size():
                break
        out.append(F)
    return out


def _need(args, *names):
    for n in names:
        if not getattr(args, n):
            raise UsageError(f"this command needs --{n.replace('_', '-')}")


# -- commands ---------------------------------------------------------------------


def cmd_eval(args, ws) -> Report:
    _need(args, "model")
    model = ws.get_model(args.model)
    valuation = ws.get_valuation(args.valuation) if args.valuation else {}
    if args.formula:
        f = parse_formula(args.formula)
    elif args.name:
        if args.name not in ws.formula:
            raise UsageError(f"unknown formula {args.name!r}")
        f = ws.formula[args.name]
    else:
        raise UsageError("eval needs --formula or --name")
    check_valuation(model, valuation)
    got = Evaluator(model, args.at).eval(f, valuation)
    want = Oracle(model).eval(f, valuation)
    r = Report(f"eval {f} on {model.name}")
    r.add("agrees with direct semantics", got == want, differs_at=sorted(map(show, got ^ want)) or None)
    r.data["formula"] = str(f)
    r.data["table"] = {show(w): ("true" if w in got else "false") for w in model.worlds.objects}
    r.data["holds at"] = sorted(show(w) for w in got) if got else []
    return r


def cmd_check(args, ws) -> Report:
    kind = args.kind
    rng = random.Random(args.seed)
    if kind == "category":
        names = [args.name] if args.name else (ws.names("category") + ws.names("frame") + ws.names("heapmodel"))
        r = Report("category validation")
        for n in names:
            sub = validate_category(ws.get_category(n))
            r.add(n, sub.passed, failures=[c.name for c in sub.failures] or None)
        return r
    if kind == "algebra":
        _need(args, "name")
        if args.name not in ws.algebra:
            raise UsageError(f"unknown algebra {args.name!r}")
        th, _, _, interp = ws.algebra[args.name]
        return check_algebra(ws.theory[th], interp, args.mode)
    if kind == "lax-witness":
        return lax_witness_search(args.seed, args.attempts)
    if kind == "galois":
        _need(args, "model", "phi")
        model = ws.get_model(args.model)
        ref = args.phi
        vname, _, atom = ref.partition(".")
        atoms = ws.get_valuation(vname)
        if atom not in atoms:
            raise UsageError(f"unknown atom {ref!r}")
        return bi_adjunction_check(model, atoms[atom], seed=args.seed)
    _need(args, "op")
    theta = ws.get_op(args.op)
    C = theta.base
    if kind == "route-equivalence":
        fs = _inputs(ws, C, args, theta.arity, rng)
        return route_equivalence(theta, fs)
    if kind == "adjunction":
        j = args.slot
        if not 1 <= j <= theta.arity:
            raise UsageError(f"--slot must lie in 1..{theta.arity}")
        fs = _inputs(ws, C, args, theta.arity, rng)
        targets = _split_refs(args.target)
        G = _copresheaf(ws, C, targets[0]) if targets else _inputs(ws, C, argparse.Namespace(inputs=None), 1, rng)[0]
        G2 = _copresheaf(ws, C, targets[1]) if len(targets) > 1 else _inputs(ws, C, argparse.Namespace(inputs=None), 1, rng)[0]
        return adjunction_check(theta, j, fs, G, G2)
    thetas = _op_list(ws, args.args)
    if len(thetas) != theta.arity:
        raise UsageError(f"--args must list {theta.arity} operations")
    if kind == "pseudomorphism":
        total = sum(t.arity for t in thetas)
        flat = _inputs(ws, C, args, total, rng)
        fss, k = [], 0
        for t in thetas:
            fss.append(flat[k:k + t.arity])
            k += t.arity
        return day_pseudomorphism_check(theta, thetas, fss)
    if kind == "coherence":
        groups = [g for g in (args.inner or "").split(";")]
        if len(groups) != len(thetas):
            raise UsageError("--inner needs one ';'-separated group per operation in --args")
        thetass = [_op_list(ws, g) for g in groups]
        for t, ts in zip(thetas, thetass):
            if len(ts) != t.arity:
                raise UsageError(f"inner group for {t.name} must list {t.arity} operations")
        total = sum(u.arity for ts in thetass for u in ts)
        flat = _inputs(ws, C, args, total, rng)
        fss, k = [], 0
        for ts in thetass:
            row = []
            for u in ts:
                row.append(flat[k:k + u.arity])
                k += u.arity
            fss.append(row)
        witness = PerturbedWitness() if args.perturb else DayWitness()
        return coherence_check(witness, theta, thetas, thetass, fss)
    raise UsageError(f"unknown check {kind!r}")


def _value_table(P) -> dict:
    return {show(k): len(v) for k, v in P.values.items()}


def _cell_table(cell) -> dict:
    return {show(k): {show(x): show(y) for x, y in m.items()} for k, m in cell.components.items() if m}


def cmd_compose(args, ws) -> Report:
    if args.op:
        theta = ws.get_op(args.op)
        thetas = _op_list(ws, args.args)
        kind = "pullback composite" if args.pullback else "composite"
        r = Report(f"{kind} {args.op}({', '.join(_split_refs(args.args))})")
        comp = multi_compose_pullback(theta, thetas) if args.pullback else multi_compose(theta, thetas)
        r.add("composite defined", comp is not None)
        if comp is not None:
            r.data["arity"] = comp.arity
            r.data["map"] = {show(x): show(comp.action.obj[x]) for x in comp.domain.objects}
            if args.compare:
                other = ws.get_op(args.compare)
                r.add(f"strongly equal to {args.compare}", strong_equal(comp, other))
        return r
    refs = _split_refs(args.prof)
    if not 2 <= len(refs) <= 3:
        raise UsageError("--prof takes two or three profunctors, outermost first")
    ps = [ws.get_profunctor(x) for x in refs]
    r = Report(f"compose {' . '.join(refs)}")
    if len(ps) == 2:
        G, F = ps
        P = compose(G, F)
        r.add("composite is a profunctor", not profunctor_violations(P))
        r.data["sizes"] = _value_table(P)
        r.data["pairs"] = sorted(f"{show(c)} ~ {show(d)}" for c, d in support_pairs(P))
        for side, which, X in (("left", refs[0], F), ("right", refs[1], G)):
            if which.startswith("hom("):
                fwd, inv = unitor_witness(side, X, P)
                r.add(f"{side} unitor invertible", is_iso(fwd) and not cell_violations(fwd))
                r.data[f"{side} unitor"] = _cell_table(fwd)
        return r
    H, G, F = ps
    lhs = compose(compose(H, G), F)
    rhs = compose(H, compose(G, F))
    if args.bracket in ("left", "both"):
        r.add("left bracketing is a profunctor", not profunctor_violations(lhs))
        r.data["left sizes"] = _value_table(lhs)
    if args.bracket in ("right", "both"):
        r.add("right bracketing is a profunctor", not profunctor_violations(rhs))
        r.data["right sizes"] = _value_table(rhs)
    if args.bracket == "both":
        fwd, inv = associator_witness(H, G, F, lhs, rhs)
        r.add("associator natural", not cell_violations(fwd))
        r.add("associator invertible", is_iso(fwd))
        r.data["associator"] = _cell_table(fwd)
    return r


def cmd_parse(args, ws) -> Report:
    r = Report("workspace")
    text = serialize(ws)
    again = parse_workspace(text, ["<serialized>"])
    r.add("serialization reparses to the same workspace", again == ws)
    for kind in ("category", "frame", "heapmodel", "op", "span", "theory", "algebra", "valuation", "relation", "formula"):
        names = ws.names(kind)
        if names:
            r.data[kind] = names
    if args.emit:
        r.data["text"] = text.splitlines()
    return r


# -- argument parsing -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("files", nargs="*", help="workspace files")
    common.add_argument("--bundled", action="store_true", help="also load the bundled example workspace")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--guard-carrier", type=int, default=config.Settings.carrier)
    common.add_argument("--guard-enum", type=int, default=config.Settings.enum)
    common.add_argument("--out", help="also write the report as a key-value tree (JSON) to this path")
    common.add_argument("--format", choices=("text", "tree"), default="text")
    common.add_argument("--timing", action="store_true", help="append elapsed time (output is then not byte-stable)")

    p = argparse.ArgumentParser(prog="daycalc", description="Day extension and model checking on finite categories.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate a formula on a model")
    e.add_argument("--model")
    e.add_argument("--valuation")
    e.add_argument("--formula")
    e.add_argument("--name", help="a formula declared in the workspace")
    e.add_argument("--at", choices=("auto", "rooted", "span"), default="auto")

    c = sub.add_parser("check", parents=[common], help="run a law check")
    c.add_argument("kind", choices=CHECKS)
    c.add_argument("--name")
    c.add_argument("--mode", choices=("strict", "pseudo"), default="strict")
    c.add_argument("--op")
    c.add_argument("--args")
    c.add_argument("--inner")
    c.add_argument("--inputs")
    c.add_argument("--slot", type=int, default=1)
    c.add_argument("--target")
    c.add_argument("--attempts", type=int, default=500)
    c.add_argument("--perturb", action="store_true")
    c.add_argument("--model")
    c.add_argument("--phi")

    k = sub.add_parser("compose", parents=[common], help="compose profunctors or operations")
    k.add_argument("--prof")
    k.add_argument("--bracket", choices=("left", "right", "both"), default="both")
    k.add_argument("--op")
    k.add_argument("--args")
    k.add_argument("--pullback", action="store_true")
    k.add_argument("--compare")

    s = sub.add_parser("parse", parents=[common], help="load, validate and re-serialize a workspace")
    s.add_argument("--emit", action="store_true", help="include the canonical text in the report")
    return p


COMMANDS = {"eval": cmd_eval, "check": cmd_check, "compose": cmd_compose, "parse": cmd_parse}


def render(report: Report, args, echo: str, elapsed=None) -> str:
    guards = {"carrier": args.guard_carrier, "enum": args.guard_enum}
    if args.format == "tree":
        tree = {"command": echo, "guards": guards, "report": report.to_tree()}
        if elapsed is not None:
            tree["elapsed_s"] = round(elapsed, 3)
        return json.dumps(tree, indent=2) + "\n"
    head = f"command: {echo}\nguards: carrier={guards['carrier']} enum={guards['enum']}\n"
    tail = f"elapsed: {elapsed:.3f}s\n" if elapsed is not None else ""
    return head + report.to_text() + tail


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_PASS
    echo = "daycalc " + " ".join(argv)
    t0 = time.perf_counter()
    try:
        with config.settings(carrier=args.guard_carrier, enum=args.guard_enum):
            ws = _workspace(args)
            report = COMMANDS[args.command](args, ws)
    except SizeGuard as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GUARD
    except (DayError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    elapsed = time.perf_counter() - t0 if args.timing else None
    sys.stdout.write(render(report, args, echo, elapsed))
    if args.out:
        tree = {"command": echo, "guards": {"carrier": args.guard_carrier, "enum": args.guard_enum}, "report": report.to_tree()}
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(tree, fh, indent=2)
            fh.write("\n")
    return EXIT_PASS if report.passed else EXIT_FAIL
