"""Command-line front end.

Exit codes: 0 success or pass, 1 a check failed, 2 usage, parse or budget error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import checks, congruence, core, green, morphisms
from .core import BudgetExceeded, PartitionError, Product, format_element, to_json
from .enumerate import MAX_DEGREE, GeneratorSet, closure, enumerate_family, resolve_family
from .universe import TABLE_BUDGET

FAMILIES = ("c", "istar", "pistar", "wpistar", "i", "s")


class UsageError(Exception):
    pass


# -- output helpers -------------------------------------------------------


def _emit_elements(elements, emit, out):
    if emit == "json":
        json.dump([to_json(a) for a in elements], out)
        out.write("\n")
    else:
        for a in elements:
            out.write((json.dumps(to_json(a)) if emit == "jsonl" else format_element(a)) + "\n")


def _emit_obj(obj, emit, out, text_lines):
    if emit in ("json", "jsonl"):
        json.dump(obj, out)
        out.write("\n")
    else:
        for line in text_lines:
            out.write(line + "\n")


def _parse(text, degree=None, fill_points=False):
    try:
        return core.parse(text, degree, fill_points)
    except PartitionError as exc:
        raise UsageError(str(exc)) from None


def _universe(args, limit=None):
    fam = args.family or "pistar"
    if args.n is None:
        raise UsageError("--n is required")
    family, product = resolve_family(fam)
    if args.op:
        product = Product(args.op)
    limit = MAX_DEGREE[family] if limit is None else limit
    try:
        u = enumerate_family(family, args.n, product, max_degree=limit)
    except BudgetExceeded as exc:
        raise UsageError(str(exc)) from None
    if args.budget_elements is not None and len(u) > args.budget_elements:
        raise UsageError(f"{len(u)} elements exceed --budget-elements {args.budget_elements}")
    u.name = f"{fam}_{args.n}"
    return u


def _table_universe(args):
    u = _universe(args)
    budget = args.budget_elements or TABLE_BUDGET
    if len(u) > budget:
        raise UsageError(f"{u.name} has {len(u)} elements; this command needs a table (budget {budget})")
    return u


def _sets_as_elements(u, sets):
    return [[format_element(u.elements[i]) for i in sorted(T)] for T in sets]


# -- commands -------------------------------------------------------------


def cmd_multiply(args, out):
    a, b = _parse(args.lhs), _parse(args.rhs)
    op = Product(args.op or "natural")
    try:
        c = core.multiply(a, b, op)
    except PartitionError as exc:
        raise UsageError(str(exc)) from None
    _emit_elements([c], "jsonl" if args.emit in ("json", "jsonl") else "text", out)
    return 0


def cmd_check(args, out):
    cid = args.id
    if cid != "all" and cid not in checks.REGISTRY:
        raise UsageError(f"unknown check id {cid!r}; known: all, {', '.join(checks.REGISTRY)}")
    n = 3 if args.n is None else args.n
    if cid == "all":
        reports = checks.run_all(n, args.family)
    else:
        reports = [checks.run_check(cid, n, args.family)]
    for r in reports:
        if args.emit == "text":
            out.write(f"{r['id']:24s} n={r['n']} {r['status']:5s} {r['runtime']:.3f}s\n")
            for w in r["witnesses"][:5]:
                out.write(f"    {json.dumps(w)}\n")
        else:
            out.write(json.dumps(r) + "\n")
    statuses = {r["status"] for r in reports}
    if "fail" in statuses:
        return 1
    if cid != "all" and statuses == {"skip"}:
        return 2
    return 0


def cmd_enumerate(args, out):
    u = _universe(args)
    _emit_elements(u.elements, args.emit, out)
    return 0


def cmd_closure(args, out):
    texts = []
    for g in args.gens:
        if g.startswith("@"):
            try:
                with open(g[1:]) as fh:
                    texts += [line.strip() for line in fh if line.strip() and not line.startswith("#")]
            except OSError as exc:
                raise UsageError(str(exc)) from None
        else:
            texts.append(g)
    if not texts:
        raise UsageError("no generators given")
    gens = [_parse(t, args.n) for t in texts]
    op = Product(args.op or "natural")
    try:
        gs = GeneratorSet(op, gens, with_inverses=args.inverses)
        u = closure(gs, budget=args.budget_elements or 5000)
    except (PartitionError, BudgetExceeded) as exc:
        raise UsageError(str(exc)) from None
    _emit_elements(u.elements, args.emit, out)
    return 0


def cmd_green(args, out):
    u = _universe(args)
    rel = green.green_classes(u, args.relation)
    classes = rel.classes()
    obj = {
        "family": u.name,
        "relation": args.relation,
        "classes": len(classes),
        "sizes": [len(c) for c in classes],
        "representatives": [format_element(u.elements[c[0]]) for c in classes],
    }
    lines = [f"{args.relation}-classes: {len(classes)}"]
    lines += [f"{len(c)}\t{format_element(u.elements[c[0]])}" for c in classes]
    _emit_obj(obj, args.emit, out, lines)
    return 0


def cmd_congruences(args, out):
    u = _table_universe(args)
    lattice = congruence.enumerate_congruences(u, budget=args.budget_elements or congruence.CONGRUENCE_BUDGET)
    obj = {
        "family": u.name,
        "count": len(lattice),
        "congruences": [{"classes": r.num_classes, "class_sizes": r.class_sizes()} for r in lattice],
    }
    lines = [f"{len(lattice)} congruences on {u.name}"]
    lines += [f"{r.num_classes} classes, sizes {r.class_sizes()}" for r in lattice]
    _emit_obj(obj, args.emit, out, lines)
    return 0


def cmd_isolated(args, out):
    u = _table_universe(args)
    found = congruence.completely_isolated(u) if args.completely else congruence.isolated(u)
    kind = "completely isolated" if args.completely else "isolated"
    members = _sets_as_elements(u, found)
    obj = {"family": u.name, "kind": kind, "count": len(found), "subsemigroups": members}
    lines = [f"{len(found)} {kind} subsemigroups of {u.name}"]
    for k, m in enumerate(members):
        lines.append(f"# {k + 1}: {len(m)} elements")
        lines += m
    _emit_obj(obj, args.emit, out, lines)
    return 0


def cmd_represent(args, out):
    args.family = args.family or "pistar"
    if args.family != "pistar":
        raise UsageError("represent works on pistar")
    u = _universe(args)
    f = _parse(args.idempotent, args.n, fill_points=True)
    if core.star_mul(f, f) != f:
        raise UsageError(f"{f} is not idempotent")
    rep = morphisms.representation(u, f)
    rows = [(a, rep.as_element(a)) for a in u.elements]
    obj = {
        "idempotent": format_element(f),
        "cosets": [format_element(c) for c in rep.space.keys],
        "degree": rep.degree,
        "faithful": morphisms.is_faithful(rep),
        "table": [{"element": format_element(a), "image": format_element(img)} for a, img in rows],
    }
    lines = [f"# {rep.degree} cosets, faithful={obj['faithful']}"]
    lines += [f"{k + 1}\t{c}" for k, c in enumerate(obj["cosets"])]
    lines += [f"{format_element(a)}\t{format_element(img)}" for a, img in rows]
    _emit_obj(obj, args.emit, out, lines)
    return 0


def cmd_automorphisms(args, out):
    args.family = args.family or "pistar"
    u = _table_universe(args)
    auts = morphisms.automorphisms(u)
    gens = congruence.generating_set(u)
    inner = {
        morphisms.conjugation_aut([-b[1] for b in p.blocks], u).images: [-b[1] for b in p.blocks]
        for p in core.permutations(u.degree)
    }
    maps = []
    for a in auts:
        maps.append(
            {
                "conjugation_by": inner.get(a.images),
                "generator_images": {format_element(u.elements[g]): format_element(u.elements[a.images[g]]) for g in gens},
            }
        )
    obj = {"family": u.name, "count": len(auts), "automorphisms": maps}
    lines = [f"{len(auts)} automorphisms of {u.name}"]
    lines += [f"conjugation by {m['conjugation_by']}" for m in maps]
    _emit_obj(obj, args.emit, out, lines)
    return 0


def cmd_sample(args, out):
    """Random elements of a family, for property checks outside the test suite."""
    u = _universe(args, limit=MAX_DEGREE[resolve_family(args.family or "pistar")[0]])
    rng = random.Random(args.seed)
    _emit_elements([rng.choice(u.elements) for _ in range(args.count)], args.emit, out)
    return 0


# -- parser ---------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="degree")
    common.add_argument("--family", choices=FAMILIES)
    common.add_argument("--op", choices=[p.value for p in Product])
    common.add_argument("--emit", choices=("text", "json", "jsonl"), default="text")
    common.add_argument("--budget-elements", type=int, dest="budget_elements")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="partsemi", description="Exact computation in finite partition semigroups.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("multiply", parents=[common], help="product of two elements")
    s.add_argument("lhs")
    s.add_argument("rhs")
    s.set_defaults(func=cmd_multiply)

    s = sub.add_parser("check", parents=[common], help="run a registered verification")
    s.add_argument("id", help="check id, or 'all'")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("enumerate", parents=[common], help="list every element of a family")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("closure", parents=[common], help="close a generator set")
    s.add_argument("--gens", nargs="+", required=True, help="elements, or @file with one per line")
    s.add_argument("--inverses", action="store_true", help="also close under inverses")
    s.set_defaults(func=cmd_closure)

    s = sub.add_parser("green", parents=[common], help="Green's classes")
    s.add_argument("--relation", choices=("R", "L", "H", "D", "J"), default="D")
    s.set_defaults(func=cmd_green)

    s = sub.add_parser("congruences", parents=[common], help="the congruence lattice")
    s.set_defaults(func=cmd_congruences)

    s = sub.add_parser("isolated", parents=[common], help="isolated subsemigroups")
    s.add_argument("--completely", action="store_true")
    s.set_defaults(func=cmd_isolated)

    s = sub.add_parser("represent", parents=[common], help="representation on ω-cosets of an idempotent")
    s.add_argument("--idempotent", required=True, help="lines only; unmentioned points become singletons")
    s.set_defaults(func=cmd_represent)

    s = sub.add_parser("automorphisms", parents=[common], help="automorphism group")
    s.set_defaults(func=cmd_automorphisms)

    s = sub.add_parser("sample", parents=[common], help="random elements of a family")
    s.add_argument("--count", type=int, default=10)
    s.set_defaults(func=cmd_sample)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
