"""Command-line front end.

Every command prints JSON on stdout unless ``--human`` is given.  Exit codes:
0 success, 2 invalid input, 3 cap exceeded, 4 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import InvalidInput, LatkitError, ViolationFound
from .fermentable import decompose
from .generators import FamilySpec, generate, parse_spec_id
from .joincover import d_relation_direct
from .lattice import FiniteLattice, dump_lattice, hasse_dot, join_irreducibles, load_lattice
from .report import analyze, default_corpus, dumps, run_corpus
from .witnesses import (
    NonHomInstance,
    independence_check,
    modhom_witness_search,
    nonhom_check,
    perspectivity_witness,
)


def _read(path: str) -> FiniteLattice:
    if path == "-":
        return load_lattice(sys.stdin.read())
    return load_lattice(path)


def _element(L: FiniteLattice, label: str) -> int:
    try:
        return L.index(label)
    except (KeyError, ValueError):
        raise InvalidInput(f"no element labelled {label!r}") from None


def _elements(L: FiniteLattice, text: str) -> list[int]:
    return [_element(L, s) for s in text.split(";") if s != ""]


def _human(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in
                                                        (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{pad}{k}:")
                lines.append(_human(v, indent + 1))
            elif isinstance(v, dict):
                lines.append(f"{pad}{k}: " + ", ".join(f"{a}={b}" for a, b in v.items()))
            elif isinstance(v, list):
                lines.append(f"{pad}{k}: " + " ".join(map(str, v)))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}- " + _human(x, indent + 1).lstrip() for x in obj)
    return f"{pad}{obj}"


def _emit(args, obj):
    if isinstance(obj, str):
        sys.stdout.write(obj)
    elif args.human:
        sys.stdout.write(_human(obj) + "\n")
    else:
        sys.stdout.write(dumps(obj))


def cmd_gen(args):
    spec = FamilySpec(args.family, n=args.n, k=args.k, q=args.q, d=args.d, N=args.N,
                      seed=args.seed)
    text = dump_lattice(generate(spec)) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_validate(args):
    L = _read(args.file)
    _emit(args, {"valid": True, "name": L.name, "size": L.n,
                 "bottom": L.labels[L.bottom], "top": L.labels[L.top],
                 "join_irreducibles": [L.labels[x] for x in join_irreducibles(L)]})


def cmd_analyze(args):
    L = _read(args.file)
    _emit(args, analyze(L, monoid_cap=args.monoid_cap, jobs=args.jobs, monoid=args.monoid))


def cmd_decompose(args):
    L = _read(args.file)
    sigma = None if args.sigma is None else _elements(L, args.sigma)
    _emit(args, decompose(L, sigma).to_json())


def cmd_witness(args):
    L = _read(args.file)
    lab = L.labels
    if args.nonhom is not None:
        if args.c is None:
            raise InvalidInput("--nonhom needs --c")
        a = _elements(L, args.nonhom)
        inst = NonHomInstance(L, tuple(a), _element(L, args.c), args.bound)
        out = {"a": [lab[x] for x in a], "c": args.c, "N": inst.bound,
               **nonhom_check(inst).to_json()}
    elif args.independence is not None:
        fam = _elements(L, args.independence)
        ok, w = independence_check(L, fam)
        out = {"family": [lab[x] for x in fam], "independent": ok,
               "witness": None if w is None else {"i": lab[fam[w[0]]],
                                                  "Y": [lab[fam[j]] for j in w[1]]}}
    elif args.perspective is not None:
        a, b = (_element(L, s) for s in args.perspective)
        w = perspectivity_witness(L, a, b)
        out = {"a": lab[a], "b": lab[b], "perspective": w is not None,
               "c": None if w is None else lab[w.c]}
    elif args.modhom is not None:
        inst = modhom_witness_search(L, args.modhom)
        out = {"k": args.modhom, "found": inst is not None}
        if inst is not None:
            out.update(a=[lab[x] for x in inst.a], c=lab[inst.c], nonhom=nonhom_check(inst).to_json())
    else:
        raise InvalidInput("choose one of --nonhom, --independence, --perspective, --modhom")
    _emit(args, out)


def cmd_export(args):
    L = _read(args.file)
    _emit(args, hasse_dot(L) if args.dot == "hasse" else d_relation_direct(L).to_dot(L))


def cmd_corpus(args):
    if args.empty:
        specs, lattices = [], []
    else:
        specs = ([parse_spec_id(s) for s in args.spec] if args.spec
                 else ([] if args.file else default_corpus(args.random)))
        lattices = [_read(f) for f in args.file]
    rep = run_corpus(specs, lattices, jobs=args.jobs, monoid_cap=args.monoid_cap)
    _emit(args, rep)
    if rep["violations"]:
        first = rep["violations"][0]
        raise ViolationFound(first["id"], first["invariants"][0])


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="latkit", description="Finite lattice analysis.")
    p.add_argument("--human", action="store_true", help="readable text instead of JSON")
    p.add_argument("--max-n", type=int, help="largest lattice accepted (env LATKIT_MAX_N)")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a lattice from a named family")
    g.add_argument("family")
    for name in ("n", "k", "q", "d", "N", "seed"):
        g.add_argument(f"--{name}", type=int)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("validate", help="check that a file describes a lattice")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    a = sub.add_parser("analyze", help="full classification report")
    a.add_argument("file")
    a.add_argument("--jobs", type=int, default=1)
    a.add_argument("--monoid", action="store_true", help="also report the translation monoid size")
    a.add_argument("--monoid-cap", type=int, help="search cap (env LATKIT_MONOID_CAP)")
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("decompose", help="leaven decomposition with verification")
    d.add_argument("file")
    d.add_argument("--sigma", help="';'-separated labels (default: all join-irreducibles)")
    d.set_defaults(func=cmd_decompose)

    w = sub.add_parser("witness", help="non-embeddability premise checks")
    w.add_argument("file")
    w.add_argument("--nonhom", metavar="A0;A1;...")
    w.add_argument("--c")
    w.add_argument("--bound", type=int)
    w.add_argument("--independence", metavar="X;Y;...")
    w.add_argument("--perspective", nargs=2, metavar=("A", "B"))
    w.add_argument("--modhom", type=int, metavar="K")
    w.set_defaults(func=cmd_witness)

    e = sub.add_parser("export", help="DOT output")
    e.add_argument("file")
    e.add_argument("--dot", choices=("hasse", "dgraph"), default="hasse")
    e.set_defaults(func=cmd_export)

    c = sub.add_parser("corpus", help="cross-check all procedures over a corpus")
    c.add_argument("--spec", action="append", default=[], help="family spec such as 'fig1(3)'")
    c.add_argument("--file", action="append", default=[])
    c.add_argument("--random", type=int, default=200, help="random lattices in the default corpus")
    c.add_argument("--empty", action="store_true")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--monoid-cap", type=int)
    c.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    saved = os.environ.get("LATKIT_MAX_N")
    if args.max_n is not None:
        os.environ["LATKIT_MAX_N"] = str(args.max_n)
    try:
        args.func(args)
    except LatkitError as exc:
        sys.stdout.write(json.dumps(exc.to_json(), ensure_ascii=False) + "\n")
        return exc.exit_code
    finally:
        # leave the environment as found when called in-process
        if saved is None:
            os.environ.pop("LATKIT_MAX_N", None)
        else:
            os.environ["LATKIT_MAX_N"] = saved
    return 0


if __name__ == "__main__":
    sys.exit(main())
