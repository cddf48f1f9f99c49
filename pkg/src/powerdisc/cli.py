"""Command line entry point: ``powerdisc <subcommand> ...``.

Exit codes for ``verify`` and ``corpus --verify``: 0 when every report is
DISCRETE-VERIFIED, 2 when some report is PARTIAL, 1 when any FAILED.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import boolean, chains, cosimplicial, harness, pi1, simplicial
from .fincat import FinSet


def _load(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _emit(obj, path: str | None = None):
    text = json.dumps(obj, sort_keys=True, indent=2)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _parse_object(data):
    if "cofaces" in data:
        return cosimplicial.TruncatedCosimplicialSet.from_json(data)
    if "faces" in data:
        return simplicial.TruncatedSimplicialSet.from_json(data)
    raise ValueError("input is neither a cosimplicial nor a simplicial set")


def _as_simplicial(obj, cap: int):
    if isinstance(obj, cosimplicial.TruncatedCosimplicialSet):
        return simplicial.powerset_apply(obj, cap)
    return obj


def _exit_code(reports) -> int:
    verdicts = {r.verdict for r in reports}
    if harness.FAILED in verdicts:
        return 1
    if harness.PARTIAL in verdicts:
        return 2
    return 0


def _options(args) -> harness.Options:
    return harness.Options(max_degree=args.max_degree, ell=args.ell, coset_budget=args.coset_budget,
                           level_cap=args.level_cap,
                           snf_limit=None if args.snf_limit <= 0 else args.snf_limit)


def _verify_one(obj, opts, descriptor):
    if isinstance(obj, cosimplicial.TruncatedCosimplicialSet):
        return harness.verify_discreteness(obj, opts, descriptor)
    return harness.verify_simplicial(obj, opts, descriptor)


def cmd_verify(args) -> int:
    data = _load(args.input)
    items = data if isinstance(data, list) else [data]
    reports = []
    for k, item in enumerate(items):
        desc = item.get("descriptor", {"index": k}) if isinstance(item, dict) else {"index": k}
        reports.append(_verify_one(_parse_object(item), _options(args), desc))
    out = [r.to_json() for r in reports]
    _emit(out if isinstance(data, list) else out[0], args.report)
    if args.report:
        for r in reports:
            print(f"{json.dumps(r.instance, sort_keys=True)}: {r.verdict}")
    return _exit_code(reports)


def cmd_powerset(args) -> int:
    x = cosimplicial.TruncatedCosimplicialSet.from_json(_load(args.input))
    k = simplicial.powerset_apply(x, args.level_cap)
    if args.out:
        _emit(k.to_json(), args.out)
    print(json.dumps({"levels": list(k.sizes), "violations": len(k.validate())}))
    return 0


def cmd_homology(args) -> int:
    k = _as_simplicial(_parse_object(_load(args.input)), args.level_cap)
    ring = "Z" if args.ring.upper() == "Z" else int(args.ring)
    c = chains.normalized_chains(k, ring)
    degrees = [args.degree] if args.degree is not None else range(k.truncation)
    out = {}
    for n in degrees:
        h = chains.homology(c, n)
        out[str(n)] = {"betti": h.betti, "torsion": list(h.torsion)} if ring == "Z" else {"dimension": h}
    _emit({"ring": ring, "ranks": c.ranks, "homology": out})
    return 0


def cmd_pi0(args) -> int:
    k = _as_simplicial(_parse_object(_load(args.input)), args.level_cap)
    comps, cls = simplicial.pi0(k)
    _emit({"components": comps.size, "classmap": list(cls.table)})
    return 0


def cmd_pi1(args) -> int:
    k = _as_simplicial(_parse_object(_load(args.input)), args.level_cap)
    pres = pi1.edge_path_presentation(k, args.basepoint)
    verdict = pi1.certify_trivial(pres, args.coset_budget)
    ab = pi1.abelianization(pres)
    out = {"presentation": pres.to_json() if args.show_presentation else
           {"generators": pres.generators, "relators": len(pres.relators)},
           "simplified": verdict.presentation.to_json(),
           "abelianization": {"betti": ab.betti, "torsion": list(ab.torsion)}}
    out.update(verdict.to_json())
    _emit(out)
    return 0


def cmd_stone(args) -> int:
    if args.query == "spectrum":
        r = boolean.ring_from_set(FinSet(args.size), args.p)
        pts = boolean.spectrum(r)
        _emit({"p": args.p, "ring_order": r.order, "points": pts.size,
               "idempotents": [list(e) for e in boolean.primitive_idempotents(r)]})
    elif args.query == "hom":
        r1 = boolean.ring_from_set(FinSet(args.size), args.p)
        r2 = boolean.ring_from_set(FinSet(args.target_size), args.p)
        homs = boolean.hom_set(r1, r2, check=True)
        _emit({"count": len(homs), "dual_maps": [list(f.dual.table) for f in homs]})
    else:
        rels = [boolean.polynomial_from_json(r) for r in _load(args.relations)] if args.relations else []
        pts = boolean.phi_fixed_points(args.n, args.p, rels)
        _emit({"n": args.n, "p": args.p, "count": pts.size, "points": list(pts.labels or ())})
    return 0


def cmd_corpus(args) -> int:
    spec = _load(args.spec) if args.spec else None
    corpus = harness.generate_corpus(spec)
    if not args.verify:
        _emit([dict(inst.cosimplicial.to_json(), descriptor=inst.descriptor) for inst in corpus], args.out)
        return 0
    reports = [harness.verify_discreteness(inst.cosimplicial, _options(args), inst.descriptor)
               for inst in corpus]
    for r in reports:
        print(f"{json.dumps(r.instance, sort_keys=True)}: {r.verdict}")
    if args.out:
        _emit([r.to_json() for r in reports], args.out)
    return _exit_code(reports)


def _add_verify_options(p):
    p.add_argument("--max-degree", type=int, default=None, help="highest homotopy degree to certify")
    p.add_argument("--ell", type=int, default=3, help="companion prime")
    p.add_argument("--coset-budget", type=int, default=pi1.DEFAULT_COSET_BUDGET)
    p.add_argument("--level-cap", type=int, default=simplicial.DEFAULT_LEVEL_CAP)
    p.add_argument("--snf-limit", type=int, default=chains.SNF_GENERATOR_LIMIT,
                   help="skip integral SNF above this many generators (<= 0: never skip)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="powerdisc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="discreteness certificate for a cosimplicial (or simplicial) set")
    p.add_argument("input")
    p.add_argument("--report", default=None)
    _add_verify_options(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("powerset", help="levelwise power set of a cosimplicial set")
    p.add_argument("input")
    p.add_argument("--out", default=None)
    p.add_argument("--level-cap", type=int, default=simplicial.DEFAULT_LEVEL_CAP)
    p.set_defaults(func=cmd_powerset)

    for name, func, helptext in (("homology", cmd_homology, "normalized homology"),
                                 ("pi0", cmd_pi0, "connected components"),
                                 ("pi1", cmd_pi1, "edge-path group and triviality certificate")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("input")
        p.add_argument("--level-cap", type=int, default=simplicial.DEFAULT_LEVEL_CAP)
        if name == "homology":
            p.add_argument("--ring", default="Z", help="Z or a prime p")
            p.add_argument("--degree", type=int, default=None)
        if name == "pi1":
            p.add_argument("--basepoint", type=int, default=0)
            p.add_argument("--coset-budget", type=int, default=pi1.DEFAULT_COSET_BUDGET)
            p.add_argument("--show-presentation", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("stone", help="spectra, hom counts and Frobenius-fixed points")
    p.add_argument("query", choices=["spectrum", "hom", "phi"])
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--size", type=int, default=2)
    p.add_argument("--target-size", type=int, default=1)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--relations", default=None, help="JSON list of polynomials")
    p.set_defaults(func=cmd_stone)

    p = sub.add_parser("corpus", help="generate (and optionally verify) the instance corpus")
    p.add_argument("--spec", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--verify", action="store_true")
    _add_verify_options(p)
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
