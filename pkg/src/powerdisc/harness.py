"""End-to-end discreteness certificates for power sets of cosimplicial finite sets."""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from typing import Any

from . import chains, cosimplicial, pi1, simplicial
from .fincat import FinSet, retract_of_power, verify_retract
from .simplicial import DEFAULT_LEVEL_CAP, TruncatedSimplicialSet

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

DISCRETE = "DISCRETE-VERIFIED"
FAILED = "FAILED"
PARTIAL = "PARTIAL"


@dataclass
class Options:
    max_degree: int | None = None
    ell: int = 3
    coset_budget: int = pi1.DEFAULT_COSET_BUDGET
    level_cap: int = DEFAULT_LEVEL_CAP
    snf_limit: int | None = chains.SNF_GENERATOR_LIMIT


@dataclass
class VerificationReport:
    instance: dict
    truncation: int
    level_sizes: list[int]
    limit_size: int | None = None
    pi0_size: int | None = None
    pi0_expected: int | None = None
    pi0_match: bool | None = None
    pi0_bijection: list[int] | None = None
    materialized_levels: int | None = None
    integral_homology: dict = field(default_factory=dict)
    moore_f2: dict = field(default_factory=dict)
    moore_ell: dict = field(default_factory=dict)
    pi1: list = field(default_factory=list)
    retract: dict | None = None
    skips: list = field(default_factory=list)
    verdict: str = ""
    detail: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"schema": SCHEMA_VERSION}
        for k, v in self.__dict__.items():
            out[k] = v
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _homology_json(h: chains.IntegralHomology) -> dict:
    return {"betti": h.betti, "torsion": list(h.torsion), "group": str(h)}


# ---------------------------------------------------------------- pieces

def pi0_bijection(x, k: TruncatedSimplicialSet, limit_cone) -> tuple[bool, list[int]]:
    """Check that U |-> U restricted to the limit induces pi0(P(X)) = P(limit).

    Returns (is_bijection, table) where table[c] is the bitmask over the limit
    assigned to component c.
    """
    comps, cls = simplicial.pi0(k)
    cone = limit_cone.table

    def restrict(u: int) -> int:
        return sum(1 << j for j, a in enumerate(cone) if u >> a & 1)

    table: dict[int, int] = {}
    for u in range(k.sizes[0]):
        c, v = cls.table[u], restrict(u)
        if table.setdefault(c, v) != v:
            return False, []
    values = [table[c] for c in range(comps.size)]
    ok = sorted(values) == list(range(1 << len(cone)))
    return ok, values


def integral_block(k: TruncatedSimplicialSet, top: int, limit: int | None) -> tuple[dict, list]:
    """Reduced integral homology in degrees 1..top-1 of the materialized levels."""
    out, skips = {}, []
    bases = [len(simplicial.nondegenerate(k, n)) for n in range(k.truncation + 1)]
    for n in range(1, top):
        if n + 1 > k.truncation:
            skips.append({"stage": "integral", "degree": n, "reason": "level not materialized"})
            continue
        big = max(bases[n - 1], bases[n], bases[n + 1])
        if limit is not None and big > limit:
            skips.append({"stage": "integral", "degree": n,
                          "reason": f"{big} generators exceed SNF limit {limit}"})
            continue
        c = chains.normalized_chains(k.truncate(n + 1))
        out[str(n)] = _homology_json(chains.homology(c, n))
    return out, skips


def pi1_block(k: TruncatedSimplicialSet, budget: int) -> list[dict]:
    """pi1 verdict at the smallest vertex of every component."""
    comps, cls = simplicial.pi0(k)
    reps: dict[int, int] = {}
    for v, c in enumerate(cls.table):
        reps.setdefault(c, v)
    out = []
    for c in range(comps.size):
        pres = pi1.edge_path_presentation(k, reps[c])
        verdict = pi1.certify_trivial(pres, budget)
        ab = pi1.abelianization(verdict.presentation)
        entry = {"basepoint": reps[c], "generators": pres.generators,
                 "relators": len(pres.relators), "abelianization": _homology_json(ab)}
        entry.update(verdict.to_json())
        out.append(entry)
    return out


def _overall_pi1(entries: list[dict]) -> str:
    kinds = {e["verdict"] for e in entries}
    if "NontrivialOfOrder" in kinds:
        return "NontrivialOfOrder"
    if "Inconclusive" in kinds:
        return "Inconclusive"
    return "Trivial"


# ---------------------------------------------------------------- pipelines

def verify_discreteness(x: cosimplicial.TruncatedCosimplicialSet, options: Options | None = None,
                        descriptor: dict | None = None) -> VerificationReport:
    opts = options or Options()
    bad = cosimplicial.validate(x)
    if bad:
        raise ValueError(f"not a cosimplicial set: {bad[0]}")
    top = x.truncation if opts.max_degree is None else min(x.truncation, opts.max_degree + 1)
    x = x.truncate(top)
    rep = VerificationReport(descriptor or {}, top, list(x.sizes))

    lim, cone = cosimplicial.limit(x, check=False)
    rep.limit_size = lim.size
    rep.pi0_expected = 1 << lim.size

    m = simplicial.materializable_prefix(x, opts.level_cap)
    rep.materialized_levels = m
    if m < 1:
        rep.skips.append({"stage": "powerset", "reason": f"level 1 exceeds cap {opts.level_cap}"})
    else:
        k = simplicial.powerset_apply(x.truncate(m), opts.level_cap)
        if m < top:
            rep.skips.append({"stage": "powerset", "reason": f"levels {m + 1}..{top} exceed cap {opts.level_cap}"})
        comps, _ = simplicial.pi0(k)
        rep.pi0_size = comps.size
        ok, table = pi0_bijection(x, k, cone)
        rep.pi0_match = ok and comps.size == rep.pi0_expected
        rep.pi0_bijection = table
        homology, skips = integral_block(k, top, opts.snf_limit)
        rep.integral_homology = homology
        rep.skips.extend(skips)
        if m >= 2:
            rep.pi1 = pi1_block(k.truncate(2), opts.coset_budget)
        else:
            rep.skips.append({"stage": "pi1", "reason": "level 2 not materialized"})

    f2 = simplicial.function_module(x, 2)
    rep.moore_f2 = {str(n): chains.moore_homotopy(f2, n) for n in range(top)}
    fl = simplicial.function_module(x, opts.ell)
    rep.moore_ell = {str(n): chains.moore_homotopy(fl, n) for n in range(top)}

    n, i, r = retract_of_power(FinSet(2), FinSet(opts.ell))
    rep.retract = {"p": 2, "ell": opts.ell, "n": n, "inclusion": list(i.table),
                   "verified": verify_retract(i, r)}

    _decide(rep, expect_pi0=True)
    return rep


def verify_simplicial(k: TruncatedSimplicialSet, options: Options | None = None,
                      descriptor: dict | None = None) -> VerificationReport:
    """Direct mode: certify (or refute) discreteness of a given simplicial set."""
    opts = options or Options()
    bad = k.validate()
    if bad:
        raise ValueError(f"not a simplicial set: {bad[0]}")
    top = k.truncation if opts.max_degree is None else min(k.truncation, opts.max_degree + 1)
    k = k.truncate(top)
    rep = VerificationReport(descriptor or {}, top, list(k.sizes))
    rep.materialized_levels = top
    comps, _ = simplicial.pi0(k)
    rep.pi0_size = comps.size
    rep.integral_homology, rep.skips = integral_block(k, top, opts.snf_limit)
    lin = simplicial.linearize(k, 2)
    # for a bare simplicial set this is H_n(K; F_2), not a homotopy group
    rep.moore_f2 = {str(n): chains.moore_homotopy(lin, n) for n in range(top)}
    if top >= 2:
        rep.pi1 = pi1_block(k.truncate(2), opts.coset_budget)
    _decide(rep, expect_pi0=False)
    return rep


def _decide(rep: VerificationReport, expect_pi0: bool) -> None:
    detail = []
    if expect_pi0 and rep.pi0_match is False:
        detail.append(f"pi0 has {rep.pi0_size} components, expected {rep.pi0_expected}")
    for n, h in sorted(rep.integral_homology.items()):
        if h["group"] != "0":
            detail.append(f"H_{n}(Z) = {h['group']}")
    if expect_pi0:
        for n, d in sorted(rep.moore_f2.items()):
            if n != "0" and d:
                detail.append(f"Moore pi_{n}(F_2) has dimension {d}")
        for n, d in sorted(rep.moore_ell.items()):
            if n != "0" and d:
                detail.append(f"Moore pi_{n}(F_ell) has dimension {d}")
        if rep.moore_f2.get("0") != rep.limit_size:
            detail.append("Moore pi_0(F_2) dimension differs from the limit size")
    pi1_kind = _overall_pi1(rep.pi1) if rep.pi1 else None
    if pi1_kind == "NontrivialOfOrder":
        orders = [e.get("order") for e in rep.pi1 if e["verdict"] == "NontrivialOfOrder"]
        detail.append(f"pi1 nontrivial of order {orders[0]}")
    if rep.retract is not None and not rep.retract["verified"]:
        detail.append("retract certificate failed")

    if detail:
        rep.verdict, rep.detail = FAILED, detail
        return
    qualifiers = []
    if pi1_kind is None:
        qualifiers.append("pi1 not computed")
    elif pi1_kind == "Inconclusive":
        qualifiers.append("pi1 inconclusive")
    if expect_pi0 and rep.pi0_match is None:
        qualifiers.append("pi0 not computed")
    if qualifiers:
        rep.verdict, rep.detail = PARTIAL, qualifiers
    else:
        rep.verdict, rep.detail = DISCRETE, []


# ---------------------------------------------------------------- corpus

BASES = ("delta0", "delta1", "delta2", "two_points", "three_points", "circle", "nerve_z2")


def make_base(name: str, n_top: int) -> TruncatedSimplicialSet:
    """Base simplicial set by name; ``a+b`` is a disjoint union."""
    if "+" in name:
        parts = [make_base(p, n_top) for p in name.split("+")]
        out = parts[0]
        for p in parts[1:]:
            out = simplicial.disjoint_union(out, p)
        return out
    if name == "delta0":
        return simplicial.standard_simplex(0, n_top)
    if name == "delta1":
        return simplicial.standard_simplex(1, n_top)
    if name == "delta2":
        return simplicial.standard_simplex(2, n_top)
    if name == "two_points":
        return simplicial.points(2, n_top)
    if name == "three_points":
        return simplicial.points(3, n_top)
    if name == "circle":
        return simplicial.circle(n_top)
    if name == "boundary_delta2":
        return simplicial.from_simplicial_complex([(0, 1), (1, 2), (0, 2)], n_top)
    if name == "nerve_z2":
        return simplicial.nerve_of_abelian_group([2], n_top)
    if name == "nerve_z3":
        return simplicial.nerve_of_abelian_group([3], n_top)
    raise ValueError(f"unknown base {name!r}")


DEFAULT_CORPUS_SPEC = {
    "bases": ["delta0", "delta1", "delta2", "two_points", "circle",
              "delta0+circle", "delta0+delta1", "three_points", "nerve_z2"],
    "targets": [0, 1, 2, 3],
    "truncations": [3, 4],
    "level_cap": DEFAULT_LEVEL_CAP,
    "module_cap": 1024,
    "seed": 0,
    "random_unions": 0,
}


@dataclass
class CorpusInstance:
    descriptor: dict
    cosimplicial: Any


def _level_sizes(base_sizes, target: int) -> list[int]:
    return [target ** m for m in base_sizes]


def generate_corpus(spec: dict | None = None) -> list[CorpusInstance]:
    """Mapping instances Map(Y, S) for every base Y, target size |S| and truncation N.

    An instance is kept when levels 0..2 fit the level cap (so pi0 and pi1
    are computable) and every level fits ``module_cap`` for the F_p Moore
    computation.  ``random_unions`` adds seeded disjoint unions of two bases.
    """
    spec = {**DEFAULT_CORPUS_SPEC, **(spec or {})}
    bases = list(spec["bases"])
    rng = random.Random(spec["seed"])
    for _ in range(spec["random_unions"]):
        a, b = rng.choice(BASES[:6]), rng.choice(BASES[:6])
        bases.append(f"{a}+{b}")
    out = []
    for name in bases:
        for n_top in spec["truncations"]:
            y = make_base(name, n_top)
            for t in spec["targets"]:
                sizes = _level_sizes(y.sizes, t)
                if any(s > spec["level_cap"] for s in sizes[:3]):
                    continue
                if any(s > spec["module_cap"] for s in sizes):
                    continue
                x = cosimplicial.mapping_cosimplicial(y, FinSet(t))
                bad = cosimplicial.validate(x)
                if bad:
                    raise AssertionError(f"corpus instance {name}/{t}/{n_top} invalid: {bad[0]}")
                out.append(CorpusInstance({"base": name, "target": t, "truncation": n_top}, x))
    return out


def negative_controls(n_top: int = 3) -> dict[str, TruncatedSimplicialSet]:
    return {
        "nerve_z2": simplicial.nerve_of_abelian_group([2], n_top),
        "nerve_z3": simplicial.nerve_of_abelian_group([3], n_top),
        "circle": simplicial.circle(n_top),
    }
