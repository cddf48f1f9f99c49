"""Acceptance suite: one PASS/FAIL line per criterion, exact comparisons only."""

import random
import time

import pytest

from powerdisc import boolean as bo
from powerdisc import chains, harness, pi1, simplicial as sm
from powerdisc.chains import IntegralHomology, homology, normalized_chains, unnormalized_chains
from powerdisc.cosimplicial import mapping_cosimplicial
from powerdisc.fincat import FinMap, FinSet, digits, retract_of_power, verify_retract

from conftest import random_small_simplicial


@pytest.fixture
def report(capsys):
    def emit(number, ok, message):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {message}")
        assert ok, message
    return emit


@pytest.fixture(scope="module")
def corpus():
    return harness.generate_corpus()


def test_criterion_1_corpus_discreteness(report, corpus):
    start = time.perf_counter()
    problems = []
    for inst in corpus:
        rep = harness.verify_discreteness(inst.cosimplicial, harness.Options(), inst.descriptor)
        tag = inst.descriptor
        if not rep.pi0_match or rep.pi0_size != 2 ** rep.limit_size:
            problems.append(f"{tag}: pi0 {rep.pi0_size} vs 2^{rep.limit_size}")
        if sorted(rep.pi0_bijection or []) != list(range(2 ** rep.limit_size)):
            problems.append(f"{tag}: no bijection to P(limit)")
        if any(h["group"] != "0" for h in rep.integral_homology.values()):
            problems.append(f"{tag}: nonzero integral homology")
        if any(d for n, d in rep.moore_f2.items() if n != "0"):
            problems.append(f"{tag}: nonzero Moore homotopy over F_2")
        if not rep.pi1 or any(e["verdict"] != "Trivial" for e in rep.pi1):
            problems.append(f"{tag}: pi1 not certified trivial")
        if rep.verdict != harness.DISCRETE:
            problems.append(f"{tag}: verdict {rep.verdict}")
    elapsed = time.perf_counter() - start
    ok = len(corpus) >= 20 and not problems and elapsed < 300
    report(1, ok, f"{len(corpus)} instances, {len(problems)} problems, {elapsed:.1f}s"
           + (f"; first: {problems[0]}" if problems else ""))


def test_criterion_2_negative_controls(report):
    controls = harness.negative_controls(3)
    h1 = {name: homology(normalized_chains(k), 1) for name, k in controls.items()}
    verdicts = {name: pi1.certify_trivial(pi1.edge_path_presentation(k, 0)) for name, k in controls.items()}
    circle_ab = pi1.abelianization(pi1.edge_path_presentation(controls["circle"], 0))
    ok = (h1["nerve_z2"] == IntegralHomology(0, (2,))
          and verdicts["nerve_z2"].kind is pi1.VerdictKind.NONTRIVIAL and verdicts["nerve_z2"].order == 2
          and h1["nerve_z3"] == IntegralHomology(0, (3,))
          and h1["circle"] == IntegralHomology(1, ())
          and verdicts["circle"].kind in (pi1.VerdictKind.INCONCLUSIVE, pi1.VerdictKind.NONTRIVIAL)
          and circle_ab == IntegralHomology(1, ()))
    report(2, ok, f"H1(BZ/2)={h1['nerve_z2']}, pi1(BZ/2)={verdicts['nerve_z2'].kind.value}"
           f"({verdicts['nerve_z2'].order}), H1(BZ/3)={h1['nerve_z3']}, H1(S1)={h1['circle']}, "
           f"pi1(S1)={verdicts['circle'].kind.value}, ab(S1)={circle_ab}")


def test_criterion_3_frobenius_fixed_points(report):
    cases = [(2, n) for n in range(1, 9)] + [(3, n) for n in range(1, 6)] + [(5, n) for n in range(1, 4)]
    start = time.perf_counter()
    wrong = [(p, n) for p, n in cases if bo.phi_fixed_points(n, p, []).size != p ** n]
    elapsed = time.perf_counter() - start
    report(3, not wrong and elapsed < 1.0, f"{len(cases)} cases, mismatches {wrong}, {elapsed:.3f}s")


def _empty_counterexamples():
    # phi, psi: A -> A + A are the two inclusions, sigma folds; they agree nowhere
    for a in range(1, 4):
        A, B = FinSet(a), FinSet(2 * a)
        yield (FinMap(A, B, range(a)), FinMap(A, B, range(a, 2 * a)),
               FinMap(B, A, [x % a for x in range(2 * a)]))


def test_criterion_4_one_projectivity(report):
    rng = random.Random(4)
    failures = 0
    for _ in range(200):
        phi, psi, sigma = bo.random_reflexive_pair(rng, max_size=7)
        s = FinSet(rng.randint(1, 4))
        if not bo.one_projectivity_check(s, phi, psi, sigma).holds:
            failures += 1
    empty = [bo.one_projectivity_check(FinSet(0), *triple) for triple in _empty_counterexamples()]
    empty_ok = all(r.kind is bo.ProjectivityKind.FAILS and r.witness for r in empty)
    report(4, failures == 0 and empty_ok,
           f"200 random pairs, {failures} failures; empty-target family Fails with witness: {empty_ok}")


def test_criterion_5_retracts(report):
    bad = []
    for s in range(1, 31):
        for t in (2, 3, 5, 7):
            n, i, r = retract_of_power(FinSet(s), FinSet(t))
            if not verify_retract(i, r) or i.cod.size != t ** n:
                bad.append((s, t))
    n, i, _ = retract_of_power(FinSet(3), FinSet(2))
    example = n == 2 and digits(i, n, 2) == [(0, 0), (0, 1), (1, 0)]
    report(5, not bad and example, f"120 pairs, failures {bad}; {{0,1,2}} into {{0,1}}^2: {example}")


def test_criterion_6_oracle_equivalences(report, corpus):
    rng = random.Random(6)
    norm_bad = 0
    for _ in range(50):
        k = random_small_simplicial(rng, n_top=3)
        for ring in ("Z", 2, 3):
            a, b = normalized_chains(k, ring), unnormalized_chains(k, ring)
            if any(homology(a, n) != homology(b, n) for n in range(3)):
                norm_bad += 1

    moore_bad, modules = 0, 0
    while modules < 50:
        p = (2, 3)[modules % 2]
        if rng.random() < 0.5:
            m = sm.linearize(random_small_simplicial(rng, n_top=3), p)
        else:
            y = random_small_simplicial(rng, n_top=3)
            s = rng.randint(1, 2)
            if s ** max(y.sizes) > 300:
                continue
            m = sm.function_module(mapping_cosimplicial(y, FinSet(s)), p)
        c = chains.module_complex(m)
        if any(chains.moore_homotopy(m, n) != homology(c, n) for n in range(3)):
            moore_bad += 1
        modules += 1

    ab_bad, checked = [], 0
    for inst in corpus:
        k = sm.powerset_apply(inst.cosimplicial.truncate(2))
        _, cls = sm.pi0(k)
        reps = {}
        for v, c in enumerate(cls.table):
            reps.setdefault(c, v)
        for v in reps.values():
            sub, _ = sm.component(k, v)
            h1 = homology(normalized_chains(sub), 1)
            ab = pi1.abelianization(pi1.edge_path_presentation(k, v))
            checked += 1
            if h1 != ab:
                ab_bad.append((inst.descriptor, v, str(h1), str(ab)))
    ok = norm_bad == 0 and moore_bad == 0 and not ab_bad
    report(6, ok, f"normalized/unnormalized mismatches {norm_bad}/50; Moore/alternating mismatches "
           f"{moore_bad}/{modules}; abelianization vs H1 mismatches {len(ab_bad)}/{checked} components")


def test_criterion_7_stone_duality(report):
    bad = []
    for p in (2, 3, 5):
        for a in range(9):
            s = FinSet(a, tuple(f"s{j}" for j in range(a)))
            r = bo.ring_from_set(s, p)
            pts = bo.spectrum(r)
            back = bo.ring_from_set(pts, p)
            if pts != s or back.order != r.order or len(bo.hom_set(r, bo.ring_from_set(FinSet(1), p))) != a:
                bad.append(("roundtrip", p, a))
            for b in range(9):
                r2 = bo.ring_from_set(FinSet(b), p)
                if bo.hom_count_by_idempotents(r, r2) != a ** b:
                    bad.append(("count", p, a, b))
                if a ** b <= 4096 and len(bo.hom_set(r, r2, check=True)) != a ** b:
                    bad.append(("enumerate", p, a, b))
    for p, a, b in [(2, 2, 2), (2, 3, 2), (3, 2, 2), (2, 2, 3)]:
        r1, r2 = bo.ring_from_set(FinSet(a), p), bo.ring_from_set(FinSet(b), p)
        if bo.linear_ring_maps_brute_force(r1, r2) != a ** b:
            bad.append(("matrices", p, a, b))

    for size in range(9):
        alg = bo.ClopenAlgebra(bo.constant_tower(FinSet(size), 3))
        if alg.distinct_up_to(3) != 2 ** size:
            bad.append(("constant tower", size))
        # the map clopen -> subset of S respects the Boolean operations
        for u in range(min(2 ** size, 16)):
            for v in range(min(2 ** size, 16)):
                x, y = bo.Clopen(0, u), bo.Clopen(3, v)
                if (alg.meet(x, y).mask != u & v or alg.join(x, y).mask != u | v
                        or alg.pullback(alg.complement(x), 3).mask != (2 ** size - 1) & ~u):
                    bad.append(("constant tower ops", size, u, v))
    alg = bo.ClopenAlgebra(bo.binary_tower(3))
    binary = [alg.distinct_up_to(k) for k in range(4)]
    if binary != [2 ** 2 ** k for k in range(4)]:
        bad.append(("binary tower", binary))
    report(7, not bad, f"spectra and hom counts for |S| <= 8, p in (2,3,5); constant tower = P(S); "
           f"binary tower counts {binary}; problems {bad[:3]}")
