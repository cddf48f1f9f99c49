import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from powerdisc import simplicial as sm
from powerdisc.chains import IntegralHomology, homology, normalized_chains
from powerdisc.pi1 import (GroupPresentation, VerdictKind, abelianization, canonical_relator,
                           certify_trivial, cyclic_reduce, edge_path_presentation, free_reduce,
                           inverse, tietze_simplify, todd_coxeter)

from conftest import random_small_simplicial


def pres(gens, *rels):
    return GroupPresentation(gens, tuple(tuple(r) for r in rels))


def test_word_helpers():
    assert inverse((1, -2)) == (2, -1)
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert cyclic_reduce((-1, 2, 1)) == (2,)
    assert canonical_relator((2, 1)) == canonical_relator((1, 2)) == canonical_relator((-2, -1))


def test_circle_presentation():
    p = edge_path_presentation(sm.circle(2), 0)
    assert p.generators == 1 and p.relators == ()
    assert abelianization(p) == IntegralHomology(1, ())


def test_delta2_is_trivial():
    p = edge_path_presentation(sm.standard_simplex(2, 2), 0)
    assert tietze_simplify(p).generators == 0
    assert certify_trivial(p).kind is VerdictKind.TRIVIAL


def test_nerve_z2_presentation():
    p = edge_path_presentation(sm.nerve_of_abelian_group([2], 2), 0)
    assert abelianization(p) == IntegralHomology(0, (2,))
    v = certify_trivial(p)
    assert v.kind is VerdictKind.NONTRIVIAL and v.order == 2


def test_abelianization_examples():
    assert abelianization(pres(1)) == IntegralHomology(1, ())
    assert abelianization(pres(1, (1, 1))) == IntegralHomology(0, (2,))


def test_certify_examples():
    assert certify_trivial(pres(2, (1,), (2,))).kind is VerdictKind.TRIVIAL
    v = certify_trivial(pres(1, (1, 1)))
    assert v.kind is VerdictKind.NONTRIVIAL and v.order == 2
    assert certify_trivial(pres(1), budget=10).kind is VerdictKind.INCONCLUSIVE
    with pytest.raises(ValueError):
        certify_trivial(pres(1), budget=0)


@pytest.mark.parametrize("p, order", [
    (pres(2, (1, 1), (2, 2, 2), (1, 2, 1, 2)), 6),  # S3 as <a,b | a^2, b^3, (ab)^2>
    (pres(2, (1, 1), (2, 2), (1, 2, -1, -2)), 4),
    (pres(1, (1,) * 7), 7),
    (pres(2, (1, 1, 1), (2, 2, 2), (1, 2, 1, 2)), 12),  # A4
])
def test_known_group_orders(p, order):
    table = todd_coxeter(p)
    assert table is not None and table.size == order


def _all_words(gens, length):
    letters = [g for k in range(1, gens + 1) for g in (k, -k)]
    for n in range(length + 1):
        yield from itertools.product(letters, repeat=n)


@st.composite
def small_presentation(draw):
    gens = draw(st.integers(1, 2))
    letter = st.sampled_from([g for k in range(1, gens + 1) for g in (k, -k)])
    rels = draw(st.lists(st.lists(letter, min_size=1, max_size=5), min_size=gens, max_size=gens + 2))
    return pres(gens, *rels)


@given(small_presentation())
def test_todd_coxeter_sound(p):
    table = todd_coxeter(p, budget=2000)
    if table is None:
        return
    # relators fix every coset; the action is a permutation with inverse letters
    assert table.is_consistent(p.relators)
    for w in _all_words(p.generators, 3):
        for c in range(table.size):
            assert table.act(table.act(c, w), inverse(w)) == c
    v = certify_trivial(p, budget=2000, simplify=False)
    assert v.order == table.size


@given(small_presentation())
def test_tietze_preserves_abelianization_and_order(p):
    q = tietze_simplify(p)
    assert abelianization(q) == abelianization(p)
    a, b = todd_coxeter(p, 2000), todd_coxeter(q, 2000)
    if a is not None and b is not None:
        assert a.size == b.size


@given(st.integers(0, 10_000))
def test_abelianization_matches_h1(seed):
    k = random_small_simplicial(random.Random(seed), n_top=2)
    sub, _ = sm.component(k, 0)
    h1 = homology(normalized_chains(sub), 1)
    assert abelianization(edge_path_presentation(k, 0)) == h1


def test_presentation_json_roundtrip():
    p = pres(2, (1, -2), (2, 2))
    assert GroupPresentation.from_json(p.to_json()) == p


def test_edge_path_needs_two_skeleton():
    with pytest.raises(ValueError):
        edge_path_presentation(sm.circle(1), 0)
