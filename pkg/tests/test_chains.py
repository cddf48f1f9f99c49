import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from powerdisc import simplicial as sm
from powerdisc.chains import (ChainComplex, IntegralHomology, SparseMatrix, TruncationError,
                              check_snf, dense_rank_mod_p, homology, homotopy_exponent,
                              module_complex, moore_homotopy, normalized_chains, nullspace_mod_p,
                              rank_mod_p, smith_normal_form, unnormalized_chains)
from powerdisc.cosimplicial import constant, mapping_cosimplicial
from powerdisc.fincat import FinSet

from conftest import random_small_simplicial

matrices = st.integers(0, 5).flatmap(lambda r: st.integers(0, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    .map(lambda rows: (rows, c))))


def test_snf_examples():
    res = smith_normal_form(SparseMatrix.from_dense([[2, 4], [6, 8]]))
    assert res.diagonal == [2, 4]
    assert check_snf(SparseMatrix.from_dense([[2, 4], [6, 8]]), res)
    eye = SparseMatrix.from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert smith_normal_form(eye).diagonal == [1, 1, 1]
    zero = SparseMatrix.zeros(2, 3)
    res = smith_normal_form(zero)
    assert res.rank == 0 and all(d == 0 for d in res.diagonal)


@given(matrices)
def test_snf_certificate(data):
    rows, ncols = data
    a = SparseMatrix.from_dense(rows, ncols)
    res = smith_normal_form(a)
    assert check_snf(a, res)
    bare = smith_normal_form(a, transforms=False)
    assert bare.rank == res.rank
    assert bare.invariant_factors() == res.invariant_factors()


@given(matrices, st.sampled_from([2, 3, 5]))
def test_rank_mod_p_agrees_with_dense(data, p):
    rows, ncols = data
    a = SparseMatrix.from_dense(rows, ncols)
    dense = np.array(rows, dtype=np.int64).reshape(len(rows), ncols)
    assert rank_mod_p(a, p) == dense_rank_mod_p(dense, p)


@given(matrices, st.sampled_from([2, 3]))
def test_nullspace_mod_p(data, p):
    rows, ncols = data
    a = np.array(rows, dtype=np.int64).reshape(len(rows), ncols)
    ns = nullspace_mod_p(a, p, ncols)
    assert ns.shape == (ncols, ncols - dense_rank_mod_p(a, p))
    assert not (a @ ns % p).any()


def test_chain_examples():
    c = normalized_chains(sm.circle(2))
    assert c.ranks[:2] == [1, 1] and c.boundaries[1].is_zero()
    c = normalized_chains(sm.standard_simplex(1, 2))
    assert c.ranks[:2] == [2, 1]
    assert c.boundaries[1].to_dense() == [[-1], [1]]
    c = normalized_chains(sm.constant_simplicial(3, 3))
    assert c.ranks == [3, 0, 0, 0]


def test_homology_examples():
    assert homology(normalized_chains(sm.circle(3)), 1) == IntegralHomology(1, ())
    assert homology(normalized_chains(sm.nerve_of_abelian_group([2], 3)), 1) == IntegralHomology(0, (2,))
    assert homology(normalized_chains(sm.nerve_of_abelian_group([3], 3)), 1) == IntegralHomology(0, (3,))
    assert str(IntegralHomology(1, (2,))) == "Z + Z/2"
    assert str(IntegralHomology(0, ())) == "0"


def test_homology_refuses_top_degree():
    c = normalized_chains(sm.circle(2))
    with pytest.raises(TruncationError):
        homology(c, 2)


@given(st.integers(0, 10_000))
def test_h0_counts_components(seed):
    k = random_small_simplicial(random.Random(seed), n_top=2)
    assert homology(normalized_chains(k), 0).betti == sm.pi0(k)[0].size


@given(st.integers(0, 10_000))
def test_normalized_matches_unnormalized(seed):
    k = random_small_simplicial(random.Random(seed), n_top=3)
    for ring in ("Z", 2, 3):
        a, b = normalized_chains(k, ring), unnormalized_chains(k, ring)
        a.check()
        b.check()
        for n in range(3):
            assert homology(a, n) == homology(b, n)


@given(st.integers(0, 10_000), st.sampled_from([2, 3]))
def test_universal_coefficients(seed, p):
    # dim H_n(F_p) = b_n + #{p | t in T_n} + #{p | t in T_{n-1}}
    k = random_small_simplicial(random.Random(seed), n_top=3)
    cz, cp = normalized_chains(k), normalized_chains(k, p)
    hz = [homology(cz, n) for n in range(3)]
    for n in range(3):
        tors = sum(1 for t in hz[n].torsion if t % p == 0)
        prev = sum(1 for t in hz[n - 1].torsion if t % p == 0) if n else 0
        assert homology(cp, n) == hz[n].betti + tors + prev


def test_moore_examples():
    m = sm.function_module(constant(FinSet(1), 3), 2)
    assert [moore_homotopy(m, n) for n in range(3)] == [1, 0, 0]
    m = sm.function_module(mapping_cosimplicial(sm.standard_simplex(1, 3), FinSet(2)), 2)
    assert [moore_homotopy(m, n) for n in range(3)] == [2, 0, 0]
    m = sm.linearize(sm.nerve_of_abelian_group([2], 3), 2)
    assert moore_homotopy(m, 1) == 1
    assert homotopy_exponent(m) == 2


@given(st.integers(0, 10_000), st.sampled_from([2, 3]))
def test_moore_matches_alternating_sum(seed, p):
    rng = random.Random(seed)
    if rng.random() < 0.5:
        m = sm.linearize(random_small_simplicial(rng, n_top=3), p)
    else:
        y = random_small_simplicial(rng, n_top=3)
        s = rng.randint(1, 2)
        if s ** max(y.sizes) > 300:
            return
        m = sm.function_module(mapping_cosimplicial(y, FinSet(s)), p)
    c = module_complex(m)
    for n in range(3):
        assert moore_homotopy(m, n) == homology(c, n)


def test_chain_complex_json_roundtrip():
    c = normalized_chains(sm.nerve_of_abelian_group([2], 2))
    d = ChainComplex.from_json(c.to_json())
    assert d.ranks == c.ranks
    assert all(d.boundaries[n].to_dense() == c.boundaries[n].to_dense() for n in c.boundaries)


def test_check_rejects_non_complex():
    bad = ChainComplex("Z", [1, 1, 1], {1: SparseMatrix.from_dense([[1]]), 2: SparseMatrix.from_dense([[1]])})
    with pytest.raises(ArithmeticError):
        bad.check()
