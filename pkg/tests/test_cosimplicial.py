import random

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from powerdisc import simplicial
from powerdisc.cosimplicial import (TruncatedCosimplicialSet, constant, limit, mapping_cosimplicial,
                                    postcompose, validate)
from powerdisc.fincat import FinMap, FinSet, equalizer
from powerdisc.harness import make_base

from conftest import random_complex


def test_constant_validates():
    assert validate(constant(FinSet(2), 3)) == []


def test_mapping_of_delta1_validates():
    assert validate(mapping_cosimplicial(simplicial.standard_simplex(1, 3), FinSet(2))) == []


def test_corrupted_coface_is_reported():
    x = constant(FinSet(2), 2)
    cofaces = dict(x.cofaces)
    cofaces[2, 1] = (1, 1)
    bad = TruncatedCosimplicialSet(x.truncation, x.sizes, cofaces, x.codegeneracies)
    violations = validate(bad)
    assert violations
    assert all(v.identity for v in violations)


def test_constant_examples():
    assert constant(FinSet(0), 2).sizes == (0, 0, 0)
    assert constant(FinSet(1), 4).sizes == (1,) * 5
    lim, cone = limit(constant(FinSet(2), 3))
    assert lim.size == 2 and cone.is_identity()


def test_mapping_sizes():
    x = mapping_cosimplicial(simplicial.standard_simplex(1, 2), FinSet(2))
    assert x.sizes == (4, 8, 16)
    x = mapping_cosimplicial(simplicial.points(2, 2), FinSet(3))
    assert x.sizes[0] == 9 and limit(x)[0].size == 9


@pytest.mark.parametrize("s", [0, 1, 2, 3])
def test_mapping_of_point_is_constant(s):
    x = mapping_cosimplicial(simplicial.standard_simplex(0, 3), FinSet(s))
    c = constant(FinSet(s), 3)
    assert x.sizes == c.sizes
    assert x.cofaces == c.cofaces and x.codegeneracies == c.codegeneracies


def test_limit_examples():
    assert limit(constant(FinSet(3), 2))[0].size == 3
    assert limit(mapping_cosimplicial(simplicial.standard_simplex(1, 2), FinSet(2)))[0].size == 2
    assert limit(mapping_cosimplicial(simplicial.circle(2), FinSet(2)))[0].size == 2


def test_limit_is_equalizer_of_level_one_cofaces():
    x = mapping_cosimplicial(simplicial.points(2, 2), FinSet(2))
    lim, cone = limit(x)
    e, inc = equalizer(x.coface(1, 0), x.coface(1, 1))
    assert lim.size == e.size and cone.table == inc.table


def test_limit_checks_identities():
    x = constant(FinSet(2), 2)
    cofaces = dict(x.cofaces)
    cofaces[2, 0] = (0, 0)
    with pytest.raises(ValueError):
        limit(TruncatedCosimplicialSet(x.truncation, x.sizes, cofaces, x.codegeneracies))


@given(st.integers(0, 10_000), st.integers(0, 3))
def test_limit_counts_components(seed, s):
    y = random_complex(random.Random(seed), n_top=2, max_vertices=4)
    assume(s ** max(y.sizes) <= 4096)
    comps, _ = simplicial.pi0(y)
    x = mapping_cosimplicial(y, FinSet(s))
    assert validate(x) == []
    assert limit(x)[0].size == s ** comps.size


@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(1, 3), st.data())
def test_postcomposition_is_natural(seed, s, t, data):
    y = random_complex(random.Random(seed), n_top=2, max_vertices=3)
    assume(max(s, t) ** max(y.sizes) <= 4096)
    table = data.draw(st.lists(st.integers(0, t - 1), min_size=s, max_size=s))
    f = FinMap(FinSet(s), FinSet(t), table)
    x, x2 = mapping_cosimplicial(y, FinSet(s)), mapping_cosimplicial(y, FinSet(t))
    for (n, i), tab in x.cofaces.items():
        d, d2 = FinMap(x.level(n - 1), x.level(n), tab), FinMap(x2.level(n - 1), x2.level(n), x2.cofaces[n, i])
        assert d.then(postcompose(y, f, n)) == postcompose(y, f, n - 1).then(d2)


def test_json_roundtrip_and_truncate():
    x = mapping_cosimplicial(make_base("delta0+delta1", 3), FinSet(2))
    assert TruncatedCosimplicialSet.from_json(x.to_json()) == x
    t = x.truncate(1)
    assert t.sizes == x.sizes[:2] and validate(t) == []
