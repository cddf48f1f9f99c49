import itertools
import random

import pytest
from hypothesis import settings

from powerdisc import simplicial

settings.register_profile("default", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("default")


def random_complex(rng: random.Random, n_top: int = 3, max_vertices: int = 5):
    """Random simplicial complex (facets of dimension <= 2) as a simplicial set."""
    nv = rng.randint(1, max_vertices)
    facets = [(v,) for v in range(nv)]
    for e in itertools.combinations(range(nv), 2):
        if rng.random() < 0.5:
            facets.append(e)
    for t in itertools.combinations(range(nv), 3):
        if rng.random() < 0.3:
            facets.append(t)
    return simplicial.from_simplicial_complex(facets, n_top)


def random_small_simplicial(rng: random.Random, n_top: int = 3):
    """Mix of complexes, nerves, circles and unions of those."""
    kind = rng.randrange(5)
    if kind == 0:
        return simplicial.nerve_of_abelian_group([rng.choice([2, 3])], n_top)
    if kind == 1:
        return simplicial.disjoint_union(simplicial.circle(n_top), random_complex(rng, n_top, 3))
    return random_complex(rng, n_top)


@pytest.fixture
def rng():
    return random.Random(20240601)
