"""Truncated simplicial finite sets and simplicial F_p-modules.

A :class:`TruncatedSimplicialSet` stores level sizes and index tables:
``faces[n, i]`` is ``d_i: K_n -> K_{n-1}`` and ``degeneracies[n, i]`` is
``s_i: K_n -> K_{n+1}``.  The power-set construction lives here as well,
since it turns a cosimplicial set into one of these.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .fincat import FinMap, FinSet, UnionFind, mixed_radix_decode, mixed_radix_encode

if TYPE_CHECKING:
    from .cosimplicial import TruncatedCosimplicialSet

DEFAULT_LEVEL_CAP = 16


class StructureError(ValueError):
    """Tables of the wrong shape, as opposed to identity violations."""


class LevelCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    identity: str
    indices: tuple[int, ...]
    element: int

    def __str__(self):
        return f"{self.identity} at (i,j,n)={self.indices}, element {self.element}"


def _compose(first: Sequence[int], second: Sequence[int]) -> list[int]:
    return [second[v] for v in first]


def _check_tables(sizes, maps, expected, kind):
    for key, (src, dst) in expected.items():
        if key not in maps:
            raise StructureError(f"missing {kind} {key}")
        table = maps[key]
        if len(table) != sizes[src]:
            raise StructureError(f"{kind} {key} has length {len(table)}, expected {sizes[src]}")
        if any(not 0 <= v < sizes[dst] for v in table):
            raise StructureError(f"{kind} {key} leaves its codomain")
    extra = set(maps) - set(expected)
    if extra:
        raise StructureError(f"unexpected {kind} keys {sorted(extra)}")


def _diff(name, idx, lhs, rhs):
    for x, (a, b) in enumerate(zip(lhs, rhs)):
        if a != b:
            return Violation(name, idx, x)
    return None


@dataclass(frozen=True)
class TruncatedSimplicialSet:
    truncation: int
    sizes: tuple[int, ...]
    faces: dict = field(hash=False)
    degeneracies: dict = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(self.sizes))
        if self.truncation < 0 or len(self.sizes) != self.truncation + 1:
            raise StructureError("need one level size per degree 0..N")
        faces = {k: tuple(v) for k, v in self.faces.items()}
        degens = {k: tuple(v) for k, v in self.degeneracies.items()}
        object.__setattr__(self, "faces", faces)
        object.__setattr__(self, "degeneracies", degens)
        n_top = self.truncation
        _check_tables(self.sizes, faces,
                      {(n, i): (n, n - 1) for n in range(1, n_top + 1) for i in range(n + 1)}, "face")
        _check_tables(self.sizes, degens,
                      {(n, i): (n, n + 1) for n in range(n_top) for i in range(n + 1)}, "degeneracy")

    def level(self, n: int) -> FinSet:
        return FinSet(self.sizes[n])

    def face(self, n: int, i: int) -> FinMap:
        return FinMap(self.level(n), self.level(n - 1), self.faces[n, i])

    def degeneracy(self, n: int, i: int) -> FinMap:
        return FinMap(self.level(n), self.level(n + 1), self.degeneracies[n, i])

    def vertex(self, n: int, x: int, k: int = 0) -> int:
        """The k-th vertex of an n-simplex."""
        # drop every index but k: faces d_n..d_{k+1} then d_0 k times
        for m in range(n, k, -1):
            x = self.faces[m, m][x]
        for m in range(k, 0, -1):
            x = self.faces[m, 0][x]
        return x

    def validate(self) -> list[Violation]:
        """All simplicial identities that fail inside the truncation."""
        out = []
        d, s, top = self.faces, self.degeneracies, self.truncation
        # d_i d_j = d_{j-1} d_i  (i < j) on K_n
        for n in range(2, top + 1):
            for j in range(n + 1):
                for i in range(j):
                    v = _diff("d_i d_j = d_{j-1} d_i", (i, j, n),
                              _compose(d[n, j], d[n - 1, i]), _compose(d[n, i], d[n - 1, j - 1]))
                    if v:
                        out.append(v)
        # s_i s_j = s_{j+1} s_i  (i <= j) on K_n
        for n in range(top - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    v = _diff("s_i s_j = s_{j+1} s_i", (i, j, n),
                              _compose(s[n, j], s[n + 1, i]), _compose(s[n, i], s[n + 1, j + 1]))
                    if v:
                        out.append(v)
        # d_i s_j on K_n, s_j: K_n -> K_{n+1}, d_i: K_{n+1} -> K_n
        for n in range(top):
            for j in range(n + 1):
                for i in range(n + 2):
                    lhs = _compose(s[n, j], d[n + 1, i])
                    if i < j:
                        rhs = _compose(d[n, i], s[n - 1, j - 1])
                        name = "d_i s_j = s_{j-1} d_i"
                    elif i in (j, j + 1):
                        rhs = list(range(self.sizes[n]))
                        name = "d_i s_j = id"
                    else:
                        rhs = _compose(d[n, i - 1], s[n - 1, j])
                        name = "d_i s_j = s_j d_{i-1}"
                    v = _diff(name, (i, j, n), lhs, rhs)
                    if v:
                        out.append(v)
        return out

    def truncate(self, n_top: int) -> TruncatedSimplicialSet:
        return TruncatedSimplicialSet(
            n_top, self.sizes[: n_top + 1],
            {k: v for k, v in self.faces.items() if k[0] <= n_top},
            {k: v for k, v in self.degeneracies.items() if k[0] < n_top},
        )

    def to_json(self) -> dict:
        return {
            "truncation": self.truncation,
            "levels": list(self.sizes),
            "faces": {f"{n},{i}": list(t) for (n, i), t in sorted(self.faces.items())},
            "degeneracies": {f"{n},{i}": list(t) for (n, i), t in sorted(self.degeneracies.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> TruncatedSimplicialSet:
        def keyed(d):
            return {tuple(int(x) for x in k.split(",")): tuple(v) for k, v in d.items()}
        return cls(int(data["truncation"]), tuple(data["levels"]),
                   keyed(data["faces"]), keyed(data["degeneracies"]))


# ---------------------------------------------------------------- constructions

def from_vertex_sequences(levels: Sequence[Sequence[tuple]], n_top: int) -> TruncatedSimplicialSet:
    """Simplicial set whose n-simplices are the given vertex tuples of length n+1.

    Faces delete an entry and degeneracies repeat one; the lists must be
    closed under both.
    """
    index = [{t: k for k, t in enumerate(lv)} for lv in levels]
    faces, degens = {}, {}
    for n in range(1, n_top + 1):
        for i in range(n + 1):
            faces[n, i] = tuple(index[n - 1][t[:i] + t[i + 1:]] for t in levels[n])
    for n in range(n_top):
        for i in range(n + 1):
            degens[n, i] = tuple(index[n + 1][t[: i + 1] + t[i:]] for t in levels[n])
    return TruncatedSimplicialSet(n_top, tuple(len(lv) for lv in levels), faces, degens)


def from_simplicial_complex(facets: Iterable[Iterable[int]], n_top: int) -> TruncatedSimplicialSet:
    """Ordered simplicial set of a simplicial complex on ordered vertices.

    n-simplices are weakly increasing vertex sequences whose support is a face.
    """
    facets = [frozenset(f) for f in facets]
    verts = sorted(set().union(*facets)) if facets else []
    levels = []
    for n in range(n_top + 1):
        levels.append([t for t in combinations_with_replacement(verts, n + 1)
                       if any(set(t) <= f for f in facets)])
    return from_vertex_sequences(levels, n_top)


def standard_simplex(k: int, n_top: int) -> TruncatedSimplicialSet:
    return from_simplicial_complex([range(k + 1)], n_top)


def points(m: int, n_top: int) -> TruncatedSimplicialSet:
    return from_simplicial_complex([(v,) for v in range(m)], n_top)


def constant_simplicial(m: int, n_top: int) -> TruncatedSimplicialSet:
    ident = tuple(range(m))
    return TruncatedSimplicialSet(
        n_top, (m,) * (n_top + 1),
        {(n, i): ident for n in range(1, n_top + 1) for i in range(n + 1)},
        {(n, i): ident for n in range(n_top) for i in range(n + 1)},
    )


def collapse(k: TruncatedSimplicialSet, sub: Sequence[set[int]]) -> TruncatedSimplicialSet:
    """Quotient ``K/L`` for a nonempty sub-simplicial set L given levelwise.

    L becomes a single basepoint (index 0 at every level).
    """
    renum = []
    for n, members in enumerate(sub):
        m, idx = 1, []
        for x in range(k.sizes[n]):
            if x in members:
                idx.append(0)
            else:
                idx.append(m)
                m += 1
        renum.append(idx)
    sizes = tuple(1 + k.sizes[n] - len(sub[n]) for n in range(k.truncation + 1))

    def push(table, src, dst):
        out = [0] * sizes[src]
        for x, y in enumerate(table):
            out[renum[src][x]] = renum[dst][y]
        return tuple(out)

    faces = {(n, i): push(t, n, n - 1) for (n, i), t in k.faces.items()}
    degens = {(n, i): push(t, n, n + 1) for (n, i), t in k.degeneracies.items()}
    return TruncatedSimplicialSet(k.truncation, sizes, faces, degens)


def circle(n_top: int) -> TruncatedSimplicialSet:
    """Delta^1 with its boundary collapsed: one vertex, one nondegenerate edge."""
    d1 = standard_simplex(1, n_top)
    # the two constant sequences are first and last in lexicographic order
    sub = [{0, d1.sizes[n] - 1} for n in range(n_top + 1)]
    return collapse(d1, sub)


def disjoint_union(a: TruncatedSimplicialSet, b: TruncatedSimplicialSet) -> TruncatedSimplicialSet:
    if a.truncation != b.truncation:
        raise StructureError("truncations differ")

    def glue(ta, tb, shift):
        return tuple(ta) + tuple(v + shift for v in tb)

    faces = {key: glue(a.faces[key], b.faces[key], a.sizes[key[0] - 1]) for key in a.faces}
    degens = {key: glue(a.degeneracies[key], b.degeneracies[key], a.sizes[key[0] + 1])
              for key in a.degeneracies}
    return TruncatedSimplicialSet(a.truncation, tuple(x + y for x, y in zip(a.sizes, b.sizes)),
                                  faces, degens)


def nerve_of_abelian_group(orders: Sequence[int], n_top: int) -> TruncatedSimplicialSet:
    """Bar construction of A = Z/o_1 x ... x Z/o_k: K_n = A^n.

    d_0 drops the first entry, d_n the last, inner faces add neighbours;
    s_i inserts the identity at position i.
    """
    orders = list(orders)
    if not orders or any(o < 2 for o in orders):
        raise ValueError("orders must be nonempty and each at least 2")
    order = 1
    for o in orders:
        order *= o

    def add(x, y):
        xs, ys = mixed_radix_decode(x, orders), mixed_radix_decode(y, orders)
        return mixed_radix_encode([(u + v) % o for u, v, o in zip(xs, ys, orders)], orders)

    levels = [[mixed_radix_decode(c, [order] * n) for c in range(order ** n)] for n in range(n_top + 1)]
    encode = lambda t: mixed_radix_encode(t, [order] * len(t))
    faces, degens = {}, {}
    for n in range(1, n_top + 1):
        for i in range(n + 1):
            table = []
            for t in levels[n]:
                if i == 0:
                    u = t[1:]
                elif i == n:
                    u = t[:-1]
                else:
                    u = t[: i - 1] + (add(t[i - 1], t[i]),) + t[i + 1:]
                table.append(encode(u))
            faces[n, i] = tuple(table)
    for n in range(n_top):
        for i in range(n + 1):
            degens[n, i] = tuple(encode(t[:i] + (0,) + t[i:]) for t in levels[n])
    return TruncatedSimplicialSet(n_top, tuple(order ** n for n in range(n_top + 1)), faces, degens)


# ---------------------------------------------------------------- invariants

def pi0(k: TruncatedSimplicialSet) -> tuple[FinSet, FinMap]:
    """Connected components from the 1-skeleton: vertices d_1(e) ~ d_0(e)."""
    if k.truncation < 1:
        raise ValueError("pi0 needs the 1-skeleton")
    uf = UnionFind(k.sizes[0])
    for a, b in zip(k.faces[1, 1], k.faces[1, 0]):
        uf.union(a, b)
    cls = uf.classes()
    comps = FinSet(max(cls) + 1 if cls else 0)
    return comps, FinMap(k.level(0), comps, tuple(cls))


def degenerate_set(k: TruncatedSimplicialSet, n: int) -> set[int]:
    out: set[int] = set()
    for i in range(n):
        out.update(k.degeneracies[n - 1, i])
    return out


def nondegenerate(k: TruncatedSimplicialSet, n: int) -> list[int]:
    if n > k.truncation:
        raise ValueError("degree above truncation")
    if n == 0:
        return list(range(k.sizes[0]))
    deg = degenerate_set(k, n)
    return [x for x in range(k.sizes[n]) if x not in deg]


def component(k: TruncatedSimplicialSet, basepoint: int) -> tuple[TruncatedSimplicialSet, list[list[int]]]:
    """Sub-simplicial set of simplices whose vertices lie in the basepoint's component.

    Also returns, per level, the original index of each kept simplex.
    """
    _, cls = pi0(k)
    target = cls.table[basepoint]
    kept = [[x for x in range(k.sizes[n]) if cls.table[k.vertex(n, x)] == target]
            for n in range(k.truncation + 1)]
    where = [{x: j for j, x in enumerate(lv)} for lv in kept]
    faces = {(n, i): tuple(where[n - 1][t[x]] for x in kept[n]) for (n, i), t in k.faces.items()}
    degens = {(n, i): tuple(where[n + 1][t[x]] for x in kept[n]) for (n, i), t in k.degeneracies.items()}
    sub = TruncatedSimplicialSet(k.truncation, tuple(len(lv) for lv in kept), faces, degens)
    return sub, kept


# ---------------------------------------------------------------- power sets

def preimage_table(table: Sequence[int], cod_size: int) -> list[int]:
    """Preimage map on all subsets of the codomain, as a list indexed by bitmask."""
    fibre = [0] * cod_size
    for a, b in enumerate(table):
        fibre[b] |= 1 << a
    out = [0] * (1 << cod_size)
    for mask in range(1, 1 << cod_size):
        low = mask & -mask
        out[mask] = out[mask ^ low] | fibre[low.bit_length() - 1]
    return out


def powerset_apply(x: TruncatedCosimplicialSet, cap: int = DEFAULT_LEVEL_CAP) -> TruncatedSimplicialSet:
    """Levelwise power set with preimage structure maps; subsets are bitmasks."""
    for n, size in enumerate(x.sizes):
        if size > cap:
            raise LevelCapExceeded(f"level {n} has {size} elements, cap is {cap}")
    faces = {(n, i): tuple(preimage_table(t, x.sizes[n])) for (n, i), t in x.cofaces.items()}
    degens = {(n, i): tuple(preimage_table(t, x.sizes[n])) for (n, i), t in x.codegeneracies.items()}
    return TruncatedSimplicialSet(x.truncation, tuple(1 << s for s in x.sizes), faces, degens)


def materializable_prefix(x: TruncatedCosimplicialSet, cap: int = DEFAULT_LEVEL_CAP) -> int:
    """Largest M with every level 0..M within the cap, or -1."""
    m = -1
    for size in x.sizes:
        if size > cap:
            break
        m += 1
    return m


# ---------------------------------------------------------------- modules

@dataclass(frozen=True)
class SimplicialModule:
    """Simplicial F_p-vector space; maps are dense integer matrices mod p.

    ``faces[n, i]`` has shape ``(dims[n-1], dims[n])``.
    """

    p: int
    truncation: int
    dims: tuple[int, ...]
    faces: dict = field(hash=False)
    degeneracies: dict = field(hash=False)

    def validate(self) -> list[Violation]:
        p, d, s, top = self.p, self.faces, self.degeneracies, self.truncation
        out = []

        def check(name, idx, lhs, rhs):
            if not np.array_equal(lhs % p, rhs % p):
                bad = np.argwhere((lhs - rhs) % p != 0)
                out.append(Violation(name, idx, int(bad[0][1])))

        for n in range(2, top + 1):
            for j in range(n + 1):
                for i in range(j):
                    check("d_i d_j = d_{j-1} d_i", (i, j, n), d[n - 1, i] @ d[n, j], d[n - 1, j - 1] @ d[n, i])
        for n in range(top - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    check("s_i s_j = s_{j+1} s_i", (i, j, n), s[n + 1, i] @ s[n, j], s[n + 1, j + 1] @ s[n, i])
        for n in range(top):
            for j in range(n + 1):
                for i in range(n + 2):
                    lhs = d[n + 1, i] @ s[n, j]
                    if i < j:
                        rhs = s[n - 1, j - 1] @ d[n, i]
                    elif i in (j, j + 1):
                        rhs = np.eye(self.dims[n], dtype=np.int64)
                    else:
                        rhs = s[n - 1, j] @ d[n, i - 1]
                    check("d_i s_j", (i, j, n), lhs, rhs)
        return out


def _pullback_matrix(table: Sequence[int], cod_size: int) -> np.ndarray:
    """Matrix of precomposition F^cod -> F^dom along ``table: dom -> cod``."""
    m = np.zeros((len(table), cod_size), dtype=np.int64)
    if len(table):
        m[np.arange(len(table)), np.asarray(table)] = 1
    return m


def _pushforward_matrix(table: Sequence[int], cod_size: int) -> np.ndarray:
    """Matrix of F[dom] -> F[cod], e_x -> e_{table[x]}."""
    return _pullback_matrix(table, cod_size).T.copy()


def function_module(x: TruncatedCosimplicialSet, p: int) -> SimplicialModule:
    """M_n = F_p^{X^n}; faces and degeneracies precompose with cofaces/codegeneracies."""
    faces = {(n, i): _pullback_matrix(t, x.sizes[n]) for (n, i), t in x.cofaces.items()}
    degens = {(n, i): _pullback_matrix(t, x.sizes[n]) for (n, i), t in x.codegeneracies.items()}
    return SimplicialModule(p, x.truncation, tuple(x.sizes), faces, degens)


def linearize(k: TruncatedSimplicialSet, p: int) -> SimplicialModule:
    """Free F_p-module on the simplices, structure maps extended linearly."""
    faces = {(n, i): _pushforward_matrix(t, k.sizes[n - 1]) for (n, i), t in k.faces.items()}
    degens = {(n, i): _pushforward_matrix(t, k.sizes[n + 1]) for (n, i), t in k.degeneracies.items()}
    return SimplicialModule(p, k.truncation, tuple(k.sizes), faces, degens)


def mask_to_vector(mask: int, size: int) -> np.ndarray:
    return np.array([(mask >> a) & 1 for a in range(size)], dtype=np.int64)


def vector_to_mask(vec: Sequence[int]) -> int:
    return sum(1 << a for a, v in enumerate(vec) if int(v) % 2)
