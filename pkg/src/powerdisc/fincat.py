"""Finite sets and total maps between them.

Elements of a :class:`FinSet` are always the indices ``0..size-1``; labels are
only for display.  A :class:`FinMap` is a table of codomain indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence


class SignatureError(ValueError):
    """Maps whose domains/codomains do not line up."""


@dataclass(frozen=True)
class FinSet:
    size: int
    labels: tuple[str, ...] | None = field(default=None, compare=True)

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("negative size")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != self.size:
                raise ValueError("labels must have one entry per element")
            if len(set(self.labels)) != self.size:
                raise ValueError("labels must be distinct")

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(range(self.size))

    def label(self, k: int) -> str:
        return self.labels[k] if self.labels is not None else str(k)

    def to_json(self) -> dict:
        out = {"size": self.size}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, data: dict) -> FinSet:
        labels = data.get("labels")
        return cls(int(data["size"]), tuple(labels) if labels is not None else None)


@dataclass(frozen=True)
class FinMap:
    dom: FinSet
    cod: FinSet
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if len(self.table) != self.dom.size:
            raise SignatureError(f"table has length {len(self.table)}, domain has {self.dom.size}")
        for v in self.table:
            if not 0 <= v < self.cod.size:
                raise SignatureError(f"entry {v} outside codomain of size {self.cod.size}")

    def __call__(self, a: int) -> int:
        return self.table[a]

    def then(self, other: FinMap) -> FinMap:
        """Diagrammatic composite: first ``self``, then ``other``."""
        if self.cod.size != other.dom.size:
            raise SignatureError("cannot compose: codomain and domain differ")
        t = other.table
        return FinMap(self.dom, other.cod, tuple(t[v] for v in self.table))

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.cod.size

    def is_bijection(self) -> bool:
        return self.dom.size == self.cod.size and self.is_injective()

    def is_identity(self) -> bool:
        return self.table == tuple(range(self.dom.size)) and self.dom.size == self.cod.size

    def preimage_mask(self, mask: int) -> int:
        """Preimage of a subset of the codomain, both encoded as bitmasks."""
        out = 0
        for a, b in enumerate(self.table):
            if mask >> b & 1:
                out |= 1 << a
        return out

    def to_json(self) -> dict:
        return {"dom": self.dom.to_json(), "cod": self.cod.to_json(), "table": list(self.table)}

    @classmethod
    def from_json(cls, data: dict) -> FinMap:
        return cls(FinSet.from_json(data["dom"]), FinSet.from_json(data["cod"]), tuple(data["table"]))


def identity(s: FinSet) -> FinMap:
    return FinMap(s, s, tuple(range(s.size)))


def constant_map(dom: FinSet, cod: FinSet, value: int) -> FinMap:
    return FinMap(dom, cod, (value,) * dom.size)


class UnionFind:
    """Disjoint sets over ``0..n-1``; ``merges`` counts successful unions."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.merges = 0

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        # smaller index stays the root so classes are keyed by their minimum
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.merges += 1
        return True

    def classes(self) -> list[int]:
        """Class number of every element, classes numbered by smallest member."""
        number: dict[int, int] = {}
        out = []
        for x in range(len(self.parent)):
            r = self.find(x)
            if r not in number:
                number[r] = len(number)
            out.append(number[r])
        return out


def mixed_radix_decode(code: int, radices: Sequence[int]) -> tuple[int, ...]:
    digits = []
    for r in reversed(radices):
        code, d = divmod(code, r)
        digits.append(d)
    return tuple(reversed(digits))


def mixed_radix_encode(digits: Sequence[int], radices: Sequence[int]) -> int:
    code = 0
    for d, r in zip(digits, radices):
        code = code * r + d
    return code


def product(factors: Sequence[FinSet]) -> tuple[FinSet, list[FinMap]]:
    """Cartesian product with mixed-radix encoding, factor 0 most significant."""
    radices = [f.size for f in factors]
    total = prod(radices)
    p = FinSet(total)
    projections = []
    stride = total
    for k, f in enumerate(factors):
        if f.size == 0:
            projections.append(FinMap(p, f, ()))
            continue
        stride //= f.size
        projections.append(FinMap(p, f, tuple((c // stride) % f.size for c in range(total))))
    return p, projections


def _check_parallel(f: FinMap, g: FinMap):
    if f.dom.size != g.dom.size or f.cod.size != g.cod.size:
        raise SignatureError("parallel pair must share domain and codomain")


def equalizer(f: FinMap, g: FinMap) -> tuple[FinSet, FinMap]:
    _check_parallel(f, g)
    agree = tuple(a for a in range(f.dom.size) if f.table[a] == g.table[a])
    e = FinSet(len(agree))
    return e, FinMap(e, f.dom, agree)


def coequalizer(f: FinMap, g: FinMap) -> tuple[FinSet, FinMap]:
    _check_parallel(f, g)
    uf = UnionFind(f.cod.size)
    for a in range(f.dom.size):
        uf.union(f.table[a], g.table[a])
    cls = uf.classes()
    q = FinSet(max(cls) + 1 if cls else 0)
    return q, FinMap(f.cod, q, tuple(cls))


def ceil_log(size: int, base: int) -> int:
    """Smallest n >= 1 with base**n >= size."""
    n, reach = 1, base
    while reach < size:
        n += 1
        reach *= base
    return n


def retract_of_power(s: FinSet, t: FinSet) -> tuple[int, FinMap, FinMap]:
    """Exhibit ``s`` as a retract of ``t**n`` via base-|t| digits.

    Returns ``(n, i, r)`` with ``i: s -> t**n`` injective and ``r`` a left
    inverse; points of ``t**n`` outside the image of ``i`` go to 0.
    """
    if s.size == 0:
        raise ValueError("the empty set is not a retract of a nonempty power")
    if t.size < 2:
        raise ValueError("need at least two letters to encode")
    n = ceil_log(s.size, t.size)
    power, _ = product([t] * n)
    # the base-|t| digit string of a, read as a mixed-radix code of t**n, is a itself
    inc = FinMap(s, power, tuple(range(s.size)))
    ret = FinMap(power, s, tuple(c if c < s.size else 0 for c in range(power.size)))
    return n, inc, ret


def verify_retract(i: FinMap, r: FinMap) -> bool:
    """True iff ``r . i`` is the identity of ``dom i``; an ``r`` landing elsewhere is not a retraction."""
    if i.cod.size != r.dom.size:
        raise SignatureError("r must be defined on the codomain of i")
    if r.cod.size != i.dom.size:
        return False
    return i.then(r).is_identity()


def digits(i: FinMap, n: int, base: int) -> list[tuple[int, ...]]:
    """Coordinates in ``base**n`` of each image point of ``i``."""
    return [mixed_radix_decode(v, [base] * n) for v in i.table]


def maps_between(dom: FinSet, cod: FinSet) -> Iterable[FinMap]:
    """All maps ``dom -> cod`` in mixed-radix order of their tables."""
    radices = [cod.size] * dom.size
    for code in range(cod.size ** dom.size):
        yield FinMap(dom, cod, mixed_radix_decode(code, radices))
