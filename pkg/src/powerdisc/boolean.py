"""Finite p-Boolean rings F_p^S, their spectra, and clopen algebras of towers.

Rings are kept in the dual form F_p^S: an element is a base-p tuple indexed by
S, coded as an integer with coordinate 0 most significant.  Ring maps
F_p^{S1} -> F_p^{S2} are presented by the dual maps S2 -> S1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import product as iproduct
from typing import Iterator, Sequence

from .fincat import (FinMap, FinSet, SignatureError, coequalizer, equalizer, maps_between,
                     mixed_radix_decode, mixed_radix_encode)

POINT_ENUMERATION_BOUND = {2: 8, 3: 5, 5: 3}


@dataclass(frozen=True)
class PBooleanRing:
    p: int
    spectrum_set: FinSet

    @property
    def width(self) -> int:
        return self.spectrum_set.size

    @property
    def order(self) -> int:
        return self.p ** self.width

    def elements(self) -> Iterator[tuple[int, ...]]:
        return iproduct(range(self.p), repeat=self.width)

    def encode(self, x: Sequence[int]) -> int:
        return mixed_radix_encode(x, [self.p] * self.width)

    def decode(self, code: int) -> tuple[int, ...]:
        return mixed_radix_decode(code, [self.p] * self.width)

    def add(self, x, y) -> tuple[int, ...]:
        return tuple((a + b) % self.p for a, b in zip(x, y))

    def mul(self, x, y) -> tuple[int, ...]:
        return tuple(a * b % self.p for a, b in zip(x, y))

    def power(self, x, k: int) -> tuple[int, ...]:
        return tuple(pow(a, k, self.p) for a in x)

    def one(self) -> tuple[int, ...]:
        return (1,) * self.width

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.width

    def frobenius_is_identity(self, x) -> bool:
        return self.power(x, self.p) == tuple(x)


def ring_from_set(s: FinSet, p: int) -> PBooleanRing:
    return PBooleanRing(p, s)


def idempotents(r: PBooleanRing) -> list[tuple[int, ...]]:
    return list(_idempotents(r))


@lru_cache(maxsize=64)
def _idempotents(r: PBooleanRing) -> tuple[tuple[int, ...], ...]:
    return tuple(e for e in r.elements() if r.mul(e, e) == e)


def primitive_idempotents(r: PBooleanRing) -> list[tuple[int, ...]]:
    """Nonzero idempotents e with no idempotent strictly between 0 and e."""
    idem = idempotents(r)
    zero = r.zero()
    out = []
    for e in idem:
        if e == zero:
            continue
        if all(r.mul(f, e) in (zero, e) for f in idem):
            out.append(e)
    return out


def spectrum(r: PBooleanRing) -> FinSet:
    """Points of Spec R, recovered as primitive idempotents.

    Each primitive idempotent is the indicator of one coordinate; points are
    listed by that coordinate and carry its label.
    """
    supports = []
    for e in primitive_idempotents(r):
        support = [k for k, v in enumerate(e) if v]
        if len(support) != 1:
            raise ArithmeticError("primitive idempotent with support of size != 1")
        supports.append(support[0])
    supports.sort()
    labels = None
    if r.spectrum_set.labels is not None:
        labels = tuple(r.spectrum_set.labels[k] for k in supports)
    return FinSet(len(supports), labels)


@dataclass(frozen=True)
class RingMap:
    """The ring map F_p^{S1} -> F_p^{S2}, x |-> x . dual, for ``dual: S2 -> S1``."""

    source: PBooleanRing
    target: PBooleanRing
    dual: FinMap

    def __call__(self, x) -> tuple[int, ...]:
        return tuple(x[a] for a in self.dual.table)


def is_ring_map(src: PBooleanRing, dst: PBooleanRing, f) -> bool:
    """Check unit, additivity and multiplicativity of ``f`` on the basis idempotents and their pairs."""
    if f(src.one()) != dst.one():
        return False
    basis = []
    for k in range(src.width):
        e = [0] * src.width
        e[k] = 1
        basis.append(tuple(e))
    basis.append(src.zero())
    for x in basis:
        for y in basis:
            if f(src.add(x, y)) != dst.add(f(x), f(y)):
                return False
            if f(src.mul(x, y)) != dst.mul(f(x), f(y)):
                return False
    return True


def hom_set(r1: PBooleanRing, r2: PBooleanRing, check: bool = False) -> list[RingMap]:
    """All ring maps r1 -> r2, one per map Spec r2 -> Spec r1."""
    if r1.p != r2.p:
        raise ValueError("rings over different primes")
    out = [RingMap(r1, r2, g) for g in maps_between(r2.spectrum_set, r1.spectrum_set)]
    if check:
        for f in out:
            if not is_ring_map(r1, r2, f):
                raise ArithmeticError(f"dual map {f.dual.table} is not a ring map")
    return out


def hom_count_by_idempotents(r1: PBooleanRing, r2: PBooleanRing) -> int:
    """Count ring maps r1 -> r2 without Stone duality.

    r1 is a product of width-many copies of F_p, so a map out of it is an
    ordered list of pairwise orthogonal idempotents of r2 summing to 1.
    """
    idem = idempotents(r2)
    zero = r2.zero()
    ways = {zero: 1}
    for _ in range(r1.width):
        nxt: dict = {}
        for acc, n in ways.items():
            for e in idem:
                if r2.mul(acc, e) == zero:
                    key = r2.add(acc, e)
                    nxt[key] = nxt.get(key, 0) + n
        ways = nxt
    return ways.get(r2.one(), 0)


def linear_ring_maps_brute_force(r1: PBooleanRing, r2: PBooleanRing) -> int:
    """Count unital multiplicative F_p-linear maps by enumerating all matrices."""
    p, a, b = r1.p, r1.width, r2.width
    basis = [tuple(1 if k == j else 0 for k in range(a)) for j in range(a)]
    count = 0
    for entries in iproduct(range(p), repeat=a * b):
        cols = [entries[j * b:(j + 1) * b] for j in range(a)]

        def f(x, cols=cols):
            return tuple(sum(x[j] * cols[j][i] for j in range(a)) % p for i in range(b))

        if f(r1.one()) != r2.one():
            continue
        if all(f(r1.mul(x, y)) == r2.mul(f(x), f(y)) for x in basis for y in basis):
            count += 1
    return count


# ---------------------------------------------------------------- Frobenius fixed points

Polynomial = Sequence[tuple[Sequence[int], int]]  # (exponents, coefficient) pairs


def reduce_polynomial(poly: Polynomial, n: int, p: int) -> dict[tuple[int, ...], int]:
    """Apply x^p = x to every exponent and collect coefficients mod p."""
    out: dict[tuple[int, ...], int] = {}
    for exps, coeff in poly:
        if len(exps) != n:
            raise ValueError("monomial has the wrong number of exponents")
        red = tuple(0 if e == 0 else (e - 1) % (p - 1) + 1 for e in exps)
        out[red] = (out.get(red, 0) + coeff) % p
    return {m: c for m, c in out.items() if c}


def evaluate(poly: dict[tuple[int, ...], int], point: Sequence[int], p: int) -> int:
    total = 0
    for exps, coeff in poly.items():
        term = coeff
        for x, e in zip(point, exps):
            term = term * pow(x, e, p) % p
        total += term
    return total % p


def phi_fixed_points(n: int, p: int, relations: Sequence[Polynomial] = ()) -> FinSet:
    """F_p-points of F_p[x_1..x_n]/(relations), i.e. Spec of the Frobenius-fixed quotient.

    Points are enumerated in mixed-radix order over {0..p-1}^n and labelled
    by their coordinates.
    """
    bound = POINT_ENUMERATION_BOUND.get(p)
    if bound is not None and n > bound:
        raise ValueError(f"n={n} exceeds the enumeration bound {bound} for p={p}")
    polys = [reduce_polynomial(r, n, p) for r in relations]
    pts = [pt for pt in iproduct(range(p), repeat=n) if all(evaluate(f, pt, p) == 0 for f in polys)]
    return FinSet(len(pts), tuple(",".join(map(str, pt)) for pt in pts))


def polynomial_from_json(data) -> Polynomial:
    """Terms as ``[exponents, coefficient]`` pairs or ``{"monomial": ..., "coefficient": ...}``."""
    out = []
    for term in data:
        if isinstance(term, dict):
            exps = term.get("monomial", term.get("exponents"))
            out.append((tuple(exps), int(term["coefficient"])))
        else:
            out.append((tuple(term[0]), int(term[1])))
    return out


# ---------------------------------------------------------------- reflexive coequalizers

class ReflexivityError(ValueError):
    pass


def _check_reflexive(phi: FinMap, psi: FinMap, sigma: FinMap):
    if phi.dom != psi.dom or phi.cod != psi.cod:
        raise SignatureError("phi and psi must be parallel A -> B")
    if sigma.dom.size != phi.cod.size or sigma.cod.size != phi.dom.size:
        raise SignatureError("sigma must go B -> A")
    if not phi.then(sigma).is_identity() or not psi.then(sigma).is_identity():
        raise ReflexivityError("sigma is not a common retraction of phi and psi")


def reflexive_coequalizer(phi: FinMap, psi: FinMap, sigma: FinMap, p: int = 2) -> tuple[PBooleanRing, FinMap]:
    """Coequalizer of the ring maps F_p^B => F_p^A dual to ``phi, psi: A -> B``.

    The ideal generated by f(x) - g(x) over the basis idempotents x = e_b is
    the ideal of functions supported where phi and psi disagree; the quotient
    is F_p on the complement.  Returns the quotient ring and the dual
    inclusion A' -> A.
    """
    _check_reflexive(phi, psi, sigma)
    a = phi.dom.size
    killed: set[int] = set()
    for b in range(phi.cod.size):
        # f(e_b) - g(e_b) at coordinate a is [phi(a)=b] - [psi(a)=b]
        for x in range(a):
            if (phi.table[x] == b) != (psi.table[x] == b):
                killed.add(x)
    kept = tuple(x for x in range(a) if x not in killed)
    labels = None
    if phi.dom.labels is not None:
        labels = tuple(phi.dom.labels[x] for x in kept)
    quotient = FinSet(len(kept), labels)
    return PBooleanRing(p, quotient), FinMap(quotient, phi.dom, kept)


class ProjectivityKind(str, Enum):
    HOLDS = "Holds"
    FAILS = "Fails"


@dataclass
class ProjectivityResult:
    kind: ProjectivityKind
    coequalizer_size: int
    target_size: int
    witness: dict | None = None

    @property
    def holds(self) -> bool:
        return self.kind is ProjectivityKind.HOLDS


def _precompose(g: FinMap, s: FinSet) -> FinMap:
    """Map(cod g, S) -> Map(dom g, S), h |-> h . g."""
    src = [s.size] * g.cod.size
    dst = [s.size] * g.dom.size
    table = []
    for code in range(s.size ** g.cod.size):
        h = mixed_radix_decode(code, src)
        table.append(mixed_radix_encode([h[v] for v in g.table], dst))
    return FinMap(FinSet(s.size ** g.cod.size), FinSet(s.size ** g.dom.size), tuple(table))


def one_projectivity_check(s: FinSet, phi: FinMap, psi: FinMap, sigma: FinMap) -> ProjectivityResult:
    """Does Hom(S, -) carry this reflexive coequalizer to a coequalizer of sets?

    Compares coeq(Map(B,S) => Map(A,S)) with Map(A',S) via restriction along
    A' -> A.
    """
    _check_reflexive(phi, psi, sigma)
    _, incl = equalizer(phi, psi)
    q, cls = coequalizer(_precompose(phi, s), _precompose(psi, s))
    restrict = _precompose(incl, s)
    target = restrict.cod.size
    image_of_class: dict[int, int] = {}
    for h in range(cls.dom.size):
        c, v = cls.table[h], restrict.table[h]
        if image_of_class.setdefault(c, v) != v:
            raise ArithmeticError("restriction is not constant on coequalizer classes")
    seen: dict[int, int] = {}
    for c, v in sorted(image_of_class.items()):
        if v in seen:
            return ProjectivityResult(ProjectivityKind.FAILS, q.size, target,
                                      {"reason": "not injective", "classes": [seen[v], c]})
        seen[v] = c
    missing = [v for v in range(target) if v not in seen]
    if missing:
        return ProjectivityResult(ProjectivityKind.FAILS, q.size, target,
                                  {"reason": "not surjective", "element": missing[0]})
    return ProjectivityResult(ProjectivityKind.HOLDS, q.size, target)


def random_reflexive_pair(rng, max_size: int = 7) -> tuple[FinMap, FinMap, FinMap]:
    """phi, psi: A -> B with common retraction sigma: B -> A, sizes 1..max_size."""
    a = rng.randint(1, max_size)
    b = rng.randint(a, max_size)
    A, B = FinSet(a), FinSet(b)
    phi_t = rng.sample(range(b), a)
    sigma_t = [rng.randrange(a) for _ in range(b)]
    for x, y in enumerate(phi_t):
        sigma_t[y] = x
    fibres: dict[int, list[int]] = {}
    for y, x in enumerate(sigma_t):
        fibres.setdefault(x, []).append(y)
    psi_t = [rng.choice(fibres[x]) for x in range(a)]
    return FinMap(A, B, phi_t), FinMap(A, B, psi_t), FinMap(B, A, sigma_t)


# ---------------------------------------------------------------- towers

@dataclass(frozen=True)
class ProfiniteTower:
    """Finite stages with surjections ``bonds[i]: Y_{i+1} -> Y_i``."""

    stages: tuple[FinSet, ...]
    bonds: tuple[FinMap, ...]

    def __post_init__(self):
        if len(self.bonds) != len(self.stages) - 1:
            raise ValueError("need one bonding map between consecutive stages")
        for i, b in enumerate(self.bonds):
            if b.dom.size != self.stages[i + 1].size or b.cod.size != self.stages[i].size:
                raise SignatureError(f"bond {i} has the wrong signature")
            if not b.is_surjective():
                raise ValueError(f"bond {i} is not surjective")

    @property
    def height(self) -> int:
        return len(self.stages) - 1

    def to_json(self) -> dict:
        return {"stages": [s.size for s in self.stages], "bonds": [list(b.table) for b in self.bonds]}

    @classmethod
    def from_json(cls, data: dict) -> ProfiniteTower:
        stages = tuple(FinSet(n) for n in data["stages"])
        bonds = tuple(FinMap(stages[i + 1], stages[i], t) for i, t in enumerate(data["bonds"]))
        return cls(stages, bonds)


def constant_tower(s: FinSet, height: int) -> ProfiniteTower:
    ident = tuple(range(s.size))
    return ProfiniteTower((s,) * (height + 1), tuple(FinMap(s, s, ident) for _ in range(height)))


def binary_tower(height: int) -> ProfiniteTower:
    """Y_i = {0,1}^i; the bond Y_{i+1} -> Y_i forgets the last coordinate."""
    stages = tuple(FinSet(2 ** i) for i in range(height + 1))
    bonds = tuple(FinMap(stages[i + 1], stages[i], tuple(c >> 1 for c in range(2 ** (i + 1))))
                  for i in range(height))
    return ProfiniteTower(stages, bonds)


@dataclass(frozen=True, eq=False)
class Clopen:
    """A subset of stage ``stage``, as a bitmask; compared only through a tower."""

    stage: int
    mask: int


class ClopenAlgebra:
    """Boolean algebra of clopens: colimit of P(Y_i) along preimages."""

    def __init__(self, tower: ProfiniteTower):
        self.tower = tower

    def pullback(self, c: Clopen, stage: int) -> Clopen:
        if stage < c.stage:
            raise ValueError("can only pull back to a later stage")
        mask = c.mask
        for i in range(c.stage, stage):
            mask = self.tower.bonds[i].preimage_mask(mask)
        return Clopen(stage, mask)

    def _common(self, a: Clopen, b: Clopen) -> tuple[int, int, int]:
        k = max(a.stage, b.stage)
        return k, self.pullback(a, k).mask, self.pullback(b, k).mask

    def meet(self, a: Clopen, b: Clopen) -> Clopen:
        k, x, y = self._common(a, b)
        return Clopen(k, x & y)

    def join(self, a: Clopen, b: Clopen) -> Clopen:
        k, x, y = self._common(a, b)
        return Clopen(k, x | y)

    def complement(self, a: Clopen) -> Clopen:
        full = (1 << self.tower.stages[a.stage].size) - 1
        return Clopen(a.stage, full & ~a.mask)

    def equal(self, a: Clopen, b: Clopen) -> bool:
        _, x, y = self._common(a, b)
        return x == y

    def top(self, stage: int = 0) -> Clopen:
        return Clopen(stage, (1 << self.tower.stages[stage].size) - 1)

    def bottom(self, stage: int = 0) -> Clopen:
        return Clopen(stage, 0)

    def atoms_at_stage(self, i: int) -> list[Clopen]:
        return [Clopen(i, 1 << y) for y in range(self.tower.stages[i].size)]

    def all_at_stage(self, i: int) -> list[Clopen]:
        return [Clopen(i, m) for m in range(1 << self.tower.stages[i].size)]

    def distinct_up_to(self, k: int) -> int:
        """Number of distinct clopens represented at stages 0..k."""
        return len({self.pullback(c, k).mask for i in range(k + 1) for c in self.all_at_stage(i)})
