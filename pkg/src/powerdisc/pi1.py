"""Fundamental groups from the 2-skeleton.

Words are tuples of nonzero integers: ``k`` is generator ``k-1`` and ``-k``
its inverse.  Presentations come from edge paths relative to a BFS spanning
tree; triviality is certified by Tietze simplification followed by
Todd-Coxeter enumeration of the cosets of the trivial subgroup.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .chains import IntegralHomology, SparseMatrix, smith_normal_form
from .simplicial import TruncatedSimplicialSet, degenerate_set, pi0

DEFAULT_COSET_BUDGET = 100_000
MAX_TIETZE_PASSES = 100

Word = tuple[int, ...]


@dataclass(frozen=True)
class GroupPresentation:
    generators: int
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "relators", tuple(tuple(r) for r in self.relators))
        for r in self.relators:
            for x in r:
                if x == 0 or abs(x) > self.generators:
                    raise ValueError(f"letter {x} outside {self.generators} generators")

    def to_json(self) -> dict:
        return {"generators": self.generators, "relators": [list(r) for r in self.relators]}

    @classmethod
    def from_json(cls, data: dict) -> GroupPresentation:
        return cls(int(data["generators"]), tuple(tuple(r) for r in data["relators"]))


def inverse(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def free_reduce(w) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def canonical_relator(w) -> Word:
    """Least cyclic rotation of ``w`` or its inverse; relators equal as normal subgroups share it."""
    w = cyclic_reduce(w)
    if not w:
        return w
    cands = []
    for v in (w, inverse(w)):
        cands.extend(v[k:] + v[:k] for k in range(len(v)))
    return min(cands)


# ---------------------------------------------------------------- edge paths

def edge_path_presentation(k: TruncatedSimplicialSet, basepoint: int) -> GroupPresentation:
    """Edge-path group of the basepoint's component.

    Nondegenerate edges off a BFS spanning tree (edges scanned in index
    order) are the generators; each nondegenerate 2-simplex s contributes
    ``d_2 s . d_0 s . (d_1 s)^-1``.
    """
    if k.truncation < 2:
        raise ValueError("need the 2-skeleton")
    if not 0 <= basepoint < k.sizes[0]:
        raise ValueError("basepoint out of range")
    _, cls = pi0(k)
    comp = cls.table[basepoint]
    src, tgt = k.faces[1, 1], k.faces[1, 0]
    degenerate_edges = degenerate_set(k, 1)
    edges = [e for e in range(k.sizes[1])
             if e not in degenerate_edges and cls.table[src[e]] == comp]

    incident: dict[int, list[int]] = {}
    for e in edges:
        incident.setdefault(src[e], []).append(e)
        if tgt[e] != src[e]:
            incident.setdefault(tgt[e], []).append(e)
    seen = {basepoint}
    tree: set[int] = set()
    queue = deque([basepoint])
    while queue:
        v = queue.popleft()
        for e in incident.get(v, ()):
            other = tgt[e] if src[e] == v else src[e]
            if other not in seen:
                seen.add(other)
                tree.add(e)
                queue.append(other)

    letter: dict[int, int] = {}
    for e in edges:
        if e not in tree:
            letter[e] = len(letter) + 1

    def word(e: int) -> Word:
        g = letter.get(e)
        return (g,) if g else ()

    relators = []
    deg2 = degenerate_set(k, 2)
    f0, f1, f2 = k.faces[2, 0], k.faces[2, 1], k.faces[2, 2]
    v0 = k.faces[1, 1]
    for s in range(k.sizes[2]):
        if s in deg2 or cls.table[v0[f2[s]]] != comp:
            continue
        r = free_reduce(word(f2[s]) + word(f0[s]) + inverse(word(f1[s])))
        if r:
            relators.append(r)
    return GroupPresentation(len(letter), tuple(relators))


def relation_matrix(p: GroupPresentation) -> SparseMatrix:
    """Exponent sums: one column per relator, one row per generator."""
    cols = []
    for r in p.relators:
        col: dict[int, int] = {}
        for x in r:
            g = abs(x) - 1
            col[g] = col.get(g, 0) + (1 if x > 0 else -1)
        cols.append({g: v for g, v in col.items() if v})
    return SparseMatrix(p.generators, len(p.relators), cols)


def abelianization(p: GroupPresentation) -> IntegralHomology:
    snf = smith_normal_form(relation_matrix(p), transforms=False)
    return IntegralHomology(p.generators - snf.rank, tuple(snf.invariant_factors()))


# ---------------------------------------------------------------- Tietze

def _expand(w: Word, subst: dict[int, Word], memo: dict[int, Word]) -> Word:
    out: list[int] = []
    for x in w:
        g = abs(x)
        if g in subst:
            if g not in memo:
                memo[g] = free_reduce(_expand(subst[g], subst, memo))
            piece = memo[g] if x > 0 else inverse(memo[g])
            out.extend(piece)
        else:
            out.append(x)
    return free_reduce(out)


def tietze_simplify(p: GroupPresentation, max_passes: int = MAX_TIETZE_PASSES) -> GroupPresentation:
    """Eliminate generators that occur exactly once in some relator.

    Each pass scans relators shortest-first and solves for such a generator;
    once something has been eliminated, relators longer than 4 wait for the
    next pass.  Relators are then rewritten, cyclically reduced and
    deduplicated.  Generators are renumbered densely at the end.
    """
    rels = {canonical_relator(r) for r in p.relators}
    rels.discard(())
    live = set(range(1, p.generators + 1))
    subst: dict[int, Word] = {}
    for _ in range(max_passes):
        memo: dict[int, Word] = {}
        eliminated = False
        for r in sorted(rels, key=lambda w: (len(w), w)):
            if len(r) > 4 and eliminated:
                break
            r = cyclic_reduce(_expand(r, subst, memo))
            if not r:
                continue
            counts: dict[int, int] = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            once = sorted(g for g, c in counts.items() if c == 1)
            if not once:
                continue
            g = once[0]
            pos = next(i for i, x in enumerate(r) if abs(x) == g)
            rot = r[pos:] + r[:pos]
            rest = rot[1:]
            # rot = g^e . rest = 1  =>  g = rest^-1 when e = +1, g = rest when e = -1
            subst[g] = inverse(rest) if rot[0] > 0 else rest
            memo.clear()
            live.discard(g)
            eliminated = True
        memo = {}
        new = set()
        for r in rels:
            w = canonical_relator(_expand(r, subst, memo))
            if w:
                new.add(w)
        changed = eliminated or new != rels
        rels = new
        if not changed:
            break
    order = sorted(live)
    renum = {g: k + 1 for k, g in enumerate(order)}
    out = []
    for r in sorted(rels, key=lambda w: (len(w), w)):
        out.append(tuple(renum[abs(x)] * (1 if x > 0 else -1) for x in r))
    return GroupPresentation(len(order), tuple(out))


# ---------------------------------------------------------------- Todd-Coxeter

class BudgetExceeded(Exception):
    pass


@dataclass
class CosetTable:
    """Closed action of the generators on cosets; ``table[c][2g]`` is c.g, ``table[c][2g+1]`` is c.g^-1."""

    generators: int
    table: list[list[int]]

    @property
    def size(self) -> int:
        return len(self.table)

    def act(self, c: int, w: Word) -> int:
        for x in w:
            c = self.table[c][_col(x)]
        return c

    def is_consistent(self, relators) -> bool:
        n = self.size
        for c in range(n):
            row = self.table[c]
            if len(row) != 2 * self.generators:
                return False
            for x in range(2 * self.generators):
                d = row[x]
                if not 0 <= d < n or self.table[d][x ^ 1] != c:
                    return False
        return all(self.act(c, r) == c for c in range(n) for r in relators)


def _col(x: int) -> int:
    return 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1


class _Enumerator:
    def __init__(self, generators: int, relators, budget: int):
        self.ncols = 2 * generators
        self.rels = [[_col(x) for x in r] for r in relators]
        self.budget = budget
        self.table: list[list[int | None]] = []
        self.parent: list[int] = []
        self.defined = 0
        self.new_coset()

    def new_coset(self) -> int:
        if self.defined >= self.budget:
            raise BudgetExceeded
        self.defined += 1
        self.table.append([None] * self.ncols)
        self.parent.append(len(self.parent))
        return len(self.table) - 1

    def find(self, c: int) -> int:
        p = self.parent
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def alive(self, c: int) -> bool:
        return self.parent[c] == c

    def define(self, c: int, x: int):
        d = self.new_coset()
        self.table[c][x] = d
        self.table[d][x ^ 1] = c

    def merge(self, a: int, b: int, queue: list[int]):
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        lo, hi = min(a, b), max(a, b)
        self.parent[hi] = lo
        queue.append(hi)

    def coincidence(self, a: int, b: int):
        queue: list[int] = []
        self.merge(a, b, queue)
        k = 0
        while k < len(queue):
            g = queue[k]
            k += 1
            for x in range(self.ncols):
                d = self.table[g][x]
                if d is None:
                    continue
                self.table[d][x ^ 1] = None
                mu, nu = self.find(g), self.find(d)
                if self.table[mu][x] is not None:
                    self.merge(nu, self.table[mu][x], queue)
                elif self.table[nu][x ^ 1] is not None:
                    self.merge(mu, self.table[nu][x ^ 1], queue)
                else:
                    self.table[mu][x] = nu
                    self.table[nu][x ^ 1] = mu

    def scan_and_fill(self, c: int, w: list[int]):
        t = self.table
        f, b = c, c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and t[f][w[i]] is not None:
                f = t[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and t[b][w[j] ^ 1] is not None:
                b = t[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                t[f][w[i]] = b
                t[b][w[i] ^ 1] = f
                return
            self.define(f, w[i])

    def run(self) -> CosetTable:
        c = 0
        while c < len(self.table):
            if self.alive(c):
                for r in self.rels:
                    self.scan_and_fill(c, r)
                    if not self.alive(c):
                        break
                if self.alive(c):
                    for x in range(self.ncols):
                        if self.table[c][x] is None:
                            self.define(c, x)
            c += 1
        live = [k for k in range(len(self.table)) if self.alive(k)]
        renum = {k: n for n, k in enumerate(live)}
        rows = [[renum[self.find(self.table[k][x])] for x in range(self.ncols)] for k in live]
        return CosetTable(self.ncols // 2, rows)


def todd_coxeter(p: GroupPresentation, budget: int = DEFAULT_COSET_BUDGET) -> CosetTable | None:
    """Coset table of the trivial subgroup, or None if more than ``budget`` cosets were needed."""
    try:
        return _Enumerator(p.generators, p.relators, budget).run()
    except BudgetExceeded:
        return None


class VerdictKind(str, Enum):
    TRIVIAL = "Trivial"
    NONTRIVIAL = "NontrivialOfOrder"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class Verdict:
    kind: VerdictKind
    order: int | None = None
    presentation: GroupPresentation | None = None
    table: CosetTable | None = field(default=None, repr=False)

    def __str__(self):
        if self.kind is VerdictKind.NONTRIVIAL:
            return f"NontrivialOfOrder({self.order})"
        return self.kind.value

    def to_json(self) -> dict:
        out = {"verdict": self.kind.value}
        if self.order is not None:
            out["order"] = self.order
        return out


def certify_trivial(p: GroupPresentation, budget: int = DEFAULT_COSET_BUDGET,
                    simplify: bool = True) -> Verdict:
    if budget < 1:
        raise ValueError("budget must be positive")
    q = tietze_simplify(p) if simplify else p
    table = todd_coxeter(q, budget)
    if table is None or not table.is_consistent(q.relators):
        return Verdict(VerdictKind.INCONCLUSIVE, presentation=q)
    if table.size == 1:
        return Verdict(VerdictKind.TRIVIAL, 1, q, table)
    return Verdict(VerdictKind.NONTRIVIAL, table.size, q, table)
