"""Exact chain complexes, Smith normal form and Moore complexes.

Boundary matrices act on column vectors: ``boundaries[n]`` has shape
``(ranks[n-1], ranks[n])`` and is stored sparsely as one ``{row: value}``
dict per column.  The sign convention is ``d = sum (-1)^i d_i`` everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence, Union

import numpy as np

from .simplicial import SimplicialModule, TruncatedSimplicialSet, degenerate_set, nondegenerate

Ring = Union[str, int]  # "Z" or a prime p
SNF_GENERATOR_LIMIT = 4096


class TruncationError(ValueError):
    """Homology requested in a degree the truncation cannot see."""


# ---------------------------------------------------------------- sparse matrices

@dataclass
class SparseMatrix:
    nrows: int
    ncols: int
    columns: list[dict[int, int]]

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> SparseMatrix:
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        cols: list[dict[int, int]] = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    cols[j][i] = int(v)
        return cls(nrows, ncols, cols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> SparseMatrix:
        return cls(nrows, ncols, [{} for _ in range(ncols)])

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def is_zero(self) -> bool:
        return all(not c for c in self.columns)

    def matmul(self, other: SparseMatrix) -> SparseMatrix:
        """self @ other."""
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = []
        for col in other.columns:
            acc: dict[int, int] = {}
            for k, v in col.items():
                for i, w in self.columns[k].items():
                    acc[i] = acc.get(i, 0) + v * w
            cols.append({i: v for i, v in acc.items() if v})
        return SparseMatrix(self.nrows, other.ncols, cols)

    def triplets(self) -> list[tuple[int, int, int]]:
        return sorted((i, j, v) for j, col in enumerate(self.columns) for i, v in col.items())


# ---------------------------------------------------------------- Smith normal form

@dataclass
class SNFResult:
    diagonal: list[int]
    rank: int
    U: list[list[int]] | None = None
    V: list[list[int]] | None = None

    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d > 1]


class _Work:
    """Row- and column-indexed sparse storage for in-place elimination."""

    def __init__(self, a: SparseMatrix):
        self.rows: dict[int, dict[int, int]] = {}
        self.cols: dict[int, dict[int, int]] = {}
        for j, col in enumerate(a.columns):
            for i, v in col.items():
                if v:
                    self.set(i, j, v)

    def set(self, i, j, v):
        if v:
            self.rows.setdefault(i, {})[j] = v
            self.cols.setdefault(j, {})[i] = v
        else:
            r = self.rows.get(i)
            if r is not None and j in r:
                del r[j]
                if not r:
                    del self.rows[i]
            c = self.cols.get(j)
            if c is not None and i in c:
                del c[i]
                if not c:
                    del self.cols[j]

    def get(self, i, j):
        return self.rows.get(i, {}).get(j, 0)

    def add_col(self, target, source, q):
        for i, v in list(self.cols.get(source, {}).items()):
            self.set(i, target, self.get(i, target) + q * v)

    def add_row(self, target, source, q):
        for j, v in list(self.rows.get(source, {}).items()):
            self.set(target, j, self.get(target, j) + q * v)

    def pick_pivot(self):
        # minimal |a|, then lexicographic (row, col); a unit anywhere is minimal
        for i in sorted(self.rows):
            units = [j for j, v in self.rows[i].items() if v in (1, -1)]
            if units:
                return i, min(units)
        best = None
        for i, row in self.rows.items():
            for j, v in row.items():
                key = (abs(v), i, j)
                if best is None or key < best:
                    best = key
        return best[1], best[2]


def _sparse_add_row(m: dict[int, dict[int, int]], target, source, q):
    src = m.get(source, {})
    tgt = m.setdefault(target, {})
    for k, v in src.items():
        nv = tgt.get(k, 0) + q * v
        if nv:
            tgt[k] = nv
        else:
            tgt.pop(k, None)


def _as_sparse(a) -> SparseMatrix:
    if isinstance(a, SparseMatrix):
        return a
    a = [list(r) for r in a]
    return SparseMatrix.from_dense(a)


def smith_normal_form(a, transforms: bool = True) -> SNFResult:
    """Smith normal form ``U A V = D`` over the integers.

    ``a`` is a list of rows or a :class:`SparseMatrix`.  With ``transforms``
    the unimodular certificates U (m x m) and V (n x n) are returned.
    """
    a = _as_sparse(a)
    m, n = a.nrows, a.ncols
    w = _Work(a)
    # U stored by rows, V by columns; both start as identities
    urows = {i: {i: 1} for i in range(m)} if transforms else None
    vcols = {j: {j: 1} for j in range(n)} if transforms else None
    pivots: list[tuple[int, int, int]] = []

    while w.rows:
        r, c = w.pick_pivot()
        while True:
            piv = w.get(r, c)
            for j, x in list(w.rows[r].items()):
                if j == c:
                    continue
                q = x // piv
                w.add_col(j, c, -q)
                if transforms:
                    _sparse_add_row(vcols, j, c, -q)
            for i, y in list(w.cols[c].items()):
                if i == r:
                    continue
                q = y // piv
                w.add_row(i, r, -q)
                if transforms:
                    _sparse_add_row(urows, i, r, -q)
            rest = [(abs(v), r, j) for j, v in w.rows[r].items() if j != c]
            rest += [(abs(v), i, c) for i, v in w.cols[c].items() if i != r]
            if not rest:
                break
            _, r, c = min(rest)
        pivots.append((r, c, w.get(r, c)))
        w.set(r, c, 0)

    rank = len(pivots)
    diag = [p[2] for p in pivots]
    if not transforms:
        diag = [abs(d) for d in diag]
        # invariant factors from the diagonal by pairwise gcd/lcm sweeps
        for i in range(rank):
            for j in range(i + 1, rank):
                g = gcd(diag[i], diag[j])
                if g != diag[i]:
                    diag[i], diag[j] = g, diag[i] * diag[j] // g
        return SNFResult(diag + [0] * (min(m, n) - rank), rank)

    prow = [p[0] for p in pivots]
    pcol = [p[1] for p in pivots]
    row_order = prow + [i for i in range(m) if i not in set(prow)]
    col_order = pcol + [j for j in range(n) if j not in set(pcol)]
    U = [[urows[i].get(k, 0) for k in range(m)] for i in row_order]
    Vd = [[0] * n for _ in range(n)]
    for newj, j in enumerate(col_order):
        for k, v in vcols[j].items():
            Vd[k][newj] = v
    for k in range(rank):
        if diag[k] < 0:
            diag[k] = -diag[k]
            U[k] = [-v for v in U[k]]
    for i in range(rank):
        for j in range(i + 1, rank):
            x, y = diag[i], diag[j]
            if y % x == 0:
                continue
            g, s, t = _xgcd(x, y)
            xg, yg = x // g, y // g
            ui, uj = U[i], U[j]
            U[i] = [s * p + t * q for p, q in zip(ui, uj)]
            U[j] = [-yg * p + xg * q for p, q in zip(ui, uj)]
            for row in Vd:
                vi, vj = row[i], row[j]
                row[i] = vi + vj
                row[j] = -t * yg * vi + s * xg * vj
            diag[i], diag[j] = g, x * yg
    return SNFResult(diag + [0] * (min(m, n) - rank), rank, U, Vd)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) > 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def _dense_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def _det(mat: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free elimination (Bareiss)."""
    n = len(mat)
    if n == 0:
        return 1
    a = [row[:] for row in mat]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def check_snf(a, res: SNFResult) -> bool:
    """Recompute U A V, unimodularity and the divisibility chain."""
    sp = _as_sparse(a)
    m, n = sp.nrows, sp.ncols
    diag = res.diagonal
    if any(d < 0 for d in diag) or any(diag[res.rank:]) or not all(diag[:res.rank]):
        return False
    if any(diag[k + 1] % diag[k] for k in range(res.rank - 1)):
        return False
    if res.U is None or res.V is None:
        return True
    if abs(_det(res.U)) != 1 or abs(_det(res.V)) != 1:
        return False
    if m == 0 or n == 0:
        return True
    prod = _dense_mul(_dense_mul(res.U, sp.to_dense()), res.V)
    return all(prod[i][j] == (diag[i] if i == j else 0) for i in range(m) for j in range(n))


# ---------------------------------------------------------------- mod p

def rank_mod_p(mat: SparseMatrix, p: int) -> int:
    """Rank over F_p by incremental echelon reduction of the columns."""
    basis: dict[int, dict[int, int]] = {}  # pivot row -> column normalised to 1 there
    for col in mat.columns:
        v = {i: x % p for i, x in col.items() if x % p}
        while v:
            piv = min(v)
            if piv not in basis:
                inv = pow(v[piv], -1, p)
                basis[piv] = {i: x * inv % p for i, x in v.items()}
                break
            b, c = basis[piv], v[piv]
            for i, x in b.items():
                nv = (v.get(i, 0) - c * x) % p
                if nv:
                    v[i] = nv
                else:
                    v.pop(i, None)
    return len(basis)


def _rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def dense_rank_mod_p(a: np.ndarray, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(_rref(a, p)[1])


def nullspace_mod_p(a: np.ndarray, p: int, ncols: int | None = None) -> np.ndarray:
    """Basis of the kernel of ``a`` as columns of the returned matrix."""
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1] if a.ndim == 2 else ncols
    if a.size == 0:
        return np.eye(n, dtype=np.int64)
    red, piv = _rref(a, p)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for r, c in enumerate(piv):
            basis[c, k] = (-red[r, f]) % p
    return basis


# ---------------------------------------------------------------- chain complexes

@dataclass
class ChainComplex:
    ring: Ring
    ranks: list[int]
    boundaries: dict[int, SparseMatrix] = field(default_factory=dict)

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def check(self) -> None:
        for n in range(2, self.length + 1):
            comp = self.boundaries[n - 1].matmul(self.boundaries[n])
            if self.ring != "Z":
                comp = SparseMatrix(comp.nrows, comp.ncols,
                                    [{i: v for i, v in c.items() if v % self.ring} for c in comp.columns])
            if not comp.is_zero():
                raise ArithmeticError(f"boundary squares to nonzero in degree {n}")

    def to_json(self) -> dict:
        return {
            "ring": self.ring,
            "ranks": list(self.ranks),
            "boundaries": {str(n): {"shape": [b.nrows, b.ncols], "entries": [list(t) for t in b.triplets()]}
                           for n, b in sorted(self.boundaries.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> ChainComplex:
        bd = {}
        for key, b in data["boundaries"].items():
            nr, nc = b["shape"]
            m = SparseMatrix.zeros(nr, nc)
            for i, j, v in b["entries"]:
                m.columns[j][i] = v
            bd[int(key)] = m
        ring = data["ring"]
        return cls(ring if ring == "Z" else int(ring), list(data["ranks"]), bd)


def _boundary(k: TruncatedSimplicialSet, n: int, basis_n, index_prev, drop: set[int]) -> SparseMatrix:
    cols = []
    for x in basis_n:
        col: dict[int, int] = {}
        for i in range(n + 1):
            y = k.faces[n, i][x]
            if y in drop:
                continue
            r = index_prev[y]
            col[r] = col.get(r, 0) + (-1) ** i
        cols.append({r: v for r, v in col.items() if v})
    return SparseMatrix(len(index_prev), len(basis_n), cols)


def normalized_chains(k: TruncatedSimplicialSet, ring: Ring = "Z") -> ChainComplex:
    """Chains on nondegenerate simplices; degenerate faces are dropped."""
    bases = [nondegenerate(k, n) for n in range(k.truncation + 1)]
    index = [{x: j for j, x in enumerate(b)} for b in bases]
    bd = {}
    for n in range(1, k.truncation + 1):
        drop = degenerate_set(k, n - 1) if n >= 2 else set()
        bd[n] = _boundary(k, n, bases[n], index[n - 1], drop)
    c = ChainComplex(ring, [len(b) for b in bases], bd)
    c.check()
    return c


def unnormalized_chains(k: TruncatedSimplicialSet, ring: Ring = "Z") -> ChainComplex:
    bd = {}
    for n in range(1, k.truncation + 1):
        ident = {x: x for x in range(k.sizes[n - 1])}
        bd[n] = _boundary(k, n, range(k.sizes[n]), ident, set())
    c = ChainComplex(ring, list(k.sizes), bd)
    c.check()
    return c


@dataclass(frozen=True)
class IntegralHomology:
    betti: int
    torsion: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return self.betti == 0 and not self.torsion

    def __str__(self):
        parts = ["Z"] * self.betti + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def _rank(c: ChainComplex, n: int) -> int:
    if n < 1 or n > c.length:
        return 0
    b = c.boundaries[n]
    if c.ring == "Z":
        return smith_normal_form(b, transforms=False).rank
    return rank_mod_p(b, c.ring)


def homology(c: ChainComplex, n: int):
    """H_n for 0 <= n <= N-1; over Z an :class:`IntegralHomology`, over F_p a dimension."""
    if not 0 <= n <= c.length - 1:
        raise TruncationError(f"H_{n} is not determined by a complex of length {c.length}")
    if c.ring == "Z":
        rank_in = _rank(c, n)
        snf = smith_normal_form(c.boundaries[n + 1], transforms=False)
        return IntegralHomology(c.ranks[n] - rank_in - snf.rank, tuple(snf.invariant_factors()))
    return c.ranks[n] - _rank(c, n) - _rank(c, n + 1)


# ---------------------------------------------------------------- Moore complex

def _moore_basis(m: SimplicialModule, n: int) -> np.ndarray:
    """Basis (as columns) of N_n = intersection of ker d_i for i >= 1."""
    if n == 0:
        return np.eye(m.dims[0], dtype=np.int64)
    stacked = np.vstack([m.faces[n, i] for i in range(1, n + 1)])
    return nullspace_mod_p(stacked, m.p, m.dims[n])


def moore_homotopy(m: SimplicialModule, n: int) -> int:
    """dim pi_n of the underlying simplicial set, as H_n of the Moore complex."""
    if not 0 <= n <= m.truncation - 1:
        raise TruncationError(f"pi_{n} needs level {n + 1}, truncation is {m.truncation}")
    p = m.p
    if n == 0:
        diff = (m.faces[1, 0] - m.faces[1, 1]) % p
        return m.dims[0] - dense_rank_mod_p(diff, p)
    here = _moore_basis(m, n)
    d0_here = m.faces[n, 0] @ here % p
    cycles = here.shape[1] - dense_rank_mod_p(d0_here, p)
    above = _moore_basis(m, n + 1)
    d0_above = m.faces[n + 1, 0] @ above % p
    return cycles - dense_rank_mod_p(d0_above, p)


def module_complex(m: SimplicialModule) -> ChainComplex:
    """Unnormalized complex of a simplicial module, differential sum (-1)^i d_i."""
    bd = {}
    for n in range(1, m.truncation + 1):
        total = sum((-1) ** i * m.faces[n, i] for i in range(n + 1)) % m.p
        bd[n] = SparseMatrix.from_dense(total.tolist(), ncols=m.dims[n])
    c = ChainComplex(m.p, list(m.dims), bd)
    c.check()
    return c


def homotopy_exponent(m: SimplicialModule) -> int:
    """Every Moore homotopy group of an F_p-module is killed by p."""
    return m.p
