"""Truncated cosimplicial finite sets.

``cofaces[n, i]`` is ``d^i: X^{n-1} -> X^n`` (1 <= n <= N, 0 <= i <= n) and
``codegeneracies[n, i]`` is ``s^i: X^{n+1} -> X^n`` (0 <= n < N).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .fincat import FinMap, FinSet, equalizer, mixed_radix_decode, mixed_radix_encode
from .simplicial import StructureError, TruncatedSimplicialSet, Violation, _check_tables, _compose, _diff


@dataclass(frozen=True)
class TruncatedCosimplicialSet:
    truncation: int
    sizes: tuple[int, ...]
    cofaces: dict = field(hash=False)
    codegeneracies: dict = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(self.sizes))
        if self.truncation < 1 or len(self.sizes) != self.truncation + 1:
            raise StructureError("need N >= 1 and one level size per degree 0..N")
        cof = {k: tuple(v) for k, v in self.cofaces.items()}
        codeg = {k: tuple(v) for k, v in self.codegeneracies.items()}
        object.__setattr__(self, "cofaces", cof)
        object.__setattr__(self, "codegeneracies", codeg)
        top = self.truncation
        _check_tables(self.sizes, cof,
                      {(n, i): (n - 1, n) for n in range(1, top + 1) for i in range(n + 1)}, "coface")
        _check_tables(self.sizes, codeg,
                      {(n, i): (n + 1, n) for n in range(top) for i in range(n + 1)}, "codegeneracy")

    def level(self, n: int) -> FinSet:
        return FinSet(self.sizes[n])

    def coface(self, n: int, i: int) -> FinMap:
        return FinMap(self.level(n - 1), self.level(n), self.cofaces[n, i])

    def codegeneracy(self, n: int, i: int) -> FinMap:
        return FinMap(self.level(n + 1), self.level(n), self.codegeneracies[n, i])

    def truncate(self, n_top: int) -> TruncatedCosimplicialSet:
        return TruncatedCosimplicialSet(
            n_top, self.sizes[: n_top + 1],
            {k: v for k, v in self.cofaces.items() if k[0] <= n_top},
            {k: v for k, v in self.codegeneracies.items() if k[0] < n_top},
        )

    def to_json(self) -> dict:
        return {
            "truncation": self.truncation,
            "levels": list(self.sizes),
            "cofaces": {f"{n},{i}": list(t) for (n, i), t in sorted(self.cofaces.items())},
            "codegeneracies": {f"{n},{i}": list(t) for (n, i), t in sorted(self.codegeneracies.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> TruncatedCosimplicialSet:
        def keyed(d):
            return {tuple(int(x) for x in k.split(",")): tuple(v) for k, v in d.items()}
        return cls(int(data["truncation"]), tuple(data["levels"]),
                   keyed(data["cofaces"]), keyed(data["codegeneracies"]))


def validate(x: TruncatedCosimplicialSet) -> list[Violation]:
    """Cosimplicial identities failing inside the truncation.

    Composites are written in application order; ``_compose(f, g)`` is g after f.
    """
    d, s, top = x.cofaces, x.codegeneracies, x.truncation
    out = []
    # d^j d^i = d^i d^{j-1}  (i < j): X^{n-1} -> X^{n+1}
    for n in range(1, top):
        for j in range(n + 2):
            for i in range(j):
                v = _diff("d^j d^i = d^i d^{j-1}", (i, j, n),
                          _compose(d[n, i], d[n + 1, j]), _compose(d[n, j - 1], d[n + 1, i]))
                if v:
                    out.append(v)
    # s^j s^i = s^i s^{j+1}  (i <= j): X^{n+2} -> X^n
    for n in range(top - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                v = _diff("s^j s^i = s^i s^{j+1}", (i, j, n),
                          _compose(s[n + 1, i], s[n, j]), _compose(s[n + 1, j + 1], s[n, i]))
                if v:
                    out.append(v)
    # s^j d^i: X^n -> X^n with d^i: X^n -> X^{n+1}, s^j: X^{n+1} -> X^n
    for n in range(top):
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = _compose(d[n + 1, i], s[n, j])
                if i < j:
                    rhs = _compose(s[n - 1, j - 1], d[n, i])
                    name = "s^j d^i = d^i s^{j-1}"
                elif i in (j, j + 1):
                    rhs = list(range(x.sizes[n]))
                    name = "s^j d^i = id"
                else:
                    rhs = _compose(s[n - 1, j], d[n, i - 1])
                    name = "s^j d^i = d^{i-1} s^j"
                v = _diff(name, (i, j, n), lhs, rhs)
                if v:
                    out.append(v)
    return out


def constant(s: FinSet, n_top: int) -> TruncatedCosimplicialSet:
    if n_top < 1:
        raise ValueError("truncation must be at least 1")
    ident = tuple(range(s.size))
    return TruncatedCosimplicialSet(
        n_top, (s.size,) * (n_top + 1),
        {(n, i): ident for n in range(1, n_top + 1) for i in range(n + 1)},
        {(n, i): ident for n in range(n_top) for i in range(n + 1)},
    )


def _precompose_table(table: Sequence[int], src_simplices: int, dst_simplices: int, base: int) -> tuple:
    """Map(src, S) -> Map(dst, S), f |-> f . table, where table: dst -> src.

    Functions are coded base-|S| with simplex 0 the most significant digit.
    """
    radices_src = [base] * src_simplices
    radices_dst = [base] * dst_simplices
    out = []
    for code in range(base ** src_simplices):
        f = mixed_radix_decode(code, radices_src)
        out.append(mixed_radix_encode([f[v] for v in table], radices_dst))
    return tuple(out)


def mapping_cosimplicial(y: TruncatedSimplicialSet, s: FinSet) -> TruncatedCosimplicialSet:
    """X^n = Map(Y_n, S), structure maps by precomposition."""
    if y.truncation < 1:
        raise ValueError("need truncation at least 1")
    b = s.size
    cof = {(n, i): _precompose_table(y.faces[n, i], y.sizes[n - 1], y.sizes[n], b)
           for (n, i) in y.faces}
    codeg = {(n, i): _precompose_table(y.degeneracies[n, i], y.sizes[n + 1], y.sizes[n], b)
             for (n, i) in y.degeneracies}
    return TruncatedCosimplicialSet(y.truncation, tuple(b ** m for m in y.sizes), cof, codeg)


def postcompose(y: TruncatedSimplicialSet, f: FinMap, n: int) -> FinMap:
    """Levelwise map Map(Y_n, S) -> Map(Y_n, S') induced by ``f: S -> S'``."""
    m = y.sizes[n]
    src, dst = [f.dom.size] * m, [f.cod.size] * m
    table = [mixed_radix_encode([f.table[v] for v in mixed_radix_decode(c, src)], dst)
             for c in range(f.dom.size ** m)]
    return FinMap(FinSet(f.dom.size ** m), FinSet(f.cod.size ** m), tuple(table))


def limit(x: TruncatedCosimplicialSet, check: bool = True) -> tuple[FinSet, FinMap]:
    """Equalizer of the two cofaces X^0 => X^1, with its cone into X^0."""
    if check:
        bad = validate(x)
        if bad:
            raise ValueError(f"not a cosimplicial set: {bad[0]}")
    return equalizer(x.coface(1, 0), x.coface(1, 1))
