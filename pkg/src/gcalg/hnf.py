"""Hermite normal form over the univariate polynomial ring Q[T].

Submodules of a free module Q[T]^N are held by a generator matrix in row-style
HNF: pivot columns strictly increase, pivots are monic, and every other entry
in a pivot column has strictly smaller degree.  Q[T] is Euclidean, so the form
is canonical and membership is exact division-reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import MPoly

Row = tuple[MPoly, ...]


def _check_row(row, rank: int) -> Row:
    r = tuple(e if isinstance(e, MPoly) else MPoly.const(e) for e in row)
    if len(r) != rank:
        raise ValueError(f"row length {len(r)} != ambient rank {rank}")
    for e in r:
        if not e.uses_only({"T"}):
            raise ValueError(f"entry {e} is not a polynomial in T alone")
    return r


@dataclass(frozen=True)
class PolySubmodule:
    ambient_rank: int
    rows: tuple[Row, ...]

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivot_columns(self) -> list[int]:
        return [next(i for i, e in enumerate(r) if not e.is_zero()) for r in self.rows]

    def is_full_module(self) -> bool:
        if self.rank != self.ambient_rank:
            return False
        return all(
            self.rows[i][i] == MPoly.const(1) for i in range(self.ambient_rank)
        )

    def is_zero(self) -> bool:
        return self.rank == 0

    def reduce(self, vector) -> Row:
        v = list(_check_row(vector, self.ambient_rank))
        for row in self.rows:
            c = next(i for i, e in enumerate(row) if not e.is_zero())
            if v[c].is_zero():
                continue
            q, _ = v[c].divmod_univariate(row[c], "T")
            if not q.is_zero():
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, vector) -> bool:
        return all(e.is_zero() for e in self.reduce(vector))

    def contains_module(self, other: "PolySubmodule") -> bool:
        return all(self.contains(r) for r in other.rows)

    def __str__(self) -> str:
        body = "; ".join("(" + ", ".join(str(e) for e in r) + ")" for r in self.rows)
        return f"PolySubmodule[{self.ambient_rank}]{{{body}}}"


def hermite_nf(rows, ambient_rank: int | None = None) -> PolySubmodule:
    """Canonical HNF of the Q[T]-row space of the given generators."""
    rows = list(rows)
    if ambient_rank is None:
        if not rows:
            raise ValueError("ambient rank required for an empty generator list")
        ambient_rank = len(rows[0])
    work = [list(_check_row(r, ambient_rank)) for r in rows]
    work = [r for r in work if any(not e.is_zero() for e in r)]
    result: list[tuple[int, list[MPoly]]] = []
    for col in range(ambient_rank):
        cand = [r for r in work if not r[col].is_zero()]
        while len(cand) > 1:
            cand.sort(key=lambda r: r[col].degree("T"))
            low = cand[0]
            for r in cand[1:]:
                q, _ = r[col].divmod_univariate(low[col], "T")
                for i in range(ambient_rank):
                    r[i] = r[i] - q * low[i]
            cand = [r for r in cand if not r[col].is_zero()]
        if cand:
            pivot = cand[0]
            for idx, r in enumerate(work):
                if r is pivot:
                    del work[idx]
                    break
            lead = pivot[col].leading_coeff("T")
            if lead != 1:
                inv = Fraction(1) / lead
                pivot = [e.scale(inv) for e in pivot]
            result.append((col, pivot))
    for col, prow in result:
        for _, other in result:
            if other is prow:
                continue
            if other[col].is_zero():
                continue
            q, _ = other[col].divmod_univariate(prow[col], "T")
            if not q.is_zero():
                for i in range(ambient_rank):
                    other[i] = other[i] - q * prow[i]
    result.sort(key=lambda t: t[0])
    return PolySubmodule(ambient_rank, tuple(tuple(r) for _, r in result))


def submodule_contains(module: PolySubmodule, vector) -> bool:
    return module.contains(vector)


def full_module(rank: int) -> PolySubmodule:
    rows = []
    for i in range(rank):
        rows.append(tuple(MPoly.const(1 if j == i else 0) for j in range(rank)))
    return PolySubmodule(rank, tuple(rows))
