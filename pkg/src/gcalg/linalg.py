"""Exact linear algebra over Q (fractions.Fraction), at desk scale.

Matrices are lists of row lists.  Everything is dense and exact; no pivoting
heuristics beyond "first nonzero" are needed at the sizes the kernel handles.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import SingularMatrix

Vec = list[Fraction]
Mat = list[list[Fraction]]


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def zero_vector(n: int) -> Vec:
    return [Fraction(0)] * n


def zero_matrix(rows: int, cols: int) -> Mat:
    return [zero_vector(cols) for _ in range(rows)]


def identity_matrix(n: int) -> Mat:
    m = zero_matrix(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def mat_copy(a: Sequence[Sequence]) -> Mat:
    return [[frac(x) for x in row] for row in a]


def mat_add(a: Mat, b: Mat) -> Mat:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Mat, b: Mat) -> Mat:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Mat, c: Fraction) -> Mat:
    return [[x * c for x in row] for row in a]


def mat_mul(a: Mat, b: Mat) -> Mat:
    n, k = len(a), len(b)
    if any(len(row) != k for row in a):
        raise ValueError("matrix shape mismatch")
    cols = len(b[0]) if b else 0
    out = zero_matrix(n, cols)
    for i in range(n):
        arow = a[i]
        orow = out[i]
        for t in range(k):
            c = arow[t]
            if c:
                brow = b[t]
                for j in range(cols):
                    if brow[j]:
                        orow[j] += c * brow[j]
    return out


def mat_vec(a: Mat, v: Vec) -> Vec:
    return [sum((c * x for c, x in zip(row, v)), Fraction(0)) for row in a]


def mat_eq(a: Mat, b: Mat) -> bool:
    return len(a) == len(b) and all(ra == rb for ra, rb in zip(a, b))


def is_zero_matrix(a: Mat) -> bool:
    return all(all(x == 0 for x in row) for row in a)


def transpose(a: Mat) -> Mat:
    return [list(col) for col in zip(*a)] if a else []


def mat_trace(a: Mat) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def rref(rows: Sequence[Sequence]) -> tuple[Mat, list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = mat_copy(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[0])


def det(a: Mat) -> Fraction:
    n = len(a)
    m = mat_copy(a)
    result = Fraction(1)
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            result = -result
        result *= m[c][c]
        inv = Fraction(1) / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def mat_inverse(a: Mat) -> Mat:
    n = len(a)
    aug = [list(row) + ident_row for row, ident_row in zip(mat_copy(a), identity_matrix(n))]
    reduced, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(reduced) != n:
        raise SingularMatrix("matrix is not invertible over Q")
    return [row[n:] for row in reduced]


def solve(a: Mat, b: Vec) -> Vec | None:
    """One solution of a x = b, or None if inconsistent (free variables set to 0)."""
    if not a:
        return [] if all(x == 0 for x in b) else None
    ncols = len(a[0])
    aug = [list(row) + [rhs] for row, rhs in zip(mat_copy(a), b)]
    reduced, pivots = rref(aug)
    x = zero_vector(ncols)
    for row, p in zip(reduced, pivots):
        if p == ncols:
            return None
        x[p] = row[ncols]
    return x


def nullspace(a: Mat) -> list[Vec]:
    """Basis of the right kernel of a."""
    if not a:
        return []
    ncols = len(a[0])
    reduced, pivots = rref(a)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = zero_vector(ncols)
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


class Span:
    """Incrementally built subspace with coordinates over the added basis.

    `add` keeps a vector only if it increases the rank; `coords` expresses a
    member in terms of the vectors that were actually kept.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.basis: list[Vec] = []
        self._rows: list[Vec] = []       # echelonized copies of basis vectors
        self._reps: list[Vec] = []       # row i = combination of basis giving _rows[i]
        self._pivots: list[int] = []

    def _reduce(self, v: Vec) -> tuple[Vec, Vec]:
        v = [frac(x) for x in v]
        rep = zero_vector(len(self.basis))
        for row, rrep, p in zip(self._rows, self._reps, self._pivots):
            if v[p] != 0:
                f = v[p] / row[p]
                v = [x - f * y for x, y in zip(v, row)]
                rep = [x - f * y for x, y in zip(rep, rrep + zero_vector(len(self.basis) - len(rrep)))]
        return v, rep

    def add(self, v: Vec) -> bool:
        reduced, _ = self._reduce(v)
        pivot = next((i for i, x in enumerate(reduced) if x != 0), None)
        if pivot is None:
            return False
        self.basis.append([frac(x) for x in v])
        for rep in self._reps:
            rep.append(Fraction(0))
        rep = zero_vector(len(self.basis))
        rep[-1] = Fraction(1)
        # re-derive the echelonized row with its representation
        row = [frac(x) for x in v]
        for erow, errep, p in zip(self._rows, self._reps, self._pivots):
            if row[p] != 0:
                f = row[p] / erow[p]
                row = [x - f * y for x, y in zip(row, erow)]
                rep = [x - f * y for x, y in zip(rep, errep)]
        self._rows.append(row)
        self._reps.append(rep)
        self._pivots.append(pivot)
        return True

    def contains(self, v: Vec) -> bool:
        reduced, _ = self._reduce(v)
        return all(x == 0 for x in reduced)

    def coords(self, v: Vec) -> Vec | None:
        """Coefficients over self.basis reproducing v, or None if v is outside."""
        reduced, rep = self._reduce(v)
        if any(x != 0 for x in reduced):
            return None
        return [-x for x in rep]

    @property
    def rank(self) -> int:
        return len(self.basis)
