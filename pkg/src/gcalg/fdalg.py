"""Finite-dimensional associative algebra machinery over Q.

Algebras are handled through structure-constant tables.  The Jacobson radical
comes from the trace-form kernel of the regular representation (valid in
characteristic zero); commutative semisimple algebras are split into primitive
idempotents through a primitive element whose minimal polynomial is factored
over Q (sympy does the univariate factoring, everything else is exact linear
algebra on Fractions).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy

from . import linalg
from .errors import InternalInconsistency, NotSemisimple
from .linalg import Span, Vec


@dataclass(frozen=True)
class FDTable:
    """Structure-constant table: table[i][j] is the coordinate vector of b_i * b_j."""

    dim: int
    table: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def multiply(self, u: Vec, v: Vec) -> Vec:
        out = [Fraction(0)] * self.dim
        for i, ci in enumerate(u):
            if ci == 0:
                continue
            for j, cj in enumerate(v):
                if cj == 0:
                    continue
                f = ci * cj
                row = self.table[i][j]
                for k in range(self.dim):
                    if row[k]:
                        out[k] += f * row[k]
        return out

    def basis_vector(self, i: int) -> Vec:
        return [Fraction(1) if k == i else Fraction(0) for k in range(self.dim)]

    def left_mult_matrix(self, u: Vec) -> list[list[Fraction]]:
        cols = [self.multiply(u, self.basis_vector(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def is_associative(self) -> bool:
        for i in range(self.dim):
            bi = self.basis_vector(i)
            for j in range(self.dim):
                bj = self.basis_vector(j)
                ij = self.multiply(bi, bj)
                for k in range(self.dim):
                    bk = self.basis_vector(k)
                    if self.multiply(ij, bk) != self.multiply(bi, self.multiply(bj, bk)):
                        return False
        return True


def table_from_mult(dim: int, mult) -> FDTable:
    basis = [[Fraction(1) if k == i else Fraction(0) for k in range(dim)] for i in range(dim)]
    return FDTable(
        dim,
        tuple(
            tuple(tuple(Fraction(c) for c in mult(basis[i], basis[j])) for j in range(dim))
            for i in range(dim)
        ),
    )


def close_under_products(vectors: list[Vec], mult) -> tuple[list[Vec], FDTable]:
    """Span closure of ambient vectors under a raw multiplication.

    Returns the kept basis (ambient coordinates) and the structure table
    expressed over that basis.
    """
    if not vectors:
        raise ValueError("need at least one vector")
    ambient = len(vectors[0])
    span = Span(ambient)
    for v in vectors:
        span.add(v)
    changed = True
    while changed:
        changed = False
        basis = list(span.basis)
        for u in basis:
            for v in basis:
                if span.add(mult(u, v)):
                    changed = True
    basis = list(span.basis)
    dim = len(basis)
    table = []
    for u in basis:
        row = []
        for v in basis:
            coords = span.coords(mult(u, v))
            if coords is None:
                raise InternalInconsistency("product escaped a closed span")
            row.append(tuple(coords))
        table.append(tuple(row))
    return basis, FDTable(dim, tuple(table))


def subalgebra_table(t: FDTable, basis_coords: list[Vec]) -> tuple[FDTable, list[Vec]]:
    """Structure table of a multiplicatively closed subspace, in its own coordinates.

    Returns the table together with the independent subset of basis_coords
    actually used (in input order).
    """
    span = Span(t.dim)
    kept = []
    for v in basis_coords:
        if span.add(v):
            kept.append(v)
    dim = len(kept)
    table = []
    for u in kept:
        row = []
        for v in kept:
            coords = span.coords(t.multiply(u, v))
            if coords is None:
                raise ValueError("subspace is not closed under multiplication")
            row.append(tuple(coords))
        table.append(tuple(row))
    return FDTable(dim, tuple(table)), kept


def identity_coords(t: FDTable) -> Vec | None:
    """Two-sided identity element, or None."""
    rows = []
    rhs = []
    for j in range(t.dim):
        bj = t.basis_vector(j)
        for k in range(t.dim):
            left = [t.table[i][j][k] for i in range(t.dim)]
            rows.append(left)
            rhs.append(bj[k])
            right = [t.table[j][i][k] for i in range(t.dim)]
            rows.append(right)
            rhs.append(bj[k])
    return linalg.solve(rows, rhs)


def radical(t: FDTable) -> list[Vec]:
    """Jacobson radical via the trace-form kernel of the regular representation.

    In characteristic zero, a lies in the radical iff tr L_{a b} = 0 for every
    b and tr L_a = 0 (the extra row accounts for the adjoined identity).
    """

    def trace_of(u: Vec) -> Fraction:
        total = Fraction(0)
        for k in range(t.dim):
            total += t.multiply(u, t.basis_vector(k))[k]
        return total

    rows = []
    for j in range(t.dim):
        bj = t.basis_vector(j)
        rows.append([trace_of(t.multiply(t.basis_vector(i), bj)) for i in range(t.dim)])
    rows.append([trace_of(t.basis_vector(i)) for i in range(t.dim)])
    return linalg.nullspace(rows)


def center(t: FDTable) -> list[Vec]:
    rows = []
    for j in range(t.dim):
        for k in range(t.dim):
            rows.append(
                [t.table[i][j][k] - t.table[j][i][k] for i in range(t.dim)]
            )
    return linalg.nullspace(rows)


def min_poly(t: FDTable, z: Vec, one: Vec) -> list[Fraction]:
    """Monic minimal polynomial of z (ascending coefficients), via power iterates."""
    span = Span(t.dim)
    powers = [list(one)]
    span.add(powers[0])
    current = list(one)
    while True:
        current = t.multiply(current, z)
        if not span.add(current):
            coords = span.coords(current)
            if coords is None:
                raise InternalInconsistency("power iterate escaped its own span")
            k = len(powers)
            coeffs = [-c for c in coords] + [Fraction(0)] * (k - len(coords))
            return coeffs[:k] + [Fraction(1)]
        powers.append(list(current))


def factor_over_q(coeffs: list[Fraction]) -> list[tuple[list[Fraction], int]]:
    """Factor a monic rational polynomial into monic irreducibles with multiplicities."""
    x = sympy.Symbol("x")
    expr = sum(
        sympy.Rational(c.numerator, c.denominator) * x ** i for i, c in enumerate(coeffs)
    )
    _, factors = sympy.Poly(expr, x, domain="QQ").factor_list()
    out = []
    for poly, mult in factors:
        raw = [Fraction(c.p, c.q) for c in reversed(sympy.Poly(poly, x, domain="QQ").all_coeffs())]
        lead = raw[-1]
        out.append(([c / lead for c in raw], int(mult)))
    return out


def poly_at_matrix(coeffs: list[Fraction], m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    result = linalg.zero_matrix(n, n)
    for c in reversed(coeffs):
        result = linalg.mat_mul(result, m)
        for i in range(n):
            result[i][i] += c
    return result


def split_commutative(t: FDTable) -> list[Vec]:
    """Primitive idempotents of a commutative semisimple algebra.

    Strategy: find a primitive element (deterministic candidate sweep), factor
    its minimal polynomial over Q, and take the identity of each factor kernel.
    Raises NotSemisimple on repeated factors or a missing identity.
    """
    one = identity_coords(t)
    if one is None:
        raise NotSemisimple("commutative algebra has no identity; radical must be nonzero")
    if t.dim == 1:
        return [one]

    def candidates():
        for i in range(t.dim):
            yield t.basis_vector(i)
        for c in range(1, 4 * t.dim * t.dim + 8):
            yield [Fraction(c) ** j for j in range(t.dim)]

    best: tuple[list[Fraction], Vec] | None = None
    for z in candidates():
        mp = min_poly(t, z, one)
        if len(mp) - 1 == t.dim:
            best = (mp, z)
            break
    if best is None:
        raise NotSemisimple(
            "no primitive element found; the algebra is not commutative semisimple"
        )
    mp, z = best
    factors = factor_over_q(mp)
    if any(mult > 1 for _, mult in factors):
        raise NotSemisimple("minimal polynomial has a repeated factor")
    if len(factors) == 1:
        return [one]
    lz = t.left_mult_matrix(z)
    idempotents = []
    for fac, _ in factors:
        kernel = linalg.nullspace(poly_at_matrix(fac, lz))
        if not kernel:
            raise InternalInconsistency("factor kernel is trivial")
        rows = []
        rhs = []
        for b in kernel:
            for k in range(t.dim):
                rows.append([t.multiply(v, b)[k] for v in kernel])
                rhs.append(b[k])
        sol = linalg.solve(rows, rhs)
        if sol is None:
            raise NotSemisimple("a factor component has no identity element")
        e = [Fraction(0)] * t.dim
        for c, v in zip(sol, kernel):
            for k in range(t.dim):
                e[k] += c * v[k]
        idempotents.append(e)
    return idempotents


def central_primitive_idempotents(t: FDTable) -> list[Vec]:
    """Primitive idempotents of the center; these cut out the Wedderburn blocks."""
    z_basis = center(t)
    if not z_basis:
        raise NotSemisimple("algebra has trivial center")
    zt, kept = subalgebra_table(t, z_basis)
    out = []
    for idem in split_commutative(zt):
        e = [Fraction(0)] * t.dim
        for c, v in zip(idem, kept):
            for k in range(t.dim):
                e[k] += c * v[k]
        out.append(e)
    return out
