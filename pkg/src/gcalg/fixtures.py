"""Canonical desk-scale constructions shared by the test-suite, the bundled
input files, and the documentation examples."""

from __future__ import annotations

from fractions import Fraction

from .cend import cend_product, CendMatrix
from .conformal import GradedAlgebraFD, GradedConformalAlgebra
from .groups import (
    FiniteGroup,
    GradingContext,
    make_cyclic,
    make_symmetric3,
    make_trivial,
)
from .poly import MPoly, X


def matrix_units_algebra(n: int, group: FiniteGroup | None = None, degrees=None) -> GradedAlgebraFD:
    """M_n(Q) on the matrix-unit basis E_11, E_12, ... row-major."""
    group = group or make_trivial()
    dim = n * n

    def unit(i, j):
        return i * n + j

    mult = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    if b == c:
                        mult[unit(a, b)][unit(c, d)][unit(a, d)] = Fraction(1)
    if degrees is None:
        degrees = [group.elements[group.identity_index]] * dim
    labels = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return GradedAlgebraFD(group, degrees, mult, labels)


def scalar_algebra(group: FiniteGroup | None = None) -> GradedAlgebraFD:
    group = group or make_trivial()
    e = group.elements[group.identity_index]
    return GradedAlgebraFD(group, [e], [[[Fraction(1)]]], ["1"])


def group_algebra(group: FiniteGroup, grade_by_group: bool = True) -> GradedAlgebraFD:
    """Q[Gamma] on the group-element basis; graded by the group itself or trivially."""
    n = group.order
    mult = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            mult[i][j][group.mul(i, j)] = Fraction(1)
    degrees = list(group.elements) if grade_by_group else [
        group.elements[group.identity_index]
    ] * n
    return GradedAlgebraFD(group, degrees, mult, group.elements)


def twisted_z2_algebra(value: Fraction | int = -1, group: FiniteGroup | None = None) -> GradedAlgebraFD:
    """Two-dimensional algebra Q<1, w> with w^2 = value, graded by Z2 (w odd)."""
    group = group or make_cyclic(2)
    v = Fraction(value)
    mult = [
        [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]],
        [[Fraction(0), Fraction(1)], [v, Fraction(0)]],
    ]
    return GradedAlgebraFD(group, [group.elements[group.identity_index], group.elements[1]], mult, ["1", "w"])


def m2_checkerboard(group: FiniteGroup) -> GradedAlgebraFD:
    """M_2(Q) with the Z2-type grading: diagonal units even, off-diagonal odd."""
    e = group.elements[group.identity_index]
    u = group.elements[1]
    return matrix_units_algebra(2, group, [e, u, u, e])


def nonassociative_planted(group: FiniteGroup | None = None) -> GradedAlgebraFD:
    """Two-dimensional non-associative algebra: a*a = b, a*b = a, others zero."""
    group = group or make_trivial()
    e = group.elements[group.identity_index]
    mult = [
        [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]],
        [[Fraction(0), Fraction(0)], [Fraction(0), Fraction(0)]],
    ]
    return GradedAlgebraFD(group, [e, e], mult, ["a", "b"])


def context_trivial() -> GradingContext:
    return GradingContext.trivial()


def context_z2(sigma_u: int = 1, phi_uu: int = 0) -> GradingContext:
    return GradingContext.build(
        make_cyclic(2), sigma={"1": sigma_u}, phi={("1", "1"): phi_uu}
    )


def context_z4(sigma_1: int = -1) -> GradingContext:
    return GradingContext.build(make_cyclic(4), sigma={"1": sigma_1, "2": sigma_1 ** 2, "3": sigma_1 ** 3})


def context_s3(sign: bool = True) -> GradingContext:
    group = make_symmetric3()
    if not sign:
        return GradingContext.build(group)
    sigma = {label: -1 for label in ("(12)", "(13)", "(23)")}
    return GradingContext.build(group, sigma=sigma)


def truncated_cend_algebra(ctx: GradingContext, degrees, x_bound: int) -> GradedConformalAlgebra:
    """Conformal-algebra table for the x-degree-truncated matrix model.

    Basis (s, i, j) stands for x^s E_ij with s <= x_bound; products are the
    matrix-model products with every x-power above the bound dropped, so the
    table deliberately fails closure (and hence the associativity identity)
    once the bound can be exceeded.
    """
    group = ctx.group
    deg = tuple(
        group.index_of(d) if isinstance(d, str) else int(d) for d in degrees
    )
    n = len(deg)
    basis = [(s, i, j) for s in range(x_bound + 1) for i in range(n) for j in range(n)]
    index = {b: t for t, b in enumerate(basis)}
    dim = len(basis)
    basis_degrees = [
        group.elements[group.mul(deg[i], group.inv(deg[j]))] for (s, i, j) in basis
    ]
    structure = [[[MPoly.zero() for _ in range(dim)] for _ in range(dim)] for _ in range(dim)]
    for a_idx, (s, i, j) in enumerate(basis):
        for b_idx, (t, j2, k) in enumerate(basis):
            if j2 != j:
                continue
            a = CendMatrix.single(ctx, [group.elements[d] for d in deg], i, j, X ** s)
            b = CendMatrix.single(ctx, [group.elements[d] for d in deg], j, k, X ** t)
            prod = cend_product(a, b)
            entry = prod.entries[i][k]
            for x_pow, coeff_poly in entry.coeffs_in("x").items():
                if x_pow > x_bound:
                    continue  # truncation: drop escaping powers
                if not coeff_poly.uses_only({"lambda"}):
                    raise ValueError("pure x-power basis should give lambda-only coefficients")
                structure[a_idx][b_idx][index[(x_pow, i, k)]] = (
                    structure[a_idx][b_idx][index[(x_pow, i, k)]] + coeff_poly
                )
    labels = [f"x^{s}E{i + 1}{j + 1}" for (s, i, j) in basis]
    return GradedConformalAlgebra(ctx, basis_degrees, structure, labels)


FIXTURE_CONTEXTS: dict[str, GradingContext] = {}


def fixture_contexts() -> dict[str, GradingContext]:
    """The named grading contexts exercised throughout the acceptance suite."""
    if not FIXTURE_CONTEXTS:
        FIXTURE_CONTEXTS.update(
            {
                "trivial": context_trivial(),
                "z2-sigma-plus": context_z2(1, 0),
                "z2-sigma-minus": context_z2(-1, 0),
                "z2-phi-2": context_z2(1, 2),
            }
        )
    return FIXTURE_CONTEXTS
