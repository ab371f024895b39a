"""Finite graded conformal algebras over the affine line with twist data (sigma, phi).

An algebra is a free Q[T]-module on a homogeneous basis e_1..e_N with degree
labels in a finite group, together with structure polynomials c_ijk(lambda, T)
giving (e_i ~lambda~ e_j) = sum_k c_ijk e_k.  The twisted sesquilinearity rules
are baked into the product of general elements:

    coefficient h(T) on the left factor of degree a contributes the scalar
        h(-sigma(a) * (lambda + phi(a, a^-1)))
    coefficient h(T) on the right factor contributes the shift
        h(T + sigma(a*b) * lambda + phi(a^-1, a*b)).

Axiom checking is exact polynomial identity testing in Q[lambda, mu, T]; no
sampling is involved anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .cohomology import OneCochain, check_additive_cocycle, coboundary_of, with_phi
from .errors import (
    CocyclesNotCohomologous,
    NotAssociative,
    NotHomogeneous,
)
from .groups import FiniteGroup, GradingContext
from .linalg import mat_inverse
from .poly import LAMBDA, MPoly, MU, T

Coords = tuple[MPoly, ...]


def _left_factor(ctx: GradingContext, alpha: int, lam: MPoly) -> MPoly:
    """Substitution target for T in a left-hand coefficient of degree alpha."""
    s = ctx.sigma_of(alpha)
    c = ctx.phi_of(alpha, ctx.inv(alpha))
    return (lam + MPoly.const(c)).scale(-s)


def _right_shift(ctx: GradingContext, alpha: int, beta: int, lam: MPoly) -> MPoly:
    """Substitution target for T in a right-hand coefficient (degrees alpha, beta)."""
    ab = ctx.mul(alpha, beta)
    return T + lam.scale(ctx.sigma_of(ab)) + MPoly.const(ctx.phi_of(ctx.inv(alpha), ab))


@dataclass(frozen=True)
class AxiomFailure:
    kind: str
    indices: tuple
    detail: str


@dataclass
class AxiomReport:
    failures: list[AxiomFailure]
    checked: int

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def first(self) -> AxiomFailure | None:
        return self.failures[0] if self.failures else None


class GradedConformalAlgebra:
    """Free Q[T]-module with graded basis and lambda-product structure polynomials."""

    def __init__(self, ctx: GradingContext, basis_degrees, structure, basis_labels=None):
        self.ctx = ctx
        self.degrees = tuple(
            ctx.group.index_of(d) if isinstance(d, str) else int(d) for d in basis_degrees
        )
        self.n = len(self.degrees)
        self.structure = tuple(
            tuple(tuple(structure[i][j][k] for k in range(self.n)) for j in range(self.n))
            for i in range(self.n)
        )
        self.labels = tuple(basis_labels) if basis_labels else tuple(
            f"e{i + 1}" for i in range(self.n)
        )
        for i, j, k in itertools.product(range(self.n), repeat=3):
            c = self.structure[i][j][k]
            if not c.uses_only({"T", "lambda"}):
                raise ValueError(f"structure constant c[{i}][{j}][{k}] uses variables beyond T, lambda")

    # -- elements ---------------------------------------------------------

    def zero_element(self) -> Coords:
        return tuple(MPoly.zero() for _ in range(self.n))

    def basis_element(self, i: int) -> Coords:
        return tuple(MPoly.const(1) if k == i else MPoly.zero() for k in range(self.n))

    def element_degree(self, coords) -> int:
        """Degree index of a homogeneous element; raises NotHomogeneous otherwise."""
        support = {self.degrees[i] for i, c in enumerate(coords) if not c.is_zero()}
        if len(support) > 1:
            names = sorted(self.ctx.group.elements[d] for d in support)
            raise NotHomogeneous(f"element mixes degrees {names}")
        if not support:
            raise NotHomogeneous("the zero element carries no degree")
        return support.pop()

    def homogeneous_parts(self, coords) -> dict[int, Coords]:
        parts: dict[int, list[MPoly]] = {}
        for i, c in enumerate(coords):
            if c.is_zero():
                continue
            part = parts.setdefault(self.degrees[i], [MPoly.zero()] * self.n)
            part[i] = c
        return {d: tuple(p) for d, p in parts.items()}

    # -- products ------------------------------------------------------------

    def lambda_product(self, a, b) -> Coords:
        """Product of two homogeneous elements; result entries live in Q[lambda, T]."""
        for c in tuple(a) + tuple(b):
            if not c.uses_only({"T"}):
                raise ValueError("element coordinates must be polynomials in T only")
        self.element_degree(a)
        self.element_degree(b)
        return self._product(a, b, LAMBDA)

    def lambda_product_general(self, a, b, lam: MPoly = LAMBDA) -> Coords:
        """Bilinear extension over homogeneous parts; lam may be any polynomial value."""
        result = [MPoly.zero()] * self.n
        for pa in self.homogeneous_parts(a).values():
            for pb in self.homogeneous_parts(b).values():
                term = self._product(pa, pb, lam)
                result = [r + t for r, t in zip(result, term)]
        return tuple(result)

    def _product(self, a, b, lam: MPoly) -> Coords:
        ctx = self.ctx
        result = [MPoly.zero()] * self.n
        for i, ai in enumerate(a):
            if ai.is_zero():
                continue
            alpha = self.degrees[i]
            fa = ai.substitute({"T": _left_factor(ctx, alpha, lam)})
            for j, bj in enumerate(b):
                if bj.is_zero():
                    continue
                beta = self.degrees[j]
                fb = bj.substitute({"T": _right_shift(ctx, alpha, beta, lam)})
                scale = fa * fb
                if scale.is_zero():
                    continue
                row = self.structure[i][j]
                for k in range(self.n):
                    c = row[k]
                    if not c.is_zero():
                        if lam is not LAMBDA:
                            c = c.substitute({"lambda": lam})
                        result[k] = result[k] + scale * c
        return tuple(result)

    # -- axioms ----------------------------------------------------------------

    def check_axioms(self, max_failures: int = 10) -> AxiomReport:
        """Verify (C2) grading, both sesquilinearity laws on T-multiples, and
        associativity for all basis triples, as exact identities in Q[lambda, mu, T]."""
        ctx = self.ctx
        failures: list[AxiomFailure] = []
        checked = 0

        def record(kind, indices, detail):
            if len(failures) < max_failures:
                failures.append(AxiomFailure(kind, indices, detail))

        for i, j in itertools.product(range(self.n), repeat=2):
            target = ctx.mul(self.degrees[i], self.degrees[j])
            for k in range(self.n):
                checked += 1
                if not self.structure[i][j][k].is_zero() and self.degrees[k] != target:
                    record(
                        "grading",
                        (i, j, k),
                        f"c[{i + 1}][{j + 1}][{k + 1}] nonzero but basis degree "
                        f"{ctx.group.elements[self.degrees[k]]} != "
                        f"{ctx.group.elements[target]}",
                    )

        for i, j in itertools.product(range(self.n), repeat=2):
            base = self.structure[i][j]
            alpha, beta = self.degrees[i], self.degrees[j]
            t_ei = tuple(T if k == i else MPoly.zero() for k in range(self.n))
            t_ej = tuple(T if k == j else MPoly.zero() for k in range(self.n))
            left = self._product(t_ei, self.basis_element(j), LAMBDA)
            factor = _left_factor(ctx, alpha, LAMBDA)
            checked += 2
            if any(l != factor * c for l, c in zip(left, base)):
                record("sesqui-left", (i, j), "T-multiple on the left violates the scaling law")
            right = self._product(self.basis_element(i), t_ej, LAMBDA)
            shift = _right_shift(ctx, alpha, beta, LAMBDA)
            if any(r != shift * c for r, c in zip(right, base)):
                record("sesqui-right", (i, j), "T-multiple on the right violates the shift law")

        for i, j, k in itertools.product(range(self.n), repeat=3):
            checked += 1
            if not self._associativity_instance(i, j, k):
                record(
                    "associativity",
                    (i, j, k),
                    f"(e{i + 1} ~lambda~ e{j + 1}) ~mu~ e{k + 1} differs from the re-bracketing",
                )
                if len(failures) >= max_failures:
                    break
        return AxiomReport(failures, checked)

    def _associativity_instance(self, i: int, j: int, k: int) -> bool:
        ctx = self.ctx
        alpha, beta = self.degrees[i], self.degrees[j]
        ab = ctx.mul(alpha, beta)
        # left side: coefficients of (e_i e_j) are polynomials in lambda and T;
        # the outer mu-product evaluates their T through the left-factor rule.
        t_outer = _left_factor(ctx, ab, MU)
        lhs = [MPoly.zero()] * self.n
        for l in range(self.n):
            c = self.structure[i][j][l]
            if c.is_zero():
                continue
            scale = c.substitute({"T": t_outer})
            for m in range(self.n):
                inner = self.structure[l][k][m]
                if not inner.is_zero():
                    lhs[m] = lhs[m] + scale * inner.substitute({"lambda": MU})
        # right side: nu = sigma(alpha) * (mu - lambda - phi(beta^-1, alpha^-1))
        nu = (MU - LAMBDA - MPoly.const(ctx.phi_of(ctx.inv(beta), ctx.inv(alpha)))).scale(
            ctx.sigma_of(alpha)
        )
        delta = ctx.mul(beta, self.degrees[k])
        shift = _right_shift(ctx, alpha, delta, LAMBDA)
        rhs = [MPoly.zero()] * self.n
        for l in range(self.n):
            c = self.structure[j][k][l]
            if c.is_zero():
                continue
            scale = c.substitute({"lambda": nu, "T": shift})
            for m in range(self.n):
                outer = self.structure[i][l][m]
                if not outer.is_zero():
                    rhs[m] = rhs[m] + scale * outer
        return all(a == b for a, b in zip(lhs, rhs))


# -- ordinary graded algebras and current algebras ----------------------------


class GradedAlgebraFD:
    """Finite-dimensional associative algebra with a group grading over Q."""

    def __init__(self, group: FiniteGroup, degrees, mult, labels=None):
        self.group = group
        self.degrees = tuple(
            group.index_of(d) if isinstance(d, str) else int(d) for d in degrees
        )
        self.dim = len(self.degrees)
        self.mult = tuple(
            tuple(tuple(Fraction(mult[i][j][k]) for k in range(self.dim)) for j in range(self.dim))
            for i in range(self.dim)
        )
        self.labels = tuple(labels) if labels else tuple(f"a{i + 1}" for i in range(self.dim))

    def multiply(self, u, v) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for i, ci in enumerate(u):
            if ci == 0:
                continue
            for j, cj in enumerate(v):
                if cj == 0:
                    continue
                row = self.mult[i][j]
                f = ci * cj
                for k in range(self.dim):
                    if row[k]:
                        out[k] += f * row[k]
        return out

    def grading_compatible(self) -> bool:
        for i, j, k in itertools.product(range(self.dim), repeat=3):
            if self.mult[i][j][k] != 0 and self.degrees[k] != self.group.mul(
                self.degrees[i], self.degrees[j]
            ):
                return False
        return True

    def is_associative(self) -> bool:
        basis = [
            [Fraction(1) if t == s else Fraction(0) for t in range(self.dim)]
            for s in range(self.dim)
        ]
        for i, j, k in itertools.product(range(self.dim), repeat=3):
            left = self.multiply(self.multiply(basis[i], basis[j]), basis[k])
            right = self.multiply(basis[i], self.multiply(basis[j], basis[k]))
            if left != right:
                return False
        return True

    def direct_sum(self, other: "GradedAlgebraFD") -> "GradedAlgebraFD":
        if self.group is not other.group and self.group.elements != other.group.elements:
            raise ValueError("direct summands must be graded by the same group")
        dim = self.dim + other.dim
        mult = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for i, j, k in itertools.product(range(self.dim), repeat=3):
            mult[i][j][k] = self.mult[i][j][k]
        for i, j, k in itertools.product(range(other.dim), repeat=3):
            mult[self.dim + i][self.dim + j][self.dim + k] = other.mult[i][j][k]
        labels = tuple(f"l.{s}" for s in self.labels) + tuple(f"r.{s}" for s in other.labels)
        return GradedAlgebraFD(
            self.group, self.degrees + other.degrees, mult, labels
        )


def cur(algebra: GradedAlgebraFD, ctx: GradingContext, require_associative: bool = False) -> GradedConformalAlgebra:
    """Current conformal algebra on an ordinary graded algebra.

    Basis products carry the constant structure coefficients; all twist factors
    come from the sesquilinearity rules at product time.
    """
    if algebra.group.elements != ctx.group.elements:
        raise ValueError("algebra grading group does not match the context group")
    if not algebra.grading_compatible():
        raise NotHomogeneous("algebra structure constants violate the grading")
    if require_associative and not algebra.is_associative():
        raise NotAssociative("underlying algebra is not associative")
    structure = tuple(
        tuple(
            tuple(MPoly.const(algebra.mult[i][j][k]) for k in range(algebra.dim))
            for j in range(algebra.dim)
        )
        for i in range(algebra.dim)
    )
    return GradedConformalAlgebra(ctx, algebra.degrees, structure, algebra.labels)


def regrade_by_tau(
    C: GradedConformalAlgebra, tau: OneCochain, new_phi
) -> GradedConformalAlgebra:
    """Re-grade along a 1-cochain: twist the module action by T - tau(degree) and
    shift the product parameter by tau(degree^-1).

    Requires new_phi == phi + (d tau) entrywise, i.e. the contexts are
    cohomologous through tau; raises CocyclesNotCohomologous otherwise.
    """
    ctx = C.ctx
    delta = coboundary_of(tau, ctx)
    n = ctx.group.order
    expected = tuple(
        tuple(ctx.phi[a][b] + delta[a][b] for b in range(n)) for a in range(n)
    )
    target = tuple(tuple(Fraction(v) for v in row) for row in new_phi)
    if target != expected:
        raise CocyclesNotCohomologous("new phi is not phi + coboundary(tau)")
    new_ctx = with_phi(ctx, target)
    if not check_additive_cocycle(new_ctx):
        raise CocyclesNotCohomologous("twisted phi fails the cocycle condition")
    structure = []
    for i in range(C.n):
        lam_shift = LAMBDA + MPoly.const(tau(ctx.inv(C.degrees[i])))
        row_i = []
        for j in range(C.n):
            entries = []
            for k in range(C.n):
                c = C.structure[i][j][k]
                if c.is_zero():
                    entries.append(c)
                    continue
                t_shift = T + MPoly.const(tau(C.degrees[k]))
                entries.append(c.substitute({"lambda": lam_shift, "T": t_shift}))
            row_i.append(tuple(entries))
        structure.append(tuple(row_i))
    return GradedConformalAlgebra(new_ctx, C.degrees, tuple(structure), C.labels)


def conjugation_automorphism(C: GradedConformalAlgebra, q) -> bool:
    """Check that a -> Q^-1 a Q preserves the lambda-product of a matrix current algebra.

    The algebra must be Cur(M_n) with basis ordered as matrix units E_11, E_12, ...
    row-major; Q is a constant invertible matrix.
    """
    n_sq = C.n
    n = int(round(n_sq ** 0.5))
    if n * n != n_sq:
        raise ValueError("expected a full matrix-unit basis")
    q = [[Fraction(x) for x in row] for row in q]
    q_inv = mat_inverse(q)  # raises SingularMatrix

    def conjugate(coords):
        # element as an n x n matrix over Q[T]
        mat = [[coords[r * n + c] for c in range(n)] for r in range(n)]
        out = [[MPoly.zero() for _ in range(n)] for _ in range(n)]
        for r in range(n):
            for c in range(n):
                acc = MPoly.zero()
                for s in range(n):
                    for t in range(n):
                        coeff = q_inv[r][s] * q[t][c]
                        if coeff:
                            acc = acc + mat[s][t].scale(coeff)
                out[r][c] = acc
        return tuple(out[r][c] for r in range(n) for c in range(n))

    for i in range(n_sq):
        for j in range(n_sq):
            a = C.basis_element(i)
            b = C.basis_element(j)
            direct = C.lambda_product_general(conjugate(a), conjugate(b))
            mapped = conjugate(C.lambda_product_general(a, b))
            if direct != mapped:
                return False
    return True
