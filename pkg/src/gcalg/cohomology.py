"""Additive 2-cocycles with sigma-twisted rational coefficients, coboundaries,
trivialization over finite groups, and the partially supported multiplicative
cocycles that govern twisted matrix structures.

Additive convention: the coefficient group is (Q, +), sigma acts by rational
multiplication, so the cocycle condition reads

    phi(a*b, c) + sigma(c) * phi(a, b) == phi(a, b*c) + phi(b, c)

and a coboundary is (d tau)(a, b) = sigma(b) * tau(a) + tau(b) - tau(a*b).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import InternalInconsistency, NoSolution, NotACocycle
from .groups import FineSubgroupData, GradingContext, check_sigma


@dataclass(frozen=True)
class OneCochain:
    """A map Gamma -> Q, stored per element index."""

    values: tuple[Fraction, ...]

    @classmethod
    def build(cls, ctx: GradingContext, mapping) -> "OneCochain":
        vals = [Fraction(0)] * ctx.group.order
        for label, v in mapping.items():
            vals[ctx.group.index_of(label)] = Fraction(v)
        return cls(tuple(vals))

    def __call__(self, i: int) -> Fraction:
        return self.values[i]

    def __neg__(self) -> "OneCochain":
        return OneCochain(tuple(-v for v in self.values))

    def __add__(self, other: "OneCochain") -> "OneCochain":
        return OneCochain(tuple(a + b for a, b in zip(self.values, other.values)))


def find_cocycle_violation(ctx: GradingContext) -> tuple[int, int, int] | None:
    """First triple violating the twisted cocycle identity, or None.

    phi(e,e) != 0 is reported as the triple (e, e, e).
    """
    e = ctx.identity
    if ctx.phi_of(e, e) != 0:
        return (e, e, e)
    n = ctx.group.order
    for a, b, c in itertools.product(range(n), repeat=3):
        lhs = ctx.phi_of(ctx.mul(a, b), c) + ctx.sigma_of(c) * ctx.phi_of(a, b)
        rhs = ctx.phi_of(a, ctx.mul(b, c)) + ctx.phi_of(b, c)
        if lhs != rhs:
            return (a, b, c)
    return None


def check_additive_cocycle(ctx: GradingContext) -> bool:
    """All |Gamma|^3 instances of the twisted cocycle identity, plus phi(e,e) = 0."""
    if not check_sigma(ctx):
        return False
    return find_cocycle_violation(ctx) is None


def cocycle_consequences(ctx: GradingContext) -> bool:
    """Assert the identities that must follow from a valid cocycle.

    phi(a, e) = phi(e, a) = 0 and phi(a^-1, a) = sigma(a) * phi(a, a^-1) are
    consequences of the cocycle condition; a failure here is a kernel bug,
    not bad input.
    """
    e = ctx.identity
    for a in range(ctx.group.order):
        if ctx.phi_of(a, e) != 0 or ctx.phi_of(e, a) != 0:
            raise InternalInconsistency(
                f"phi({ctx.group.elements[a]}, e) or phi(e, ...) nonzero for a valid cocycle"
            )
        ai = ctx.inv(a)
        if ctx.phi_of(ai, a) != ctx.sigma_of(a) * ctx.phi_of(a, ai):
            raise InternalInconsistency(
                f"phi(a^-1, a) != sigma(a) phi(a, a^-1) at a = {ctx.group.elements[a]}"
            )
    return True


def coboundary_of(tau: OneCochain, ctx: GradingContext) -> tuple[tuple[Fraction, ...], ...]:
    """(d tau)(a, b) = sigma(b) tau(a) + tau(b) - tau(ab), as a full matrix."""
    n = ctx.group.order
    return tuple(
        tuple(
            ctx.sigma_of(b) * tau(a) + tau(b) - tau(ctx.mul(a, b))
            for b in range(n)
        )
        for a in range(n)
    )


def with_phi(ctx: GradingContext, phi) -> GradingContext:
    return GradingContext(ctx.group, ctx.sigma, tuple(tuple(row) for row in phi), ctx.gamma0)


def find_trivializing_cochain(ctx: GradingContext) -> OneCochain:
    """Solve (d tau) = phi directly as a linear system in the tau values.

    For finite Gamma a solution always exists; NoSolution therefore flags a
    kernel bug rather than bad input.  The returned cochain is re-checked by
    a coboundary round trip.
    """
    n = ctx.group.order
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for a in range(n):
        for b in range(n):
            row = [Fraction(0)] * n
            row[a] += ctx.sigma_of(b)
            row[b] += 1
            row[ctx.mul(a, b)] -= 1
            rows.append(row)
            rhs.append(ctx.phi_of(a, b))
    solution = linalg.solve(rows, rhs)
    if solution is None:
        raise NoSolution("no trivializing cochain found for a finite group")
    tau = OneCochain(tuple(solution))
    if coboundary_of(tau, ctx) != ctx.phi:
        raise NoSolution("trivializing cochain failed the coboundary round trip")
    return tau


# -- multiplicative cocycles --------------------------------------------------


def check_theta_cocycle(theta: dict[tuple[int, int], Fraction], fine: FineSubgroupData) -> bool:
    """Untwisted multiplicative 2-cocycle identity on Gamma_1, theta(e,e) = 1."""
    group = fine.group
    g1 = fine.gamma1
    e = group.identity_index

    def val(a: int, b: int) -> Fraction:
        return theta.get((a, b), Fraction(1))

    if val(e, e) != 1:
        return False
    if any(val(a, b) == 0 for a in g1 for b in g1):
        return False
    for a, b, c in itertools.product(g1, repeat=3):
        if val(group.mul(a, b), c) * val(a, b) != val(a, group.mul(b, c)) * val(b, c):
            return False
    return True


@dataclass(frozen=True)
class MultCocycleZ:
    """A partially supported multiplicative cocycle on Gamma x Gamma.

    Zero exactly where the second argument or the product lands in gamma0;
    normalized to 1 against coset representatives and identity first argument.
    """

    fine: FineSubgroupData
    chi: tuple[tuple[Fraction, ...], ...]

    def value(self, g: int, b: int) -> Fraction:
        return self.chi[g][b]

    def restriction_to_gamma1(self) -> dict[tuple[int, int], Fraction]:
        return {(a, b): self.chi[a][b] for a in self.fine.gamma1 for b in self.fine.gamma1}


def check_mult_cocycle_Z(z: MultCocycleZ) -> bool:
    """Support rule, normalizations, and the partial cocycle identity by enumeration."""
    fine = z.fine
    group = fine.group
    n = group.order
    e = group.identity_index
    g0 = fine.gamma0
    reps = set(fine.reps)
    for g in range(n):
        for b in range(n):
            v = z.value(g, b)
            off_support = b in g0 or group.mul(g, b) in g0
            if off_support:
                if v != 0:
                    return False
                continue
            if v == 0:
                return False
            if (b in reps or g == e) and v != 1:
                return False
    for g in range(n):
        for a in range(n):
            for b in range(n):
                if b in g0:
                    continue
                k = fine.coset_index(b)
                gk = fine.reps[k]
                lhs = z.value(g, group.mul(a, gk)) * z.value(group.mul(g, a), b)
                rhs = z.value(g, group.mul(a, b)) * z.value(a, b)
                if lhs != rhs:
                    return False
    return True


def chi_from_theta(theta: dict[tuple[int, int], Fraction], fine: FineSubgroupData) -> MultCocycleZ:
    """Extend a cocycle theta on Gamma_1 to the full partially supported chi.

    chi(g, b) = theta(rep_q^-1 * g * rep_k, rep_k^-1 * b) when b lies in coset k
    and g*b in coset q; zero off support.  The result is re-validated.
    """
    if not check_theta_cocycle(theta, fine):
        raise NotACocycle("theta is not a multiplicative 2-cocycle on gamma1 with theta(e,e)=1")
    group = fine.group
    n = group.order
    g0 = fine.gamma0

    def tval(a: int, b: int) -> Fraction:
        return theta.get((a, b), Fraction(1))

    chi = [[Fraction(0)] * n for _ in range(n)]
    for g in range(n):
        for b in range(n):
            if b in g0:
                continue
            gb = group.mul(g, b)
            if gb in g0:
                continue
            k = fine.coset_index(b)
            q = fine.coset_index(gb)
            gk, gq = fine.reps[k], fine.reps[q]
            left = group.mul(group.inv(gq), group.mul(g, gk))
            right = group.mul(group.inv(gk), b)
            chi[g][b] = tval(left, right)
    z = MultCocycleZ(fine, tuple(tuple(row) for row in chi))
    if not check_mult_cocycle_Z(z):
        raise InternalInconsistency("chi built from a valid theta failed validation")
    return z
