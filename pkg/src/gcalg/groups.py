"""Finite groups as multiplication tables, coset machinery, and grading contexts.

Elements are opaque labels; all arithmetic happens on indices into the table.
The grading context bundles the finite group with a character sigma into Q*
and an additive 2-cocycle phi with rational values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotASubgroup,
    NotAUnionOfCosets,
    NotLatinSquare,
)


@dataclass(frozen=True)
class FiniteGroup:
    elements: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    identity_index: int

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        e = self.identity_index
        for j in range(self.order):
            if self.table[i][j] == e:
                return j
        raise NoInverse(f"element {self.elements[i]!r} has no inverse")

    def index_of(self, label: str) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise KeyError(f"unknown group element {label!r}") from None

    def element_order(self, i: int) -> int:
        e, k, acc = self.identity_index, 1, i
        while acc != e:
            acc = self.mul(acc, i)
            k += 1
        return k

    def __str__(self) -> str:
        return f"Group({', '.join(self.elements)})"


def group_validate(elements, table) -> FiniteGroup:
    """Validate a multiplication table and return the group.

    Checks, in order: shape and index range, Latin-square property, two-sided
    identity, two-sided inverses, associativity over all triples.
    """
    elements = tuple(str(e) for e in elements)
    n = len(elements)
    if len(set(elements)) != n:
        raise NotLatinSquare("element labels must be distinct")
    if len(table) != n or any(len(row) != n for row in table):
        raise NotLatinSquare(f"table must be {n}x{n}")
    tbl = tuple(tuple(int(v) for v in row) for row in table)
    for i, row in enumerate(tbl):
        for j, v in enumerate(row):
            if not 0 <= v < n:
                raise NotLatinSquare(f"table[{i}][{j}] = {v} out of range")
    for i in range(n):
        if len(set(tbl[i])) != n:
            raise NotLatinSquare(f"row {i} ({elements[i]!r}) repeats an entry")
        col = [tbl[k][i] for k in range(n)]
        if len(set(col)) != n:
            raise NotLatinSquare(f"column {i} ({elements[i]!r}) repeats an entry")
    identity = next(
        (c for c in range(n) if all(tbl[c][k] == k and tbl[k][c] == k for k in range(n))),
        None,
    )
    if identity is None:
        raise NoIdentity("no two-sided identity element")
    for i in range(n):
        if not any(tbl[i][j] == identity and tbl[j][i] == identity for j in range(n)):
            raise NoInverse(f"element {elements[i]!r} has no two-sided inverse")
    for a, b, c in itertools.product(range(n), repeat=3):
        if tbl[tbl[a][b]][c] != tbl[a][tbl[b][c]]:
            raise NotAssociative(
                f"associativity fails at ({elements[a]}, {elements[b]}, {elements[c]})"
            )
    return FiniteGroup(elements, tbl, identity)


def make_trivial() -> FiniteGroup:
    return FiniteGroup(("e",), ((0,),), 0)


def make_cyclic(n: int) -> FiniteGroup:
    """Cyclic group of order n with elements '0'..'n-1' under addition mod n."""
    if n < 1:
        raise ValueError("order must be >= 1")
    if n == 1:
        return make_trivial()
    elements = tuple(str(k) for k in range(n))
    table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    return FiniteGroup(elements, table, 0)


_S3_PERMS = {
    "e": (0, 1, 2),
    "(12)": (1, 0, 2),
    "(13)": (2, 1, 0),
    "(23)": (0, 2, 1),
    "(123)": (1, 2, 0),
    "(132)": (2, 0, 1),
}


def compose_perm(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """(p*q)(k) = p(q(k)): apply q first."""
    return tuple(p[q[k]] for k in range(len(q)))


def make_symmetric3() -> FiniteGroup:
    labels = tuple(_S3_PERMS)
    perms = [_S3_PERMS[name] for name in labels]
    index = {perm: i for i, perm in enumerate(perms)}
    table = tuple(
        tuple(index[compose_perm(perms[i], perms[j])] for j in range(6)) for i in range(6)
    )
    return FiniteGroup(labels, table, 0)


def s3_sign(label: str) -> Fraction:
    return Fraction(-1) if label in ("(12)", "(13)", "(23)") else Fraction(1)


@dataclass(frozen=True)
class GradingContext:
    """The triple (Gamma, sigma, phi) over the affine line, plus the support complement.

    sigma maps element index -> nonzero rational, phi maps index pairs (written
    additively, so the trivial cocycle is 0 everywhere).  gamma0 collects the
    degrees whose component is zero; it is empty unless coset machinery needs it.
    """

    group: FiniteGroup
    sigma: tuple[Fraction, ...]
    phi: tuple[tuple[Fraction, ...], ...]
    gamma0: frozenset[int] = field(default_factory=frozenset)

    @classmethod
    def build(cls, group: FiniteGroup, sigma=None, phi=None, gamma0=()) -> "GradingContext":
        n = group.order
        svec = [Fraction(1)] * n
        for label, value in (sigma or {}).items():
            svec[group.index_of(label)] = Fraction(value)
        pmat = [[Fraction(0)] * n for _ in range(n)]
        for (a, b), value in (phi or {}).items():
            pmat[group.index_of(a)][group.index_of(b)] = Fraction(value)
        g0 = frozenset(group.index_of(x) for x in gamma0)
        return cls(group, tuple(svec), tuple(tuple(row) for row in pmat), g0)

    @classmethod
    def trivial(cls, group: FiniteGroup | None = None) -> "GradingContext":
        return cls.build(group or make_trivial())

    def sigma_of(self, i: int) -> Fraction:
        return self.sigma[i]

    def phi_of(self, i: int, j: int) -> Fraction:
        return self.phi[i][j]

    def mul(self, i: int, j: int) -> int:
        return self.group.mul(i, j)

    def inv(self, i: int) -> int:
        return self.group.inv(i)

    @property
    def identity(self) -> int:
        return self.group.identity_index


def check_sigma(ctx: GradingContext) -> bool:
    """True iff sigma is a homomorphism Gamma -> Q* with no zero values."""
    n = ctx.group.order
    if any(s == 0 for s in ctx.sigma):
        return False
    for a in range(n):
        for b in range(n):
            if ctx.sigma[ctx.mul(a, b)] != ctx.sigma[a] * ctx.sigma[b]:
                return False
    return True


@dataclass(frozen=True)
class FineSubgroupData:
    """A subgroup Gamma_1 whose left cosets partition the grading support.

    reps[0] is always the identity; classes[k] lists the members of the coset
    reps[k] * Gamma_1 in index order.
    """

    group: FiniteGroup
    gamma1: tuple[int, ...]
    gamma0: frozenset[int]
    reps: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]

    @property
    def p(self) -> int:
        return len(self.reps)

    def coset_index(self, element: int) -> int | None:
        for k, cls in enumerate(self.classes):
            if element in cls:
                return k
        return None


def coset_decomposition(group: FiniteGroup, gamma1, gamma0=()) -> FineSubgroupData:
    """Split Gamma minus gamma0 into left cosets of gamma1, identity coset first."""
    g1 = sorted({group.index_of(x) if isinstance(x, str) else int(x) for x in gamma1})
    g0 = frozenset(group.index_of(x) if isinstance(x, str) else int(x) for x in gamma0)
    e = group.identity_index
    if e not in g1:
        raise NotASubgroup("gamma1 must contain the identity")
    g1set = set(g1)
    for a in g1:
        if group.inv(a) not in g1set:
            raise NotASubgroup(f"gamma1 not closed under inverse at {group.elements[a]!r}")
        for b in g1:
            if group.mul(a, b) not in g1set:
                raise NotASubgroup(
                    f"gamma1 not closed under product at "
                    f"({group.elements[a]}, {group.elements[b]})"
                )
    if g0 & g1set:
        raise NotAUnionOfCosets("gamma0 meets gamma1")
    support = [g for g in range(group.order) if g not in g0]
    reps: list[int] = [e]
    classes: list[tuple[int, ...]] = [tuple(sorted(group.mul(e, b) for b in g1))]
    covered = set(classes[0])
    if covered & g0:
        raise NotAUnionOfCosets("identity coset meets gamma0")
    for g in support:
        if g in covered:
            continue
        coset = tuple(sorted(group.mul(g, b) for b in g1))
        if any(x in g0 for x in coset):
            raise NotAUnionOfCosets(
                f"coset of {group.elements[g]!r} straddles the gamma0 boundary"
            )
        if covered & set(coset):
            raise NotAUnionOfCosets("cosets overlap previously covered support")
        reps.append(g)
        classes.append(coset)
        covered |= set(coset)
    if covered != set(support):
        raise NotAUnionOfCosets("support is not exactly covered by cosets")
    return FineSubgroupData(group, tuple(g1), g0, tuple(reps), tuple(classes))
