from fractions import Fraction

import pytest

from gcalg.cohomology import OneCochain, coboundary_of
from gcalg.conformal import conjugation_automorphism, cur, regrade_by_tau
from gcalg.errors import (
    CocyclesNotCohomologous,
    NotAssociative,
    NotHomogeneous,
    SingularMatrix,
)
from gcalg.fixtures import (
    context_trivial,
    context_z2,
    group_algebra,
    matrix_units_algebra,
    nonassociative_planted,
    scalar_algebra,
    truncated_cend_algebra,
    twisted_z2_algebra,
)
from gcalg.groups import make_cyclic
from gcalg.poly import LAMBDA, MPoly, T


def test_unit_current_algebra():
    C = cur(scalar_algebra(), context_trivial())
    assert [str(p) for p in C.lambda_product(C.basis_element(0), C.basis_element(0))] == ["1"]
    assert C.check_axioms().ok


def test_sesquilinearity_classical():
    C = cur(matrix_units_algebra(2), context_trivial())
    e12, e21 = C.basis_element(1), C.basis_element(2)
    t_e12 = tuple(T if i == 1 else MPoly.zero() for i in range(4))
    left = C.lambda_product(t_e12, e21)
    base = C.lambda_product(e12, e21)
    assert left == tuple((-LAMBDA) * c for c in base)
    t_e21 = tuple(T if i == 2 else MPoly.zero() for i in range(4))
    right = C.lambda_product(e12, t_e21)
    assert right == tuple((T + LAMBDA) * c for c in base)


def test_twisted_left_factor():
    # degree-u element with coefficient T over (Z2, sigma(u) = -1): factor is +lambda
    ctx = context_z2(-1, 0)
    A = group_algebra(make_cyclic(2))
    C = cur(A, ctx)
    t_eu = tuple(T if i == 1 else MPoly.zero() for i in range(2))
    left = C.lambda_product(t_eu, C.basis_element(1))
    base = C.lambda_product(C.basis_element(1), C.basis_element(1))
    assert left == tuple(LAMBDA * c for c in base)


def test_lambda_product_requires_homogeneous():
    ctx = context_z2(1, 0)
    C = cur(group_algebra(make_cyclic(2)), ctx)
    mixed = (MPoly.const(1), MPoly.const(1))
    with pytest.raises(NotHomogeneous):
        C.lambda_product(mixed, C.basis_element(0))
    # the bilinear extension handles the same element fine
    assert any(not p.is_zero() for p in C.lambda_product_general(mixed, mixed))


def test_cur_m2_current_formula():
    C = cur(matrix_units_algebra(2), context_trivial())
    prod = C.lambda_product(C.basis_element(1), C.basis_element(2))
    assert [str(p) for p in prod] == ["1", "0", "0", "0"]


def test_check_axioms_passes_iff_associative():
    ctx = context_trivial()
    assert cur(matrix_units_algebra(2), ctx).check_axioms().ok
    bad = nonassociative_planted()
    assert not bad.is_associative()
    rep = cur(bad, ctx).check_axioms()
    assert not rep.ok
    assert rep.first.kind == "associativity"
    with pytest.raises(NotAssociative):
        cur(bad, ctx, require_associative=True)


def test_check_axioms_detects_grading_violation():
    ctx = context_z2(1, 0)
    structure = [[[MPoly.zero(), MPoly.zero()] for _ in range(2)] for _ in range(2)]
    structure[0][0][1] = MPoly.const(1)  # e*e landing in degree u
    from gcalg.conformal import GradedConformalAlgebra

    C = GradedConformalAlgebra(ctx, ["0", "1"], structure)
    rep = C.check_axioms()
    assert not rep.ok
    assert rep.first.kind == "grading"
    assert rep.first.indices == (0, 0, 1)


def test_cur_group_algebra_all_contexts():
    z2 = make_cyclic(2)
    A = group_algebra(z2)
    for ctx in (context_z2(1, 0), context_z2(-1, 0), context_z2(1, 2)):
        assert cur(A, ctx).check_axioms().ok


def test_truncated_matrix_model_fails_closure():
    C = truncated_cend_algebra(context_trivial(), ["e"], 2)
    rep = C.check_axioms()
    assert not rep.ok
    assert rep.first.kind == "associativity"


def test_regrade_to_cohomologous_cocycle():
    ctx = context_z2(1, 2)
    C = cur(group_algebra(make_cyclic(2)), ctx)
    tau = OneCochain.build(ctx, {"1": -1})
    delta = coboundary_of(tau, ctx)
    new_phi = [
        [ctx.phi[a][b] + delta[a][b] for b in range(2)] for a in range(2)
    ]
    assert new_phi[1][1] == 0
    C2 = regrade_by_tau(C, tau, new_phi)
    assert C2.check_axioms().ok
    assert C2.ctx.phi[1][1] == 0


def test_regrade_rejects_wrong_target():
    ctx = context_z2(1, 2)
    C = cur(group_algebra(make_cyclic(2)), ctx)
    tau = OneCochain.build(ctx, {"1": -1})
    with pytest.raises(CocyclesNotCohomologous):
        regrade_by_tau(C, tau, ctx.phi)


def test_regrade_round_trip_bit_exact():
    ctx = context_z2(1, 2)
    C = cur(group_algebra(make_cyclic(2)), ctx)
    tau = OneCochain.build(ctx, {"1": Fraction(5, 3)})
    delta = coboundary_of(tau, ctx)
    phi2 = [[ctx.phi[a][b] + delta[a][b] for b in range(2)] for a in range(2)]
    C2 = regrade_by_tau(C, tau, phi2)
    back = OneCochain.build(C2.ctx, {"1": Fraction(-5, 3)})
    C3 = regrade_by_tau(C2, back, ctx.phi)
    assert C3.structure == C.structure
    assert C3.ctx.phi == C.ctx.phi


def test_regrade_is_functorial():
    ctx = context_z2(1, 2)
    C = cur(group_algebra(make_cyclic(2)), ctx)
    t1 = OneCochain.build(ctx, {"1": 1})
    t2 = OneCochain.build(ctx, {"1": Fraction(1, 2)})
    phi1 = [[ctx.phi[a][b] + coboundary_of(t1, ctx)[a][b] for b in range(2)] for a in range(2)]
    mid = regrade_by_tau(C, t1, phi1)
    phi2 = [
        [mid.ctx.phi[a][b] + coboundary_of(t2, mid.ctx)[a][b] for b in range(2)]
        for a in range(2)
    ]
    two_step = regrade_by_tau(mid, t2, phi2)
    combined = t1 + t2
    one_step = regrade_by_tau(C, combined, phi2)
    assert two_step.structure == one_step.structure


def test_conjugation_automorphism():
    C = cur(matrix_units_algebra(2), context_trivial())
    assert conjugation_automorphism(C, [[1, 0], [0, 1]])
    assert conjugation_automorphism(C, [[0, 1], [1, 0]])
    assert conjugation_automorphism(C, [[1, 0], [0, 2]])
    with pytest.raises(SingularMatrix):
        conjugation_automorphism(C, [[1, 1], [1, 1]])


def test_twisted_z2_cur_passes():
    A = twisted_z2_algebra(-1)
    for ctx in (context_z2(1, 0), context_z2(-1, 0), context_z2(1, 2)):
        assert cur(A, ctx).check_axioms().ok


def test_cur_requires_matching_group():
    with pytest.raises(ValueError):
        cur(group_algebra(make_cyclic(2)), context_trivial())


def test_truncated_matrix_model_fails_closure_graded():
    C = truncated_cend_algebra(context_z2(-1, 0), ["0", "1"], 1)
    rep = C.check_axioms()
    assert not rep.ok
    assert rep.first.kind == "associativity"


def test_current_product_matches_classical_oracle():
    # independent oracle for the trivial context: the classical current rule
    # (f(T) ox a) (g(T) ox b) = f(-lambda) g(T + lambda) ox ab, computed from
    # scratch on random module elements
    import random

    rng = random.Random(17)
    A = matrix_units_algebra(2)
    C = cur(A, context_trivial())

    def rand_coeff():
        return MPoly(
            {
                (k, 0, 0, 0): Fraction(rng.randint(-3, 3))
                for k in range(rng.randint(0, 3))
            }
        )

    for _ in range(15):
        a = tuple(rand_coeff() for _ in range(4))
        b = tuple(rand_coeff() for _ in range(4))
        expected = [MPoly.zero()] * 4
        for i, fi in enumerate(a):
            if fi.is_zero():
                continue
            fi_neg = fi.substitute({"T": -LAMBDA})
            for j, gj in enumerate(b):
                if gj.is_zero():
                    continue
                gj_shift = gj.substitute({"T": T + LAMBDA})
                coeff = fi_neg * gj_shift
                for k in range(4):
                    m = A.mult[i][j][k]
                    if m:
                        expected[k] = expected[k] + coeff.scale(m)
        assert list(C.lambda_product_general(a, b)) == expected
