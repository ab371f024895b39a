"""gcalg: exact symbolic kernel for finite graded associative conformal
algebras over the affine line, with a batch CLI and an HTTP service."""

__version__ = "0.1.0"

from .poly import MPoly, parse_poly, parse_rational  # noqa: E402,F401
from .groups import (  # noqa: E402,F401
    FiniteGroup,
    FineSubgroupData,
    GradingContext,
    check_sigma,
    coset_decomposition,
    group_validate,
    make_cyclic,
    make_symmetric3,
    make_trivial,
)
from .cohomology import (  # noqa: E402,F401
    MultCocycleZ,
    OneCochain,
    check_additive_cocycle,
    check_mult_cocycle_Z,
    chi_from_theta,
    coboundary_of,
    cocycle_consequences,
    find_trivializing_cochain,
)
from .conformal import (  # noqa: E402,F401
    GradedAlgebraFD,
    GradedConformalAlgebra,
    conjugation_automorphism,
    cur,
    regrade_by_tau,
)
from .cend import (  # noqa: E402,F401
    CendMatrix,
    cend_product,
    change_basis,
    check_cend_associativity,
    pi_gamma,
)
from .hnf import PolySubmodule, hermite_nf, submodule_contains  # noqa: E402,F401
from .structure import (  # noqa: E402,F401
    FineStructure,
    TwistedMatrixAlgebra,
    build_twisted_matrix_algebra,
    conformal_simplicity_suite,
    decompose_semisimple_graded,
    graded_irreducible,
    ideal_closure,
    is_graded_simple,
    phi_isomorphism,
    radical_fd,
    recover_fine_structure,
    reproduce_spans,
)
