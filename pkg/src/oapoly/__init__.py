"""Orthogonally additive homogeneous polynomials on the vector lattice R^d."""

from .complexify import ComplexLatticeVector, complex_polarize, conjugate, modulus
from .diagnostics import (
    CRITERIA,
    CriterionResult,
    EquivalenceReport,
    SuiteConfig,
    TolerancePolicy,
    check_complex_identity,
    check_cross_terms,
    check_decomposition,
    check_gm_identity,
    check_oa,
    check_orthosymmetric,
    check_pos_oa,
    check_rmp_identity,
    equivalence_suite,
)
from .means import (
    VariationalBudget,
    gm_closed,
    gm_variational,
    holder_conjugate,
    rmp_closed,
    rmp_variational,
)
from .polynomial import (
    HomogeneousPolynomial,
    make_diagonal,
    make_random,
    poly_eval,
    polarize,
    power_eval,
)
from .vlattice import (
    is_disjoint,
    lattice_abs,
    lattice_join,
    pos_neg_decompose,
    random_disjoint_pair,
)

__version__ = "0.1.0"
