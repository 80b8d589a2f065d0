"""Exact root counts for sparse polynomial systems: mixed volumes, intersection
multiplicity at the origin, Milnor numbers and the extended BKK bound."""
from .affine import (
    SubsetFamily,
    bkk_extended,
    check_P_nondegenerate,
    classify_subspaces,
    mult_star_centered,
    mult_star_infinity,
)
from .geometry import (
    LatticePolytope,
    PrimitiveNormal,
    SublatticeBasis,
    convex_hull,
    face,
    facet_normals,
    lattice_volume,
    minkowski_sum,
    mixed_volume,
    relative_mixed_volume,
    support_value,
)
from .local import (
    check_G_nondegenerate,
    check_inner_newton_nondegenerate,
    check_newton_nondegenerate,
    check_partial_milnor,
    kushnirenko_solve,
    mult0_finiteness,
    mult0_generic,
    mult0_generic_alt,
    mult_star_origin,
)
from .newton import (
    DiagramSystem,
    NewtonDiagram,
    SupportSet,
    WeightVector,
    candidate_weights_centered,
    candidate_weights_infinity,
    candidate_weights_origin,
    diagram_of,
    initial_face,
    initial_form,
    project,
    restrict,
    value,
)
from .polysys import (
    GF,
    QQ,
    BudgetExceeded,
    MonomialOrder,
    SparsePolynomial,
    buchberger,
    mora_local_length,
    mora_standard_basis,
    parse_polynomial,
    partial_derivative,
    sample_admissible,
    torus_has_common_zero,
    torus_root_count,
)

__version__ = "0.1.0"
