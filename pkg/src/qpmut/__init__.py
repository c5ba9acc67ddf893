"""Workbench for graded quivers with potential on one underlying cycle.

Exact mutation of (graded) quivers with potential, W-gradings and their
weight invariant, degree-zero algebras with Cartan/Coxeter data, and the
full classification census for the cycle class, plus a JSON CLI and a small
HTTP session service.
"""

from .algebra import (
    PathBasis,
    PresentedAlgebra,
    build_overline_qp,
    cartan_matrix,
    coxeter_matrix,
    coxeter_polynomial,
    degree_zero_part,
    global_dimension,
    path_basis,
    projective_dimensions,
)
from .canonical import (
    CanonicalForm,
    canonical_form,
    canonical_key,
    quiver_automorphisms,
)
from .census import (
    ClassificationReport,
    MatildeVerdict,
    classify,
    enumerate_w_gradings,
    is_in_ma,
    is_in_matilde,
    pin_report,
)
from .core import (
    Arrow,
    CyclicWord,
    GradedQP,
    GradingCheck,
    Potential,
    Quiver,
    check_w_grading,
    cyclic_derivative,
    jacobian_relations,
    require_w_grading,
)
from .errors import (
    AmbiguityError,
    CapacityError,
    ConventionError,
    DriftError,
    InfiniteDimensionError,
    InternalInvariantError,
    NonterminationError,
    ParseError,
    PreconditionError,
    QPError,
    ScopeError,
    SearchBudgetError,
    UnsupportedPresentationError,
)
from .interchange import (
    algebra_doc_parts,
    canonical_json,
    degree_map_from_doc,
    pretty_json,
    qp_from_doc,
    qp_to_doc,
    quiver_from_doc,
    quiver_to_doc,
    sequence_from_doc,
    sequence_to_doc,
)
from .invariants import (
    ARSummary,
    DerivedVerdict,
    GradingEquivalence,
    WeightResult,
    ar_summary,
    atilde_coxeter_coefficients,
    derived_class_count,
    derived_equivalent,
    grading_equivalent,
    weight_bounds,
    weight_of_grading,
    weight_structural,
    weight_via_mutation,
)
from .mutation import (
    ClassMember,
    MutationClass,
    exchange_matrix,
    find_acyclic_sequence,
    is_mutable,
    matrix_mutation,
    mutate,
    mutate_sequence,
    mutation_class,
    premutate,
    reduce,
)
from .presets import PRESET_NAMES, cycle_qp, cycle_quiver, linear_quiver, preset
from .shape import (
    CycleDecomposition,
    MAVerdict,
    is_tree,
    ma_structural,
    matilde_decompositions,
    matilde_potential,
    oriented_triangles,
    single_cycle_traversal,
    triangle_potential,
    underlying_simple_cycles,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
