"""Cyclotomic graphs over Z[zeta_m]/A, their perfect codes, and Frobenius circulants."""

from .codes import (
    CodeSet,
    CodeVerdict,
    ball,
    ej_theorem_check,
    ej_weight_bfs,
    gaussian_theorem_check,
    is_perfect_t_code,
    mannheim_weight_bfs,
    mannheim_weight_oracle,
    rho_taxicab,
    search_perfect_ideal_codes,
    shell_series,
    verify_ideal_code_conditions,
)
from .core import (
    CycInt,
    CyclotomicContext,
    exact_divide,
    field_norm,
    from_rho,
    is_associate,
    make_context,
    manhattan_weight,
    mul,
    to_rho,
    torsion_units,
    zeta_power,
)
from .errors import (
    CyclographError,
    HypothesisViolationError,
    InternalInconsistencyError,
    InvalidParameterError,
    ResourceLimitError,
    TheoremRangeError,
    UnitIdealError,
    ZeroIdealError,
)
from .frobenius import (
    brute_force_frobenius,
    build_A_mna,
    circulant_to_cyclotomic,
    classify_2p,
    frobenius_to_cyclotomic,
    is_semiregular,
)
from .graphs import (
    CayleyGraph,
    GraphKind,
    bfs_distances,
    build_circulant,
    build_cyclotomic_graph,
    check_arc_regular,
    check_complete_rotation,
    verify_isomorphism,
    verify_valency_theorem,
)
from .ideals import (
    IdealLattice,
    QuotientRing,
    Residue,
    contains,
    ideal_from_generators,
    intermediate_ideals,
    principal_ideal,
    quotient_ring,
    reduce_mod,
)

__version__ = "0.1.0"
