"""Exact canonical forms of complex matrix pairs under T-/*-equivalence,
orbit codimension formulas, and a brute-force verification oracle."""

from .blocks import (
    CongruenceStructure,
    PairCanonicalStructure,
    StructuredPairForm,
    build_block,
    enumerate_structures,
    normalize_structure,
    realize_structure,
    realize_structured_form,
)
from .codim import (
    CodimBreakdown,
    codim_congruence,
    codim_pair,
    interaction_formula,
)
from .congruence import (
    DEFAULT,
    EXACT,
    EigenBackend,
    cosquare_jordan,
    star_congruence_structure,
    t_congruence_structure,
    type0_split,
)
from .exactmat import (
    ExactMatrix,
    GaussianRational,
    completion_basis,
    gq,
    hermitian_inertia,
    rref_rank_nullspace,
)
from .fuzz import FuzzConfig, FuzzReport, run_fuzz
from .oracle import (
    LinearSystemNullity,
    interaction_nullity,
    nullity_congruence_system,
    nullity_pair_system,
    tangent_map,
)
from .pairs import (
    EquivalenceWitness,
    check_equivalence,
    is_lagrangian,
    nilpotent_pair_counts,
    nilpotent_pair_reduce,
    pair_canonical,
    split_regular_nilpotent,
    structured_pair_canonical,
)

__all__ = [
    "GaussianRational",
    "ExactMatrix",
    "gq",
    "rref_rank_nullspace",
    "hermitian_inertia",
    "completion_basis",
    "CongruenceStructure",
    "PairCanonicalStructure",
    "StructuredPairForm",
    "build_block",
    "enumerate_structures",
    "normalize_structure",
    "realize_structure",
    "realize_structured_form",
    "CodimBreakdown",
    "codim_congruence",
    "codim_pair",
    "interaction_formula",
    "EigenBackend",
    "DEFAULT",
    "EXACT",
    "cosquare_jordan",
    "t_congruence_structure",
    "star_congruence_structure",
    "type0_split",
    "LinearSystemNullity",
    "tangent_map",
    "nullity_congruence_system",
    "nullity_pair_system",
    "interaction_nullity",
    "EquivalenceWitness",
    "pair_canonical",
    "check_equivalence",
    "is_lagrangian",
    "split_regular_nilpotent",
    "nilpotent_pair_counts",
    "nilpotent_pair_reduce",
    "structured_pair_canonical",
    "FuzzConfig",
    "FuzzReport",
    "run_fuzz",
]
