"""Plateaued functions, Walsh spectra and partial geometric difference sets.

Exact arithmetic throughout: field elements are integer indices, Walsh and
character values live in Z[zeta_p] as integer coefficient vectors.
"""

__version__ = "0.1.0"

from .cyclotomic import CycInt
from .field import FieldElement, FieldSpec, GF, canonical_modulus, field, find_primitive
from .functions import (
    PAryFunction,
    VectorialFunction,
    component,
    direct_sum,
    graph,
    level_sets,
    power_map,
    trace_polynomial,
    trace_power,
)
from .groups import AbelianGroup
from .matrixchar import (
    build_m,
    delta_energy,
    design_factorization_check,
    is_partially_bent,
    kronecker_verify,
    linear_structures,
    second_derivative_sum,
    t_a_lemma_check,
    verify_mmm,
)
from .pgds import (
    converse_partition_check,
    expected_graph_params,
    group_ring_lemma_check,
    verify_nf_characterization,
    verify_partition_theorem,
    verify_pgds_character,
    verify_pgds_delta,
)
from .sequences import (
    cross_correlation,
    decimate,
    known_decimations,
    m_sequence,
    three_valued_classify,
    walsh_bridge_check,
)
from .walsh import classify, classify_vectorial, walsh_fast, walsh_naive

__all__ = [
    "AbelianGroup",
    "CycInt",
    "FieldElement",
    "FieldSpec",
    "GF",
    "PAryFunction",
    "VectorialFunction",
    "build_m",
    "canonical_modulus",
    "classify",
    "classify_vectorial",
    "component",
    "converse_partition_check",
    "cross_correlation",
    "decimate",
    "delta_energy",
    "design_factorization_check",
    "direct_sum",
    "expected_graph_params",
    "field",
    "find_primitive",
    "graph",
    "group_ring_lemma_check",
    "is_partially_bent",
    "known_decimations",
    "kronecker_verify",
    "level_sets",
    "linear_structures",
    "m_sequence",
    "power_map",
    "second_derivative_sum",
    "t_a_lemma_check",
    "three_valued_classify",
    "trace_polynomial",
    "trace_power",
    "verify_mmm",
    "verify_nf_characterization",
    "verify_partition_theorem",
    "verify_pgds_character",
    "verify_pgds_delta",
    "walsh_bridge_check",
    "walsh_fast",
    "walsh_naive",
]
