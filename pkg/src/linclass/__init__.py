"""Classification of linear codes with prescribed weights up to isometry."""

from .canon import are_isometric, automorphism_order, canonical_code, canonical_form, dedupe, invariant_key
from .classify import ClassificationResult, ClassificationTask, classify, k2_formula, min_minimal_codewords_table
from .code import (
    LinearCode,
    from_generator_matrix,
    macwilliams_transform,
    minimal_codewords_count,
    power_moments,
    residual_subcode,
    systematic_form,
    to_systematic_generator_matrix,
    transform,
    weight_enumerator,
)
from .extender import ExtensionProblem, build_constraints, enumerate_solutions, extend
from .galois import field_make
from .weights import WeightSet

__all__ = [
    "ClassificationResult",
    "ClassificationTask",
    "ExtensionProblem",
    "LinearCode",
    "WeightSet",
    "are_isometric",
    "automorphism_order",
    "build_constraints",
    "canonical_code",
    "canonical_form",
    "classify",
    "dedupe",
    "enumerate_solutions",
    "extend",
    "field_make",
    "from_generator_matrix",
    "invariant_key",
    "k2_formula",
    "macwilliams_transform",
    "min_minimal_codewords_table",
    "minimal_codewords_count",
    "power_moments",
    "residual_subcode",
    "systematic_form",
    "to_systematic_generator_matrix",
    "transform",
    "weight_enumerator",
]
