"""Exact computer algebra for free Lie/Poisson algebras, PBW star products,
Poisson envelopes of presented commutative algebras, and commutator /
nil-Poisson filtrations."""

from .envelope import (
    EnvelopePresentation,
    GradedQuotientPiece,
    LocalModelElement,
    envelope_truncated,
    gap_witness,
    induced_hom,
    local_model_bracket,
    p1_rank_check,
    poisson_ideal_generators,
)
from .exprparse import ParseError, format_poisson, format_tensor, parse
from .filtration import (
    EndoMap,
    FiltrationChain,
    TruncatedAlgebra,
    associated_graded,
    commutator_filtration,
    endo_contraction_check,
    nil_poisson_filtration,
)
from .freelie import (
    LieBasisElement,
    LieElement,
    TensorElement,
    expand_to_tensor,
    lie_bracket,
    lyndon_basis,
    rewrite_in_basis,
    tensor_filtration_basis,
    witt_number,
)
from .freepoisson import (
    PoissonElement,
    PoissonMonomial,
    bigraded_component,
    e_inverse,
    multiply,
    poisson_bracket,
    star_component,
    star_product,
    symmetrize,
)
from .linalg import (
    DimensionMismatch,
    Rational,
    SparseMatrix,
    SparseVector,
    kernel,
    rank,
    solve_in_span,
)
from .quantize import (
    NCWord,
    QuantizedAlgebra,
    bx_component,
    commutator_filtration_Q,
    graded_of_Q,
    nc_embed,
    star_ideal_topology_check,
    truncated_product,
)

__all__ = [
    "DimensionMismatch",
    "EndoMap",
    "EnvelopePresentation",
    "FiltrationChain",
    "GradedQuotientPiece",
    "LieBasisElement",
    "LieElement",
    "LocalModelElement",
    "NCWord",
    "ParseError",
    "PoissonElement",
    "PoissonMonomial",
    "QuantizedAlgebra",
    "Rational",
    "SparseMatrix",
    "SparseVector",
    "TensorElement",
    "TruncatedAlgebra",
    "associated_graded",
    "bigraded_component",
    "bx_component",
    "commutator_filtration",
    "commutator_filtration_Q",
    "e_inverse",
    "endo_contraction_check",
    "envelope_truncated",
    "expand_to_tensor",
    "format_poisson",
    "format_tensor",
    "gap_witness",
    "graded_of_Q",
    "induced_hom",
    "kernel",
    "lie_bracket",
    "local_model_bracket",
    "lyndon_basis",
    "multiply",
    "nc_embed",
    "nil_poisson_filtration",
    "p1_rank_check",
    "parse",
    "poisson_bracket",
    "poisson_ideal_generators",
    "rank",
    "rewrite_in_basis",
    "solve_in_span",
    "star_component",
    "star_ideal_topology_check",
    "star_product",
    "symmetrize",
    "tensor_filtration_basis",
    "truncated_product",
    "witt_number",
]
