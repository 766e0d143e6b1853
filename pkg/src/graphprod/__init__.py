"""Graph products of groups: normal forms, conjugacy, inner automorphisms and finite quotients."""
from .conjugacy import are_conjugate, conjugacy_oracle, cyclic_reduction, ps_decomposition
from .errors import GuardExceeded, PreconditionError, VerificationError
from .graph import SimplicialGraph
from .homs import VertexMapFamily, apply, decide_inner, inner
from .residual import QuotientFamily, SeparationWitness, separate_conjugacy, verify_witness
from .vertex_groups import AllFinite, FiniteGroupTable, InfiniteCyclic, PFinite
from .words import Presentation, format_word, multiply, parse_word, reduce

__all__ = [
    "AllFinite", "FiniteGroupTable", "GuardExceeded", "InfiniteCyclic", "PFinite",
    "PreconditionError", "Presentation", "QuotientFamily", "SeparationWitness",
    "SimplicialGraph", "VerificationError", "VertexMapFamily", "apply", "are_conjugate",
    "conjugacy_oracle", "cyclic_reduction", "decide_inner", "format_word", "inner",
    "multiply", "parse_word", "ps_decomposition", "reduce", "separate_conjugacy",
    "verify_witness",
]
