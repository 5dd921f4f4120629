"""Finite matroids as rank tables: flats, the Δ function, flatness degree,
pseudomodularity, and transversal / gammoid constructions.

Set ``MATROIDFLAT_DISABLE_NUMBA=1`` before import to run every kernel on its
numpy / interpreted fallback.
"""

from ._jit import USE_NUMBA, default_backend
from .constructions import (
    DigraphPresentation,
    SetSystemPresentation,
    UndirectedGraphInput,
    complete_graph,
    family_Mn,
    from_circuits,
    from_cyclic_flats,
    from_flat_list,
    from_rank_table,
    gammoid,
    graphic,
    strict_gammoid,
    transversal,
    uniform,
)
from .core import AxiomReport, GroundSet, Matroid, closure, rank
from .errors import (
    AxiomViolation,
    FlatFamilyMismatch,
    GuardExceeded,
    InternalConsistencyError,
    InvalidArgumentError,
    MatroidError,
    UnsupportedParameterError,
)
from .flatness import (
    OMEGA,
    FlatCollection,
    binomial_identity_check,
    cyclify,
    delta,
    flatness_degree,
    is_n_flat,
    is_totally_flat,
    reduce_nested,
    saturate,
)
from .pseudomod import (
    contraction_rank,
    is_modular,
    is_pseudomodular,
    pseudointersection,
    reduce_to_rank_one,
    triple_form_check,
    violating_triple,
)

__version__ = "0.1.0"
