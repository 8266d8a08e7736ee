"""Ordered amenable groups, shift entropy and asymptotic/Li-Yorke pairs at desk scale."""

__version__ = "0.1.0"

from .errors import ConsistencyError, InsufficientWindow, InvalidArgument, OrderlabError, UnsupportedOperation
from .groups import (
    FiniteWindow,
    GroupElement,
    Heisenberg,
    IntegerLattice,
    Unipotent,
    enumerate_box,
    enumeration_index,
    from_matrix,
    identity,
    inverse,
    multiply,
    parse_group,
    to_matrix,
)
from .order import (
    count_below,
    in_past,
    in_semigroup,
    less_than,
    standard_context,
    verify_admissibility,
    verify_conjugation_invariance,
    verify_past_axioms,
)
