"""Scott ranks, tree ranks and the tree/graph/field/order embeddings on finite instances."""
from .config import Budgets, get_budgets
from .core import (
    AtomicDiagram,
    FiniteStructure,
    Signature,
    Symbol,
    apply_operator,
    automorphism_group,
    isomorphic,
    make_graph,
    orbits,
)
from .errors import ScottkitError

__version__ = "0.1.0"

__all__ = [
    "AtomicDiagram",
    "Budgets",
    "FiniteStructure",
    "ScottkitError",
    "Signature",
    "Symbol",
    "apply_operator",
    "automorphism_group",
    "get_budgets",
    "isomorphic",
    "make_graph",
    "orbits",
]
