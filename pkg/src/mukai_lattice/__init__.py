"""Exact integer arithmetic for Mukai vectors on abelian and K3 surfaces:
pairings, cohomological integral transforms, wall systems, fiber lattices,
and decision procedures reporting which structural result applies.
"""

__version__ = "0.1.0"

from .errors import InputError, InternalInvariantError, PreconditionError
from .surface import SurfaceModel
from .vectors import MukaiVector, mukai_pair, mukai_square

__all__ = [
    "__version__",
    "InputError",
    "InternalInvariantError",
    "PreconditionError",
    "SurfaceModel",
    "MukaiVector",
    "mukai_pair",
    "mukai_square",
]
