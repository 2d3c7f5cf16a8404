"""Exact computations in topological full groups of Cantor minimal systems.

Rotation/Sturmian full groups with exact quadratic-irrational coordinates,
odometer level subgroups, lamplighter embeddings and Cayley-ball growth.
"""

from .circle import ClopenSet, parity_independent
from .errors import WorkbenchError
from .odometer import OdoElement, OdoType
from .quadext import QuadExt, parse_quadext
from .rotation import GenWord, RotElement

__version__ = "0.1.0"

__all__ = [
    "ClopenSet",
    "GenWord",
    "OdoElement",
    "OdoType",
    "QuadExt",
    "RotElement",
    "WorkbenchError",
    "parity_independent",
    "parse_quadext",
]
