"""Exponentiated Chen lifetimes, series/parallel systems and stochastic orders."""

from .ecd_core import DomainError, ECDParams
from .ordering import Direction, Grid, OrderingVerdict, Relation
from .systems import ComponentSet, SystemKind, SystemSpec

__all__ = [
    "DomainError",
    "ECDParams",
    "ComponentSet",
    "SystemKind",
    "SystemSpec",
    "Grid",
    "Direction",
    "Relation",
    "OrderingVerdict",
]

__version__ = "0.1.0"
