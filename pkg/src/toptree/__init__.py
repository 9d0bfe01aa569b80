"""Splay-based top trees over a dynamic forest, with a brute-force oracle and validator."""

from .dynops import ExposeStrategy, Stats, TopTree
from .errors import InvalidRotationError, PreconditionError, StaleHandleError, TopTreeError
from .oracle import NaiveForest, ValidationReport, kruskal, validate
from .summaries import BoundaryLabels, EdgeCount, PathMax, SummarySpec

__all__ = [
    "BoundaryLabels",
    "EdgeCount",
    "ExposeStrategy",
    "InvalidRotationError",
    "NaiveForest",
    "PathMax",
    "PreconditionError",
    "StaleHandleError",
    "Stats",
    "SummarySpec",
    "TopTree",
    "TopTreeError",
    "ValidationReport",
    "kruskal",
    "validate",
]
