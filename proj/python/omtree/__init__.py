"""Monotone interleaving distance for ordered merge trees."""

from ._core import (
    Certificate,
    ParseError,
    SemanticError,
    Tree,
    certificate,
    discrete_frechet,
    distance,
    frechet,
    min_over_orders,
    partition_reduction,
)

__all__ = [
    "Certificate",
    "ParseError",
    "SemanticError",
    "Tree",
    "certificate",
    "discrete_frechet",
    "distance",
    "frechet",
    "min_over_orders",
    "partition_reduction",
]
