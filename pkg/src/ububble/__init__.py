"""Bubble models, exact MaxCut and clique-width expressions for mixed unit interval graphs."""

from .core import (
    Bubble,
    Cut,
    Graph,
    Kind,
    Representation,
    UBubbleModel,
    UnitInterval,
    ValidationError,
    cut_size,
    graph_of_model,
    graph_of_representation,
    validate_model,
)

__version__ = "0.1.0"

__all__ = [
    "Bubble",
    "Cut",
    "Graph",
    "Kind",
    "Representation",
    "UBubbleModel",
    "UnitInterval",
    "ValidationError",
    "cut_size",
    "graph_of_model",
    "graph_of_representation",
    "validate_model",
]
