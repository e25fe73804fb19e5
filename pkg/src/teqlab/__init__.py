"""Tournament equilibrium set, minimal retentive sets and domination graphs for small tournaments."""

from .core import Tournament, parse, serialize
from .iso import canonical_key, enumerate_tournaments, is_isomorphic
from .solutions import RetentiveAnalysis, teq

__all__ = [
    "Tournament",
    "parse",
    "serialize",
    "canonical_key",
    "enumerate_tournaments",
    "is_isomorphic",
    "RetentiveAnalysis",
    "teq",
]
