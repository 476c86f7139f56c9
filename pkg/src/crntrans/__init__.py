"""Reaction network analysis, network translation and toric steady states."""

from .errors import (
    CapExceededError,
    ConvergenceError,
    CRNError,
    HypothesisError,
    NetworkError,
    NotWeaklyReversibleError,
    ParseError,
    TranslationError,
)
from .model import (
    GeneralizedNetwork,
    Network,
    Reaction,
    build_matrices,
    gmas_rhs,
    mass_action_rhs,
    parse_generalized_network,
    parse_network,
    serialize_network,
)
from .poly import Polynomial, PowerProduct, RationalFunction

__version__ = "0.1.0"

__all__ = [
    "CRNError",
    "CapExceededError",
    "ConvergenceError",
    "GeneralizedNetwork",
    "HypothesisError",
    "Network",
    "NetworkError",
    "NotWeaklyReversibleError",
    "ParseError",
    "Polynomial",
    "PowerProduct",
    "RationalFunction",
    "Reaction",
    "TranslationError",
    "build_matrices",
    "gmas_rhs",
    "mass_action_rhs",
    "parse_generalized_network",
    "parse_network",
    "serialize_network",
]
