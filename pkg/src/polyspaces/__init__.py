"""Exact and numeric computation on spaces of non-resultant polynomial systems."""
from .errors import (
    ContractViolationError,
    InternalConsistencyError,
    InvalidInputError,
    NumericalFailure,
    PolySpacesError,
    RefineFirstError,
    UnsupportedParametersError,
)
from .polyarith import GaussRational, Poly, Z
from .spaces import Family, SpaceId, StratumSignature, System, is_member, make_system, stratum_signature

__version__ = "0.1.0"

__all__ = [
    "ContractViolationError",
    "Family",
    "GaussRational",
    "InternalConsistencyError",
    "InvalidInputError",
    "NumericalFailure",
    "Poly",
    "PolySpacesError",
    "RefineFirstError",
    "SpaceId",
    "StratumSignature",
    "System",
    "UnsupportedParametersError",
    "Z",
    "is_member",
    "make_system",
    "stratum_signature",
]
