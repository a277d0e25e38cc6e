"""Exact toric and weight-system combinatorics for Losev-Manin type fans."""

from .errors import BudgetExceeded, ConsistencyError, FmToricError, NotSimplicialError, PreconditionError
from .fan import Fan, SupportSpec
from .intersection import TorusDivisor
from .lattice import Covector, LatticeMap, LatVec
from .report import Check, Report

__all__ = [
    "BudgetExceeded", "Check", "ConsistencyError", "Covector", "Fan", "FmToricError",
    "LatVec", "LatticeMap", "NotSimplicialError", "PreconditionError", "Report",
    "SupportSpec", "TorusDivisor",
]
