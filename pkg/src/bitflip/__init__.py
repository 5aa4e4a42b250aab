"""Exact fitness distributions and runtimes of bit-flip mutation via Walsh analysis."""
from ._kernels import BACKEND
from .bitspace import BitString
from .krawtchouk import KrawtchoukMatrix
from .maxsat import Clause, ClauseSet, maxsat_F, parse_dimacs
from .mutation import FitnessLevels, FMatrix, ProbabilityVector, distribution, moments
from .onemax import VarpiMatrix, onemax_F, varpi
from .runtime import onemax_runtime, optimal_p
from .walsh import FunctionTable, WalshExpansion, transform

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BitString", "KrawtchoukMatrix", "Clause", "ClauseSet", "maxsat_F", "parse_dimacs",
    "FitnessLevels", "FMatrix", "ProbabilityVector", "distribution", "moments", "VarpiMatrix",
    "onemax_F", "varpi", "onemax_runtime", "optimal_p", "FunctionTable", "WalshExpansion", "transform",
]
