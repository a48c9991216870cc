"""Superoptimal analytic approximation of rational matrix-valued symbols on the circle."""
from .core import PolyMatrix, SolverConfig, SuperoptResult, run_superopt
from .diagnostics import check_candidate, diagnostics_report
from .errors import (ConfigurationError, NumericalError, SuperoptError, SymbolError)
from .fourier import CircleGrid
from .symbols import SymbolSpec, load_symbol, parse_symbol, sample_symbol

__all__ = [
    "CircleGrid", "ConfigurationError", "NumericalError", "PolyMatrix", "SolverConfig",
    "SuperoptError", "SuperoptResult", "SymbolError", "SymbolSpec", "check_candidate",
    "diagnostics_report", "load_symbol", "parse_symbol", "run_superopt", "sample_symbol",
]
__version__ = "0.1.0"
