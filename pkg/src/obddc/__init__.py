"""CNF to OBDD compilation along orderings with few subterms, plus lower-bound checks."""

from .cnf import Cnf, evaluate, parse_dimacs, read_dimacs, restrict
from .compiler import CompileReport, Strategy, compile_cnf, compile_with_ordering
from .errors import DimacsError, GuardExceeded, ObddcError, OrderingError, StrategyError
from .obdd import Obdd, equivalent, reduce, to_dot, to_text

__version__ = "0.1.0"

__all__ = [
    "Cnf",
    "CompileReport",
    "DimacsError",
    "GuardExceeded",
    "Obdd",
    "ObddcError",
    "OrderingError",
    "Strategy",
    "StrategyError",
    "compile_cnf",
    "compile_with_ordering",
    "equivalent",
    "evaluate",
    "parse_dimacs",
    "read_dimacs",
    "reduce",
    "restrict",
    "to_dot",
    "to_text",
]
