"""A kernel for a two-level contextual type theory.

The object layer is LF with higher-order abstract syntax for untyped lambda
terms.  The computation layer has universes, dependent functions, boxes of
contextual LF objects, and a recursor over ``tm``.
"""

from .errors import CheckError, FuelExhausted, KernelError, ParseError
from .parser import parse, parse_term
from .printer import show
from .reduction import DEFAULT_FUEL, Reducer
from .syntax import CompCtx
from .typecheck import Checker, make_checker

__all__ = [
    "DEFAULT_FUEL",
    "CheckError",
    "Checker",
    "CompCtx",
    "FuelExhausted",
    "KernelError",
    "ParseError",
    "Reducer",
    "make_checker",
    "parse",
    "parse_term",
    "show",
]
