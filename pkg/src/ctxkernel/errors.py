"""Exception hierarchy shared by every layer of the kernel."""

from __future__ import annotations


class KernelError(Exception):
    """Base class. ``code`` is a stable machine-readable tag."""

    code = "KernelError"
    judgment = None

    def __init__(self, message, *, code=None, judgment=None, expected=None,
                 actual=None, span=None):
        super().__init__(message)
        self.message = message
        if code is not None:
            self.code = code
        if judgment is not None:
            self.judgment = judgment
        self.expected = expected
        self.actual = actual
        self.span = span

    def __str__(self):
        text = f"{self.code}: {self.message}"
        if self.expected is not None:
            text += f"\n  expected: {self.expected}"
        if self.actual is not None:
            text += f"\n  actual:   {self.actual}"
        return text


class ParseError(KernelError):
    code = "SyntaxError"
    judgment = "parse"


class CheckError(KernelError):
    """A user-facing typing failure (exit code 1)."""

    code = "TypeError"


class NotFound(KernelError, LookupError):
    code = "NotFound"


class InternalError(KernelError):
    """Raised when a kernel invariant breaks; well-typed input never triggers it."""

    code = "InternalError"


class IllScoped(InternalError):
    code = "IllScoped"


class LookupFailure(InternalError):
    code = "LookupFailure"


class TruncFailure(InternalError):
    code = "TruncFailure"


class DispatchFailure(InternalError):
    code = "DispatchFailure"


class StuckTerm(InternalError):
    code = "StuckTerm"


class FuelExhausted(KernelError):
    code = "FuelExhausted"
    judgment = "reduce"
