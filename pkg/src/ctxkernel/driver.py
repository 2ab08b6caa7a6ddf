"""Elaborate source files: check definitions in order and run directives."""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field

from .errors import CheckError, FuelExhausted, InternalError, KernelError, ParseError
from .parser import AssertConv, Check, Def, Eval, FailCheck, Parser
from .printer import show
from .reduction import DEFAULT_FUEL
from .syntax import CompCtx, Global
from .typecheck import make_checker

EXIT_OK, EXIT_CHECK, EXIT_RESOURCE = 0, 1, 2


@dataclass
class Diagnostic:
    severity: str
    span: tuple
    judgment: str
    message: str
    expected: str | None = None
    actual: str | None = None
    file: str | None = None

    def to_json(self):
        out = {"severity": self.severity, "span": list(self.span),
               "judgment": self.judgment, "message": self.message}
        if self.expected is not None:
            out["expected"] = self.expected
        if self.actual is not None:
            out["actual"] = self.actual
        return out

    def render(self, text=None):
        where = self.file or "<input>"
        if text is not None:
            line, col = line_col(text.encode("utf-8"), self.span[0])
            where = f"{where}:{line}:{col}"
        out = f"{where}: {self.severity}: [{self.judgment}] {self.message}"
        if self.expected is not None:
            out += f"\n  expected: {self.expected}"
        if self.actual is not None:
            out += f"\n  actual:   {self.actual}"
        return out


@dataclass
class RunResult:
    exit_code: int = EXIT_OK
    diagnostics: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    definitions: dict = field(default_factory=dict)


def byte_span(text, span):
    """Turn a character span into UTF-8 byte offsets."""
    a, b = span
    start = len(text[:a].encode("utf-8"))
    return start, start + len(text[a:b].encode("utf-8"))


def line_col(data, offset):
    before = data[:offset]
    line = before.count(b"\n") + 1
    col = offset - (before.rfind(b"\n") + 1) + 1
    return line, col


def _pretty(x):
    if x is None:
        return None
    return x if isinstance(x, str) else show(x)


@dataclass
class Options:
    fuel: int = DEFAULT_FUEL
    trace: bool = False
    keep_going: bool = False
    deep: bool = False
    trace_stream: object = None


class Session:
    """Runs the declarations of one file against a growing table of definitions."""

    def __init__(self, text, options=None, filename=None):
        self.text = text
        self.opts = options or Options()
        self.filename = filename
        self.result = RunResult()

    def _checker(self):
        if not self.opts.trace:
            return make_checker(self.opts.fuel)
        stream = self.opts.trace_stream or sys.stderr

        def trace(rule, before, after):
            print(f"[{rule}] {show(before)}  ~>  {show(after)}", file=stream)
        return make_checker(self.opts.fuel, trace)

    def _diag(self, severity, span, judgment, message, expected=None, actual=None):
        d = Diagnostic(severity, byte_span(self.text, span), judgment or "check", message,
                       _pretty(expected), _pretty(actual), self.filename)
        self.result.diagnostics.append(d)
        return d

    def _error(self, err, span, code):
        judgment = err.judgment or ("reduce" if isinstance(err, FuelExhausted) else "check")
        self._diag("error", err.span or span, judgment, f"{err.code}: {err.message}",
                   err.expected, err.actual)
        self.result.exit_code = max(self.result.exit_code, code)

    def run(self):
        parser = Parser(self.text)
        decls = parser.declarations()
        while True:
            try:
                decl = next(decls)
            except StopIteration:
                break
            except ParseError as e:
                self._error(e, e.span or (0, 0), EXIT_CHECK)
                break
            except Exception as e:  # a parser bug, reported rather than raised
                self._error(InternalError(f"{type(e).__name__}: {e}"), (0, 0), EXIT_RESOURCE)
                break
            try:
                self.run_decl(decl, parser.globals)
            except CheckError as e:
                self._error(e, decl.span, EXIT_CHECK)
            except KernelError as e:
                # fuel, broken invariants and anything else the kernel raises
                self._error(e, decl.span, EXIT_RESOURCE)
            except RecursionError:
                self._error(FuelExhausted("recursion depth exceeded"), decl.span,
                            EXIT_RESOURCE)
            except Exception as e:
                self._error(InternalError(f"{type(e).__name__}: {e}"), decl.span,
                            EXIT_RESOURCE)
            if self.result.exit_code and not self.opts.keep_going:
                break
        return self.result

    def run_decl(self, decl, table):
        ch = self._checker()
        gamma = CompCtx(())
        if isinstance(decl, Def):
            if decl.name in table:
                raise CheckError(f"{decl.name} is already defined", code="DuplicateDef",
                                 judgment="def")
            ch.check_type(gamma, decl.type)
            ch.check_comp(gamma, decl.term, decl.type)
            g = Global(decl.name, decl.type, decl.term)
            table[decl.name] = g
            self.result.definitions[decl.name] = g
        elif isinstance(decl, Check):
            ch.check_type(gamma, decl.type)
            ch.check_comp(gamma, decl.term, decl.type)
        elif isinstance(decl, Eval):
            r = ch.reducer
            value = r.normalize(decl.term) if self.opts.deep else r.whnf_comp(decl.term)
            text = show(value)
            self.result.outputs.append(text)
            self._diag("info", decl.span, "eval", text)
        elif isinstance(decl, AssertConv):
            ch.check_type(gamma, decl.type)
            ch.check_comp(gamma, decl.left, decl.type)
            ch.check_comp(gamma, decl.right, decl.type)
            if not ch.conv_comp(gamma, decl.left, decl.right, decl.type):
                raise CheckError("terms are not definitionally equal", code="NotConvertible",
                                 judgment="conv", expected=decl.left, actual=decl.right)
        elif isinstance(decl, FailCheck):
            try:
                ch.check_type(gamma, decl.type)
                ch.check_comp(gamma, decl.term, decl.type)
            except CheckError:
                return
            raise CheckError("expected a type error, but the term checks",
                             code="UnexpectedSuccess", judgment="fail_check",
                             actual=decl.term)


def run_text(text, options=None, filename=None):
    return Session(text, options, filename).run()


def run_file(path, options=None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as e:
        res = RunResult(EXIT_RESOURCE)
        res.diagnostics.append(Diagnostic("error", (0, 0), "io", str(e), file=str(path)))
        return res, ""
    return run_text(text, options, str(path)), text


def emit(result, text, as_json, stream=None):
    stream = stream or sys.stdout
    for d in result.diagnostics:
        if as_json:
            print(json.dumps(d.to_json(), ensure_ascii=False), file=stream)
        elif d.severity == "info":
            print(d.message, file=stream)
        else:
            print(d.render(text), file=stream)
