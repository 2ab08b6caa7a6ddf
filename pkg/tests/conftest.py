import sys

import pytest

from ctxkernel.gen import build_context
from ctxkernel.parser import parse_term
from ctxkernel.typecheck import make_checker

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


def term(src, gamma=None):
    """Parse a computation in the scope of ``gamma``."""
    return parse_term(src, gamma.names() if gamma is not None else ())


def ctx(*entries):
    """Build a computation context from (name, type source) pairs."""
    return build_context(entries)


@pytest.fixture
def checker():
    return make_checker()


@pytest.fixture
def psi_ctx():
    return ctx(("psi", "tm_ctx"))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
