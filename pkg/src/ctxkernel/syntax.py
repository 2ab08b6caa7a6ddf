"""Abstract syntax for the LF layer and the computation layer.

Variables in both layers are de Bruijn indices (0 = innermost binder).
Surface names survive only as display hints and are excluded from
equality, so ``==`` on any node is alpha-equivalence.

LF variables count declarations of the enclosing LF context from the
right.  A context variable at the head of an LF context is opaque: no LF
index may point into it.  Computation variables count entries of the
computation context and may also appear inside LF syntax (unbox payloads,
context heads).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Optional, Union

from .errors import NotFound


def _hint(default):
    return field(default=default, compare=False)


class Syntax:
    __slots__ = ()

    def __str__(self):
        from .printer import show

        return show(self)


# ---------------------------------------------------------------------------
# LF terms


class LfTerm(Syntax):
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class LVar(LfTerm):
    index: int
    name: str = _hint("x")


@dataclass(frozen=True, slots=True)
class LConst(LfTerm):
    name: str


@dataclass(frozen=True, slots=True)
class Lam(LfTerm):
    body: LfTerm
    name: str = _hint("x")


@dataclass(frozen=True, slots=True)
class LApp(LfTerm):
    fn: LfTerm
    arg: LfTerm


@dataclass(frozen=True, slots=True)
class Unbox(LfTerm):
    """Embedding of a computation relocated by an LF substitution."""

    comp: Comp
    subst: LfSubst


# ---------------------------------------------------------------------------
# LF types and kinds


class LfType(Syntax):
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Atom(LfType):
    name: str
    args: tuple = ()


@dataclass(frozen=True, slots=True)
class LPi(LfType):
    dom: LfType
    cod: LfType
    name: str = _hint("x")


class LfKind(Syntax):
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class KType(LfKind):
    pass


@dataclass(frozen=True, slots=True)
class KPi(LfKind):
    dom: LfType
    cod: LfKind
    name: str = _hint("x")


TM = Atom("tm")


# ---------------------------------------------------------------------------
# LF contexts and substitutions


@dataclass(frozen=True, slots=True)
class Decl:
    type: LfType
    name: str = _hint("x")


@dataclass(frozen=True, slots=True)
class LfCtx(Syntax):
    """``head`` is a computation variable of schema tm_ctx, or None for ``·``."""

    head: Optional[CVar] = None
    decls: tuple = ()

    def extend(self, name, type_):
        return LfCtx(self.head, self.decls + (Decl(type_, name),))

    def names(self):
        return tuple(d.name for d in self.decls)

    def __len__(self):
        return len(self.decls)

    def prefix(self, n):
        """Drop the ``n`` rightmost declarations."""
        return LfCtx(self.head, self.decls[: len(self.decls) - n])


@dataclass(frozen=True, slots=True, eq=False)
class ErasedCtx(Syntax):
    """An LF context without types.  Equality ignores the names."""

    head: Optional[CVar] = None
    names: tuple = ()

    def __eq__(self, other):
        if not isinstance(other, ErasedCtx):
            return NotImplemented
        return self.head == other.head and len(self.names) == len(other.names)

    def __hash__(self):
        return hash((self.head, len(self.names)))

    def __len__(self):
        return len(self.names)

    def extend(self, name):
        return ErasedCtx(self.head, self.names + (name,))

    def prefix(self, n):
        return ErasedCtx(self.head, self.names[: len(self.names) - n])

    def is_prefix_of(self, other):
        return self.head == other.head and len(self.names) <= len(other.names)


class LfSubst(Syntax):
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class SEmpty(LfSubst):
    pass


@dataclass(frozen=True, slots=True)
class Wk(LfSubst):
    """Weakening out of ``dom``; ``shift`` counts the extra range declarations.

    The shift is implicit in a named presentation.  With indices the kernel
    has to remember how far the domain sits below the top of the range.
    """

    dom: ErasedCtx
    shift: int = 0


@dataclass(frozen=True, slots=True)
class SCons(LfSubst):
    rest: LfSubst
    term: LfTerm


# ---------------------------------------------------------------------------
# Contextual types and objects


@dataclass(frozen=True, slots=True)
class CtxType(Syntax):
    ctx: LfCtx
    type: LfType
    param: bool = False


@dataclass(frozen=True, slots=True)
class CtxObj(Syntax):
    ectx: ErasedCtx
    term: LfTerm


# ---------------------------------------------------------------------------
# Computations (terms and types share one grammar)


class Comp(Syntax):
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class CVar(Comp):
    index: int
    name: str = _hint("y")


@dataclass(frozen=True, slots=True)
class Univ(Comp):
    level: int


@dataclass(frozen=True, slots=True)
class TmCtx(Syntax):
    """The schema ``tm_ctx``; only ever a Pi domain or a context entry."""


TMCTX = TmCtx()


@dataclass(frozen=True, slots=True)
class Pi(Comp):
    dom: Union[Comp, TmCtx]
    cod: Comp
    name: str = _hint("y")


@dataclass(frozen=True, slots=True)
class BoxType(Comp):
    ctype: CtxType


@dataclass(frozen=True, slots=True)
class Fn(Comp):
    body: Comp
    name: str = _hint("y")


@dataclass(frozen=True, slots=True)
class CApp(Comp):
    """Application; ``arg`` is an LfCtx when the domain is tm_ctx."""

    fn: Comp
    arg: Union[Comp, LfCtx]


@dataclass(frozen=True, slots=True)
class BoxObj(Comp):
    obj: CtxObj


@dataclass(frozen=True, slots=True)
class Branch:
    body: Comp
    names: tuple = _hint(())


VAR_ARITY, APP_ARITY, LAM_ARITY = 2, 5, 3


@dataclass(frozen=True, slots=True)
class Branches:
    """Bodies bind (psi, p), (psi, m, n, f_m, f_n) and (psi, m, f_m)."""

    var: Branch
    app: Branch
    lam: Branch

    def __iter__(self):
        return iter((self.var, self.app, self.lam))


@dataclass(frozen=True, slots=True)
class Rec(Comp):
    motive: Comp
    branches: Branches
    ctx: LfCtx
    scrut: Comp


@dataclass(frozen=True, slots=True)
class Global(Comp):
    """Reference to a checked top-level definition; unfolds during reduction."""

    name: str
    type: Comp = field(compare=False, repr=False, default=None)
    body: Comp = field(compare=False, repr=False, default=None)


Domain = Union[Comp, TmCtx]


@dataclass(frozen=True, slots=True)
class CompCtx:
    """Computation context; the last entry has index 0."""

    entries: tuple = ()

    def extend(self, name, domain):
        return CompCtx(self.entries + ((name, domain),))

    def __len__(self):
        return len(self.entries)

    def names(self):
        return [n for n, _ in self.entries]

    def lookup(self, index):
        """Domain of variable ``index``, weakened to the whole context."""
        if index < 0 or index >= len(self.entries):
            raise NotFound(f"unbound computation variable #{index}")
        _, dom = self.entries[len(self.entries) - 1 - index]
        if isinstance(dom, TmCtx):
            return dom
        from .compsubst import shift

        return shift(dom, index + 1)


# ---------------------------------------------------------------------------
# Signature


SIGNATURE = MappingProxyType({
    "tm": KType(),
    "lam": LPi(LPi(TM, TM, "x"), TM, "y"),
    "app": LPi(TM, LPi(TM, TM, "y"), "x"),
})
TYPE_FAMILIES = frozenset({"tm"})
TERM_CONSTANTS = frozenset({"lam", "app"})


def sig_lookup(name):
    try:
        return SIGNATURE[name]
    except KeyError:
        raise NotFound(f"unknown LF constant {name!r}") from None


# ---------------------------------------------------------------------------
# Small operations


def erase(ctx):
    return ErasedCtx(ctx.head, ctx.names())


def ctx_lookup(ctx, index):
    """Declared type of LF variable ``index``; valid in the prefix before it."""
    if 0 <= index < len(ctx.decls):
        return ctx.decls[len(ctx.decls) - 1 - index].type
    if ctx.head is not None:
        raise NotFound(f"LF variable #{index} is hidden behind context variable "
                       f"{ctx.head.name}")
    raise NotFound(f"unbound LF variable #{index}")


def alpha_eq(a, b):
    return a == b


def lf_term(x):
    return isinstance(x, LfTerm)


def is_ctx_arg(x):
    return isinstance(x, LfCtx)
