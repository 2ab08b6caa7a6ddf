"""Concrete syntax.

Computations::

    fn y => t          (y : tau) -> tau      tau -> tau       U0  U1 ...
    t s                t <Psi>               [Psi |- A]       [Psi |-# A]
    [x, y |- M]        rec^{I} { var psi, p => t | app psi, m, n, f_m, f_n => t
                                 | lam psi, m, f_m => t } <Psi> t

LF terms and types::

    \\x. M    M N    lam    app    m    m[sigma]    {t}[sigma]
    tm    A -> B    Pi x:A. B

Substitutions are ``[]``, ``[id]``, ``[wk(psi, x)]``, ``[id, M]``, ``[M, N]``.
A list that does not start with ``id`` or ``wk(..)`` extends the empty
substitution.  Context arguments are ``<>``, ``<psi>``, ``<psi, x:tm>``.

Files hold ``def name : type = term`` and the directives ``#check t : T``,
``#eval t``, ``#assert_conv t1 == t2 : T`` and ``#fail_check t : T``.
``--`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError
from .syntax import (
    TM,
    BoxObj,
    BoxType,
    Branch,
    Branches,
    CApp,
    CtxObj,
    CtxType,
    CVar,
    Decl,
    ErasedCtx,
    Fn,
    Global,
    Lam,
    LApp,
    LConst,
    LfCtx,
    LPi,
    LVar,
    Pi,
    Rec,
    SCons,
    SEmpty,
    TMCTX,
    TERM_CONSTANTS,
    Unbox,
    Univ,
    Wk,
)

UNICODE = {
    "⌜": "[", "⌝": "]", "⊢": "|-", "λ": "\\", "→": "->",
    "⇒": "=>", "⌞": "{", "⌟": "}", "·": ".", "Π": "Pi",
}

KEYWORDS = frozenset({"fn", "rec", "def", "tm", "tm_ctx", "Pi", "id", "wk", "var"})

_TOKEN = re.compile(r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<directive>\#[A-Za-z_]+)
  | (?P<uni>[⌜⌝⊢λ→⇒⌞⌟·Π])
  | (?P<ident>(?![λΠ])[^\W\d](?:(?![λΠ])[\w'])*)
  | (?P<num>[0-9]+)
  | (?P<sym>\|-\#|\|-|=>|->|==|[\\.,:()\[\]{}<>|=^])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int


def tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", span=(pos, pos + 1))
        kind = m.lastgroup
        if kind != "ws":
            tok = m.group()
            if kind == "uni":
                tok, kind = UNICODE[tok], "sym"
                if tok == "Pi":
                    kind = "ident"
            out.append(Token(kind, tok, m.start(), m.end()))
        pos = m.end()
    out.append(Token("eof", "", len(text), len(text)))
    return out


# ---------------------------------------------------------------------------
# Declarations


@dataclass
class Def:
    name: str
    type: object
    term: object
    span: tuple = (0, 0)


@dataclass
class Check:
    term: object
    type: object
    span: tuple = (0, 0)


@dataclass
class Eval:
    term: object
    span: tuple = (0, 0)


@dataclass
class AssertConv:
    left: object
    right: object
    type: object
    span: tuple = (0, 0)


@dataclass
class FailCheck:
    term: object
    type: object
    span: tuple = (0, 0)


@dataclass
class SourceFile:
    decls: list = field(default_factory=list)
    text: str = ""


# ---------------------------------------------------------------------------


class _Env:
    """Names in scope: computation variables and the current LF scope."""

    def __init__(self, comp=(), lf=(), lf_head=None):
        self.comp = tuple(comp)
        self.lf = tuple(lf)
        self.lf_head = lf_head

    def bind(self, name):
        return _Env(self.comp + (name,), self.lf, self.lf_head)

    def bind_lf(self, name):
        return _Env(self.comp, self.lf + (name,), self.lf_head)

    def with_lf(self, head, names):
        return _Env(self.comp, names, head)

    def comp_index(self, name):
        for i, n in enumerate(reversed(self.comp)):
            if n == name:
                return i
        return None

    def lf_index(self, name):
        for i, n in enumerate(reversed(self.lf)):
            if n == name:
                return i
        return None

    def lf_scope(self):
        return ErasedCtx(self.lf_head, self.lf)


class Parser:
    def __init__(self, text, globals_=None):
        self.text = "".join(text) if not isinstance(text, str) else text
        self.toks = tokenize(self.text)
        self.i = 0
        self.globals = globals_ if globals_ is not None else {}

    # -- token helpers ------------------------------------------------------------

    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text, kind=None):
        t = self.tok
        return t.text == text and (kind is None or t.kind == kind) and t.kind != "eof"

    def advance(self):
        t = self.tok
        self.i += 1
        return t

    def expect(self, text):
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def fail(self, message, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        raise ParseError(f"{message}, found {found!r}", span=(tok.start, tok.end))

    def ident(self):
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            self.fail("expected an identifier")
        return self.advance().text

    def binder(self):
        t = self.tok
        if t.kind == "ident" and (t.text not in KEYWORDS or t.text == "var"):
            return self.advance().text
        self.fail("expected a binder name")

    # -- declarations ------------------------------------------------------------------

    def declarations(self):
        while self.tok.kind != "eof":
            yield self.declaration()

    def declaration(self):
        start = self.tok.start
        env = _Env()
        if self.at("def", "ident"):
            self.advance()
            name = self.ident()
            self.expect(":")
            ty = self.term(env)
            self.expect("=")
            body = self.term(env)
            return Def(name, ty, body, (start, self.toks[self.i - 1].end))
        t = self.tok
        if t.kind != "directive":
            self.fail("expected a declaration or directive")
        self.advance()
        if t.text == "#check":
            term = self.term(env)
            self.expect(":")
            ty = self.term(env)
            return Check(term, ty, (start, self.toks[self.i - 1].end))
        if t.text == "#eval":
            term = self.term(env)
            return Eval(term, (start, self.toks[self.i - 1].end))
        if t.text == "#assert_conv":
            left = self.term(env)
            self.expect("==")
            right = self.term(env)
            self.expect(":")
            ty = self.term(env)
            return AssertConv(left, right, ty, (start, self.toks[self.i - 1].end))
        if t.text == "#fail_check":
            term = self.term(env)
            self.expect(":")
            ty = self.term(env)
            return FailCheck(term, ty, (start, self.toks[self.i - 1].end))
        self.fail(f"unknown directive {t.text}", t)

    # -- computations ---------------------------------------------------------------------

    def term(self, env):
        if self.at("fn", "ident"):
            self.advance()
            name = self.binder()
            self.expect("=>")
            return Fn(self.term(env.bind(name)), name)
        return self.arrow(env)

    def arrow(self, env):
        if (self.at("(") and self.peek().kind == "ident" and self.peek(2).text == ":"
                and self.peek().text not in KEYWORDS):
            self.advance()
            name = self.binder()
            self.expect(":")
            if self.at("tm_ctx", "ident"):
                self.advance()
                dom = TMCTX
            else:
                dom = self.term(env)
            self.expect(")")
            self.expect("->")
            return Pi(dom, self.arrow(env.bind(name)), name)
        left = self.app(env)
        if self.at("->"):
            self.advance()
            return Pi(left, self.arrow(env.bind("_")), "_")
        return left

    def _starts_atom(self):
        t = self.tok
        if t.kind == "ident":
            return t.text not in KEYWORDS or t.text in ("rec",)
        return t.kind == "sym" and t.text in ("(", "[", "<")

    def app(self, env):
        head = self.atom(env)
        while self._starts_atom():
            if self.at("<"):
                head = CApp(head, self.ctx_arg(env))
            elif self.at("rec", "ident"):
                head = CApp(head, self.rec(env))
            else:
                head = CApp(head, self.atom(env))
        return head

    def atom(self, env):
        t = self.tok
        if t.kind == "ident":
            if t.text == "rec":
                return self.rec(env)
            m = re.fullmatch(r"U([0-9]+)", t.text)
            if m and env.comp_index(t.text) is None:
                self.advance()
                return Univ(int(m.group(1)))
            name = self.ident()
            return self.comp_var(name, env, t)
        if self.at("("):
            self.advance()
            inner = self.term(env)
            self.expect(")")
            return inner
        if self.at("["):
            return self.box(env)
        self.fail("expected a computation")

    def comp_var(self, name, env, tok):
        idx = env.comp_index(name)
        if idx is not None:
            return CVar(idx, name)
        if name in self.globals:
            return self.globals[name]
        self.fail(f"unbound variable {name!r}", tok)

    def rec(self, env):
        self.expect("rec")
        self.expect("^")
        self.expect("{")
        motive = self.term(env)
        self.expect("}")
        self.expect("{")
        arities = {"var": 2, "app": 5, "lam": 3}
        branches = {}
        while True:
            lt = self.tok
            if lt.kind != "ident" or lt.text not in arities:
                self.fail("expected a branch label var, app or lam")
            self.advance()
            names = [self.binder()]
            while self.at(","):
                self.advance()
                names.append(self.binder())
            if len(names) != arities[lt.text]:
                self.fail(f"{lt.text} branch binds {arities[lt.text]} variables, "
                          f"got {len(names)}", lt)
            if lt.text in branches:
                self.fail(f"duplicate {lt.text} branch", lt)
            self.expect("=>")
            benv = env
            for n in names:
                benv = benv.bind(n)
            branches[lt.text] = Branch(self.term(benv), tuple(names))
            if self.at("|"):
                self.advance()
                continue
            break
        self.expect("}")
        missing = [k for k in arities if k not in branches]
        if missing:
            self.fail(f"missing branch {missing[0]}")
        ctx = self.ctx_arg(env)
        scrut = self.atom(env)
        return Rec(motive, Branches(branches["var"], branches["app"], branches["lam"]),
                   ctx, scrut)

    # -- contexts -----------------------------------------------------------------------------

    def _ctx_items(self, env, close):
        """Parse ``head?, x[:A], ...`` up to ``close``; returns (head, [(name, type?)])."""
        head = None
        items = []
        if self.at("."):
            self.advance()
            return head, items
        first = True
        while not self.at(close):
            t = self.tok
            name = self.binder()
            ty = None
            if self.at(":"):
                self.advance()
                ty = self.lftype(env.with_lf(head, tuple(n for n, _, _ in items)))
            elif first and env.comp_index(name) is not None:
                head = CVar(env.comp_index(name), name)
                first = False
                if not self.at(","):
                    break
                self.advance()
                continue
            items.append((name, ty, t))
            first = False
            if not self.at(","):
                break
            self.advance()
        return head, [(n, ty) for n, ty, _ in items]

    def ctx_arg(self, env):
        self.expect("<")
        head, items = self._ctx_items(env, ">")
        self.expect(">")
        return LfCtx(head, tuple(Decl(ty if ty is not None else TM, n) for n, ty in items))

    def box(self, env):
        open_tok = self.expect("[")
        head, items = self._ctx_items(env, "|-")
        if self.at("|-#"):
            self.advance()
            param = True
        else:
            self.expect("|-")
            param = False
        names = tuple(n for n, _ in items)
        inner = env.with_lf(head, names)
        if not param:
            save = self.i
            try:
                ty = self.lftype(inner)
                if self.at("]"):
                    param = None
                else:
                    self.i = save
            except ParseError:
                self.i = save
            if param is None:
                self.advance()
                return BoxType(self._ctype(head, items, ty, False, open_tok))
        if param:
            ty = self.lftype(inner)
            self.expect("]")
            return BoxType(self._ctype(head, items, ty, True, open_tok))
        # declared types in a box object are accepted and erased
        m = self.lfterm(inner)
        self.expect("]")
        return BoxObj(CtxObj(ErasedCtx(head, names), m))

    def _ctype(self, head, items, ty, param, tok):
        decls = []
        for n, a in items:
            if a is None:
                self.fail(f"declaration {n} needs a type in a contextual type", tok)
            decls.append(Decl(a, n))
        return CtxType(LfCtx(head, tuple(decls)), ty, param)

    # -- LF ---------------------------------------------------------------------------------------

    def lftype(self, env):
        if self.at("Pi", "ident"):
            self.advance()
            name = self.binder()
            self.expect(":")
            dom = self.lftype_atom(env)
            self.expect(".")
            return LPi(dom, self.lftype(env.bind_lf(name)), name)
        left = self.lftype_atom(env)
        if self.at("->"):
            self.advance()
            return LPi(left, self.lftype(env.bind_lf("_")), "_")
        return left

    def lftype_atom(self, env):
        if self.at("tm", "ident"):
            self.advance()
            return TM
        if self.at("("):
            self.advance()
            a = self.lftype(env)
            self.expect(")")
            return a
        self.fail("expected an LF type")

    def lfterm(self, env):
        if self.at("\\"):
            self.advance()
            name = self.binder()
            self.expect(".")
            return Lam(self.lfterm(env.bind_lf(name)), name)
        head = self.lfatom(env)
        while self._starts_lfatom():
            if self.at("\\"):
                head = LApp(head, self.lfterm(env))
                break
            head = LApp(head, self.lfatom(env))
        return head

    def _starts_lfatom(self):
        t = self.tok
        if t.kind == "ident":
            return t.text not in KEYWORDS
        return t.kind == "sym" and t.text in ("(", "{", "\\")

    def lfatom(self, env):
        t = self.tok
        if self.at("("):
            self.advance()
            m = self.lfterm(env)
            self.expect(")")
            return m
        if self.at("{"):
            self.advance()
            comp = self.term(env)
            self.expect("}")
            return Unbox(comp, self.opt_subst(env))
        if t.kind == "ident" and t.text not in KEYWORDS:
            name = self.advance().text
            idx = env.lf_index(name)
            if idx is not None:
                return LVar(idx, name)
            if name in TERM_CONSTANTS:
                return LConst(name)
            comp = self.comp_var(name, env, t)
            return Unbox(comp, self.opt_subst(env))
        self.fail("expected an LF term")

    def opt_subst(self, env):
        if self.at("["):
            return self.subst(env)
        return Wk(env.lf_scope(), 0)

    def subst(self, env):
        self.expect("[")
        if self.at("]"):
            self.advance()
            return SEmpty()
        if self.at("id", "ident"):
            self.advance()
            sigma = Wk(env.lf_scope(), 0)
        elif self.at("wk", "ident"):
            sigma = self.wk(env)
        else:
            sigma = SCons(SEmpty(), self.lfterm(env))
        while self.at(","):
            self.advance()
            sigma = SCons(sigma, self.lfterm(env))
        self.expect("]")
        return sigma

    def wk(self, env):
        wt = self.expect("wk")
        self.expect("(")
        head = None
        names = []
        while not self.at(")"):
            name = self.binder()
            if not names and head is None and env.comp_index(name) is not None \
                    and env.lf_index(name) is None:
                head = CVar(env.comp_index(name), name)
            else:
                names.append(name)
            if not self.at(","):
                break
            self.advance()
        self.expect(")")
        scope = env.lf_scope()
        if head != scope.head or len(names) > len(scope.names):
            self.fail("weakening domain must be a prefix of the current LF context", wt)
        return Wk(ErasedCtx(head, scope.names[:len(names)]), len(scope.names) - len(names))


def parse(text):
    """Parse a whole file.  Definitions are referenced as ``Global`` nodes."""
    p = Parser(text)
    decls = []
    for d in p.declarations():
        if isinstance(d, Def):
            p.globals[d.name] = Global(d.name)
        decls.append(d)
    return SourceFile(decls, p.text)


def parse_term(text, names=(), globals_=None):
    """Parse a single computation; ``names`` are bound variables, outermost first."""
    p = Parser(text, globals_)
    t = p.term(_Env(names))
    if p.tok.kind != "eof":
        p.fail("unexpected trailing input")
    return t


def parse_lf(text, lf_names=(), names=(), lf_head=None):
    p = Parser(text)
    env = _Env(names, lf_names, None)
    if lf_head is not None:
        env = env.with_lf(CVar(env.comp_index(lf_head), lf_head), tuple(lf_names))
    m = p.lfterm(env)
    if p.tok.kind != "eof":
        p.fail("unexpected trailing input")
    return m
