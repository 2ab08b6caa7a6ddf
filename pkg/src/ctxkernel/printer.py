"""Pretty printer producing the concrete syntax accepted by the parser.

Indices are turned back into names using the binder hints.  A binder whose
hint would shadow a visible name (of either layer) is renamed, so the
output always parses back to the same term.
"""

from __future__ import annotations

from .compsubst import fresh_name
from .syntax import (
    Atom,
    BoxObj,
    BoxType,
    CApp,
    CompCtx,
    CtxObj,
    CtxType,
    CVar,
    ErasedCtx,
    Fn,
    Global,
    KPi,
    KType,
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
    TmCtx,
    Unbox,
    Univ,
    Wk,
)

RESERVED = frozenset({
    "fn", "rec", "var", "app", "lam", "tm", "tm_ctx", "Pi", "id", "wk", "def",
    "U", "Type",
})

# comp precedence levels
P_TOP, P_ARROW, P_APP, P_ATOM = 0, 1, 2, 3


def _occurs(t, index):
    """Does computation variable ``index`` occur free in ``t``?"""
    from .compsubst import _Mapper

    found = []

    def on_var(v, k):
        if v.index == index + k:
            found.append(v)
        return None

    _Mapper(on_var).any(t)
    return bool(found)


class _Scope:
    """Visible names: computation variables and the current LF scope."""

    def __init__(self, comp=(), lf=(), lf_head=None):
        self.comp = list(comp)
        self.lf = list(lf)
        self.lf_head = lf_head

    def taken(self):
        return set(self.comp) | set(self.lf) | RESERVED

    def bind_comp(self, name):
        n = fresh_name(name or "y", self.taken())
        return _Scope(self.comp + [n], self.lf, self.lf_head), n

    def bind_lf(self, name):
        n = fresh_name(name or "x", self.taken())
        return _Scope(self.comp, self.lf + [n], self.lf_head), n

    def with_lf(self, head, names):
        return _Scope(self.comp, names, head)

    def comp_name(self, v):
        if 0 <= v.index < len(self.comp):
            return self.comp[len(self.comp) - 1 - v.index]
        return v.name

    def lf_name(self, v):
        if 0 <= v.index < len(self.lf):
            return self.lf[len(self.lf) - 1 - v.index]
        return v.name


class Printer:
    """Renders syntax in the notation the parser reads back."""

    # -- computations ---------------------------------------------------------

    def comp(self, t, sc, prec=P_TOP):
        if isinstance(t, CVar):
            return sc.comp_name(t)
        if isinstance(t, Global):
            return t.name
        if isinstance(t, Univ):
            return f"U{t.level}"
        if isinstance(t, Fn):
            sc2, n = sc.bind_comp(t.name)
            return self._paren(prec > P_TOP, f"fn {n} => {self.comp(t.body, sc2)}")
        if isinstance(t, Pi):
            dom = "tm_ctx" if isinstance(t.dom, TmCtx) else None
            if dom is None and not _occurs(t.cod, 0):
                sc2, _ = sc.bind_comp(t.name)
                text = f"{self.comp(t.dom, sc, P_APP)} -> {self.comp(t.cod, sc2, P_ARROW)}"
            else:
                dom = dom or self.comp(t.dom, sc)
                sc2, n = sc.bind_comp(t.name)
                text = f"({n} : {dom}) -> {self.comp(t.cod, sc2, P_ARROW)}"
            return self._paren(prec > P_ARROW, text)
        if isinstance(t, BoxType):
            return self.ctype(t.ctype, sc)
        if isinstance(t, BoxObj):
            return self.cobj(t.obj, sc)
        if isinstance(t, CApp):
            arg = self.lfctx_arg(t.arg, sc) if isinstance(t.arg, LfCtx) \
                else self.comp(t.arg, sc, P_ATOM)
            return self._paren(prec > P_APP, f"{self.comp(t.fn, sc, P_APP)} {arg}")
        if isinstance(t, Rec):
            return self._paren(prec > P_APP, self.rec(t, sc))
        return f"<?{type(t).__name__}>"

    def rec(self, t, sc):
        b = t.branches
        parts = []
        for label, br, defaults in (("var", b.var, ("psi", "p")),
                                    ("app", b.app, ("psi", "m", "n", "f_m", "f_n")),
                                    ("lam", b.lam, ("psi", "m", "f_m"))):
            names = br.names if len(br.names) == len(defaults) else defaults
            sc2 = sc
            bound = []
            for n in names:
                sc2, n2 = sc2.bind_comp(n)
                bound.append(n2)
            parts.append(f"{label} {', '.join(bound)} => {self.comp(br.body, sc2)}")
        branches = " | ".join(parts)
        return (f"rec^{{{self.comp(t.motive, sc)}}} {{ {branches} }} "
                f"{self.lfctx_arg(t.ctx, sc)} {self.comp(t.scrut, sc, P_ATOM)}")

    def _paren(self, cond, text):
        return f"({text})" if cond else text

    # -- contexts ------------------------------------------------------------------

    def _ctx_parts(self, ctx, sc, typed):
        parts = []
        head = None
        if ctx.head is not None:
            head = ctx.head
            parts.append(sc.comp_name(ctx.head))
        lsc = sc.with_lf(head, [])
        decls = ctx.decls if isinstance(ctx, LfCtx) else ctx.names
        for d in decls:
            if typed:
                ty = self.lftype(d.type, lsc)
                lsc, n = lsc.bind_lf(d.name)
                parts.append(f"{n}:{ty}")
            else:
                lsc, n = lsc.bind_lf(d)
                parts.append(n)
        return parts, lsc

    def lfctx_arg(self, ctx, sc):
        parts, _ = self._ctx_parts(ctx, sc, True)
        return "<" + ", ".join(parts) + ">"

    def lfctx(self, ctx, sc):
        parts, _ = self._ctx_parts(ctx, sc, True)
        return ", ".join(parts) if parts else "."

    def ctype(self, t, sc):
        parts, lsc = self._ctx_parts(t.ctx, sc, True)
        turn = "|-#" if t.param else "|-"
        return f"[{', '.join(parts)} {turn} {self.lftype(t.type, lsc)}]".replace("[ ", "[")

    def cobj(self, c, sc):
        parts, lsc = self._ctx_parts(c.ectx, sc, False)
        return f"[{', '.join(parts)} |- {self.lf(c.term, lsc)}]".replace("[ ", "[")

    # -- LF -------------------------------------------------------------------------

    def lftype(self, a, sc, prec=0):
        if isinstance(a, Atom):
            if not a.args:
                return a.name
            args = " ".join(self.lf(x, sc, 2) for x in a.args)
            return self._paren(prec > 1, f"{a.name} {args}")
        if isinstance(a, LPi):
            sc2, n = sc.bind_lf(a.name)
            text = f"Pi {n}:{self.lftype(a.dom, sc, 1)}. {self.lftype(a.cod, sc2)}"
            return self._paren(prec > 0, text)
        if isinstance(a, KType):
            return "Type"
        if isinstance(a, KPi):
            sc2, n = sc.bind_lf(a.name)
            return f"Pi {n}:{self.lftype(a.dom, sc, 1)}. {self.lftype(a.cod, sc2)}"
        return f"<?{type(a).__name__}>"

    def lf(self, m, sc, prec=0):
        if isinstance(m, LVar):
            return sc.lf_name(m)
        if isinstance(m, LConst):
            return m.name
        if isinstance(m, Lam):
            sc2, n = sc.bind_lf(m.name)
            return self._paren(prec > 0, f"\\{n}. {self.lf(m.body, sc2)}")
        if isinstance(m, LApp):
            return self._paren(prec > 1,
                               f"{self.lf(m.fn, sc, 1)} {self.lf(m.arg, sc, 2)}")
        if isinstance(m, Unbox):
            if isinstance(m.comp, CVar) and sc.comp_name(m.comp) not in sc.lf:
                head = sc.comp_name(m.comp)
            else:
                head = "{" + self.comp(m.comp, sc) + "}"
            if self._is_id(m.subst, sc):
                return head
            return f"{head}{self.subst(m.subst, sc)}"
        return f"<?{type(m).__name__}>"

    def _is_id(self, s, sc):
        return (isinstance(s, Wk) and s.shift == 0 and len(s.dom) == len(sc.lf)
                and self._same_head(s.dom.head, sc.lf_head))

    @staticmethod
    def _same_head(a, b):
        return (a is None and b is None) or (
            a is not None and b is not None and a.index == b.index)

    def subst(self, s, sc):
        items = []
        cur = s
        while isinstance(cur, SCons):
            items.append(self.lf(cur.term, sc))
            cur = cur.rest
        items.reverse()
        if isinstance(cur, Wk):
            base = self._wk(cur, sc)
            items.insert(0, base)
        elif not isinstance(cur, SEmpty):
            items.insert(0, f"<?{type(cur).__name__}>")
        return "[" + ", ".join(items) + "]"

    def _wk(self, w, sc):
        if self._is_id(w, sc):
            return "id"
        parts = []
        if w.dom.head is not None:
            parts.append(sc.comp_name(w.dom.head))
        k = len(w.dom)
        if k <= len(sc.lf):
            parts.extend(sc.lf[:k])
        else:
            parts.extend(w.dom.names)
        return "wk(" + ", ".join(parts) + ")"

    def lfsubst_top(self, s, sc):
        return self.subst(s, sc)


def show(node, names=None, lf_names=None, lf_head=None):
    """Render any syntax node; ``names`` lists computation variables, outermost first."""
    if isinstance(names, CompCtx):
        names = names.names()
    sc = _Scope(names or (), lf_names or (), lf_head)
    p = Printer()
    if isinstance(node, (LVar, LConst, Lam, LApp, Unbox)):
        return p.lf(node, sc)
    if isinstance(node, (Atom, LPi, KType, KPi)):
        return p.lftype(node, sc)
    if isinstance(node, (SEmpty, SCons, Wk)):
        return p.subst(node, sc)
    if isinstance(node, LfCtx):
        return p.lfctx(node, sc)
    if isinstance(node, ErasedCtx):
        parts = ([sc.comp_name(node.head)] if node.head is not None else []) + list(node.names)
        return ", ".join(parts) if parts else "."
    if isinstance(node, CtxType):
        return p.ctype(node, sc)
    if isinstance(node, CtxObj):
        return p.cobj(node, sc)
    if isinstance(node, TmCtx):
        return "tm_ctx"
    return p.comp(node, sc)


def show_in(gamma, node):
    return show(node, gamma.names())
