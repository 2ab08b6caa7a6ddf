"""Computation-level substitution: shifting, single and simultaneous.

One traversal handles every category.  It descends through computations,
contextual types and objects and into LF syntax, where computation
variables occur as unbox payloads and as context-variable heads.
Replacing a head ``psi`` by a concrete context splices its declarations in
front of the local ones.  LF indices count from the right, so they are
unaffected; only the display names of the local suffix are freshened.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CheckError, IllScoped
from .syntax import (
    Atom,
    BoxObj,
    BoxType,
    Branch,
    Branches,
    CApp,
    CompCtx,
    CtxObj,
    CtxType,
    CVar,
    Decl,
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


def fresh_name(base, taken):
    if base not in taken:
        return base
    stem = base.rstrip("0123456789'") or "x"
    i = 1
    while f"{stem}{i}" in taken:
        i += 1
    return f"{stem}{i}"


def _freshen(prefix_names, names):
    taken = set(prefix_names)
    out = []
    for n in names:
        n2 = fresh_name(n, taken)
        taken.add(n2)
        out.append(n2)
    return tuple(out)


class _Mapper:
    """Apply ``on_var(var, depth)`` to every computation variable occurrence.

    ``on_var`` returns None to keep the variable, or a replacement that is
    a computation or an LfCtx (for context-variable heads).
    """

    def __init__(self, on_var):
        self.on_var = on_var

    def comp(self, t, k):
        if isinstance(t, CVar):
            r = self.on_var(t, k)
            if r is None:
                return t
            if isinstance(r, LfCtx):
                raise IllScoped(f"context {r} substituted into a term position")
            return r
        if isinstance(t, Fn):
            return Fn(self.comp(t.body, k + 1), t.name)
        if isinstance(t, CApp):
            return CApp(self.comp(t.fn, k), self.arg(t.arg, k))
        if isinstance(t, Pi):
            return Pi(self.domain(t.dom, k), self.comp(t.cod, k + 1), t.name)
        if isinstance(t, BoxType):
            return BoxType(self.ctype(t.ctype, k))
        if isinstance(t, BoxObj):
            return BoxObj(self.cobj(t.obj, k))
        if isinstance(t, Rec):
            return Rec(self.comp(t.motive, k), self.branches(t.branches, k),
                       self.lfctx(t.ctx, k), self.comp(t.scrut, k))
        if isinstance(t, (Univ, Global)):
            return t
        raise IllScoped(f"not a computation: {t!r}")

    def arg(self, a, k):
        return self.lfctx(a, k) if isinstance(a, LfCtx) else self.comp(a, k)

    def domain(self, d, k):
        return d if isinstance(d, TmCtx) else self.comp(d, k)

    def branches(self, b, k):
        return Branches(*(Branch(self.comp(br.body, k + n), br.names)
                          for br, n in zip(b, (2, 5, 3))))

    def _head(self, head, k):
        """Returns (new_head, spliced_names, spliced_decls)."""
        if head is None:
            return None, (), ()
        r = self.on_var(head, k)
        if r is None:
            return head, (), ()
        if isinstance(r, CVar):
            return r, (), ()
        if isinstance(r, LfCtx):
            return r.head, r.names(), r.decls
        raise IllScoped(f"term {r} substituted for a context variable")

    def lfctx(self, ctx, k):
        head, pre_names, pre_decls = self._head(ctx.head, k)
        decls = tuple(Decl(self.lftype(d.type, k), d.name) for d in ctx.decls)
        if pre_decls:
            names = _freshen(pre_names, [d.name for d in decls])
            decls = tuple(Decl(d.type, n) for d, n in zip(decls, names))
        return LfCtx(head, pre_decls + decls)

    def ectx(self, e, k):
        head, pre_names, _ = self._head(e.head, k)
        names = e.names
        if pre_names:
            names = _freshen(pre_names, names)
        return ErasedCtx(head, tuple(pre_names) + tuple(names))

    def ctype(self, t, k):
        return CtxType(self.lfctx(t.ctx, k), self.lftype(t.type, k), t.param)

    def cobj(self, c, k):
        return CtxObj(self.ectx(c.ectx, k), self.lf(c.term, k))

    def lf(self, m, k):
        if isinstance(m, (LVar, LConst)):
            return m
        if isinstance(m, Lam):
            return Lam(self.lf(m.body, k), m.name)
        if isinstance(m, LApp):
            return LApp(self.lf(m.fn, k), self.lf(m.arg, k))
        if isinstance(m, Unbox):
            return Unbox(self.comp(m.comp, k), self.subst(m.subst, k))
        raise IllScoped(f"not an LF term: {m!r}")

    def subst(self, s, k):
        if isinstance(s, SEmpty):
            return s
        if isinstance(s, SCons):
            return SCons(self.subst(s.rest, k), self.lf(s.term, k))
        if isinstance(s, Wk):
            return Wk(self.ectx(s.dom, k), s.shift)
        raise IllScoped(f"not an LF substitution: {s!r}")

    def lftype(self, a, k):
        if isinstance(a, Atom):
            return Atom(a.name, tuple(self.lf(x, k) for x in a.args)) if a.args else a
        if isinstance(a, LPi):
            return LPi(self.lftype(a.dom, k), self.lftype(a.cod, k), a.name)
        raise IllScoped(f"not an LF type: {a!r}")

    def kind(self, kd, k):
        if isinstance(kd, KType):
            return kd
        return KPi(self.lftype(kd.dom, k), self.kind(kd.cod, k), kd.name)

    def any(self, node, k=0):
        if isinstance(node, LfCtx):
            return self.lfctx(node, k)
        if isinstance(node, ErasedCtx):
            return self.ectx(node, k)
        if isinstance(node, CtxType):
            return self.ctype(node, k)
        if isinstance(node, CtxObj):
            return self.cobj(node, k)
        if isinstance(node, TmCtx):
            return node
        if isinstance(node, (Lam, LApp, LVar, LConst, Unbox)):
            return self.lf(node, k)
        if isinstance(node, (SEmpty, SCons, Wk)):
            return self.subst(node, k)
        if isinstance(node, (Atom, LPi)):
            return self.lftype(node, k)
        if isinstance(node, (KType, KPi)):
            return self.kind(node, k)
        return self.comp(node, k)


def _shift_payload(p, d):
    return shift(p, d) if d else p


def shift(node, d, c=0):
    """Weaken: add ``d`` to computation variables with index >= ``c``."""
    if d == 0:
        return node

    def on_var(v, k):
        return CVar(v.index + d, v.name) if v.index >= k + c else None

    return _Mapper(on_var).any(node)


def instantiate(node, payloads, k=0):
    """Discharge the ``len(payloads)`` binders just above depth ``k``.

    ``payloads`` are listed outermost binder first and live in the context
    outside those binders.
    """
    m = len(payloads)
    if m == 0:
        return node

    def on_var(v, depth):
        i = v.index
        lo = depth + k
        if i < lo:
            return None
        if i < lo + m:
            return _shift_payload(payloads[m - 1 - (i - lo)], lo)
        return CVar(i - m, v.name)

    return _Mapper(on_var).any(node)


def csubst(node, payload, y=0):
    """``{payload/y}node``; removes variable ``y`` from the scope."""
    return instantiate(node, [payload], y)


@dataclass(frozen=True)
class CompSubst:
    """A simultaneous substitution theta : Gamma' -> Gamma.

    ``payloads`` follow the order of Gamma (outermost first).  A payload is
    a computation, or an LfCtx for a tm_ctx entry.
    """

    payloads: tuple = ()
    names: tuple = field(default=(), compare=False)

    def extend(self, payload, name="y"):
        return CompSubst(self.payloads + (payload,), self.names + (name,))

    def __len__(self):
        return len(self.payloads)

    def lookup(self, index):
        return self.payloads[len(self.payloads) - 1 - index]

    @staticmethod
    def identity(gamma):
        n = len(gamma)
        out = []
        for j, (name, dom) in enumerate(gamma.entries):
            v = CVar(n - 1 - j, name)
            out.append(LfCtx(v) if isinstance(dom, TmCtx) else v)
        return CompSubst(tuple(out), tuple(gamma.names()))

    @staticmethod
    def weakening(gamma, extra):
        """The renaming Gamma, extra <= Gamma."""
        ident = CompSubst.identity(gamma)
        return CompSubst(tuple(shift(p, extra) for p in ident.payloads), ident.names)


def csubst_sim(theta, node):
    """Apply theta to ``node``; binders inside extend theta with y/y."""

    def on_var(v, k):
        i = v.index
        if i < k:
            return None
        j = i - k
        if j >= len(theta):
            raise CheckError(f"computation variable #{j} is not covered by the "
                             "substitution", code="UnboundCompVar",
                             judgment="comp-subst")
        return _shift_payload(theta.lookup(j), k)

    return _Mapper(on_var).any(node)


def check_comp_subst(gamma_to, theta, gamma_from, checker=None):
    """Check ``gamma_to |- theta : gamma_from`` entry by entry."""
    from .typecheck import Checker

    checker = checker or Checker()
    if len(theta) != len(gamma_from):
        raise CheckError("substitution and context have different lengths",
                         code="SubstArity", judgment="comp-subst",
                         expected=str(len(gamma_from)), actual=str(len(theta)))
    for j, (name, dom) in enumerate(gamma_from.entries):
        prefix = CompSubst(theta.payloads[:j], theta.names[:j])
        payload = theta.payloads[j]
        try:
            if isinstance(dom, TmCtx):
                if not isinstance(payload, LfCtx):
                    raise CheckError(f"{name} expects an LF context",
                                     code="EntryTypeMismatch", judgment="comp-subst")
                checker.schema_check(gamma_to, payload)
            else:
                if isinstance(payload, LfCtx):
                    raise CheckError(f"{name} expects a computation",
                                     code="EntryTypeMismatch", judgment="comp-subst")
                checker.check_comp(gamma_to, payload, csubst_sim(prefix, dom))
        except CheckError as err:
            err.message = f"entry {name}: {err.message}"
            raise
    return True


__all__ = [
    "CompCtx",
    "CompSubst",
    "check_comp_subst",
    "csubst",
    "csubst_sim",
    "fresh_name",
    "instantiate",
    "shift",
]
