"""Weak head reduction for LF terms, LF substitutions and computations.

Reduction is untyped.  A ``Reducer`` owns a step budget; every contraction
(beta at either layer, unfolding a definition, unfolding the recursor,
unbox of a box) spends one unit of fuel.
"""

from __future__ import annotations

import enum

from .compsubst import instantiate
from .errors import DispatchFailure, FuelExhausted, StuckTerm
from .lfsubst import expand_wk, lf_subst_term, single_subst
from .recursor import unfold
from .syntax import (
    BoxObj,
    BoxType,
    CApp,
    CtxObj,
    CVar,
    Fn,
    Global,
    Lam,
    LApp,
    LConst,
    LfCtx,
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

DEFAULT_FUEL = 1_000_000


class WhnfClass(enum.Enum):
    WNE = "wne"
    WHNF = "whnf"
    REDUCIBLE = "reducible"

    @property
    def is_whnf(self):
        return self is not WhnfClass.REDUCIBLE


# ---------------------------------------------------------------------------
# Classification


def lf_head(m):
    while isinstance(m, LApp):
        m = m.fn
    return m


def is_neutral_unbox(m):
    """An LF term whose spine head is ``unbox`` of a neutral computation."""
    h = lf_head(m)
    return isinstance(h, Unbox) and classify_comp(h.comp) is WhnfClass.WNE


def classify_lf(m):
    if isinstance(m, (LVar, LConst)):
        return WhnfClass.WNE
    if isinstance(m, Lam):
        return WhnfClass.WHNF
    if isinstance(m, Unbox):
        if classify_comp(m.comp) is WhnfClass.WNE:
            return WhnfClass.WHNF
        return WhnfClass.REDUCIBLE
    if isinstance(m, LApp):
        h = lf_head(m)
        if isinstance(h, (LVar, LConst)) or is_neutral_unbox(h):
            return WhnfClass.WNE
        return WhnfClass.REDUCIBLE
    raise StuckTerm(f"not an LF term: {m!r}")


def classify_subst(s):
    if isinstance(s, (SEmpty, SCons)):
        return WhnfClass.WHNF
    if isinstance(s, Wk):
        return WhnfClass.WHNF if expand_wk(s) is None else WhnfClass.REDUCIBLE
    raise StuckTerm(f"not an LF substitution: {s!r}")


def classify_comp(t):
    if isinstance(t, CVar):
        return WhnfClass.WNE
    if isinstance(t, (Univ, Pi, BoxType, Fn, BoxObj)):
        return WhnfClass.WHNF
    if isinstance(t, CApp):
        return WhnfClass.WNE if classify_comp(t.fn) is WhnfClass.WNE \
            else WhnfClass.REDUCIBLE
    if isinstance(t, Rec):
        s = t.scrut
        if classify_comp(s) is WhnfClass.WNE:
            return WhnfClass.WNE
        if isinstance(s, BoxObj) and is_neutral_unbox(s.obj.term):
            return WhnfClass.WNE
        return WhnfClass.REDUCIBLE
    if isinstance(t, Global):
        return WhnfClass.REDUCIBLE
    raise StuckTerm(f"not a computation: {t!r}")


def is_wne(t):
    return classify_comp(t) is WhnfClass.WNE


# ---------------------------------------------------------------------------
# Reduction


class Reducer:
    """Deterministic weak head reducer with a shared step budget.

    ``trace`` is called as ``trace(rule, before, after)`` for every step.
    """

    def __init__(self, fuel=DEFAULT_FUEL, trace=None):
        self.fuel = fuel
        self.steps = 0
        self.trace = trace

    def _tick(self, rule, before, after):
        self.steps += 1
        if self.steps > self.fuel:
            raise FuelExhausted(f"step budget of {self.fuel} exhausted during {rule}")
        if self.trace is not None:
            self.trace(rule, before, after)

    # -- LF ------------------------------------------------------------------

    def whnf_lf(self, m):
        while True:
            if isinstance(m, (LVar, LConst, Lam)):
                return m
            if isinstance(m, LApp):
                h = self.whnf_lf(m.fn)
                if isinstance(h, Lam):
                    nxt = single_subst(m.arg, h.body)
                    self._tick("beta-lf", m, nxt)
                    m = nxt
                    continue
                if classify_lf(h) is WhnfClass.WNE or is_neutral_unbox(h):
                    return LApp(h, m.arg)
                raise StuckTerm(f"LF application of {h} cannot reduce")
            if isinstance(m, Unbox):
                t = self.whnf_comp(m.comp)
                if isinstance(t, BoxObj):
                    nxt = lf_subst_term(m.subst, t.obj.ectx, t.obj.term)
                    self._tick("unbox", m, nxt)
                    m = nxt
                    continue
                if is_wne(t):
                    return Unbox(t, m.subst)
                raise StuckTerm(f"unbox of {t}, which is not a box")
            raise StuckTerm(f"not an LF term: {m!r}")

    def whnf_subst(self, s):
        if isinstance(s, Wk):
            step = expand_wk(s)
            return s if step is None else step
        return s

    # -- computations -----------------------------------------------------------

    def whnf_comp(self, t):
        while True:
            if isinstance(t, (CVar, Univ, Pi, BoxType, Fn, BoxObj)):
                return t
            if isinstance(t, Global):
                if t.body is None:
                    raise StuckTerm(f"definition {t.name} has no body")
                self._tick("delta", t, t.body)
                t = t.body
                continue
            if isinstance(t, CApp):
                h = self.whnf_comp(t.fn)
                if isinstance(h, Fn):
                    nxt = instantiate(h.body, [t.arg])
                    self._tick("beta", t, nxt)
                    t = nxt
                    continue
                if is_wne(h):
                    return CApp(h, t.arg)
                raise StuckTerm(f"application of {h}, which is not a function")
            if isinstance(t, Rec):
                s = self.whnf_comp(t.scrut)
                if isinstance(s, BoxObj):
                    n = self.whnf_lf(s.obj.term)
                    if is_neutral_unbox(n):
                        return Rec(t.motive, t.branches, t.ctx,
                                   BoxObj(CtxObj(s.obj.ectx, n)))
                    rec = Rec(t.motive, t.branches, t.ctx, s)
                    nxt = unfold(rec, s.obj.ectx, n)
                    if nxt is None:
                        raise DispatchFailure(f"recursor cannot dispatch on {n}")
                    self._tick("rec", t, nxt)
                    t = nxt
                    continue
                if is_wne(s):
                    return Rec(t.motive, t.branches, t.ctx, s)
                raise StuckTerm(f"recursor scrutinee {s} is not a box")
            raise StuckTerm(f"not a computation: {t!r}")

    def branch_dispatch(self, rec, ectx, n):
        nxt = unfold(rec, ectx, n)
        if nxt is None:
            raise DispatchFailure(f"recursor cannot dispatch on {n}")
        self._tick("rec", rec, nxt)
        return self.whnf_comp(nxt)

    # -- full normal forms, for display -------------------------------------------

    def normalize(self, t):
        """Reduce everywhere, including under binders and inside boxes."""
        t = self.whnf_comp(t)
        if isinstance(t, Fn):
            return Fn(self.normalize(t.body), t.name)
        if isinstance(t, BoxObj):
            return BoxObj(CtxObj(t.obj.ectx, self.normalize_lf(t.obj.term)))
        if isinstance(t, Pi):
            dom = t.dom if isinstance(t.dom, TmCtx) else self.normalize(t.dom)
            return Pi(dom, self.normalize(t.cod), t.name)
        if isinstance(t, CApp):
            arg = t.arg if isinstance(t.arg, LfCtx) else self.normalize(t.arg)
            return CApp(self.normalize(t.fn), arg)
        if isinstance(t, Rec):
            scrut = t.scrut
            if isinstance(scrut, BoxObj):
                scrut = BoxObj(CtxObj(scrut.obj.ectx, self.normalize_lf(scrut.obj.term)))
            else:
                scrut = self.normalize(scrut)
            return Rec(t.motive, t.branches, t.ctx, scrut)
        return t

    def normalize_lf(self, m):
        m = self.whnf_lf(m)
        if isinstance(m, Lam):
            return Lam(self.normalize_lf(m.body), m.name)
        if isinstance(m, LApp):
            return LApp(self.normalize_lf(m.fn), self.normalize_lf(m.arg))
        if isinstance(m, Unbox):
            return Unbox(self.normalize(m.comp), self.normalize_subst(m.subst))
        return m

    def normalize_subst(self, s):
        if isinstance(s, SCons):
            return SCons(self.normalize_subst(s.rest), self.normalize_lf(s.term))
        return s


def whnf_comp(t, fuel=DEFAULT_FUEL):
    return Reducer(fuel).whnf_comp(t)


def whnf_lf(m, fuel=DEFAULT_FUEL):
    return Reducer(fuel).whnf_lf(m)


def whnf_subst(s):
    return Reducer().whnf_subst(s)


def branch_dispatch(rec, ectx, n, fuel=DEFAULT_FUEL):
    return Reducer(fuel).branch_dispatch(rec, ectx, n)
