"""Type-directed algorithmic definitional equality.

Terms are compared by weak head normalizing and then descending.  At
function types (both layers) and at box types the comparison is
extensional: both sides are applied to a fresh variable, or unboxed with
the identity substitution.  Neutral terms are compared structurally and
the comparison returns the type it recovered along the way.
"""

from __future__ import annotations

from dataclasses import dataclass

from .compsubst import instantiate, shift
from .errors import NotFound
from .lfsubst import (
    id_subst,
    inst_type,
    lf_subst_type,
    shift_lf,
    shift_type,
)
from .recursor import TELESCOPES, motive_at
from .reduction import DEFAULT_FUEL, Reducer, WhnfClass, classify_comp
from .syntax import (
    TM,
    Atom,
    BoxObj,
    BoxType,
    CApp,
    CtxType,
    CVar,
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
    TmCtx,
    Unbox,
    Univ,
    Wk,
    ctx_lookup,
    erase,
    sig_lookup,
)


@dataclass(frozen=True)
class ConvOptions:
    """Switches for the extensional rules; turning one off gives a mutant."""

    lf_eta: bool = True
    box_eta: bool = True


def _fresh_arg(dom):
    return LfCtx(CVar(0, "psi")) if isinstance(dom, TmCtx) else CVar(0)


class Converter:
    def __init__(self, fuel=DEFAULT_FUEL, trace=None, options=None, reducer=None):
        self.reducer = reducer or Reducer(fuel, trace)
        self.options = options or ConvOptions()

    def whnf(self, t):
        return self.reducer.whnf_comp(t)

    def whnf_lf(self, m):
        return self.reducer.whnf_lf(m)

    # -- computations --------------------------------------------------------------

    def conv_comp(self, gamma, t1, t2, tau):
        if t1 == t2:
            return True
        tau = self.whnf(tau)
        if isinstance(tau, Pi):
            g2 = gamma.extend(tau.name, tau.dom)
            x = _fresh_arg(tau.dom)
            return self.conv_comp(g2, CApp(shift(t1, 1), x), CApp(shift(t2, 1), x),
                                  tau.cod)
        if isinstance(tau, BoxType):
            ct = tau.ctype
            if self.options.box_eta:
                sid = id_subst(ct.ctx)
                return self.conv_lf(gamma, ct.ctx, Unbox(t1, sid), Unbox(t2, sid),
                                    ct.type)
            w1, w2 = self.whnf(t1), self.whnf(t2)
            if isinstance(w1, BoxObj) and isinstance(w2, BoxObj):
                return self.conv_lf(gamma, ct.ctx, w1.obj.term, w2.obj.term, ct.type)
            return self._neutral_pair(gamma, w1, w2)
        if isinstance(tau, Univ):
            return self.conv_comp_type(gamma, t1, t2)
        return self._neutral_pair(gamma, self.whnf(t1), self.whnf(t2))

    def _neutral_pair(self, gamma, w1, w2):
        if classify_comp(w1) is not WhnfClass.WNE or classify_comp(w2) is not WhnfClass.WNE:
            return False
        return self.conv_neutral(gamma, w1, w2) is not None

    def conv_comp_type(self, gamma, a, b):
        if a == b:
            return True
        a, b = self.whnf(a), self.whnf(b)
        if a == b:
            return True
        if isinstance(a, Univ) or isinstance(b, Univ):
            return isinstance(a, Univ) and isinstance(b, Univ) and a.level == b.level
        if isinstance(a, Pi) and isinstance(b, Pi):
            if not self.conv_domain(gamma, a.dom, b.dom):
                return False
            return self.conv_comp_type(gamma.extend(a.name, a.dom), a.cod, b.cod)
        if isinstance(a, BoxType) and isinstance(b, BoxType):
            return self.conv_ctype(gamma, a.ctype, b.ctype)
        return self._neutral_pair(gamma, a, b)

    def conv_domain(self, gamma, d1, d2):
        if isinstance(d1, TmCtx) or isinstance(d2, TmCtx):
            return isinstance(d1, TmCtx) and isinstance(d2, TmCtx)
        return self.conv_comp_type(gamma, d1, d2)

    def conv_ctype(self, gamma, t1, t2):
        return (t1.param == t2.param and self.conv_ctx(gamma, t1.ctx, t2.ctx)
                and self.conv_lf_type(gamma, t1.ctx, t1.type, t2.type))

    def conv_neutral(self, gamma, n1, n2):
        """Compare two neutral computations; return their type or None."""
        if isinstance(n1, CVar) and isinstance(n2, CVar):
            if n1.index != n2.index:
                return None
            try:
                return gamma.lookup(n1.index)
            except NotFound:
                return None
        if isinstance(n1, CApp) and isinstance(n2, CApp):
            ty = self.conv_neutral(gamma, n1.fn, n2.fn)
            if ty is None:
                return None
            ty = self.whnf(ty)
            if not isinstance(ty, Pi):
                return None
            if isinstance(ty.dom, TmCtx):
                if not (isinstance(n1.arg, LfCtx) and isinstance(n2.arg, LfCtx)
                        and self.conv_ctx(gamma, n1.arg, n2.arg)):
                    return None
            elif isinstance(n1.arg, LfCtx) or isinstance(n2.arg, LfCtx):
                return None
            elif not self.conv_comp(gamma, n1.arg, n2.arg, ty.dom):
                return None
            return instantiate(ty.cod, [n1.arg])
        if isinstance(n1, Rec) and isinstance(n2, Rec):
            return self._conv_rec(gamma, n1, n2)
        return None

    def _conv_rec(self, gamma, r1, r2):
        if not self.conv_comp_type(gamma, r1.motive, r2.motive):
            return None
        if not self.conv_ctx(gamma, r1.ctx, r2.ctx):
            return None
        scrut_ty = BoxType(CtxType(r1.ctx, TM))
        if not self.conv_comp(gamma, r1.scrut, r2.scrut, scrut_ty):
            return None
        for kind in ("var", "app", "lam"):
            b1 = getattr(r1.branches, kind)
            b2 = getattr(r2.branches, kind)
            entries, result = TELESCOPES[kind](r1.motive, b1)
            g2 = gamma
            for name, dom in entries:
                g2 = g2.extend(name, dom)
            if not self.conv_comp(g2, b1.body, b2.body, result):
                return None
        return motive_at(r1.motive, r1.ctx, r1.scrut)

    # -- LF ----------------------------------------------------------------------------

    def conv_lf(self, gamma, psi, m1, m2, a):
        if m1 == m2:
            return True
        if isinstance(a, LPi):
            psi2 = psi.extend(a.name, a.dom)
            if self.options.lf_eta:
                x = LVar(0, a.name)
                return self.conv_lf(gamma, psi2, LApp(shift_lf(m1, 1), x),
                                    LApp(shift_lf(m2, 1), x), a.cod)
            w1, w2 = self.whnf_lf(m1), self.whnf_lf(m2)
            if isinstance(w1, Lam) and isinstance(w2, Lam):
                return self.conv_lf(gamma, psi2, w1.body, w2.body, a.cod)
            if isinstance(w1, Lam) or isinstance(w2, Lam):
                return False
            return self.conv_lf_neutral(gamma, psi, w1, w2) is not None
        w1, w2 = self.whnf_lf(m1), self.whnf_lf(m2)
        if isinstance(w1, Lam) or isinstance(w2, Lam):
            return False
        return self.conv_lf_neutral(gamma, psi, w1, w2) is not None

    def conv_lf_neutral(self, gamma, psi, m1, m2):
        """Compare whnf LF terms with a neutral head; return their type or None."""
        if isinstance(m1, LVar) and isinstance(m2, LVar):
            if m1.index != m2.index:
                return None
            try:
                return shift_type(ctx_lookup(psi, m1.index), m1.index + 1)
            except NotFound:
                return None
        if isinstance(m1, LConst) and isinstance(m2, LConst):
            if m1.name != m2.name:
                return None
            try:
                ty = sig_lookup(m1.name)
            except NotFound:
                return None
            return None if isinstance(ty, (KType, KPi)) else ty
        if isinstance(m1, LApp) and isinstance(m2, LApp):
            ty = self.conv_lf_neutral(gamma, psi, m1.fn, m2.fn)
            if not isinstance(ty, LPi):
                return None
            if not self.conv_lf(gamma, psi, m1.arg, m2.arg, ty.dom):
                return None
            return inst_type(ty.cod, m1.arg)
        if isinstance(m1, Unbox) and isinstance(m2, Unbox):
            w1, w2 = self.whnf(m1.comp), self.whnf(m2.comp)
            if classify_comp(w1) is not WhnfClass.WNE \
                    or classify_comp(w2) is not WhnfClass.WNE:
                return None
            ty = self.conv_neutral(gamma, w1, w2)
            if ty is None:
                return None
            ty = self.whnf(ty)
            if not isinstance(ty, BoxType):
                return None
            phi = ty.ctype.ctx
            if not self.conv_subst(gamma, psi, m1.subst, m2.subst, phi):
                return None
            return lf_subst_type(m1.subst, erase(phi), ty.ctype.type)
        return None

    def conv_subst(self, gamma, psi, s1, s2, phi):
        """Compare two substitutions from ``phi`` into ``psi``."""
        while True:
            if s1 == s2:
                return True
            if not phi.decls:
                if phi.head is None:
                    return True
                w1 = self.reducer.whnf_subst(s1)
                w2 = self.reducer.whnf_subst(s2)
                return (isinstance(w1, Wk) and isinstance(w2, Wk)
                        and w1.shift == w2.shift and w1.dom == w2.dom)
            w1 = self.reducer.whnf_subst(s1)
            w2 = self.reducer.whnf_subst(s2)
            if not (isinstance(w1, SCons) and isinstance(w2, SCons)):
                return False
            rest_phi = phi.prefix(1)
            decl = phi.decls[-1]
            a = lf_subst_type(w1.rest, erase(rest_phi), decl.type)
            if not self.conv_lf(gamma, psi, w1.term, w2.term, a):
                return False
            s1, s2, phi = w1.rest, w2.rest, rest_phi

    def conv_ctx(self, gamma, c1, c2):
        if c1.head != c2.head or len(c1.decls) != len(c2.decls):
            return False
        for j, (d1, d2) in enumerate(zip(c1.decls, c2.decls)):
            prefix = LfCtx(c1.head, c1.decls[:j])
            if not self.conv_lf_type(gamma, prefix, d1.type, d2.type):
                return False
        return True

    def conv_lf_type(self, gamma, psi, a, b):
        if a == b:
            return True
        if isinstance(a, Atom) and isinstance(b, Atom):
            if a.name != b.name or len(a.args) != len(b.args):
                return False
            kind = sig_lookup(a.name)
            for x, y in zip(a.args, b.args):
                if not isinstance(kind, KPi) or not self.conv_lf(gamma, psi, x, y,
                                                                  kind.dom):
                    return False
                kind = kind.cod
            return True
        if isinstance(a, LPi) and isinstance(b, LPi):
            return (self.conv_lf_type(gamma, psi, a.dom, b.dom)
                    and self.conv_lf_type(gamma, psi.extend(a.name, a.dom), a.cod, b.cod))
        return False

    def conv_kind(self, gamma, psi, k1, k2):
        if isinstance(k1, KType) and isinstance(k2, KType):
            return True
        if isinstance(k1, KPi) and isinstance(k2, KPi):
            return (self.conv_lf_type(gamma, psi, k1.dom, k2.dom)
                    and self.conv_kind(gamma, psi.extend(k1.name, k1.dom), k1.cod, k2.cod))
        return False


__all__ = ["ConvOptions", "Converter"]
