"""Bidirectional checking for both layers.

``infer_*`` synthesizes a type, ``check_*`` checks against a given one and
falls back to inference plus conversion.  Universe membership of a type is
computed as a set of admissible levels: a box type or a tm_ctx domain can
live in any universe, ``U_i`` only in ``U_(i+1)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .compsubst import instantiate, shift
from .conversion import Converter
from .errors import CheckError, NotFound
from .lfsubst import inst_type, lf_subst_type, shift_type
from .recursor import TELESCOPES, motive_at, motive_body
from .reduction import WhnfClass, classify_comp
from .syntax import (
    APP_ARITY,
    LAM_ARITY,
    TM,
    VAR_ARITY,
    Atom,
    BoxObj,
    BoxType,
    CApp,
    CompCtx,
    CtxType,
    CVar,
    Decl,
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
    ctx_lookup,
    erase,
    sig_lookup,
)

MAX_LEVEL = 2**31 - 1


@dataclass(frozen=True)
class Levels:
    """Universe levels a type may inhabit: exactly ``lo`` or anything >= ``lo``."""

    lo: int
    exact: bool

    def __contains__(self, k):
        return k == self.lo if self.exact else k >= self.lo

    def join(self, other):
        return Levels(max(self.lo, other.lo), self.exact and other.exact)


ANY_LEVEL = Levels(0, False)


def _err(code, message, judgment, expected=None, actual=None):
    return CheckError(message, code=code, judgment=judgment,
                      expected=None if expected is None else str(expected),
                      actual=None if actual is None else str(actual))


class Checker(Converter):

    # -- contexts ------------------------------------------------------------------

    def check_comp_ctx(self, gamma):
        prefix = CompCtx()
        for name, dom in gamma.entries:
            if not isinstance(dom, TmCtx):
                self.sort(prefix, dom)
            prefix = prefix.extend(name, dom)
        return True

    def _check_head(self, gamma, head):
        if head is None:
            return
        try:
            dom = gamma.lookup(head.index)
        except NotFound:
            raise _err("UnknownCtxVar", f"unbound context variable {head.name}",
                       "ctx") from None
        if not isinstance(dom, TmCtx):
            raise _err("UnknownCtxVar", f"{head.name} is not a context variable",
                       "ctx", "tm_ctx", dom)

    def check_lf_ctx(self, gamma, psi):
        self._check_head(gamma, psi.head)
        for j, d in enumerate(psi.decls):
            k = self.kind_lf_type(gamma, LfCtx(psi.head, psi.decls[:j]), d.type)
            if not isinstance(k, KType):
                raise _err("IllKinded", f"declaration {d.name} is not a type", "ctx",
                           "type", k)
        return True

    def schema_check(self, gamma, psi):
        if not isinstance(psi, LfCtx):
            raise _err("SchemaViolation", "expected an LF context", "tm_ctx",
                       "tm_ctx", psi)
        self.check_lf_ctx(gamma, psi)
        for j, d in enumerate(psi.decls):
            prefix = LfCtx(psi.head, psi.decls[:j])
            if not self.conv_lf_type(gamma, prefix, d.type, TM):
                raise _err("SchemaViolation",
                           f"declaration {d.name} does not belong to tm_ctx",
                           "tm_ctx", TM, d.type)
        return True

    # -- LF kinds and types ---------------------------------------------------------------

    def check_lf_kind(self, gamma, psi, k):
        if isinstance(k, KType):
            return True
        if isinstance(k, KPi):
            self._expect_type(gamma, psi, k.dom)
            return self.check_lf_kind(gamma, psi.extend(k.name, k.dom), k.cod)
        raise _err("IllKinded", "not a kind", "lf-kind", actual=k)

    def _expect_type(self, gamma, psi, a):
        k = self.kind_lf_type(gamma, psi, a)
        if not isinstance(k, KType):
            raise _err("IllKinded", "expected an LF type", "lf-kind", "type", k)

    def kind_lf_type(self, gamma, psi, a):
        if isinstance(a, Atom):
            try:
                k = sig_lookup(a.name)
            except NotFound as e:
                raise _err("IllKinded", e.message, "lf-kind") from None
            if not isinstance(k, (KType, KPi)):
                raise _err("IllKinded", f"{a.name} is a term constant, not a type family",
                           "lf-kind")
            for x in a.args:
                if not isinstance(k, KPi):
                    raise _err("IllKinded", f"{a.name} is applied to too many arguments",
                               "lf-kind", "type", a)
                self.check_lf(gamma, psi, x, k.dom)
                k = k.cod
            return k
        if isinstance(a, LPi):
            self._expect_type(gamma, psi, a.dom)
            self._expect_type(gamma, psi.extend(a.name, a.dom), a.cod)
            return KType()
        raise _err("IllKinded", "not an LF type", "lf-kind", actual=a)

    # -- LF terms ----------------------------------------------------------------------------

    def infer_lf(self, gamma, psi, m):
        if isinstance(m, LVar):
            try:
                return shift_type(ctx_lookup(psi, m.index), m.index + 1)
            except NotFound as e:
                raise _err("UnboundLfVar", e.message, "lf-term") from None
        if isinstance(m, LConst):
            try:
                ty = sig_lookup(m.name)
            except NotFound as e:
                raise _err("UnknownConstant", e.message, "lf-term") from None
            if isinstance(ty, (KType, KPi)):
                raise _err("IllKinded", f"{m.name} is a type family, not a term",
                           "lf-term")
            return ty
        if isinstance(m, LApp):
            try:
                fty = self.infer_lf(gamma, psi, m.fn)
            except CheckError as e:
                if e.code != "CannotInfer":
                    raise
                fty = self._infer_fn(gamma, psi, m.fn, self.infer_lf(gamma, psi, m.arg))
            if not isinstance(fty, LPi):
                raise _err("NotAFunction", "LF application of a non-function",
                           "lf-term", "a Pi type", fty)
            self.check_lf(gamma, psi, m.arg, fty.dom)
            return inst_type(fty.cod, m.arg)
        if isinstance(m, Unbox):
            if isinstance(m.comp, BoxObj):
                phi = self.infer_subst_domain(gamma, psi, m.subst, m.comp.obj.ectx)
                if erase(phi) != m.comp.obj.ectx:
                    raise _err("CtxMismatch", "box context does not match the "
                               "substitution domain", "lf-term", erase(phi),
                               m.comp.obj.ectx)
                a = self.infer_lf(gamma, phi, m.comp.obj.term)
                ct = CtxType(phi, a)
            else:
                ty = self.whnf(self.infer_comp(gamma, m.comp))
                if not isinstance(ty, BoxType):
                    raise _err("UnboxNotBox", "only boxed computations can be unboxed",
                               "lf-term", "a box type", ty)
                ct = ty.ctype
            self.check_lf_subst(gamma, psi, m.subst, ct.ctx)
            return lf_subst_type(m.subst, erase(ct.ctx), ct.type)
        if isinstance(m, Lam):
            raise _err("CannotInfer", "cannot infer the type of an LF abstraction",
                       "lf-term")
        raise _err("IllKinded", "not an LF term", "lf-term", actual=m)

    def _infer_fn(self, gamma, psi, m, a):
        """Type of a head that is not inferable, given the type of its argument."""
        if isinstance(m, Lam):
            return LPi(a, self.infer_lf(gamma, psi.extend(m.name, a), m.body), m.name)
        if isinstance(m, Unbox) and shift_type(a, 1) == a:
            ct = self._infer_box_fn(gamma, m.comp, a)
            self.check_lf_subst(gamma, psi, m.subst, ct.ctx)
            return lf_subst_type(m.subst, erase(ct.ctx), ct.type)
        raise _err("CannotInfer", "cannot infer the type of the head of an LF application",
                   "lf-term", actual=m)

    def _infer_box_fn(self, gamma, t, a):
        """Contextual type of a computation unboxed in function position."""
        if isinstance(t, BoxObj):
            e = t.obj.ectx
            phi = LfCtx(e.head, tuple(Decl(TM, n) for n in e.names))
            self.check_lf_ctx(gamma, phi)
            return CtxType(phi, self._infer_fn(gamma, phi, t.obj.term, a))
        if isinstance(t, CApp) and isinstance(t.fn, Fn):
            dom = self._arg_domain(gamma, t.arg)
            ct = self._infer_box_fn(gamma.extend(t.fn.name, dom), t.fn.body, a)
            return instantiate(BoxType(ct), [t.arg]).ctype
        ty = self.whnf(self.infer_comp(gamma, t))
        if not isinstance(ty, BoxType):
            raise _err("UnboxNotBox", "only boxed computations can be unboxed", "lf-term",
                       "a box type", ty)
        return ty.ctype

    def infer_subst_domain(self, gamma, psi, sigma, ectx):
        """Recover the domain of ``sigma`` (with ``ectx``'s names) from its entries."""
        if isinstance(sigma, SEmpty):
            return LfCtx()
        if isinstance(sigma, Wk):
            n = sigma.shift
            if sigma.dom.head != psi.head or len(psi) - len(sigma.dom) != n:
                raise _err("NotAPrefix", f"{sigma.dom} is not a prefix of the context",
                           "lf-subst", sigma.dom, erase(psi))
            return psi.prefix(n)
        if isinstance(sigma, SCons):
            names = ectx.names if ectx is not None else ()
            name = names[-1] if names else "x"
            inner = ectx.prefix(1) if names else None
            rest = self.infer_subst_domain(gamma, psi, sigma.rest, inner)
            return rest.extend(name, self.infer_lf(gamma, psi, sigma.term))
        raise _err("IllKinded", "not an LF substitution", "lf-subst", actual=sigma)

    def check_lf(self, gamma, psi, m, a):
        if isinstance(m, Lam):
            if not isinstance(a, LPi):
                raise _err("NotAFunction", "LF abstraction checked against a non-Pi type",
                           "lf-term", a, "a Pi type")
            return self.check_lf(gamma, psi.extend(m.name, a.dom), m.body, a.cod)
        try:
            b = self.infer_lf(gamma, psi, m)
        except CheckError as e:
            if not (e.code == "CannotInfer" and isinstance(m, Unbox)
                    and shift_type(a, 1) == a):
                raise
            # a closed expected type is its own preimage under any substitution
            phi = self.infer_subst_domain(gamma, psi, m.subst, None)
            self.check_comp(gamma, m.comp, BoxType(CtxType(phi, a)))
            self.check_lf_subst(gamma, psi, m.subst, phi)
            return True
        if not self.conv_lf_type(gamma, psi, b, a):
            raise _err("TypeMismatch", "LF type mismatch", "lf-term", a, b)
        return True

    def check_lf_param(self, gamma, psi, m, a):
        self.check_lf(gamma, psi, m, a)
        w = self.whnf_lf(m)
        if isinstance(w, LVar):
            return True
        if isinstance(w, Unbox) and classify_comp(w.comp) is WhnfClass.WNE:
            ty = self.whnf(self.infer_comp(gamma, w.comp))
            if isinstance(ty, BoxType) and ty.ctype.param:
                self.check_lf_subst_param(gamma, psi, w.subst, ty.ctype.ctx)
                return True
        raise _err("NotAParameter", "expected an LF variable", "lf-param", a, m)

    def check_lf_subst_param(self, gamma, psi, sigma, phi):
        n = len(psi) - len(phi)
        if phi.head != psi.head or n < 0 or not self.conv_ctx(
                gamma, phi, psi.prefix(n)):
            raise _err("NotAParameter", "substitution is not a weakening",
                       "lf-param", erase(phi), erase(psi))
        if not self.conv_subst(gamma, psi, sigma, Wk(erase(phi), n), phi):
            raise _err("NotAParameter", "substitution is not a weakening",
                       "lf-param", Wk(erase(phi), n), sigma)
        return True

    def check_lf_subst(self, gamma, psi, sigma, phi):
        if isinstance(sigma, SEmpty):
            if phi.head is not None or phi.decls:
                raise _err("EntryTypeMismatch", "empty substitution for a nonempty context",
                           "lf-subst", erase(phi), "·")
            return True
        if isinstance(sigma, Wk):
            n = len(psi) - len(phi)
            if (phi.head != psi.head or n < 0 or n != sigma.shift
                    or sigma.dom != erase(phi)
                    or not self.conv_ctx(gamma, phi, psi.prefix(n))):
                raise _err("NotAPrefix", "weakening domain is not a prefix of the range",
                           "lf-subst", erase(phi), sigma.dom)
            return True
        if isinstance(sigma, SCons):
            if not phi.decls:
                raise _err("EntryTypeMismatch", "too many entries in substitution",
                           "lf-subst", erase(phi), sigma)
            rest_phi = phi.prefix(1)
            self.check_lf_subst(gamma, psi, sigma.rest, rest_phi)
            a = lf_subst_type(sigma.rest, erase(rest_phi), phi.decls[-1].type)
            self.check_lf(gamma, psi, sigma.term, a)
            return True
        raise _err("IllKinded", "not an LF substitution", "lf-subst", actual=sigma)

    # -- contextual objects -------------------------------------------------------------------

    def check_ctx_type(self, gamma, t):
        self.check_lf_ctx(gamma, t.ctx)
        self._expect_type(gamma, t.ctx, t.type)
        return True

    def check_ctx_obj(self, gamma, c, t):
        if c.ectx != erase(t.ctx):
            raise _err("CtxMismatch", "box context does not match its type", "ctx-obj",
                       erase(t.ctx), c.ectx)
        if t.param:
            return self.check_lf_param(gamma, t.ctx, c.term, t.type)
        return self.check_lf(gamma, t.ctx, c.term, t.type)

    # -- computations ---------------------------------------------------------------------------

    def sort(self, gamma, tau):
        """Levels of the universes that contain the type ``tau``."""
        if isinstance(tau, Univ):
            if tau.level < 0 or tau.level >= MAX_LEVEL:
                raise _err("UniverseError", f"universe level {tau.level} out of range",
                           "comp-type")
            return Levels(tau.level + 1, True)
        if isinstance(tau, BoxType):
            self.check_ctx_type(gamma, tau.ctype)
            return ANY_LEVEL
        if isinstance(tau, Pi):
            dom = ANY_LEVEL if isinstance(tau.dom, TmCtx) else self.sort(gamma, tau.dom)
            cod = self.sort(gamma.extend(tau.name, tau.dom), tau.cod)
            return dom.join(cod)
        ty = self.whnf(self.infer_comp(gamma, tau))
        if not isinstance(ty, Univ):
            raise _err("NotAType", "expected a type", "comp-type", "a universe", ty)
        return Levels(ty.level, True)

    def check_type(self, gamma, tau, level=None):
        levels = self.sort(gamma, tau)
        if level is not None and level not in levels:
            raise _err("UniverseError", f"type does not live in U{level}", "comp-type",
                       Univ(level), Univ(levels.lo) if levels.exact else f">= U{levels.lo}")
        return levels

    def check_domain(self, gamma, dom):
        if not isinstance(dom, TmCtx):
            self.check_type(gamma, dom)

    def infer_comp(self, gamma, t):
        if isinstance(t, CVar):
            try:
                ty = gamma.lookup(t.index)
            except NotFound:
                raise _err("UnboundCompVar", f"unbound variable {t.name}", "comp") \
                    from None
            if isinstance(ty, TmCtx):
                raise _err("NotATerm", f"{t.name} is a context, not a term", "comp")
            return ty
        if isinstance(t, (Univ, Pi, BoxType)):
            return Univ(self.sort(gamma, t).lo)
        if isinstance(t, CApp):
            return self._infer_app(gamma, t)
        if isinstance(t, BoxObj):
            e = t.obj.ectx
            psi = LfCtx(e.head, tuple(Decl(TM, n) for n in e.names))
            self.check_lf_ctx(gamma, psi)
            return BoxType(CtxType(psi, self.infer_lf(gamma, psi, t.obj.term)))
        if isinstance(t, Rec):
            return self.check_recursor(gamma, t)
        if isinstance(t, Global):
            return t.type
        if isinstance(t, Fn):
            raise _err("CannotInfer", "cannot infer the type of a function; "
                       "add a type annotation via a definition", "comp")
        raise _err("NotATerm", "not a computation", "comp", actual=t)

    def _check_arg(self, gamma, dom, arg):
        if isinstance(dom, TmCtx):
            if not isinstance(arg, LfCtx):
                raise _err("DomainMismatch", "expected an LF context argument", "comp",
                           "tm_ctx", arg)
            self.schema_check(gamma, arg)
        else:
            if isinstance(arg, LfCtx):
                raise _err("DomainMismatch", "unexpected LF context argument", "comp",
                           dom, arg)
            self.check_comp(gamma, arg, dom)

    def _arg_domain(self, gamma, arg):
        if isinstance(arg, LfCtx):
            self.schema_check(gamma, arg)
            return TmCtx()
        return self.infer_comp(gamma, arg)

    def _infer_app(self, gamma, t):
        if isinstance(t.fn, Fn):
            dom = self._arg_domain(gamma, t.arg)
            cod = self.infer_comp(gamma.extend(t.fn.name, dom), t.fn.body)
            return instantiate(cod, [t.arg])
        fty = self.whnf(self.infer_comp(gamma, t.fn))
        if not isinstance(fty, Pi):
            raise _err("NotAFunction", "application of a non-function", "comp",
                       "a function type", fty)
        self._check_arg(gamma, fty.dom, t.arg)
        return instantiate(fty.cod, [t.arg])

    def check_comp(self, gamma, t, tau):
        if isinstance(t, Fn):
            ty = self.whnf(tau)
            if not isinstance(ty, Pi):
                raise _err("NotAFunction", "function checked against a non-function type",
                           "comp", tau, "a function type")
            return self.check_comp(gamma.extend(t.name, ty.dom), t.body, ty.cod)
        if isinstance(t, BoxObj):
            ty = self.whnf(tau)
            if not isinstance(ty, BoxType):
                raise _err("TypeMismatch", "box checked against a non-box type", "comp",
                           tau, "a box type")
            return self.check_ctx_obj(gamma, t.obj, ty.ctype)
        if isinstance(t, (Univ, Pi, BoxType)):
            ty = self.whnf(tau)
            if not isinstance(ty, Univ):
                raise _err("TypeMismatch", "a type checked against a non-universe",
                           "comp", tau, "a universe")
            self.check_type(gamma, t, ty.level)
            return True
        if isinstance(t, CApp) and isinstance(t.fn, Fn):
            dom = self._arg_domain(gamma, t.arg)
            g2 = gamma.extend(t.fn.name, dom)
            try:
                cod = self.infer_comp(g2, t.fn.body)
            except CheckError as e:
                if e.code != "CannotInfer":
                    raise
                return self.check_comp(g2, t.fn.body, shift(tau, 1))
            ty = instantiate(cod, [t.arg])
            if not self.conv_comp_type(gamma, ty, tau):
                # the body may only check at tau, e.g. a box at a parameter type
                return self.check_comp(g2, t.fn.body, shift(tau, 1))
            return True
        else:
            ty = self.infer_comp(gamma, t)
        if not self.conv_comp_type(gamma, ty, tau):
            raise _err("TypeMismatch", "type mismatch", "comp", tau, ty)
        return True

    # -- recursor ---------------------------------------------------------------------------------

    def check_recursor(self, gamma, rec):
        motive_body(rec.motive)
        self.check_type(gamma, rec.motive)
        self.schema_check(gamma, rec.ctx)
        self.check_comp(gamma, rec.scrut, BoxType(CtxType(rec.ctx, TM)))
        for kind, arity in (("var", VAR_ARITY), ("app", APP_ARITY), ("lam", LAM_ARITY)):
            branch = getattr(rec.branches, kind)
            if branch.names and len(branch.names) != arity:
                raise _err("BadInvariantShape",
                           f"{kind} branch binds {len(branch.names)} variables, "
                           f"expected {arity}", "rec")
            entries, result = TELESCOPES[kind](rec.motive, branch)
            g2 = gamma
            for name, dom in entries:
                g2 = g2.extend(name, dom)
            try:
                self.check_comp(g2, branch.body, result)
            except CheckError as e:
                e.message = f"in {kind} branch: {e.message}"
                raise
        return motive_at(rec.motive, rec.ctx, rec.scrut)

    def typeof_neutral(self, gamma, t):
        if isinstance(t, CVar):
            return gamma.lookup(t.index)
        if isinstance(t, CApp) and classify_comp(t.fn) is WhnfClass.WNE:
            fty = self.whnf(self.typeof_neutral(gamma, t.fn))
            if not isinstance(fty, Pi):
                raise _err("NotAFunction", "neutral application of a non-function",
                           "typeof", "a function type", fty)
            return instantiate(fty.cod, [t.arg])
        if isinstance(t, Rec) and classify_comp(t) is WhnfClass.WNE:
            return motive_at(t.motive, t.ctx, t.scrut)
        raise _err("NotNeutral", "not a neutral computation", "typeof", actual=t)


def make_checker(fuel=None, trace=None, options=None):
    from .reduction import DEFAULT_FUEL

    return Checker(fuel if fuel is not None else DEFAULT_FUEL, trace, options)


__all__ = ["Checker", "Levels", "MAX_LEVEL", "make_checker"]
