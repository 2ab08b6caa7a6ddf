"""Type-directed generators of well-typed terms.

Every random decision goes through a ``Chooser``.  Replaying a recorded
choice sequence regenerates the same term, and lowering choices yields
simpler terms, which is what the harness uses to shrink counterexamples.
Choice 0 is always the simplest option.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .compsubst import instantiate, shift
from .parser import parse_term
from .printer import _occurs
from .recursor import TELESCOPES
from .syntax import (
    TM,
    BoxObj,
    BoxType,
    Branch,
    Branches,
    CApp,
    CompCtx,
    CtxObj,
    CtxType,
    CVar,
    ErasedCtx,
    Fn,
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
    erase,
)
from .typecheck import make_checker

TM_TO_TM = LPi(TM, TM, "x")


class Chooser:
    """Source of bounded integer choices, random or replayed."""

    def __init__(self, rng=None, prefix=()):
        self.rng = rng
        self.prefix = list(prefix)
        self.record = []

    @classmethod
    def seeded(cls, seed):
        return cls(random.Random(seed))

    def below(self, n):
        if n <= 1:
            return 0
        i = len(self.record)
        if i < len(self.prefix):
            v = min(self.prefix[i], n - 1)
        elif self.rng is not None:
            v = self.rng.randrange(n)
        else:
            v = 0
        self.record.append(v)
        return v

    def pick(self, options):
        return options[self.below(len(options))]

    def chance(self, num, den):
        """True with probability num/den; False is the simple answer."""
        return self.below(den) >= den - num


# ---------------------------------------------------------------------------
# The ambient context


BASE_ENTRIES = (
    ("psi", "tm_ctx"),
    ("u", "[psi |- tm]"),
    ("w", "[psi |- tm -> tm]"),
    ("p", "[psi |-# tm]"),
    ("f", "[psi |- tm] -> [psi |- tm]"),
    ("c", "(g : tm_ctx) -> [g |- tm] -> [g |- tm]"),
    ("A", "U0"),
    ("a", "A"),
)

BASE_TYPES = (
    "[psi |- tm]",
    "[ |- tm]",
    "[psi, x:tm |- tm]",
    "[x:tm |- tm]",
    "[psi |- tm -> tm]",
    "[psi |-# tm]",
    "[psi, x:tm |-# tm]",
    "[psi |- tm] -> [psi |- tm]",
    "(g : tm_ctx) -> [g |- tm] -> [g |- tm]",
    "A",
    "A -> A",
    "U0",
    "[psi |- tm] -> U0",
)


def build_context(entries=BASE_ENTRIES):
    gamma = CompCtx(())
    for name, src in entries:
        dom = TmCtx() if src == "tm_ctx" else parse_term(src, gamma.names())
        gamma = gamma.extend(name, dom)
    return gamma


def base_context():
    return build_context()


def base_types(gamma=None):
    gamma = gamma or base_context()
    return [parse_term(src, gamma.names()) for src in BASE_TYPES]


def box(ctx, ty=TM, param=False):
    return BoxType(CtxType(ctx, ty, param))


COPY_MOTIVE = "(g : tm_ctx) -> [g |- tm] -> [g |- tm]"


@dataclass
class Sample:
    """A generated term with its type, context and the choices that built it."""

    gamma: object
    term: object
    type: object
    choices: tuple = ()


class Gen:
    """Generators for LF terms, LF substitutions and computations."""

    def __init__(self, chooser, checker=None):
        self.ch = chooser
        self.checker = checker or make_checker()

    # -- helpers ------------------------------------------------------------------

    @staticmethod
    def ctx_heads(gamma):
        return [CVar(i, name) for i, (name, dom) in enumerate(reversed(gamma.entries))
                if isinstance(dom, TmCtx)]

    def schema_ctx(self, gamma, head=False, max_decls=2):
        """An LF context of schema tm_ctx; ``head`` forces the same head choice."""
        heads = [None] + self.ctx_heads(gamma)
        h = head if head is not False else self.ch.pick(heads)
        n = self.ch.below(max_decls + 1)
        ctx = LfCtx(h)
        for k in range(n):
            ctx = ctx.extend("xyzuvw"[k % 6], TM)
        return ctx

    def _conv_type(self, gamma, a, b):
        try:
            return self.checker.conv_comp_type(gamma, a, b)
        except Exception:
            return False

    # -- LF -------------------------------------------------------------------------

    def lf(self, gamma, psi, a=TM, d=3):
        """An LF term of type ``a`` (tm or tm -> tm) in ``psi``."""
        ch = self.ch
        if isinstance(a, LPi):
            if d <= 0 or ch.below(3) < 2:
                return Lam(self.lf(gamma, psi.extend("x", TM), a.cod, d - 1), "x")
            return self._unbox(gamma, psi, a, d)
        leaves = [LVar(i, psi.decls[len(psi.decls) - 1 - i].name)
                  for i in range(len(psi.decls))]
        if d <= 0:
            if leaves:
                return ch.pick(leaves)
            return LApp(LConst("lam"), Lam(LVar(0, "x"), "x"))
        k = ch.below(7)
        if k == 0 and leaves:
            return ch.pick(leaves)
        if k <= 1:
            return LApp(LApp(LConst("app"), self.lf(gamma, psi, TM, d - 1)),
                        self.lf(gamma, psi, TM, d - 1))
        if k == 2:
            return LApp(LConst("lam"), self.lf(gamma, psi, TM_TO_TM, d - 1))
        if k == 3:
            body = self.lf(gamma, psi.extend("y", TM), TM, d - 1)
            return LApp(Lam(body, "y"), self.lf(gamma, psi, TM, d - 1))
        if k == 4:
            # the function position is inferred, so unbox a variable there
            fns = [(v, phi) for phi in {LfCtx(None), LfCtx(psi.head)}
                   for v in self._vars_of(gamma, box(phi, TM_TO_TM))]
            if fns:
                v, phi = ch.pick(sorted(fns, key=repr))
                fn = Unbox(v, self.subst(gamma, phi, psi, d - 1))
                return LApp(fn, self.lf(gamma, psi, TM, d - 1))
        return self._unbox(gamma, psi, TM, d)

    def _unbox(self, gamma, psi, a, d):
        """``{t}[sigma]`` with ``t : [phi |- a]`` and ``sigma : phi -> psi``."""
        phi = self.schema_ctx(gamma, head=self.ch.pick([None, psi.head]))
        t = self.comp(gamma, box(phi, a), d - 1)
        return Unbox(t, self.subst(gamma, phi, psi, d - 1))

    def subst(self, gamma, phi, psi, d=2):
        """An LF substitution from ``phi`` to ``psi``; requires compatible heads."""
        ch = self.ch
        k = len(phi.decls)
        prefix = (phi.head == psi.head and k <= len(psi.decls)
                  and phi.decls == psi.decls[:k])
        if prefix and (k == 0 or ch.below(3) == 0):
            return Wk(erase(phi), len(psi.decls) - k)
        if k == 0:
            if phi.head is None:
                if psi.head is None and ch.chance(1, 3):
                    return Wk(ErasedCtx(), len(psi.decls))
                return SEmpty()
            raise ValueError("substitution from a context variable needs the same head")
        rest = self.subst(gamma, phi.prefix(1), psi, d)
        return SCons(rest, self.lf(gamma, psi, phi.decls[-1].type, d))

    # -- computations -------------------------------------------------------------

    def comp(self, gamma, tau, d=3, eliminate=False):
        """A computation of type ``tau`` (in whnf) in ``gamma``.

        With ``eliminate`` the term is a redex whenever the depth allows.
        """
        ch = self.ch
        options = []
        if not (eliminate and d > 0):
            intro = self._intro(gamma, tau, d)
            options = [intro] if intro is not None else []
            options += self._variables(gamma, tau, d)
        if d > 0:
            options.append(lambda: self._redex(gamma, tau, d))
            if isinstance(tau, BoxType) and not tau.ctype.param and tau.ctype.type == TM:
                options.append(lambda: self._rec(gamma, tau, d))
        if not options:
            raise ValueError(f"no generator for an inhabitant of {tau!r}")
        return ch.pick(options)()

    def _intro(self, gamma, tau, d):
        if isinstance(tau, BoxType):
            ct = tau.ctype
            ectx = erase(ct.ctx)
            if ct.param:
                if not ct.ctx.decls:
                    return None
                n = len(ct.ctx.decls)
                return lambda: BoxObj(CtxObj(ectx, LVar(self.ch.below(n))))
            return lambda: BoxObj(CtxObj(ectx, self.lf(gamma, ct.ctx, ct.type, d - 1)))
        if isinstance(tau, Pi):
            return lambda: Fn(self.comp(gamma.extend(tau.name, tau.dom), tau.cod, d - 1),
                              tau.name)
        if isinstance(tau, Univ):
            return lambda: self._type(gamma, tau.level, d)
        return None

    def _type(self, gamma, level, d):
        ch = self.ch
        if level == 1:
            opts = [Univ(0), Pi(Univ(0), Univ(0), "_")]
            opts.append(box(self.schema_ctx(gamma)))
            return ch.pick(opts)
        opts = [lambda: box(self.schema_ctx(gamma))]
        opts += [lambda v=v: v for v in self._vars_of(gamma, Univ(level))]
        if d > 0:
            def arrow():
                dom = box(self.schema_ctx(gamma))
                return Pi(dom, shift(self._type(gamma, level, d - 1), 1), "_")
            opts.append(arrow)
        return ch.pick(opts)()

    def _vars_of(self, gamma, tau):
        out = []
        for i, (name, dom) in enumerate(reversed(gamma.entries)):
            if isinstance(dom, TmCtx):
                continue
            if self._conv_type(gamma, gamma.lookup(i), tau):
                out.append(CVar(i, name))
        return out

    def _variables(self, gamma, tau, d):
        opts = [lambda v=v: v for v in self._vars_of(gamma, tau)]
        if isinstance(tau, BoxType):
            ct = tau.ctype
            if ct.param and ct.ctx.decls:
                # a parameter from a shorter context, weakened
                for v in self._vars_of(gamma, box(ct.ctx.prefix(len(ct.ctx.decls)),
                                                  TM, True)):
                    opts.append(lambda v=v: BoxObj(CtxObj(
                        erase(ct.ctx), Unbox(v, Wk(ErasedCtx(ct.ctx.head),
                                                   len(ct.ctx.decls))))))
        if d > 0:
            for i, (name, dom) in enumerate(reversed(gamma.entries)):
                if isinstance(dom, TmCtx):
                    continue
                plan = self._spine(gamma, gamma.lookup(i), tau)
                if plan is not None:
                    opts.append(lambda h=CVar(i, name), s=plan: self._fill(gamma, h, s, d))
        return opts

    def _spine(self, gamma, fty, tau, depth=0):
        """Plan the arguments of an application spine that ends at ``tau``."""
        if not isinstance(fty, Pi) or depth > 2:
            return None
        if isinstance(fty.dom, TmCtx):
            if not isinstance(tau, BoxType) or not _schema(tau.ctype.ctx):
                return None
            ctx = tau.ctype.ctx
            cod, arg = instantiate(fty.cod, [ctx]), ("ctx", ctx)
        else:
            if _occurs(fty.cod, 0):
                return None
            cod, arg = instantiate(fty.cod, [Univ(0)]), ("comp", fty.dom)
        if self._conv_type(gamma, cod, tau):
            return [arg]
        rest = self._spine(gamma, cod, tau, depth + 1)
        return None if rest is None else [arg] + rest

    def _fill(self, gamma, head, plan, d):
        t = head
        for kind, x in plan:
            t = CApp(t, x if kind == "ctx" else self.comp(gamma, x, d - 1))
        return t

    def _redex(self, gamma, tau, d):
        """``(fn y => body) s`` with ``body : tau`` under ``y``."""
        ch = self.ch
        k = ch.below(3)
        if k == 0:
            dom = box(self.schema_ctx(gamma))
            arg = self.comp(gamma, dom, d - 1)
        elif k == 1:
            dom = TmCtx()
            arg = self.schema_ctx(gamma)
        else:
            doms = [v for v in self._vars_of(gamma, Univ(0)) if self._vars_of(gamma, v)]
            if not doms:
                dom = box(self.schema_ctx(gamma))
            else:
                dom = ch.pick(doms)
            arg = self.comp(gamma, dom, d - 1)
        g2 = gamma.extend("y", dom)
        body = self.comp(g2, shift(tau, 1), d - 1)
        return CApp(Fn(body, "y"), arg)

    def _rec(self, gamma, tau, d):
        ch = self.ch
        target = tau.ctype.ctx
        if ch.chance(1, 2) and _schema(target):
            motive = parse_term(COPY_MOTIVE)
            ctx = target
        else:
            motive = Pi(TmCtx(), Pi(box(LfCtx(CVar(0, "g"))), shift(tau, 2), "t"), "g")
            ctx = self.schema_ctx(gamma)
        scrut = self.comp(gamma, box(ctx), d - 1)
        branches = []
        for kind, names in (("var", ("g", "p")), ("app", ("g", "m", "n", "f_m", "f_n")),
                            ("lam", ("g", "m", "f_m"))):
            entries, result = TELESCOPES[kind](motive, Branch(None, names))
            g2 = gamma
            for name, dom in entries:
                g2 = g2.extend(name, dom)
            branches.append(Branch(self.comp(g2, result, d - 1), names))
        return Rec(motive, Branches(*branches), ctx, scrut)


def _schema(ctx):
    return all(dec.type == TM for dec in ctx.decls)
