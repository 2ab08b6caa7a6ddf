"""Property suites over generated terms.

Each suite draws samples from a seeded ``Chooser``, checks a property and
records failures.  A failing sample is shrunk by replaying smaller choice
sequences while the property keeps failing.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .compsubst import csubst, shift
from .conversion import ConvOptions
from .errors import KernelError
from .gen import Chooser, Gen, TM_TO_TM, base_context, base_types, box
from .lfsubst import lf_subst_term, single_subst
from .printer import show
from .reduction import Reducer, WhnfClass, classify_comp, classify_lf, classify_subst
from .syntax import (
    TM,
    BoxObj,
    BoxType,
    CApp,
    CtxObj,
    CtxType,
    CVar,
    Fn,
    Lam,
    LApp,
    LConst,
    LfCtx,
    LVar,
    Pi,
    TmCtx,
    Unbox,
    Wk,
    erase,
)
from .typecheck import make_checker

MAX_DEPTH = 6


@dataclass
class Failure:
    index: int
    message: str
    witness: str
    choices: tuple = ()


@dataclass
class SuiteResult:
    name: str
    total: int = 0
    passed: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self):
        return not self.failures

    def to_json(self):
        return {"suite": self.name, "total": self.total, "passed": self.passed,
                "skipped": self.skipped, "seconds": round(self.seconds, 3),
                "failures": [{"index": f.index, "message": f.message,
                              "witness": f.witness} for f in self.failures]}


class Skip(Exception):
    """The generated sample does not apply to this property."""


def _chooser(seed, name, i):
    return Chooser(random.Random(f"{seed}:{name}:{i}"))


def _outcome(prop, sample):
    try:
        msg = prop(sample)
    except Skip:
        return "skip"
    except (KernelError, RecursionError) as e:
        return f"{type(e).__name__}: {e}"
    return msg


def shrink(make, prop, choices, budget=200):
    """Lower the choice sequence while the property still fails."""
    best = list(choices)
    improved = True
    while improved and budget > 0:
        improved = False
        candidates = [best[:k] for k in range(len(best))]
        for j, v in enumerate(best):
            if v:
                candidates.append(best[:j] + [0] + best[j + 1:])
                if v > 1:
                    candidates.append(best[:j] + [v // 2] + best[j + 1:])
        for cand in candidates:
            budget -= 1
            if budget <= 0:
                break
            ch = Chooser(prefix=cand)
            sample = make(Gen(ch))
            out = _outcome(prop, sample)
            # accept only strictly simpler sequences, so shrinking terminates
            simpler = (len(ch.record), ch.record) < (len(best), best)
            if out not in (None, "skip") and simpler:
                best = ch.record
                improved = True
                break
    return best


def run_property(name, seed, count, make, prop, describe=None, do_shrink=True):
    """Run ``prop`` over ``count`` samples; ``prop`` returns None on success."""
    res = SuiteResult(name)
    t0 = time.perf_counter()
    describe = describe or (lambda s: show(s[1], s[0]) if isinstance(s, tuple) else show(s))
    for i in range(count):
        ch = _chooser(seed, name, i)
        sample = make(Gen(ch))
        res.total += 1
        out = _outcome(prop, sample)
        if out is None:
            res.passed += 1
        elif out == "skip":
            res.skipped += 1
        else:
            choices = tuple(ch.record)
            if do_shrink:
                choices = tuple(shrink(make, prop, choices))
                small = make(Gen(Chooser(prefix=choices)))
                out = _outcome(prop, small) or out
                sample = small
            res.failures.append(Failure(i, out, describe(sample), choices))
    res.seconds = time.perf_counter() - t0
    return res


# ---------------------------------------------------------------------------
# Samples


GAMMA = base_context()
TYPES = base_types(GAMMA)


def lf_sample(g, depth=4):
    psi = g.schema_ctx(GAMMA)
    return ("lf", GAMMA, psi, g.lf(GAMMA, psi, TM, g.ch.below(depth) + 1))


def subst_sample(g, depth=3):
    psi = g.schema_ctx(GAMMA)
    phi = g.schema_ctx(GAMMA, head=g.ch.pick([None, psi.head]))
    return ("subst", GAMMA, psi, phi, g.subst(GAMMA, phi, psi, g.ch.below(depth) + 1))


def comp_sample(g, depth=MAX_DEPTH):
    tau = g.ch.pick(TYPES)
    d = g.ch.below(depth) + 1
    return ("comp", GAMMA, tau, g.comp(GAMMA, tau, d, eliminate=g.ch.chance(1, 2)))


def _describe(s):
    kind = s[0]
    if kind == "lf":
        _, gamma, psi, m = s
        return f"{show(psi, gamma)} |- {show(m, gamma.names(), psi.names(), psi.head)}"
    if kind == "subst":
        _, gamma, psi, phi, sigma = s
        return (f"{show(psi, gamma)} |- "
                f"{show(sigma, gamma.names(), psi.names(), psi.head)} : {show(phi, gamma)}")
    if kind == "comp":
        _, gamma, tau, t = s
        return f"{show(t, gamma)} : {show(tau, gamma)}"
    return repr(s)


# ---------------------------------------------------------------------------
# Suites


def determinacy(seed=0, count=1000):
    """Two independent whnf runs give alpha-equal results, per class."""
    out = []
    for name, make in (("determinacy-lf", lf_sample), ("determinacy-subst", subst_sample),
                       ("determinacy-comp", comp_sample)):
        def prop(s, name=name, make=make):
            results = []
            for _ in range(2):
                r = Reducer()
                if s[0] == "lf":
                    w = r.whnf_lf(s[3])
                    if not classify_lf(w).is_whnf:
                        return "result is not in whnf"
                elif s[0] == "subst":
                    w = r.whnf_subst(s[4])
                    if not classify_subst(w).is_whnf:
                        return "result is not in whnf"
                else:
                    w = r.whnf_comp(s[3])
                    if not classify_comp(w).is_whnf:
                        return "result is not in whnf"
                results.append(w)
            if results[0] != results[1]:
                return "whnf differs between runs"
            return None
        out.append(run_property(name, seed, count, make, prop, _describe))
    return out


def subject_reduction(seed=0, count=1000, depth=MAX_DEPTH):
    """Generated computations reach a whnf of the same type, convertible to the source."""

    def prop(s):
        _, gamma, tau, t = s
        ch = make_checker()
        ch.check_comp(gamma, t, tau)
        w = make_checker().whnf(t)
        if not classify_comp(w).is_whnf:
            return "reduct is not in whnf"
        ch2 = make_checker()
        ch2.check_comp(gamma, w, tau)
        if not make_checker().conv_comp(gamma, w, t, tau):
            return f"whnf {show(w, gamma)} is not convertible to the source"
        # the same holds for the full normal form
        nf = make_checker().reducer.normalize(t)
        make_checker().check_comp(gamma, nf, tau)
        if not make_checker().conv_comp(gamma, nf, t, tau):
            return f"normal form {show(nf, gamma)} is not convertible to the source"
        return None

    return run_property("subject-reduction", seed, count,
                        lambda g: comp_sample(g, depth), prop, _describe)


def uniqueness(seed=0, count=1000):
    """Inferred types agree with each other and with the type generated at."""

    def prop(s):
        _, gamma, tau, t = s
        try:
            t1 = make_checker().infer_comp(gamma, t)
        except KernelError as e:
            if e.code == "CannotInfer":
                raise Skip from None
            raise
        t2 = make_checker().infer_comp(gamma, t)
        ch = make_checker()
        if not ch.conv_comp_type(gamma, t1, t2):
            return "two inferences disagree"
        if not ch.conv_comp_type(gamma, t1, tau) and not _sub_param(gamma, t1, tau):
            return f"inferred {show(t1, gamma)}"
        w = ch.whnf(t)
        if classify_comp(w) is WhnfClass.WNE:
            t3 = ch.typeof_neutral(gamma, w)
            if not ch.conv_comp_type(gamma, t3, tau):
                return f"typeof of the whnf gives {show(t3, gamma)}"
        return None

    return run_property("type-uniqueness", seed, count, comp_sample, prop, _describe)


def _sub_param(gamma, inferred, tau):
    # a box object infers a term type even when it was generated at a parameter type
    if isinstance(inferred, BoxType) and isinstance(tau, BoxType) and tau.ctype.param:
        t = tau.ctype
        return make_checker().conv_comp_type(gamma, inferred,
                                             BoxType(CtxType(t.ctx, t.type)))
    return False


def substitution_lemmas(seed=0, count=500):
    """Substitution preserves typing, in both layers."""

    def lf_make(g):
        psi = g.schema_ctx(GAMMA)
        phi = g.schema_ctx(GAMMA, head=g.ch.pick([None, psi.head]))
        m = g.lf(GAMMA, phi, TM, g.ch.below(3) + 1)
        sigma = g.subst(GAMMA, phi, psi, 2)
        n = g.lf(GAMMA, psi, TM, 2)
        body = g.lf(GAMMA, psi.extend("x", TM), TM, 2)
        return ("lfpair", GAMMA, psi, phi, m, sigma, n, body)

    def lf_prop(s):
        _, gamma, psi, phi, m, sigma, n, body = s
        ch = make_checker()
        ch.check_lf(gamma, phi, m, TM)
        ch.check_lf_subst(gamma, psi, sigma, phi)
        image = lf_subst_term(sigma, erase(phi), m)
        ch.check_lf(gamma, psi, image, TM)
        # substitution respects conversion
        nf = ch.reducer.normalize_lf(m)
        if not ch.conv_lf(gamma, psi, image, lf_subst_term(sigma, erase(phi), nf), TM):
            return "[sigma]M and [sigma]nf(M) are not convertible"
        ch.check_lf(gamma, psi.extend("x", TM), body, TM)
        ch.check_lf(gamma, psi, single_subst(n, body), TM)
        if not ch.conv_lf(gamma, psi, single_subst(n, body), LApp(Lam(body, "x"), n), TM):
            return "[N/x]M differs from the beta redex"
        return None

    def lf_describe(s):
        _, gamma, psi, phi, m, sigma, n, body = s
        return (f"{show(phi, gamma)} |- {show(m, gamma.names(), phi.names(), phi.head)}"
                f" with sigma = {show(sigma, gamma.names(), psi.names(), psi.head)}")

    def comp_make(g):
        ch = g.ch
        if ch.chance(1, 3):
            ctx = g.schema_ctx(GAMMA)
            g2 = GAMMA.extend("g", TmCtx())
            tau = box(LfCtx(CVar(0, "g")))
            t = g.comp(g2, tau, ch.below(4) + 1)
            return ("ctxpair", GAMMA, ctx, t, tau)
        dom = ch.pick([ty for ty in TYPES if _first_order(ty)])
        s = g.comp(GAMMA, dom, ch.below(3) + 1)
        g2 = GAMMA.extend("y", dom)
        tau = ch.pick([shift(ty, 1) for ty in TYPES])
        t = g.comp(g2, tau, ch.below(4) + 1)
        return ("comppair", GAMMA, dom, s, t, tau)

    def comp_prop(smp):
        ch = make_checker()
        if smp[0] == "ctxpair":
            _, gamma, ctx, t, tau = smp
            ch.check_comp(gamma.extend("g", TmCtx()), t, tau)
            ch.check_comp(gamma, csubst(t, ctx), csubst(tau, ctx))
            return None
        _, gamma, dom, s, t, tau = smp
        ch.check_comp(gamma, s, dom)
        ch.check_comp(gamma.extend("y", dom), t, tau)
        image, ity = csubst(t, s), csubst(tau, s)
        ch.check_comp(gamma, image, ity)
        if not ch.conv_comp(gamma, image, CApp(Fn(t, "y"), s), ity):
            return "{s/y}t differs from the beta redex"
        return None

    def comp_describe(smp):
        if smp[0] == "ctxpair":
            _, gamma, ctx, t, tau = smp
            return f"{show(t, gamma.names() + ['g'])} with g := {show(ctx, gamma)}"
        _, gamma, dom, s, t, tau = smp
        return f"{show(t, gamma.names() + ['y'])} with y := {show(s, gamma)}"

    return [run_property("substitution-lf", seed, count, lf_make, lf_prop, lf_describe),
            run_property("substitution-comp", seed, count, comp_make, comp_prop,
                         comp_describe)]


def _first_order(ty):
    return not isinstance(ty, Pi)


def conversion_laws(seed=0, count=300):
    """conv_comp is reflexive, symmetric and transitive on related triples."""

    def make(g):
        tau = g.ch.pick(TYPES)
        t = g.comp(GAMMA, tau, g.ch.below(4) + 1)
        other = g.comp(GAMMA, tau, g.ch.below(3) + 1)
        return ("triple", GAMMA, tau, t, other)

    def prop(s):
        _, gamma, tau, t, other = s
        ch = make_checker()
        a = t
        b = ch.reducer.normalize(t)
        c = CApp(Fn(shift(t, 1), "y"), gamma_unit(gamma))
        for x in (a, b, c, other):
            if not ch.conv_comp(gamma, x, x, tau):
                return "not reflexive"
        for x, y in ((a, b), (b, c), (a, c), (a, other), (b, other)):
            if ch.conv_comp(gamma, x, y, tau) != ch.conv_comp(gamma, y, x, tau):
                return "not symmetric"
        if not (ch.conv_comp(gamma, a, b, tau) and ch.conv_comp(gamma, b, c, tau)):
            return "related terms are not convertible"
        if not ch.conv_comp(gamma, a, c, tau):
            return "not transitive"
        ab, bo = ch.conv_comp(gamma, a, other, tau), ch.conv_comp(gamma, b, other, tau)
        if ab != bo:
            return "not transitive through the normal form"
        return None

    def describe(s):
        _, gamma, tau, t, other = s
        return f"{show(t, gamma)} vs {show(other, gamma)} : {show(tau, gamma)}"

    return run_property("conversion-laws", seed, count, make, prop, describe)


def gamma_unit(gamma):
    """A closed computation to feed a function that ignores its argument."""
    return BoxObj(CtxObj(erase(LfCtx()), _LAM_ID))


_LAM_ID = LApp(LConst("lam"), Lam(LVar(0, "x"), "x"))


def eta_suite(seed=0, count=100, options=None):
    """Extensionality: a neutral equals its eta expansion at function and box types."""

    def make(g):
        psi = g.schema_ctx(GAMMA, head=g.ch.pick([None] + g.ctx_heads(GAMMA)))
        if g.ch.chance(1, 2):
            t = g.comp(GAMMA, box(psi, TM_TO_TM), g.ch.below(3) + 1)
            return ("lf-eta", GAMMA, psi, t)
        t = g.comp(GAMMA, box(psi), g.ch.below(3) + 1)
        return ("box-eta", GAMMA, psi, t)

    def prop(s):
        kind, gamma, psi, t = s
        ch = make_checker(options=options)
        ident = Wk(erase(psi), 0)
        if kind == "lf-eta":
            m = Unbox(t, ident)
            expanded = Lam(LApp(Unbox(t, Wk(erase(psi), 1)), _var0()), "x")
            if not ch.conv_lf(gamma, psi, m, expanded, TM_TO_TM):
                return "LF eta expansion rejected"
            return None
        expanded = BoxObj(CtxObj(erase(psi), Unbox(t, ident)))
        if not ch.conv_comp(gamma, t, expanded, box(psi)):
            return "box eta expansion rejected"
        return None

    def describe(s):
        return f"{s[0]}: {show(s[3], s[1])}"

    name = "eta" if options is None else "eta-mutant"
    return run_property(name, seed, count, make, prop, describe, do_shrink=False)


def _var0():
    return LVar(0, "x")


SUITES = ("determinacy", "subject-reduction", "type-uniqueness", "substitution",
          "conversion-laws", "eta", "eta-mutant")


def harness(seed=0, count=100, suites=None):
    """Run the selected suites with ``count`` samples each; returns SuiteResults."""
    suites = suites or SUITES
    results = []
    if count <= 0:
        return results
    if "determinacy" in suites:
        results += determinacy(seed, count)
    if "subject-reduction" in suites:
        results.append(subject_reduction(seed, count))
    if "type-uniqueness" in suites:
        results.append(uniqueness(seed, count))
    if "substitution" in suites:
        results += substitution_lemmas(seed, count)
    if "conversion-laws" in suites:
        results.append(conversion_laws(seed, count))
    if "eta" in suites:
        results.append(eta_suite(seed, count))
    if "eta-mutant" in suites:
        mutant = eta_suite(seed, count, ConvOptions(lf_eta=False, box_eta=False))
        results.append(mutant)
    return results
