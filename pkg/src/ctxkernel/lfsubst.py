"""Simultaneous LF substitution, lookup, truncation and index shifting.

A substitution never records its domain.  Every entry point therefore
takes the erased domain explicitly and walks it in lockstep with the
substitution.  ``Wk(dom, n)`` maps variable ``i`` of ``dom`` to ``i + n``.
"""

from __future__ import annotations

from .errors import IllScoped, LookupFailure, TruncFailure
from .syntax import (
    Atom,
    KPi,
    KType,
    Lam,
    LApp,
    LConst,
    LfCtx,
    LPi,
    LVar,
    SCons,
    SEmpty,
    Unbox,
    Wk,
    erase,
)

# ---------------------------------------------------------------------------
# Weakening


def expand_wk(sigma):
    """One unfolding step of a weakening, or None if it is already whnf.

    ``wk_. -> .`` and ``wk_(D,x) -> wk_D, x``; a weakening whose domain is
    just a context variable cannot be unfolded.
    """
    dom, n = sigma.dom, sigma.shift
    if dom.names:
        return SCons(Wk(dom.prefix(1), n + 1), LVar(n, dom.names[-1]))
    if dom.head is None:
        return SEmpty()
    return None


def expand_wk_fully(sigma):
    """Unfold a weakening into an explicit list (ending in ``.`` or ``wk_psi``)."""
    out = []
    cur = sigma
    while isinstance(cur, Wk):
        step = expand_wk(cur)
        if step is None:
            break
        if isinstance(step, SEmpty):
            cur = step
            break
        out.append(step.term)
        cur = step.rest
    for term in reversed(out):
        cur = SCons(cur, term)
    return cur


def id_subst(ctx):
    if isinstance(ctx, LfCtx):
        ctx = erase(ctx)
    return Wk(ctx, 0)


# ---------------------------------------------------------------------------
# Shifting (LF weakening of free variables)


def shift_lf(m, d, c=0):
    """Add ``d`` to every LF variable with index >= ``c``."""
    if d == 0:
        return m
    if isinstance(m, LVar):
        return LVar(m.index + d, m.name) if m.index >= c else m
    if isinstance(m, Lam):
        return Lam(shift_lf(m.body, d, c + 1), m.name)
    if isinstance(m, LApp):
        return LApp(shift_lf(m.fn, d, c), shift_lf(m.arg, d, c))
    if isinstance(m, Unbox):
        return Unbox(m.comp, shift_subst(m.subst, d, c))
    if isinstance(m, LConst):
        return m
    raise IllScoped(f"not an LF term: {m!r}")


def shift_subst(sigma, d, c=0):
    if d == 0:
        return sigma
    if isinstance(sigma, SEmpty):
        return sigma
    if isinstance(sigma, SCons):
        return SCons(shift_subst(sigma.rest, d, c), shift_lf(sigma.term, d, c))
    if isinstance(sigma, Wk):
        if c <= sigma.shift:
            return Wk(sigma.dom, sigma.shift + d)
        step = expand_wk(sigma)
        if step is None:
            raise IllScoped("cannot insert LF variables inside a context variable")
        return shift_subst(step, d, c)
    raise IllScoped(f"not an LF substitution: {sigma!r}")


def shift_type(a, d, c=0):
    if d == 0:
        return a
    if isinstance(a, Atom):
        return Atom(a.name, tuple(shift_lf(x, d, c) for x in a.args))
    if isinstance(a, LPi):
        return LPi(shift_type(a.dom, d, c), shift_type(a.cod, d, c + 1), a.name)
    raise IllScoped(f"not an LF type: {a!r}")


# ---------------------------------------------------------------------------
# Single-variable instantiation (beta)


def inst_lf(m, n, c=0):
    """Replace variable ``c`` by ``n`` and close the gap it leaves."""
    if isinstance(m, LVar):
        if m.index == c:
            return shift_lf(n, c)
        if m.index > c:
            return LVar(m.index - 1, m.name)
        return m
    if isinstance(m, Lam):
        return Lam(inst_lf(m.body, n, c + 1), m.name)
    if isinstance(m, LApp):
        return LApp(inst_lf(m.fn, n, c), inst_lf(m.arg, n, c))
    if isinstance(m, Unbox):
        return Unbox(m.comp, inst_subst(m.subst, n, c))
    if isinstance(m, LConst):
        return m
    raise IllScoped(f"not an LF term: {m!r}")


def inst_subst(sigma, n, c=0):
    if isinstance(sigma, SEmpty):
        return sigma
    if isinstance(sigma, SCons):
        return SCons(inst_subst(sigma.rest, n, c), inst_lf(sigma.term, n, c))
    if isinstance(sigma, Wk):
        if c < sigma.shift:
            return Wk(sigma.dom, sigma.shift - 1)
        step = expand_wk(sigma)
        if step is None:
            raise IllScoped("instantiated variable lies inside a context variable")
        return inst_subst(step, n, c)
    raise IllScoped(f"not an LF substitution: {sigma!r}")


def inst_type(a, n, c=0):
    if isinstance(a, Atom):
        return Atom(a.name, tuple(inst_lf(x, n, c) for x in a.args))
    if isinstance(a, LPi):
        return LPi(inst_type(a.dom, n, c), inst_type(a.cod, n, c + 1), a.name)
    raise IllScoped(f"not an LF type: {a!r}")


def single_subst(n, m):
    """``[n/x]m`` where ``x`` is the innermost variable of ``m``'s scope.

    Agrees with ``lf_subst_term(SCons(id, n), dom.x, m)`` whenever the
    latter is defined; it needs no domain, so reduction can use it.
    """
    return inst_lf(m, n, 0)


# ---------------------------------------------------------------------------
# lookup and trunc


def lookup(index, sigma, dom):
    if isinstance(sigma, SCons) and dom.names:
        if index == 0:
            return sigma.term
        return lookup(index - 1, sigma.rest, dom.prefix(1))
    if isinstance(sigma, Wk) and sigma.dom == dom and 0 <= index < len(dom.names):
        return LVar(index + sigma.shift, dom.names[-1 - index])
    raise LookupFailure(
        f"lookup of LF variable #{index} failed",
        expected=f"a substitution for domain {dom}",
        actual=str(sigma),
    )


def trunc(target, sigma, dom):
    if dom == target:
        return sigma
    if not target.is_prefix_of(dom):
        raise TruncFailure(f"{target} is not a prefix of {dom}")
    if isinstance(sigma, SCons) and dom.names:
        return trunc(target, sigma.rest, dom.prefix(1))
    if isinstance(sigma, Wk) and sigma.dom == dom:
        return Wk(target, sigma.shift + len(dom) - len(target))
    raise TruncFailure(
        f"cannot truncate to {target}",
        expected=f"a substitution for domain {dom}",
        actual=str(sigma),
    )


# ---------------------------------------------------------------------------
# Simultaneous substitution


def _under_binder(sigma, dom, name):
    return SCons(shift_subst(sigma, 1), LVar(0, name)), dom.extend(name)


def lf_subst_term(sigma, dom, m):
    if isinstance(m, LVar):
        if m.index >= len(dom.names):
            raise IllScoped(f"LF variable #{m.index} is outside the domain {dom}")
        return lookup(m.index, sigma, dom)
    if isinstance(m, Lam):
        s2, d2 = _under_binder(sigma, dom, m.name)
        return Lam(lf_subst_term(s2, d2, m.body), m.name)
    if isinstance(m, LApp):
        return LApp(lf_subst_term(sigma, dom, m.fn), lf_subst_term(sigma, dom, m.arg))
    if isinstance(m, Unbox):
        return Unbox(m.comp, lf_subst_subst(sigma, dom, m.subst))
    if isinstance(m, LConst):
        return m
    raise IllScoped(f"not an LF term: {m!r}")


def lf_subst_subst(sigma, dom, inner):
    """Compose: ``inner`` maps into ``dom``; the result maps into sigma's range."""
    if isinstance(inner, SEmpty):
        return inner
    if isinstance(inner, SCons):
        return SCons(lf_subst_subst(sigma, dom, inner.rest),
                     lf_subst_term(sigma, dom, inner.term))
    if isinstance(inner, Wk):
        if (inner.dom.head != dom.head
                or len(dom) - len(inner.dom) != inner.shift):
            raise IllScoped(f"weakening {inner} does not map into {dom}")
        return trunc(inner.dom, sigma, dom)
    raise IllScoped(f"not an LF substitution: {inner!r}")


def lf_subst_type(sigma, dom, a):
    if isinstance(a, Atom):
        return Atom(a.name, tuple(lf_subst_term(sigma, dom, x) for x in a.args))
    if isinstance(a, LPi):
        s2, d2 = _under_binder(sigma, dom, a.name)
        return LPi(lf_subst_type(sigma, dom, a.dom), lf_subst_type(s2, d2, a.cod),
                   a.name)
    raise IllScoped(f"not an LF type: {a!r}")


def lf_subst_kind(sigma, dom, k):
    if isinstance(k, KType):
        return k
    if isinstance(k, KPi):
        s2, d2 = _under_binder(sigma, dom, k.name)
        return KPi(lf_subst_type(sigma, dom, k.dom), lf_subst_kind(s2, d2, k.cod),
                   k.name)
    raise IllScoped(f"not an LF kind: {k!r}")


__all__ = [
    "expand_wk",
    "expand_wk_fully",
    "id_subst",
    "inst_lf",
    "inst_subst",
    "inst_type",
    "lf_subst_kind",
    "lf_subst_subst",
    "lf_subst_term",
    "lf_subst_type",
    "lookup",
    "shift_lf",
    "shift_subst",
    "shift_type",
    "single_subst",
    "trunc",
]
