"""Shape of the ``tm`` recursor: motive, branch telescopes, and unfolding.

A motive is ``(psi : tm_ctx) -> (y : [psi |- tm]) -> tau``.  Branch bodies
are stored under their pattern binders in the order

    var:  psi, p
    app:  psi, m, n, f_m, f_n
    lam:  psi, m, f_m

so index 0 is always the last binder listed.
"""

from __future__ import annotations

from .compsubst import instantiate, shift
from .lfsubst import shift_lf
from .errors import CheckError
from .syntax import (
    TM,
    BoxObj,
    BoxType,
    CtxObj,
    CtxType,
    CVar,
    ErasedCtx,
    Lam,
    LApp,
    LConst,
    LfCtx,
    LVar,
    Pi,
    Rec,
    TmCtx,
    Unbox,
    Wk,
)

VAR_NAMES = ("psi", "p")
APP_NAMES = ("psi", "m", "n", "f_m", "f_n")
LAM_NAMES = ("psi", "m", "f_m")


def motive_body(motive):
    """Return ``tau`` from a well-shaped motive or raise BadInvariantShape."""
    if (isinstance(motive, Pi) and isinstance(motive.dom, TmCtx)
            and isinstance(motive.cod, Pi)):
        dom = motive.cod.dom
        if (isinstance(dom, BoxType) and not dom.ctype.param
                and dom.ctype.type == TM
                and dom.ctype.ctx == LfCtx(CVar(0), ())):
            return motive.cod.cod
    raise CheckError(
        "recursor motive must have the form (psi : tm_ctx) -> (y : [psi |- tm]) -> tau",
        code="BadInvariantShape", judgment="rec", actual=str(motive))


def motive_at(motive, ctx, scrut):
    """``{ctx/psi, scrut/y} tau``."""
    return instantiate(motive_body(motive), [ctx, scrut])


def _box_tm(ctx_var, extra=(), param=False):
    ctx = LfCtx(ctx_var, tuple())
    for name in extra:
        ctx = ctx.extend(name, TM)
    return BoxType(CtxType(ctx, TM, param))


def _names(branch, default):
    names = tuple(branch.names) if branch is not None else ()
    return names if len(names) == len(default) else default


def var_telescope(motive, branch=None):
    """Binders of the var branch and the type its body must have."""
    psi, p = _names(branch, VAR_NAMES)
    entries = [(psi, TmCtx()), (p, _box_tm(CVar(0, psi), param=True))]
    result = motive_at(shift(motive, 2), LfCtx(CVar(1, psi)), CVar(0, p))
    return entries, result


def app_telescope(motive, branch=None):
    psi, m, n, fm, fn = _names(branch, APP_NAMES)
    entries = [
        (psi, TmCtx()),
        (m, _box_tm(CVar(0, psi))),
        (n, _box_tm(CVar(1, psi))),
        (fm, motive_at(shift(motive, 3), LfCtx(CVar(2, psi)), CVar(1, m))),
        (fn, motive_at(shift(motive, 4), LfCtx(CVar(3, psi)), CVar(1, n))),
    ]
    hat = ErasedCtx(CVar(4, psi), ())
    body = LApp(LApp(LConst("app"), Unbox(CVar(3, m), Wk(hat, 0))),
                Unbox(CVar(2, n), Wk(hat, 0)))
    result = motive_at(shift(motive, 5), LfCtx(CVar(4, psi)),
                       BoxObj(CtxObj(hat, body)))
    return entries, result


def lam_telescope(motive, branch=None):
    psi, m, fm = _names(branch, LAM_NAMES)
    entries = [
        (psi, TmCtx()),
        (m, _box_tm(CVar(0, psi), extra=("x",))),
        (fm, motive_at(shift(motive, 2), LfCtx(CVar(1, psi)).extend("x", TM),
                       CVar(0, m))),
    ]
    hat = ErasedCtx(CVar(2, psi), ())
    body = LApp(LConst("lam"), Lam(Unbox(CVar(1, m), Wk(hat.extend("x"), 0)), "x"))
    result = motive_at(shift(motive, 3), LfCtx(CVar(2, psi)),
                       BoxObj(CtxObj(hat, body)))
    return entries, result


TELESCOPES = {"var": var_telescope, "app": app_telescope, "lam": lam_telescope}


# ---------------------------------------------------------------------------
# Unfolding


def lf_spine(m):
    args = []
    while isinstance(m, LApp):
        args.append(m.arg)
        m = m.fn
    return m, args[::-1]


def unfold(rec, ectx, n):
    """Instantiate the branch selected by the whnf LF term ``n``.

    Returns None when ``n`` is not one of the three constructor shapes.
    Recursive calls are passed unevaluated.
    """
    b = rec.branches
    ctx = rec.ctx
    if isinstance(n, LVar):
        return instantiate(b.var.body, [ctx, BoxObj(CtxObj(ectx, n))])
    head, args = lf_spine(n)
    if not isinstance(head, LConst):
        return None
    if head.name == "app" and len(args) == 2:
        bm = BoxObj(CtxObj(ectx, args[0]))
        bn = BoxObj(CtxObj(ectx, args[1]))
        payloads = [ctx, bm, bn,
                    Rec(rec.motive, b, ctx, bm),
                    Rec(rec.motive, b, ctx, bn)]
        return instantiate(b.app.body, payloads)
    if head.name == "lam" and len(args) == 1:
        arg = args[0]
        if isinstance(arg, Lam):
            body, name = arg.body, arg.name
        else:
            body, name = LApp(shift_lf(arg, 1), LVar(0, "x")), "x"
        ectx2 = ectx.extend(name)
        bm = BoxObj(CtxObj(ectx2, body))
        payloads = [ctx, bm, Rec(rec.motive, b, ctx.extend(name, TM), bm)]
        return instantiate(b.lam.body, payloads)
    return None
