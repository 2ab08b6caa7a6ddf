"""Acceptance criteria.  Each test prints a single PASS or FAIL line.

Tolerances are pinned here and nowhere else.
"""

import contextlib
import dataclasses
import random
import time

import pytest

from ctxkernel.compsubst import shift
from ctxkernel.errors import CheckError, KernelError
from ctxkernel.gen import Chooser, Gen
from ctxkernel.harness import comp_sample, lf_sample, subst_sample, substitution_lemmas
from ctxkernel.lfsubst import expand_wk, expand_wk_fully, lf_subst_term, lookup, trunc
from ctxkernel.parser import parse_term
from ctxkernel.reduction import DEFAULT_FUEL, Reducer, classify_comp, classify_lf, classify_subst
from ctxkernel.syntax import (
    CApp,
    CVar,
    ErasedCtx,
    Fn,
    Global,
    Lam,
    LApp,
    LConst,
    LVar,
    SCons,
    SEmpty,
    Wk,
    alpha_eq,
)
from ctxkernel.typecheck import make_checker

from conftest import ctx

COPY_SECONDS = 1.0
SR_SECONDS = 60.0
SR_MAX_DEPTH = 6
DETERMINACY_COUNT = 1000
SR_COUNT = 1000
UNIQUENESS_COUNT = 1000
SUBST_COUNT = 500
CONV_TRIPLES = 300
SEED = 0

LINES = []


@contextlib.contextmanager
def criterion(number, title):
    """Record one PASS/FAIL line for the enclosed checks."""
    info = {}
    try:
        yield info
    except BaseException as e:
        line = f"FAIL criterion {number} ({title}): {type(e).__name__}: {e}".splitlines()[0]
        LINES.append(line)
        print(line)
        raise
    detail = f" [{info['detail']}]" if "detail" in info else ""
    line = f"PASS criterion {number} ({title}){detail}"
    LINES.append(line)
    print(line)


def gen(seed, label, i):
    return Gen(Chooser(random.Random(f"acceptance:{seed}:{label}:{i}")), make_checker())


# ---------------------------------------------------------------------------
# 1. copy

COPY_TYPE = "(psi : tm_ctx) -> (m : [psi |- tm]) -> [psi |- tm]"
COPY = """
fn psi => fn m =>
  rec^{(g : tm_ctx) -> (t : [g |- tm]) -> [g |- tm]} {
      var g, p => [g |- p]
    | app g, m, n, f_m, f_n => [g |- app f_m f_n]
    | lam g, m, f_m => [g |- lam \\x. f_m]
  } <psi> m
"""


def test_copy():
    with criterion(1, "copy") as info:
        t0 = time.perf_counter()
        empty = ctx()
        ty = parse_term(COPY_TYPE)
        body = parse_term(COPY)
        ch = make_checker()
        ch.check_type(empty, ty)
        ch.check_comp(empty, body, ty)
        copy = Global("copy", ty, body)
        arg = parse_term("[ |- lam \\x. app x x]")
        call = parse_term("copy <> [ |- lam \\x. app x x]", globals_={"copy": copy})
        w = ch.reducer.whnf_comp(call)
        res_ty = parse_term("[ |- tm]")
        ch.check_comp(empty, call, res_ty)
        assert classify_comp(w).is_whnf
        assert ch.conv_comp(empty, w, arg, res_ty), "copy result differs from its input"
        assert ch.conv_comp(empty, call, arg, res_ty)
        # the perturbed input is told apart
        assert not ch.conv_comp(empty, w, parse_term("[ |- lam \\x. app x (lam \\y. y)]"),
                                res_ty)
        elapsed = time.perf_counter() - t0
        info["detail"] = f"{elapsed:.3f}s < {COPY_SECONDS}s"
        assert elapsed < COPY_SECONDS


# ---------------------------------------------------------------------------
# 2. equality rules

G = ctx(("psi", "tm_ctx"), ("u", "[psi |- tm]"), ("w", "[psi |- tm -> tm]"),
        ("f", "[psi |- tm] -> [psi |- tm]"), ("A", "U0"), ("a", "A"), ("b", "A"))
R = ("rec^{(g : tm_ctx) -> (t : [g |- tm]) -> [|- tm]} {"
     " var g, p => [|- lam \\z. z]"
     " | app g, m, n, f_m, f_n => [|- app f_m f_n]"
     " | lam g, m, f_m => f_m }")

# rule: (left, right that is equal, perturbed right that is not, type)
RULES = {
    "beta-comp": ("(fn y => y) a", "a", "b", "A"),
    "beta-lf": ("[psi |- (\\x. app x x) u]", "[psi |- app u u]",
                "[psi |- app u (app u u)]", "[psi |- tm]"),
    "eta-lf": ("w", "[psi |- \\x. w[wk(psi)] x]", "[psi |- \\x. w[wk(psi)] (w[wk(psi)] x)]",
               "[psi |- tm -> tm]"),
    "eta-box": ("u", "[psi |- u]", "[psi |- app u u]", "[psi |- tm]"),
    "unbox-box": ("[psi |- {[psi |- lam \\x. x]}]", "[psi |- lam \\x. x]",
                  "[psi |- lam \\x. u[wk(psi)]]", "[psi |- tm]"),
    "rec-var": (R + " <psi, x:tm> [psi, x:tm |- x]", "[|- lam \\z. z]",
                "[|- lam \\z. app z z]", "[|- tm]"),
    "rec-app": (R + " <psi> [psi |- app u (lam \\z. z)]",
                "[|- app {" + R + " <psi> u} {" + R + " <psi> [psi |- lam \\z. z]}]",
                "[|- app {" + R + " <psi> u} {" + R + " <psi> u}]", "[|- tm]"),
    "rec-lam": (R + " <psi> [psi |- lam \\x. app x x]",
                R + " <psi, x:tm> [psi, x:tm |- app x x]",
                R + " <psi, x:tm> [psi, x:tm |- x]", "[|- tm]"),
}


def _t(src):
    return parse_term(src, G.names())


@pytest.mark.parametrize("rule", list(RULES))
def test_equality_rules(rule):
    with criterion(2, f"equality rule {rule}"):
        left, right, wrong, ty = (_t(s) for s in RULES[rule])
        ch = make_checker()
        for side in (left, right, wrong):
            ch.check_comp(G, side, ty)
        assert ch.conv_comp(G, left, right, ty), "positive case rejected"
        assert ch.conv_comp(G, right, left, ty), "positive case rejected (swapped)"
        assert not ch.conv_comp(G, left, wrong, ty), "perturbed twin accepted"
        assert not ch.conv_comp(G, wrong, left, ty), "perturbed twin accepted (swapped)"


# ---------------------------------------------------------------------------
# 3. determinacy


def _whnf(sample):
    r = Reducer()
    if sample[0] == "lf":
        w = r.whnf_lf(sample[3])
        assert classify_lf(w).is_whnf
    elif sample[0] == "subst":
        w = r.whnf_subst(sample[4])
        assert classify_subst(w).is_whnf
    else:
        w = r.whnf_comp(sample[3])
        assert classify_comp(w).is_whnf
    return w


@pytest.mark.parametrize("label,make", [("lf", lf_sample), ("subst", subst_sample),
                                        ("comp", comp_sample)])
def test_determinacy(label, make):
    with criterion(3, f"determinacy ({label})") as info:
        for i in range(DETERMINACY_COUNT):
            s = make(gen(SEED, "det-" + label, i))
            first, second = _whnf(s), _whnf(s)
            assert alpha_eq(first, second), f"sample {i}: runs disagree"
        info["detail"] = f"{DETERMINACY_COUNT} terms"


# ---------------------------------------------------------------------------
# 4. subject reduction


def test_subject_reduction():
    with criterion(4, "subject reduction") as info:
        t0 = time.perf_counter()
        steps = 0
        for i in range(SR_COUNT):
            _, gamma, tau, t = comp_sample(gen(SEED, "sr", i), SR_MAX_DEPTH)
            ch = make_checker()
            levels = ch.check_type(gamma, tau)
            assert 0 in levels or 1 in levels, "type outside U1"
            ch.check_comp(gamma, t, tau)
            r = Reducer(DEFAULT_FUEL)
            w = r.whnf_comp(t)
            steps += r.steps > 0
            assert classify_comp(w).is_whnf
            ch.check_comp(gamma, w, tau)
            assert ch.conv_comp(gamma, t, w, tau), f"sample {i}: whnf not convertible"
        elapsed = time.perf_counter() - t0
        info["detail"] = f"{SR_COUNT} terms, {steps} reduced, {elapsed:.1f}s < {SR_SECONDS}s"
        assert elapsed < SR_SECONDS


# ---------------------------------------------------------------------------
# 5. uniqueness of types


def test_type_uniqueness():
    with criterion(5, "type uniqueness") as info:
        inferred = 0
        for i in range(UNIQUENESS_COUNT):
            _, gamma, _, t = comp_sample(gen(SEED, "uniq", i))
            try:
                first = make_checker().infer_comp(gamma, t)
            except CheckError as e:
                assert e.code == "CannotInfer", e
                continue
            second = make_checker().infer_comp(gamma, t)
            assert make_checker().conv_comp_type(gamma, first, second)
            inferred += 1
        info["detail"] = f"{inferred} of {UNIQUENESS_COUNT} inferable"
        assert inferred >= UNIQUENESS_COUNT // 2


# ---------------------------------------------------------------------------
# 6. substitution lemmas


def test_substitution_lemmas():
    with criterion(6, "substitution lemmas") as info:
        results = substitution_lemmas(SEED, SUBST_COUNT)
        for r in results:
            assert r.total == SUBST_COUNT and r.skipped == 0, r.name
            assert r.ok, f"{r.name}: {r.failures[0].message}: {r.failures[0].witness}"
        info["detail"] = ", ".join(f"{r.name} {r.passed}" for r in results)


# ---------------------------------------------------------------------------
# 7. consistency


@pytest.mark.parametrize("src", ["x", "fn y => y", "U0", "[ |- lam \\z. z]"])
def test_consistency_empty_type(src):
    with criterion(7, f"no closed inhabitant of x: {src}"):
        gx = ctx(("x", "U0"))
        with pytest.raises(CheckError):
            make_checker().check_comp(gx, parse_term(src, gx.names()), CVar(0, "x"))


def test_consistency_universe():
    with criterion(7, "U0 is not in U2"):
        with pytest.raises(CheckError):
            make_checker().check_comp(ctx(), parse_term("U0"), parse_term("U2"))


# ---------------------------------------------------------------------------
# 8. lookup, trunc and weakening clauses

PSI = CVar(0, "psi")
LAM_ID = LApp(LConst("lam"), Lam(LVar(0, "z"), "z"))


def E(*names, head=None):
    return ErasedCtx(head, tuple(names))


def _lookup_table():
    s1 = SCons(SEmpty(), LAM_ID)
    return [
        (lambda: lookup(0, s1, E("x")), LAM_ID),
        (lambda: lookup(1, SCons(s1, LVar(4, "q")), E("x", "y")), LAM_ID),
        (lambda: lookup(0, SCons(s1, LVar(4, "q")), E("x", "y")), LVar(4, "q")),
        (lambda: lookup(0, Wk(E("x", "y"), 0), E("x", "y")), LVar(0, "y")),
        (lambda: lookup(1, Wk(E("x", "y"), 3), E("x", "y")), LVar(4, "x")),
        (lambda: lookup(0, Wk(E("x", head=PSI), 1), E("x", head=PSI)), LVar(1, "x")),
        (lambda: lookup(0, SEmpty(), E("x")), KernelError),
        (lambda: lookup(0, Wk(E("x"), 0), E("y", "x")), KernelError),
        (lambda: lookup(0, Wk(E(head=PSI), 0), E(head=PSI)), KernelError),
    ]


def _trunc_table():
    s1 = SCons(SEmpty(), LAM_ID)
    s2 = SCons(s1, LVar(0, "q"))
    return [
        (lambda: trunc(E("x"), s1, E("x")), s1),
        (lambda: trunc(E("x"), s2, E("x", "y")), s1),
        (lambda: trunc(E(), s2, E("x", "y")), SEmpty()),
        (lambda: trunc(E(), SEmpty(), E()), SEmpty()),
        (lambda: trunc(E(head=PSI), Wk(E("x", "y", head=PSI), 0), E("x", "y", head=PSI)),
         Wk(E(head=PSI), 2)),
        (lambda: trunc(E("x"), Wk(E("x", "y"), 1), E("x", "y")), Wk(E("x"), 2)),
        (lambda: trunc(E("x", "y"), Wk(E("x", "y"), 0), E("x", "y")), Wk(E("x", "y"), 0)),
        (lambda: trunc(E("x"), SEmpty(), E("x", "y")), KernelError),
        (lambda: trunc(E("x", "y"), s1, E("x")), KernelError),
        (lambda: trunc(E(head=PSI), Wk(E(), 0), E()), KernelError),
    ]


def _expansion_table():
    return [
        (lambda: expand_wk(Wk(E(), 0)), SEmpty()),
        (lambda: expand_wk(Wk(E(), 2)), SEmpty()),
        (lambda: expand_wk(Wk(E("x", "y"), 0)), SCons(Wk(E("x"), 1), LVar(0, "y"))),
        (lambda: expand_wk(Wk(E("x", head=PSI), 1)), SCons(Wk(E(head=PSI), 2), LVar(1, "x"))),
        (lambda: expand_wk(Wk(E(head=PSI), 0)), None),
        (lambda: expand_wk_fully(Wk(E("x", "y"), 0)),
         SCons(SCons(SEmpty(), LVar(1, "x")), LVar(0, "y"))),
    ]


def _run_table(rows):
    for k, (thunk, expected) in enumerate(rows):
        if expected is KernelError:
            with pytest.raises(KernelError):
                thunk()
            continue
        got = thunk()
        # bit-exact: structure and name hints alike
        assert repr(got) == repr(expected), f"row {k}: {got!r} != {expected!r}"


@pytest.mark.parametrize("table", ["lookup", "trunc", "wk-expansion"])
def test_clause_tables(table):
    with criterion(8, f"{table} clauses") as info:
        rows = {"lookup": _lookup_table, "trunc": _trunc_table,
                "wk-expansion": _expansion_table}[table]()
        _run_table(rows)
        info["detail"] = f"{len(rows)} rows"


def _expanded(node):
    """Rewrite every weakening into its full expansion, wherever it occurs."""
    if isinstance(node, Wk):
        node = expand_wk_fully(node)
        if isinstance(node, Wk):
            return node
    if isinstance(node, tuple):
        return tuple(_expanded(x) for x in node)
    if dataclasses.is_dataclass(node) and not isinstance(node, type):
        changes = {f.name: _expanded(getattr(node, f.name)) for f in dataclasses.fields(node)}
        return dataclasses.replace(node, **changes)
    return node


def test_wk_expansion_law():
    with criterion(8, "wk expansion law") as info:
        checked = 0
        for i in range(300):
            _, gamma, psi, m = lf_sample(gen(SEED, "wk", i))
            dom = ErasedCtx(psi.head, psi.names())
            for n in (0, 1, 2):
                w = Wk(dom, n)
                direct = _expanded(lf_subst_term(w, dom, m))
                for other in (expand_wk(w), expand_wk_fully(w)):
                    if other is None:
                        continue
                    assert repr(direct) == repr(_expanded(lf_subst_term(other, dom, m))), \
                        f"sample {i}, shift {n}"
                checked += 1
        info["detail"] = f"{checked} instances"


# ---------------------------------------------------------------------------
# 9. conversion is an equivalence


UNIT = parse_term("[ |- lam \\x. x]")


def test_conversion_equivalence():
    with criterion(9, "conversion is an equivalence") as info:
        nontrivial = 0
        for i in range(CONV_TRIPLES):
            g = gen(SEED, "conv", i)
            _, gamma, tau, a = comp_sample(g)
            ch = make_checker()
            pick = g.ch.below(3)
            if pick == 0:
                b = ch.reducer.normalize(a)
            elif pick == 1:
                b = CApp(Fn(shift(a, 1), "v"), UNIT)
            else:
                b = g.comp(gamma, tau, 3)
            c = ch.reducer.normalize(b) if g.ch.chance(1, 2) else g.comp(gamma, tau, 3)
            terms = (a, b, c)
            eq = {}
            for x in range(3):
                assert ch.conv_comp(gamma, terms[x], terms[x], tau), "not reflexive"
                for y in range(3):
                    eq[x, y] = ch.conv_comp(gamma, terms[x], terms[y], tau)
            for x in range(3):
                for y in range(3):
                    assert eq[x, y] == eq[y, x], f"triple {i}: not symmetric"
                    for z in range(3):
                        if eq[x, y] and eq[y, z]:
                            assert eq[x, z], f"triple {i}: not transitive"
            nontrivial += eq[0, 1] and eq[1, 2]
        info["detail"] = f"{CONV_TRIPLES} triples, {nontrivial} with a chain a = b = c"
        assert nontrivial >= CONV_TRIPLES // 4
