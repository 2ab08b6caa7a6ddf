import pytest

from ctxkernel.compsubst import CompSubst, check_comp_subst, csubst, csubst_sim, shift
from ctxkernel.errors import CheckError
from ctxkernel.parser import parse_term
from ctxkernel.syntax import TM, CompCtx, CVar, Decl, ErasedCtx, LfCtx, Univ

from conftest import ctx

G = ctx(("psi", "tm_ctx"), ("u", "[psi |- tm]"), ("A", "U0"), ("a", "A"))


def t(src, gamma=G):
    return parse_term(src, gamma.names())


class TestShift:
    def test_free_variable_moves(self):
        assert shift(CVar(0), 2) == CVar(2)

    def test_bound_variable_stays(self):
        f = t("fn y => y")
        assert shift(f, 3) == f

    def test_cutoff(self):
        assert shift(CVar(1), 1, c=2) == CVar(1)

    def test_reaches_inside_boxes(self):
        b = t("[psi |- app u u]")
        moved = shift(b, 1)
        assert moved.obj.ectx.head == CVar(4, "psi")


class TestSingle:
    def test_hit(self):
        assert csubst(CVar(0), Univ(0)) == Univ(0)

    def test_outer_variable_moves_down(self):
        assert csubst(CVar(2), Univ(0)) == CVar(1)

    def test_under_binder(self):
        body = t("fn y => a")            # a is index 1 under y
        got = csubst(body, Univ(0))
        assert got == t("fn y => U0")

    def test_context_variable_splices_into_lf(self):
        # {(x:tm, y:tm)/psi}[psi |- u]: the context head goes away
        m = parse_term("[psi |- tm]", ("psi",))
        payload = LfCtx(None, (Decl(TM, "x"), Decl(TM, "y")))
        got = csubst(m, payload)
        assert got.ctype.ctx == payload

    def test_context_variable_extends(self):
        m = parse_term("[psi, x:tm |- tm]", ("psi",))
        payload = LfCtx(None, (Decl(TM, "x"), Decl(TM, "y")))
        got = csubst(m, payload)
        assert len(got.ctype.ctx) == 3 and got.ctype.ctx.head is None

    def test_freshening(self):
        # the inner binder x clashes with the incoming x and is renamed
        m = parse_term("[psi, x:tm |- lam \\y. app x y]", ("psi",))
        payload = LfCtx(None, (Decl(TM, "x"), Decl(TM, "y")))
        got = csubst(m, payload)
        names = got.obj.ectx.names
        assert names[:2] == ("x", "y") and names[2] not in ("x", "y")
        assert got == parse_term("[x:tm, y:tm, w:tm |- lam \\z. app w z]")


class TestSimultaneous:
    def test_identity(self):
        term = t("(fn y => y) [psi |- u]")
        assert csubst_sim(CompSubst.identity(G), term) == term

    def test_weakening_equals_shift(self):
        term = t("[psi |- app u u]")
        assert csubst_sim(CompSubst.weakening(G, 2), term) == shift(term, 2)

    def test_uncovered_variable(self):
        with pytest.raises(CheckError):
            csubst_sim(CompSubst(), CVar(0))

    def test_well_typed(self, checker):
        target = ctx(("B", "U0"), ("b", "B"))
        theta = CompSubst((LfCtx(), parse_term("[ |- lam \\x. x]"), CVar(1), CVar(0)))
        check_comp_subst(target, theta, G, checker)

    def test_ill_typed(self, checker):
        target = ctx(("B", "U0"), ("b", "B"))
        theta = CompSubst((LfCtx(), parse_term("[ |- lam \\x. x]"), CVar(1), CVar(1)))
        with pytest.raises(CheckError):
            check_comp_subst(target, theta, G, checker)

    def test_single_agrees(self):
        term = t("fn z => (fn y => y) a")
        theta = CompSubst.identity(CompCtx(G.entries[:-1])).extend(Univ(0))
        assert csubst_sim(theta, term) == csubst(term, Univ(0))


def test_erased_context_after_substitution():
    m = parse_term("[psi, x:tm |- x]", ("psi",))
    got = csubst(m, LfCtx())
    assert got.obj.ectx == ErasedCtx(None, ("x",))
