import pytest

from ctxkernel.errors import FuelExhausted, StuckTerm
from ctxkernel.parser import parse_term
from ctxkernel.reduction import Reducer, WhnfClass, classify_comp, classify_lf
from ctxkernel.syntax import BoxObj, CApp, Global, LConst, Univ

from conftest import ctx

G = ctx(("psi", "tm_ctx"), ("u", "[psi |- tm]"), ("A", "U0"), ("a", "A"))
CONST = ("rec^{(g : tm_ctx) -> (t : [g |- tm]) -> [|- tm]} {"
         " var g, p => [|- lam \\z. z]"
         " | app g, m, n, f_m, f_n => [|- app f_m f_n]"
         " | lam g, m, f_m => f_m }")


def t(src):
    return parse_term(src, G.names())


def whnf(src, **kw):
    return Reducer(**kw).whnf_comp(t(src))


def rules(src):
    seen = []
    Reducer(trace=lambda rule, before, after: seen.append(rule)).whnf_comp(t(src))
    return seen


class TestRules:
    def test_comp_beta(self):
        assert whnf("(fn y => y) a") == t("a")
        assert rules("(fn y => y) a") == ["beta"]

    def test_lf_beta_stays_inside_box(self):
        # weak head: the LF redex inside a box is left alone
        src = "[psi |- (\\x. app x x) u]"
        assert whnf(src) == t(src)

    def test_lf_beta(self):
        r = Reducer()
        m = t("[psi |- (\\x. app x x) u]").obj.term
        assert r.whnf_lf(m) == t("[psi |- app u u]").obj.term
        assert r.steps == 1

    def test_unbox_of_box(self):
        r = Reducer()
        m = t("[psi |- {[psi |- lam \\x. x]}]").obj.term
        assert r.whnf_lf(m) == t("[psi |- lam \\x. x]").obj.term

    def test_delta(self):
        g = Global("one", t("U1"), Univ(0))
        assert Reducer().whnf_comp(g) == Univ(0)

    def test_opaque_global_is_stuck(self):
        with pytest.raises(StuckTerm):
            Reducer().whnf_comp(Global("hole"))

    def test_head_only(self):
        src = "fn y => (fn z => z) y"
        assert whnf(src) == t(src)


class TestRecursor:
    def test_variable_case(self):
        assert whnf(CONST + " <psi, x:tm> [psi, x:tm |- x]") == t("[ |- lam \\z. z]")

    def test_application_case(self):
        got = whnf(CONST + " <psi> [psi |- app u u]")
        assert isinstance(got, BoxObj)
        assert rules(CONST + " <psi> [psi |- app u u]") == ["rec"]

    def test_lambda_case(self):
        assert rules(CONST + " <> [ |- lam \\x. x]") == ["rec", "rec"]
        assert whnf(CONST + " <> [ |- lam \\x. x]") == t("[ |- lam \\z. z]")

    def test_neutral_scrutinee(self):
        got = whnf(CONST + " <psi> u")
        assert classify_comp(got) is WhnfClass.WNE

    def test_neutral_unbox_scrutinee(self):
        got = whnf(CONST + " <psi> [psi |- u]")
        assert classify_comp(got) is WhnfClass.WNE

    def test_scrutinee_reduced_first(self):
        got = whnf(CONST + " <> ((fn y => y) [ |- lam \\x. x])")
        assert got == t("[ |- lam \\z. z]")


class TestFuel:
    def test_omega_runs_out(self):
        with pytest.raises(FuelExhausted):
            whnf("(fn y => y y) (fn y => y y)", fuel=500)

    @pytest.mark.parametrize("fuel", [0, 1])
    def test_exact_budget(self, fuel):
        src = "(fn y => fn z => z) a a"
        if fuel < 2:
            with pytest.raises(FuelExhausted):
                whnf(src, fuel=fuel)

    def test_budget_suffices(self):
        assert whnf("(fn y => fn z => z) a a", fuel=2) == t("a")


class TestClassify:
    @pytest.mark.parametrize("src,cls", [
        ("a", WhnfClass.WNE),
        ("U0", WhnfClass.WHNF),
        ("fn y => y", WhnfClass.WHNF),
        ("[psi |- u]", WhnfClass.WHNF),
        ("(fn y => y) a", WhnfClass.REDUCIBLE),
    ])
    def test_comp(self, src, cls):
        assert classify_comp(t(src)) is cls

    def test_lf_constant(self):
        assert classify_lf(LConst("lam")).is_whnf


class TestNormalize:
    def test_under_binders(self):
        assert Reducer().normalize(t("fn y => (fn z => z) y")) == t("fn y => y")

    def test_inside_boxes(self):
        got = Reducer().normalize(t("[psi |- (\\x. app x x) u]"))
        assert got == t("[psi |- app u u]")

    def test_spine(self):
        got = Reducer().normalize(CApp(t("fn y => y"), t("(fn z => z) a")))
        assert got == t("a")
