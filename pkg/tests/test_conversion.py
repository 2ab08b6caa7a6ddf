import pytest

from ctxkernel.conversion import ConvOptions
from ctxkernel.parser import parse_term
from ctxkernel.typecheck import make_checker

from conftest import ctx

G = ctx(("psi", "tm_ctx"), ("u", "[psi |- tm]"), ("w", "[psi |- tm -> tm]"),
        ("f", "[psi |- tm] -> [psi |- tm]"), ("A", "U0"), ("a", "A"), ("b", "A"))


def t(src):
    return parse_term(src, G.names())


def conv(left, right, ty, options=None):
    return make_checker(options=options).conv_comp(G, t(left), t(right), t(ty))


POSITIVE = [
    ("(fn y => y) a", "a", "A"),
    ("[psi |- (\\x. app x x) u]", "[psi |- app u u]", "[psi |- tm]"),
    ("[psi |- {[psi |- u]}]", "u", "[psi |- tm]"),
    ("[psi |- \\x. w[wk(psi)] x]", "w", "[psi |- tm -> tm]"),
    ("fn y => f y", "f", "[psi |- tm] -> [psi |- tm]"),
    ("[psi |- u]", "u", "[psi |- tm]"),
    ("(fn y => y) U0", "U0", "U1"),
    ("(y : [psi |- tm]) -> A", "[psi |- tm] -> A", "U0"),
    ("[psi |- lam \\x. x]", "[psi |- lam \\y. y]", "[psi |- tm]"),
]

NEGATIVE = [
    ("(fn y => y) a", "b", "A"),
    ("[psi |- (\\x. app x x) u]", "[psi |- app u (lam \\z. z)]", "[psi |- tm]"),
    ("[psi |- \\x. app (w[wk(psi)] x) x]", "w", "[psi |- tm -> tm]"),
    ("fn y => f (f y)", "f", "[psi |- tm] -> [psi |- tm]"),
    ("A", "A -> A", "U0"),
    ("[psi |- lam \\x. x]", "[psi |- lam \\y. u[wk(psi)]]", "[psi |- tm]"),
]


class TestConversion:
    @pytest.mark.parametrize("left,right,ty", POSITIVE + NEGATIVE)
    def test_sides_are_well_typed(self, left, right, ty):
        ch = make_checker()
        for side in (left, right):
            ch.check_comp(G, t(side), t(ty))

    @pytest.mark.parametrize("left,right,ty", POSITIVE)
    def test_equal(self, left, right, ty):
        assert conv(left, right, ty)
        assert conv(right, left, ty)

    @pytest.mark.parametrize("left,right,ty", NEGATIVE)
    def test_distinct(self, left, right, ty):
        assert not conv(left, right, ty)
        assert not conv(right, left, ty)


def test_implicit_identity_under_binder_is_rejected():
    # an unboxed variable without a substitution gets the identity on the
    # current LF context, which does not match w's context under \\x
    from ctxkernel.errors import CheckError

    with pytest.raises(CheckError, match="NotAPrefix"):
        make_checker().check_comp(G, t("[psi |- \\x. w x]"), t("[psi |- tm -> tm]"))


class TestMutants:
    def test_lf_eta_off(self):
        assert not conv("[psi |- \\x. w[wk(psi)] x]", "w", "[psi |- tm -> tm]",
                        ConvOptions(lf_eta=False))

    def test_box_eta_off(self):
        assert not conv("[psi |- u]", "u", "[psi |- tm]", ConvOptions(box_eta=False))

    def test_beta_unaffected(self):
        assert conv("(fn y => y) a", "a", "A", ConvOptions(False, False))


class TestTypes:
    def test_pi_domain_matters(self):
        ch = make_checker()
        assert not ch.conv_comp_type(G, t("A -> A"), t("[psi |- tm] -> A"))

    def test_box_context_matters(self):
        ch = make_checker()
        assert not ch.conv_comp_type(G, t("[psi |- tm]"), t("[psi, x:tm |- tm]"))

    def test_param_flag_matters(self):
        ch = make_checker()
        assert not ch.conv_comp_type(G, t("[psi |- tm]"), t("[psi |-# tm]"))

    def test_reduces_types(self):
        ch = make_checker()
        assert ch.conv_comp_type(G, t("(fn y => y) A"), t("A"))
