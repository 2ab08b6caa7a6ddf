import random

import pytest

from ctxkernel.conversion import ConvOptions
from ctxkernel.gen import Chooser, Gen, base_context, base_types
from ctxkernel.harness import (
    SUITES,
    Skip,
    comp_sample,
    eta_suite,
    harness,
    run_property,
    shrink,
)
from ctxkernel.typecheck import make_checker


class TestChooser:
    def test_replay(self):
        a = Chooser(random.Random(7))
        xs = [a.below(10) for _ in range(20)]
        b = Chooser(prefix=a.record)
        assert [b.below(10) for _ in range(20)] == xs

    def test_exhausted_prefix_is_simplest(self):
        c = Chooser(prefix=[3])
        assert c.below(5) == 3 and c.below(5) == 0

    def test_prefix_clamped(self):
        assert Chooser(prefix=[9]).below(3) == 2

    def test_trivial_choice_not_recorded(self):
        c = Chooser(random.Random(0))
        c.below(1)
        assert c.record == []

    def test_chance_default_false(self):
        assert not Chooser().chance(1, 2)


class TestGenerator:
    @pytest.mark.parametrize("seed", range(40))
    def test_samples_are_well_typed(self, seed):
        g = Gen(Chooser(random.Random(seed)), make_checker())
        _, gamma, tau, t = comp_sample(g)
        make_checker().check_comp(gamma, t, tau)

    def test_every_base_type_inhabited(self):
        gamma = base_context()
        for tau in base_types(gamma):
            t = Gen(Chooser(), make_checker()).comp(gamma, tau, 1)
            make_checker().check_comp(gamma, t, tau)

    def test_same_seed_same_term(self):
        def sample():
            return comp_sample(Gen(Chooser(random.Random(3)), make_checker()))[3]
        assert sample() == sample()


class TestShrink:
    def test_shrinks_to_minimal_counterexample(self):
        def make(g):
            return [g.ch.below(100) for _ in range(5)]

        def prop(xs):
            return "big" if sum(xs) >= 10 else None

        choices = [50, 60, 70, 80, 90]
        best = shrink(make, prop, choices, budget=1000)
        assert sum(best) >= 10 and sum(best) < 20

    def test_run_property_counts(self):
        def make(g):
            return g.ch.below(3)

        def prop(x):
            if x == 0:
                raise Skip()
            return "two" if x == 2 else None

        res = run_property("toy", 0, 60, make, prop, describe=str)
        assert res.total == 60
        assert res.passed + res.skipped + len(res.failures) == 60
        assert res.failures and all(f.message == "two" for f in res.failures)
        assert all(f.choices == (2,) for f in res.failures)


class TestHarness:
    def test_zero_count_is_empty(self):
        assert harness(0, 0) == []

    def test_seed_zero_hundred_cases(self):
        results = {r.name: r for r in harness(0, 100)}
        for name, r in results.items():
            if name == "eta-mutant":
                continue
            assert r.ok, (name, r.failures[:1])
            assert r.total == 100

    def test_mutant_caught(self):
        assert not eta_suite(0, 100, ConvOptions(lf_eta=False, box_eta=False)).ok

    @pytest.mark.parametrize("opts", [ConvOptions(lf_eta=False), ConvOptions(box_eta=False)])
    def test_each_mutation_caught(self, opts):
        assert not eta_suite(1, 100, opts).ok

    def test_suite_names(self):
        names = [r.name for r in harness(0, 1)]
        assert "eta-mutant" in names and len(names) >= len(SUITES)

    def test_restrict(self):
        assert [r.name for r in harness(0, 3, ["eta"])] == ["eta"]
