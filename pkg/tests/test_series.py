import random
from fractions import Fraction

import numpy as np
import pytest

import oracles
from summability.checkpoints import Outcome
from summability.density import Cubes, Evens
from summability.errors import BudgetError, ModeError, ParseError, PreconditionError, UnsupportedError
from summability.sequence_model import Constant, HashNoise, Norm, Point, Terms, parse_sequence_text
from summability.series import (
    CoefficientSpec,
    ConstructedCoefficients,
    FunctionalSpec,
    SeriesSpec,
    brute_force_h,
    construct_divergent_coeffs,
    default_functionals,
    h_bound,
    h_profile,
    operator_norm_check,
    parse_coefficients,
    parse_f_values,
    parse_points,
    parse_series,
    partial_sum,
    random_unit_points,
    subset_sum_wp,
    swp_membership,
    weak_star_wp_membership,
    weak_wp_membership,
    wuc_verdict,
)

GEOM = "geom:base=1/2,dir=(1,0)"


class TestPartialSums:
    def test_geometric_exact(self):
        s = parse_series(GEOM)
        assert partial_sum(s, None, 3) == Point.of(Fraction(7, 8), 0)

    def test_with_coefficients(self):
        s = parse_series(GEOM)
        c = parse_coefficients("altsign")
        assert partial_sum(s, c, 2) == Point.of(Fraction(-1, 2) + Fraction(1, 4), 0)

    def test_sum_of_series(self):
        s = parse_series("geom:base=1/2,dir=(1,0)+geom:base=1/3,dir=(0,1)")
        assert partial_sum(s, None, 2) == Point.of(Fraction(3, 4), Fraction(4, 9))


class TestHBound:
    def test_example(self):
        s = SeriesSpec(parse_sequence_text("1,-1\n2,1\n-1,1\n"))
        assert h_bound(s, 3) == 4
        assert brute_force_h(s.terms.block(1, 4)) == 4
        assert oracles.sign_pattern_h([[1, -1], [2, 1], [-1, 1]]) == 4

    def test_geometric_prefix(self):
        assert h_bound(parse_series(GEOM), 10) == Fraction(1023, 1024)

    def test_profile_is_monotone(self):
        h = h_profile(parse_series("harmonic:dir=(1,0)", exact=False), [10, 100, 1000])
        assert h[0] < h[1] < h[2]

    def test_random_against_oracle(self):
        rng = random.Random(11)
        for _ in range(10):
            rows = [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(2)] for _ in range(rng.randint(1, 8))]
            arr = np.array(rows, dtype=object)
            assert brute_force_h(arr) == oracles.sign_pattern_h(rows)

    def test_euclidean_brute_force(self):
        s = SeriesSpec(parse_sequence_text("3,0\n0,4\n", exact=False), Norm.EUCLIDEAN)
        assert h_bound(s, 2) == pytest.approx(5.0)

    def test_euclidean_refused_when_large(self):
        s = SeriesSpec(Terms("harmonic", Point.of(1.0, 1.0)), Norm.EUCLIDEAN)
        with pytest.raises(UnsupportedError):
            h_bound(s, 21)


class TestWuc:
    def test_geometric(self, default_policy):
        v = wuc_verdict(parse_series(GEOM, exact=False), default_policy)
        assert v.converges and v.limit.scalar == pytest.approx(1.0)
        assert v.details["closed_form_wuc"] is True

    def test_harmonic(self, default_policy):
        v = wuc_verdict(parse_series("harmonic:dir=(1,0)", exact=False), default_policy)
        assert v.diverges
        assert v.details["closed_form_wuc"] is False

    def test_alternating_harmonic_is_not_wuc(self, default_policy):
        # conditionally convergent, but sum |x_i| diverges
        v = wuc_verdict(parse_series("altharmonic:dir=(1,0)", exact=False), default_policy)
        assert v.diverges

    def test_euclidean_refused(self):
        with pytest.raises(PreconditionError):
            wuc_verdict(parse_series(GEOM, norm=Norm.EUCLIDEAN))


class TestMembership:
    @pytest.mark.parametrize("coeffs,limit", [("const:1", 1.0), ("altsign", -1 / 3), ("geom:1/2", 1 / 3), ("const:0", 0.0)])
    def test_geometric_series(self, coeffs, limit, default_policy):
        v = swp_membership(parse_series(GEOM, exact=False), parse_coefficients(coeffs, exact=False), 1, default_policy)
        assert v.converges and v.limit.coords[0] == pytest.approx(limit, abs=1e-9)

    def test_harmonic_with_ones_diverges(self, default_policy):
        v = swp_membership(parse_series("harmonic:dir=(1,0)", exact=False), parse_coefficients("const:1", exact=False), 1, default_policy)
        assert v.diverges

    def test_exact_mode(self, small_policy):
        v = swp_membership(parse_series(GEOM), parse_coefficients("const:1"), 1, small_policy)
        # the candidate is the exact centroid of the tail window of S_n = 1 - 2^-n
        assert v.converges and v.limit.exact
        assert 0 < 1 - v.limit.coords[0] < Fraction(1, 2**1000) and v.limit.coords[1] == 0


class TestCoefficientSpec:
    def test_declared_bound_checked(self):
        with pytest.raises(ValueError):
            CoefficientSpec(Terms("const", Point.of(2)), 1)

    def test_unbounded_refused(self):
        with pytest.raises(ValueError):
            CoefficientSpec(Terms("geom", Point.of(1), Fraction(2)))

    def test_vector_refused(self):
        with pytest.raises(ValueError):
            CoefficientSpec(Constant(Point.of(1, 1)))

    def test_sampled_bound_for_files(self):
        c = CoefficientSpec(parse_sequence_text("1/2\n-3/4\n"))
        assert c.bound == 0.75


class TestConstructor:
    def test_ones(self):
        c = construct_divergent_coeffs(Terms("const", Point.of(1)), 2)
        assert [(b.t, b.start, b.end, b.block_sum) for b in c.blocks] == [(1, 1, 5, Fraction(5, 2)), (2, 6, 22, Fraction(17, 4))]
        assert c.coeffs.bound == Fraction(1, 2)

    def test_matches_oracle_for_altsign(self):
        c = construct_divergent_coeffs(Terms("altsign", Point.of(1)), 3)
        assert [(b.end, b.block_sum) for b in c.blocks] == oracles.constructor_blocks(lambda i: -1 if i % 2 else 1, 3)

    def test_sign_of_zero_is_positive(self):
        f = parse_sequence_text("0\n" + "1\n" * 100)
        c = construct_divergent_coeffs(f, 1)
        assert c.coeffs.rule.eval(1).scalar == Fraction(1, 2)

    def test_budget(self):
        with pytest.raises(BudgetError) as exc:
            construct_divergent_coeffs(Terms("harmonic", Point.of(1.0)), 2, budget=10**5)
        err = exc.value
        assert len(err.blocks) == 1 and err.reached == 10**5
        assert 0 < err.prefix_sum < 16

    def test_lazy_rule_extends(self):
        rule = ConstructedCoefficients(Terms("const", Point.of(1)))
        assert rule.eval(100).scalar == Fraction(1, 2**int(rule.block_of(np.array([100]))[0]))

    def test_f_dsl(self):
        assert parse_f_values("reciprocal").eval(4).scalar == Fraction(1, 4)
        with pytest.raises(ParseError):
            parse_f_values("zeta")


class TestPanels:
    def test_default_functionals(self):
        fs = default_functionals(2, Norm.MAX, exact=False)
        assert len(fs) == 10
        assert fs[0].coeffs == Point.of(1.0, 0.0)
        assert all(f.dual_norm() == pytest.approx(1.0) for f in fs)

    def test_random_points_seeded(self):
        a = random_unit_points(3, 5, Norm.EUCLIDEAN, False, seed=1)
        assert a == random_unit_points(3, 5, Norm.EUCLIDEAN, False, seed=1)
        assert a != random_unit_points(3, 5, Norm.EUCLIDEAN, False, seed=2)

    def test_functional_call(self):
        f = FunctionalSpec(Point.of(1, -1))
        assert f(Point.of(3, 1)) == 2
        with pytest.raises(ModeError):
            f(Point.of(3.0, 1.0))

    def test_weak_matches_strong(self, default_policy):
        s, c = parse_series(GEOM, exact=False), parse_coefficients("altsign", exact=False)
        rep = weak_wp_membership(s, c, None, 1, default_policy)
        assert rep.aggregate.converges
        assert rep.aggregate.limit.coords[0] == pytest.approx(-1 / 3, abs=1e-9)
        assert len(rep.rows) == 10

    def test_weak_divergent(self, default_policy):
        s, c = parse_series("harmonic:dir=(1,1)", exact=False), parse_coefficients("const:1", exact=False)
        assert weak_wp_membership(s, c, None, 1, default_policy).aggregate.diverges

    def test_insufficient_functionals(self, default_policy):
        s, c = parse_series("geom:base=1/2,dir=(1,1)", exact=False), parse_coefficients("const:1", exact=False)
        rep = weak_wp_membership(s, c, [FunctionalSpec(Point.of(1.0, 1.0))], 1, default_policy)
        assert rep.aggregate.outcome is Outcome.INCONCLUSIVE
        assert any("insufficient" in f for f in rep.flags)

    def test_panel_is_deterministic_across_workers(self, small_policy):
        s, c = parse_series(GEOM, exact=False), parse_coefficients("reciprocal", exact=False)
        a = weak_wp_membership(s, c, None, 1, small_policy, workers=1)
        b = weak_wp_membership(s, c, None, 1, small_policy, workers=4)
        assert [str(r.verdict) for r in a.rows] == [str(r.verdict) for r in b.rows]

    def test_weak_star(self, default_policy):
        fs = parse_series("geom:base=1/2,dir=(1,1)", exact=False)
        rep = weak_star_wp_membership(fs, parse_coefficients("const:1", exact=False), parse_points("1,0;0,1", False), 1, default_policy)
        assert rep.aggregate.converges

    @pytest.mark.parametrize("M,limit", [(Evens(), 1 / 3), (Cubes(), 0.50390625745)])
    def test_subset_sums(self, M, limit, default_policy):
        v = subset_sum_wp(parse_series(GEOM, exact=False), M, Point.of(1.0, 0.0), 1, default_policy)
        assert v.converges and v.limit.scalar == pytest.approx(limit, abs=1e-10)


class TestOperator:
    def test_bound_holds(self, small_policy):
        s = parse_series("geom:base=1/2,dir=(1,0)+geom:base=1/3,dir=(0,1)", exact=False)
        samples = [CoefficientSpec(HashNoise(1, 1.0, seed=i), 1.0) for i in range(5)]
        rep = operator_norm_check(s, samples, 1, small_policy)
        assert rep.all_ok and rep.H == pytest.approx(1.0)

    def test_refused_without_wuc(self, small_policy):
        with pytest.raises(PreconditionError):
            operator_norm_check(parse_series("harmonic:dir=(1,0)", exact=False), [parse_coefficients("const:1", exact=False)], 1, small_policy)


class TestDSL:
    @pytest.mark.parametrize("bad", ["zeta", "geom:dir=(1,0)", "harmonic:base=2", "file:"])
    def test_bad_series(self, bad):
        with pytest.raises(ParseError):
            parse_series(bad)

    @pytest.mark.parametrize("bad", ["geom:2", "geom", "zeta", "noise:bogus=1"])
    def test_bad_coefficients(self, bad):
        with pytest.raises((ParseError, ValueError)):
            parse_coefficients(bad, exact=False)

    def test_noise_needs_float(self):
        with pytest.raises(ModeError):
            parse_coefficients("noise:amp=1", exact=True)

    def test_noise_seed(self):
        a = parse_coefficients("noise:seed=0x10,amp=1/2", exact=False)
        assert a.bound == 0.5 and a.rule.seed == 16

    def test_points(self):
        assert parse_points("1,0;0,1") == [Point.of(1, 0), Point.of(0, 1)]
        with pytest.raises(ParseError):
            parse_points("1,0;1")

    def test_constructed_round_trip(self, tmp_path):
        import json

        path = tmp_path / "c.json"
        path.write_text(json.dumps({"spec": {"f": "const:1"}}))
        c = parse_coefficients(f"constructed:{path}")
        assert c.rule.eval(5).scalar == Fraction(1, 2) and c.rule.eval(6).scalar == Fraction(1, 4)
