"""Acceptance criteria, one test per criterion.

Every test carries a ``criterion`` marker; the conftest prints one
PASS/FAIL line per criterion at the end of the run.  Expected numbers were
produced by the brute-force oracles in ``oracles.py`` and frozen here.
"""

import os
import random
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

import oracles
from summability.checkpoints import CheckpointPolicy, Outcome
from summability.core import (
    cesaro_mean,
    cesaro_means,
    connor_cross_check,
    divergence_witness,
    statistical_cauchy_check,
    statistical_verdict,
    strong_p_residual,
    wp_verdict,
)
from summability.density import Cubes, Evens, Odds, Squares
from summability.sequence_model import (
    AltNeg,
    Constant,
    CubeSpike,
    CubeSpikeSquared,
    FileSequence,
    HashNoise,
    Masked,
    Point,
    PowerSquareSpike,
    Sum,
    Terms,
)
from summability import numeric
from summability.series import (
    CoefficientSpec,
    SeriesSpec,
    brute_force_h,
    construct_divergent_coeffs,
    h_bound,
    operator_norm_check,
    parse_coefficients,
    parse_series,
    subset_sum_wp,
    swp_membership,
    weak_star_wp_membership,
    weak_wp_membership,
)

POLICY = CheckpointPolicy()


@pytest.mark.criterion(1, "cube-spike: exact Cesàro means at r^3, w_1 verdict ConvergesTo(0), < 5 s")
def test_criterion_01_cube_spike():
    t0 = time.perf_counter()
    seq = CubeSpike()
    for r in (3, 10, 50, 100):
        assert cesaro_mean(seq, r**3) == Point.of(Fraction(r * (r + 1), 2 * r**3))
    v = wp_verdict(seq, 1, POLICY)
    assert v.outcome is Outcome.CONVERGES and v.limit == Point.of(0)
    final = v.evidence[-1][1]
    assert final == Fraction(405, 65536)  # oracles.residual(cube_spike_fast(524288), 0, 1)
    assert final < Fraction(1, 100)
    assert time.perf_counter() - t0 < 5


@pytest.mark.criterion(2, "power-square-spike p=2: statistical 0, witness n_j = j^2 with exact values, w_2 Diverges")
def test_criterion_02_power_square_spike():
    seq = PowerSquareSpike(Fraction(2))
    stat = statistical_verdict(seq, POLICY)
    assert stat.outcome is Outcome.CONVERGES and stat.limit == Point.of(0)
    w = divergence_witness(seq, 2, POLICY)
    assert w is not None and w.rule == "squares"
    assert w.indices[:5] == (1, 4, 9, 16, 25)
    assert w.values[:3] == (1, Fraction(5, 4), Fraction(14, 9))
    for j, (n, value) in enumerate(zip(w.indices, w.values), 1):
        assert n == j * j
        assert value == Fraction(sum(i * i for i in range(1, j + 1)), j * j)
    assert wp_verdict(seq, 2, POLICY).outcome is Outcome.DIVERGES


@pytest.mark.criterion(3, "cube-spike-squared p=1/2: residual r(r+1)/(2r^3) at r^3, ConvergesTo(0), mean(50^3) near 1/3")
def test_criterion_03_sharpness():
    seq = CubeSpikeSquared()
    half = Fraction(1, 2)
    for r in (3, 10, 20):
        assert strong_p_residual(seq, Point.of(0), half, r**3) == Fraction(r * (r + 1), 2 * r**3)
    assert strong_p_residual(seq, Point.of(0), half, 1000) == Fraction(55, 1000)
    v = wp_verdict(seq, half, POLICY)
    assert v.outcome is Outcome.CONVERGES and v.limit == Point.of(0)
    gap = abs(cesaro_mean(seq, 50**3).scalar - Fraction(1, 3))
    assert gap == Fraction(151, 15000)
    assert gap < 0.05


@pytest.mark.criterion(4, "alt-neg: statistical Inconclusive with mass 1/2, even means -1/2, no Cauchy anchor")
def test_criterion_04_alt_neg():
    seq = AltNeg()
    v = statistical_verdict(seq, POLICY)
    assert v.outcome is Outcome.INCONCLUSIVE
    assert abs(v.details["cluster_mass"] - Fraction(1, 2)) <= Fraction(1, 50)
    evens = list(range(2, 20001, 2)) + [c for c in POLICY.checkpoints if c % 2 == 0]
    assert all(m == Point.of(Fraction(-1, 2)) for m in cesaro_means(seq, evens))
    r = statistical_cauchy_check(seq, Fraction(1, 2), 1, POLICY)
    assert r.found_p0 is None
    assert abs(r.min_density - Fraction(1, 2)) <= Fraction(1, 50)


def connor_specs(count=200, seed=0xC0):
    """Bounded constants with seeded noise planted on a density-zero set."""
    rng = random.Random(seed)
    specs = []
    for i in range(count):
        d = rng.choice((1, 2))
        L = Point(tuple(round(rng.uniform(-5, 5), 3) for _ in range(d)))
        where = rng.choice((Cubes(), Squares()))
        noise = HashNoise(d, rng.uniform(0.5, 5.0), seed=rng.getrandbits(32))
        specs.append(Masked(where, Sum(Constant(L), noise), Constant(L)))
    return specs


@pytest.mark.criterion(5, "Connor suite: 200 bounded specs agree (statistical vs w_p) for p in {1,2}, < 60 s")
def test_criterion_05_connor_suite():
    t0 = time.perf_counter()
    inconsistent = []
    for spec in connor_specs():
        L = spec.outside.value
        for p in (1, 2):
            r = connor_cross_check(spec, p, POLICY)
            ok = (
                r.consistent
                and r.bounded_flag
                and r.stat_verdict.converges
                and r.wp_verdict.converges
                and max(abs(a - b) for a, b in zip(r.stat_verdict.limit.coords, r.wp_verdict.limit.coords)) <= POLICY.abs_tol
                and max(abs(a - b) for a, b in zip(r.wp_verdict.limit.coords, L.coords)) <= POLICY.abs_tol
            )
            if not ok:
                inconsistent.append((spec.describe(), p, str(r.stat_verdict), str(r.wp_verdict)))
    assert inconsistent == []
    assert time.perf_counter() - t0 < 60


@pytest.mark.criterion(6, "constructor: block tables, sign/magnitude of a_i, induced series Diverges with witness")
def test_criterion_06_constructor():
    ones = construct_divergent_coeffs(Terms("const", Point.of(1)), 2)
    assert [(b.end, b.block_sum) for b in ones.blocks] == [(5, Fraction(5, 2)), (22, Fraction(17, 4))]
    assert oracles.constructor_blocks(lambda i: 1, 2) == [(5, Fraction(5, 2)), (22, Fraction(17, 4))]
    recip = construct_divergent_coeffs(Terms("harmonic", Point.of(1)), 1)
    assert recip.blocks[0].end == 31 == oracles.constructor_blocks(lambda i: Fraction(1, i), 1)[0][0]

    for f in (Terms("const", Point.of(1)), Terms("altsign", Point.of(1)), Terms("harmonic", Point.of(1))):
        c = construct_divergent_coeffs(f, 1)
        n = 5000
        a = c.coeffs.rule.block(1, n + 1)[:, 0]
        fv = f.block(1, n + 1)[:, 0]
        t = c.coeffs.rule.block_of(np.arange(1, n + 1))
        assert all(ai * fi >= 0 for ai, fi in zip(a, fv))
        assert all(abs(ai) == Fraction(1, 2**int(ti)) for ai, ti in zip(a, t))
        for b in c.blocks:
            assert b.block_sum > 2**b.t

    # the induced series x_i = f_i with the constructed coefficients
    for f in (Terms("const", Point.of(1.0)), Terms("altsign", Point.of(1.0))):
        c = construct_divergent_coeffs(f, 2)
        v = swp_membership(SeriesSpec(f), c.coeffs, 1, POLICY)
        assert v.outcome is Outcome.DIVERGES and v.certificate == "witness"
        assert v.details["witness"] is not None


def random_series(rng, d, n):
    rows = [[Fraction(rng.randint(-20, 20), rng.randint(1, 12)) for _ in range(d)] for _ in range(n)]
    return rows, SeriesSpec(FileSequence(numeric.as_exact_array([v for r in rows for v in r]).reshape(n, d)))


@pytest.mark.criterion(7, "H closed form equals exhaustive sign-pattern maximum on 100 series, exactly, < 10 s")
def test_criterion_07_h_oracle():
    rng = random.Random(0x7)
    t0 = time.perf_counter()
    for i in range(100):
        d, n = rng.randint(1, 3), rng.randint(1, 12)
        rows, s = random_series(rng, d, n)
        closed = h_bound(s, n)
        exhaustive = brute_force_h(s.terms.block(1, n + 1))
        assert closed == exhaustive
        if i % 10 == 0:  # the pure-Python oracle is slow; spot-check it
            assert closed == oracles.sign_pattern_h(rows)
    assert time.perf_counter() - t0 < 10


@pytest.mark.criterion(8, "operator bound ||T(a)|| <= H ||a|| + 0.1 on 50 seeded coefficient specs")
def test_criterion_08_operator_bound():
    series = parse_series("geom:base=1/2,dir=(1,0)+geom:base=1/3,dir=(0,1)", exact=False)
    rng = random.Random(0x8)
    samples = [CoefficientSpec(HashNoise(1, rng.uniform(0.05, 1.0), seed=i), 1.0) for i in range(50)]
    rep = operator_norm_check(series, samples, 1, POLICY)
    assert rep.H == pytest.approx(1.0)
    assert len(rep.samples) == 50
    assert all(s.bound_ok is True for s in rep.samples)


BUILTIN_SERIES = ("geom:base=1/2,dir=(1,0)", "harmonic:dir=(1,0)", "altharmonic:dir=(1,0)", "geom:base=1/3,dir=(1,-1)")
BUILTIN_COEFFS = ("const:1", "altsign", "reciprocal", "geom:1/2", "const:0")


@pytest.mark.criterion(9, "weak w_p aggregate matches S_wp membership on builtin pairs, p in {1,2}")
def test_criterion_09_finite_dimensional_collapse():
    mismatches = []
    for s_dsl in BUILTIN_SERIES:
        s = parse_series(s_dsl, exact=False)
        for c_dsl in BUILTIN_COEFFS:
            c = parse_coefficients(c_dsl, exact=False)
            for p in (1, 2):
                strong = swp_membership(s, c, p, POLICY)
                weak = weak_wp_membership(s, c, None, p, POLICY).aggregate
                same = strong.outcome is weak.outcome
                if same and strong.converges:
                    same = max(abs(a - b) for a, b in zip(strong.limit.coords, weak.limit.coords)) <= 0.1
                if not same:
                    mismatches.append((s_dsl, c_dsl, p, str(strong), str(weak)))
    assert mismatches == []


@pytest.mark.criterion(10, "weak* chain: 50 bounded specs converge; subset sums over evens/odds/cubes hit exact limits")
def test_criterion_10_weak_star_chain():
    fs = parse_series("geom:base=1/2,dir=(1,1)", exact=False)
    for i in range(50):
        c = CoefficientSpec(HashNoise(1, 1.0, seed=0x1000 + i), 1.0)
        assert weak_star_wp_membership(fs, c, None, 1, POLICY).aggregate.converges
    f1 = parse_series("geom:base=1/2,dir=(1,0)", exact=False)
    x = Point.of(1.0, 0.0)
    expected = {
        "evens": (Evens(), Fraction(1, 3)),
        "odds": (Odds(), Fraction(2, 3)),
        "cubes": (Cubes(), oracles.geometric_subseries(Fraction(1, 2), lambda i: oracles.perfect_root(i, 3) is not None, 64)),
    }
    for name, (M, limit) in expected.items():
        v = subset_sum_wp(f1, M, x, 1, POLICY)
        assert v.converges, name
        assert v.limit.scalar == pytest.approx(float(limit), abs=1e-12), name


@pytest.mark.criterion(11, "determinism: identical CLI runs give byte-identical reports")
def test_criterion_11_determinism(tmp_path):
    runs = [
        ["wp", "--seq", "cube-spike", "--p", "1", "--mode", "exact"],
        ["weak", "--series", "geom:base=1/2,dir=(1,0)", "--coeffs", "const:1", "--p", "1", "--count", "8"],
        ["opnorm", "--series", "geom:base=1/2,dir=(1,0)", "--p", "1", "--samples", "3", "--seed", "beef", "--count", "8"],
        ["density", "--set", "cubes", "--format", "csv"],
    ]
    env = dict(os.environ, SUMMABILITY_SEED="1234")
    for i, args in enumerate(runs):
        outputs = []
        for k in range(2):
            out = tmp_path / f"run{i}_{k}"
            proc = subprocess.run([sys.executable, "-m", "summability", *args, "--out", str(out)], env=env,
                                  capture_output=True, text=True)
            assert proc.returncode == 0, proc.stderr
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]
        assert outputs[0]
