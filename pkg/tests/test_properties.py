"""Property-based checks against the brute-force oracles."""

from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st

import oracles
from summability import numeric, report
from summability.core import cesaro_mean, cesaro_means, find_cluster, strong_p_residual
from summability.density import ArithmeticProgression, prefix_density
from summability.sequence_model import FileSequence, HashNoise, Norm, Point
from summability.series import SeriesSpec, brute_force_h, construct_divergent_coeffs, h_bound

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def exact_file(rows):
    flat = numeric.as_exact_array([v for r in rows for v in r])
    return FileSequence(flat.reshape(len(rows), -1))


@given(st.integers(1, 50), st.integers(1, 20), st.integers(1, 3000))
def test_progression_density(a, step, n):
    ap = ArithmeticProgression(a, step)
    assert prefix_density(ap, n) == oracles.prefix_density(lambda k: k >= a and (k - a) % step == 0, n)


@given(st.lists(rationals, min_size=1, max_size=60))
def test_mean_matches_oracle(xs):
    seq = exact_file([[x] for x in xs])
    assert cesaro_mean(seq, len(xs)) == Point.of(oracles.mean(xs))


@given(st.lists(rationals, min_size=3, max_size=60), st.data())
def test_means_at_stops_match_single_means(xs, data):
    seq = exact_file([[x] for x in xs])
    stops = sorted(data.draw(st.sets(st.integers(1, len(xs)), min_size=1, max_size=5)))
    assert cesaro_means(seq, stops) == [cesaro_mean(seq, n) for n in stops]


@given(st.lists(rationals, min_size=1, max_size=40), rationals, st.integers(1, 3))
def test_residual_matches_oracle(xs, L, p):
    seq = exact_file([[x] for x in xs])
    assert strong_p_residual(seq, Point.of(L), p, len(xs)) == oracles.residual(xs, L, p)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.lists(st.lists(rationals, min_size=d, max_size=d), min_size=1, max_size=9)))
def test_h_closed_form_is_the_sign_pattern_maximum(rows):
    s = SeriesSpec(exact_file(rows))
    closed = h_bound(s, len(rows))
    assert closed == brute_force_h(s.terms.block(1, len(rows) + 1))
    assert closed == oracles.sign_pattern_h(rows)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3).filter(bool), min_size=1, max_size=8))
def test_constructor_matches_counting(pattern):
    # f repeats a nonzero integer pattern, so every block closes
    f_vals = [pattern[(i - 1) % len(pattern)] for i in range(1, 200)]
    c = construct_divergent_coeffs(exact_file([[v] for v in f_vals]), 2)
    assert [(b.end, b.block_sum) for b in c.blocks] == oracles.constructor_blocks(lambda i: f_vals[i - 1], 2)
    a = c.coeffs.rule.block(1, c.blocks[-1].end + 1)[:, 0]
    assert all(ai * fi > 0 for ai, fi in zip(a, f_vals))


@given(st.integers(1, 3), st.floats(0.01, 100), st.integers(0, 2**32), st.integers(1, 10**9))
def test_noise_is_bounded_and_pure(dim, amp, seed, start):
    h = HashNoise(dim, amp, seed=seed)
    block = h.block(start, start + 50)
    assert np.abs(block).max() <= amp
    assert np.array_equal(block[7], h.block(start + 7, start + 8)[0])


@given(st.integers(0, 2**32), st.floats(-5, 5), st.integers(100, 400))
def test_cluster_recovers_planted_value(seed, L, m):
    noise = HashNoise(1, 50.0, seed=seed).block(1, m // 100 + 1)
    rows = np.vstack([np.full((m, 1), L), noise])
    cl = find_cluster(rows, 0.125, 0.02, Norm.MAX, exact=False)
    assert cl.center is not None and abs(cl.center.scalar - L) <= 0.125


@given(rationals)
def test_report_scalars_round_trip(x):
    assert Fraction(report.scalar(x)) == x


@given(st.lists(rationals, min_size=1, max_size=4), st.lists(rationals, min_size=1, max_size=4))
def test_point_addition_commutes(a, b):
    d = min(len(a), len(b))
    p, q = Point(tuple(a[:d])), Point(tuple(b[:d]))
    assert p + q == q + p
    assert (p + q) - q == p
