"""Reproduce the worked sequence examples: exact means, residuals, verdicts.

    python3 scripts/reproduce_examples.py [--count 14]
"""

import argparse
import time
from fractions import Fraction

from summability import CheckpointPolicy, Point
from summability.core import (
    cesaro_mean,
    divergence_witness,
    statistical_cauchy_check,
    statistical_verdict,
    strong_p_residual,
    wp_verdict,
)
from summability.sequence_model import AltNeg, CubeSpike, CubeSpikeSquared, PowerSquareSpike


def show(title, rows):
    print(f"\n== {title}")
    for row in rows:
        print("  " + row)


def cube_spike(policy):
    seq = CubeSpike()
    rows = [f"mean(r^3) r={r:>3}: {cesaro_mean(seq, r**3).scalar}" for r in (3, 10, 50, 100)]
    v = wp_verdict(seq, 1, policy)
    rows.append(f"w_1 verdict: {v}  final residual {v.evidence[-1][1]} ~ {float(v.evidence[-1][1]):.3g}")
    show("cube-spike, p = 1", rows)


def power_square_spike(policy):
    seq = PowerSquareSpike(Fraction(2))
    w = divergence_witness(seq, 2, policy)
    rows = [
        f"statistical: {statistical_verdict(seq, policy)}",
        f"witness along {w.rule}: " + ", ".join(str(v) for v in w.values[:6]) + ", ...",
        f"w_2 verdict: {wp_verdict(seq, 2, policy)}",
    ]
    show("power-square-spike, p = 2", rows)


def sharpness(policy):
    seq = CubeSpikeSquared()
    half = Fraction(1, 2)
    rows = [f"residual(r^3) r={r:>3}: {strong_p_residual(seq, Point.of(0), half, r**3)}" for r in (3, 10, 20)]
    rows.append(f"w_1/2 verdict: {wp_verdict(seq, half, policy)}")
    rows.append(f"mean(50^3) = {float(cesaro_mean(seq, 50**3).scalar):.6f} (tends to 1/3)")
    show("cube-spike-squared, p = 1/2", rows)


def alt_neg(policy):
    seq = AltNeg()
    v = statistical_verdict(seq, policy)
    r = statistical_cauchy_check(seq, Fraction(1, 2), 1, policy)
    rows = [
        f"statistical: {v}, densest cluster mass {v.details['cluster_mass']}",
        f"mean at n=1000: {cesaro_mean(seq, 1000).scalar}",
        f"Cauchy anchor: {r.found_p0}, min density {r.min_density}",
    ]
    show("alt-neg", rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=14, help="number of checkpoints")
    args = ap.parse_args()
    policy = CheckpointPolicy(count=args.count)
    t0 = time.perf_counter()
    for fn in (cube_spike, power_square_spike, sharpness, alt_neg):
        fn(policy)
    print(f"\ndone in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
