"""Sweep bounded and unbounded specs through the statistical / w_p cross-check.

Bounded specs must never disagree; unbounded spikes on the squares show the
expected split (statistically null, not w_p summable).

    python3 scripts/connor_sweep.py --specs 40 --seed 0xc0
"""

import argparse
import random
import time
from collections import Counter

from summability import CheckpointPolicy, Point
from summability.core import connor_cross_check
from summability.density import Cubes, Squares
from summability.sequence_model import Constant, HashNoise, Masked, PowerSquareSpike, Sum


def bounded_spec(rng):
    d = rng.choice((1, 2))
    L = Point(tuple(round(rng.uniform(-5, 5), 3) for _ in range(d)))
    noise = HashNoise(d, rng.uniform(0.5, 5.0), seed=rng.getrandbits(32))
    return Masked(rng.choice((Cubes(), Squares())), Sum(Constant(L), noise), Constant(L))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--specs", type=int, default=40)
    ap.add_argument("--seed", type=lambda s: int(s, 0), default=0xC0)
    ap.add_argument("--p", type=int, nargs="+", default=[1, 2])
    args = ap.parse_args()

    rng = random.Random(args.seed)
    policy = CheckpointPolicy()
    tally = Counter()
    t0 = time.perf_counter()
    for _ in range(args.specs):
        spec = bounded_spec(rng)
        for p in args.p:
            r = connor_cross_check(spec, p, policy)
            tally[(r.bounded_flag, str(r.stat_verdict.outcome.value), r.wp_verdict.outcome.value, r.consistent)] += 1
    for p in args.p:
        r = connor_cross_check(PowerSquareSpike(2), p, policy)
        tally[(r.bounded_flag, r.stat_verdict.outcome.value, r.wp_verdict.outcome.value, r.consistent)] += 1

    print(f"{'bounded':>8} {'statistical':>13} {'w_p':>13} {'consistent':>10} {'count':>6}")
    for (bounded, s, w, ok), n in sorted(tally.items()):
        print(f"{bounded!s:>8} {s:>13} {w:>13} {ok!s:>10} {n:>6}")
    print(f"{sum(tally.values())} checks in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
