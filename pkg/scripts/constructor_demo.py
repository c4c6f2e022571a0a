"""Build blockwise divergent coefficients for a few f and check the induced series.

    python3 scripts/constructor_demo.py --blocks 3
"""

import argparse

from summability import CheckpointPolicy, Point
from summability.errors import BudgetError
from summability.sequence_model import Terms
from summability.series import SeriesSpec, construct_divergent_coeffs, swp_membership

RULES = {"ones": "const", "altsign": "altsign", "reciprocal": "harmonic"}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--blocks", type=int, default=3)
    ap.add_argument("--budget", type=int, default=10**6)
    args = ap.parse_args()
    policy = CheckpointPolicy()

    for label, rule in RULES.items():
        print(f"\n== f = {label}")
        try:
            # 1/i needs ~e^(4^t) indices per block; exact Fractions are too slow there
            one = Point.of(1.0) if rule == "harmonic" else Point.of(1)
            c = construct_divergent_coeffs(Terms(rule, one), args.blocks, args.budget, label)
            blocks = c.blocks
        except BudgetError as exc:
            blocks = exc.blocks
            print(f"  budget of {args.budget} reached in block {len(blocks) + 1}; block sum so far {float(exc.prefix_sum):.4f}")
            c = None
        print(f"  {'t':>2} {'start':>8} {'m_t':>8} {'a_i':>8} {'block sum':>12}")
        for b in blocks:
            print(f"  {b.t:>2} {b.start:>8} {b.end:>8} {str(b.coefficient):>8} {str(b.block_sum):>12}")
        if c is not None and rule != "harmonic":
            f = Terms(rule, Point.of(1.0))
            v = swp_membership(SeriesSpec(f), construct_divergent_coeffs(f, 1).coeffs, 1, policy)
            print(f"  induced series sum a_i f_i: {v} ({v.certificate})")


if __name__ == "__main__":
    main()
