"""Natural density of index sets.

``prefix_density(A, n)`` is the exact ratio card{k <= n : k in A} / n; the
asymptotic density is decided on a checkpoint schedule.  The structured sets
(cubes, squares, progressions, parities) carry their closed-form density and
a verdict on them must agree with it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .checkpoints import CheckpointPolicy, Outcome, Verdict
from .errors import ModeError, ParseError
from .sequence_model import (
    BLOCK,
    Norm,
    Point,
    SequenceSpec,
    integer_root_mask,
    parse_point,
    parse_sequence,
    split_params,
)
from . import numeric

# A set is declared null when its last prefix density is below this.
ZERO_DENSITY = Fraction(1, 100)


class IndexSetSpec:
    """A subset of the positive integers given by a membership rule."""

    def contains(self, k: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def closed_form(self) -> Fraction | None:
        """Known asymptotic density, or None."""
        return None

    def mask_blocks(self, stop: int, size: int = BLOCK) -> Iterator[tuple[int, np.ndarray]]:
        for start in range(1, stop + 1, size):
            yield start, self.contains(np.arange(start, min(start + size, stop + 1), dtype=np.int64))

    def describe(self) -> str:
        return type(self).__name__.lower()


@dataclass(frozen=True)
class Cubes(IndexSetSpec):
    def contains(self, k):
        return integer_root_mask(k, 3)[1]

    def closed_form(self):
        return Fraction(0)

    def describe(self):
        return "cubes"


@dataclass(frozen=True)
class Squares(IndexSetSpec):
    def contains(self, k):
        return integer_root_mask(k, 2)[1]

    def closed_form(self):
        return Fraction(0)

    def describe(self):
        return "squares"


@dataclass(frozen=True)
class ArithmeticProgression(IndexSetSpec):
    """{a, a + step, a + 2 step, ...}."""

    a: int = 1
    step: int = 1

    def __post_init__(self):
        if self.a < 1 or self.step < 1:
            raise ValueError("progression needs a >= 1 and step >= 1")

    def contains(self, k):
        return (k >= self.a) & ((k - self.a) % self.step == 0)

    def closed_form(self):
        return Fraction(1, self.step)

    def describe(self):
        return f"ap:a={self.a},step={self.step}"


@dataclass(frozen=True)
class Evens(IndexSetSpec):
    def contains(self, k):
        return k % 2 == 0

    def closed_form(self):
        return Fraction(1, 2)

    def describe(self):
        return "evens"


@dataclass(frozen=True)
class Odds(IndexSetSpec):
    def contains(self, k):
        return k % 2 == 1

    def closed_form(self):
        return Fraction(1, 2)

    def describe(self):
        return "odds"


@dataclass(frozen=True)
class Naturals(IndexSetSpec):
    def contains(self, k):
        return np.ones(len(k), dtype=bool)

    def closed_form(self):
        return Fraction(1)

    def describe(self):
        return "naturals"


@dataclass(frozen=True)
class Explicit(IndexSetSpec):
    """A finite list of indices (possibly empty)."""

    members: tuple = ()

    def contains(self, k):
        return np.isin(k, np.array(self.members, dtype=np.int64))

    def closed_form(self):
        return Fraction(0)

    def describe(self):
        return "list:" + ";".join(str(m) for m in self.members)


@dataclass(frozen=True)
class Complement(IndexSetSpec):
    inner: IndexSetSpec

    def contains(self, k):
        return ~self.inner.contains(k)

    def mask_blocks(self, stop, size=BLOCK):
        for start, mask in self.inner.mask_blocks(stop, size):
            yield start, ~mask

    def closed_form(self):
        c = self.inner.closed_form()
        return None if c is None else 1 - c

    def describe(self):
        return f"not({self.inner.describe()})"


@dataclass(frozen=True)
class Union(IndexSetSpec):
    left: IndexSetSpec
    right: IndexSetSpec

    def contains(self, k):
        return self.left.contains(k) | self.right.contains(k)

    def mask_blocks(self, stop, size=BLOCK):
        for (start, a), (_, b) in zip(self.left.mask_blocks(stop, size), self.right.mask_blocks(stop, size)):
            yield start, a | b

    def describe(self):
        return f"({self.left.describe()})|({self.right.describe()})"


@dataclass(frozen=True)
class Exceed(IndexSetSpec):
    """{k : ||x_k - L|| >= eps} for a sequence, a centre L and eps > 0."""

    seq: SequenceSpec
    center: Point
    eps: Fraction | float
    norm: Norm = Norm.MAX

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.center.exact and not self.seq.exact:
            object.__setattr__(self, "center", self.center.to_float())
        elif self.seq.exact and not self.center.exact:
            raise ModeError("floating centre for an exact sequence")

    def _mask(self, rows):
        diff = numeric.sub(rows, self.center.as_array()[None, :], self.seq.exact)
        return self.norm.rows_ge(diff, self.eps, self.seq.exact)

    def contains(self, k):
        k = np.asarray(k, dtype=np.int64)
        if len(k) and np.all(np.diff(k) == 1):
            return self._mask(self.seq.block(int(k[0]), int(k[-1]) + 1))
        return np.array([bool(self._mask(self.seq.block(int(i), int(i) + 1))[0]) for i in k], dtype=bool)

    def mask_blocks(self, stop, size=BLOCK):
        for start, rows in self.seq.blocks(stop, size):
            yield start, self._mask(rows)

    def describe(self):
        return f"exceed:seq=[{self.seq.describe()}],L={self.center},eps={self.eps}"


# ----------------------------------------------------------- operations ---


@dataclass(frozen=True)
class DensityEstimate:
    table: tuple  # ((n, d_n), ...), d_n exact
    verdict: Verdict


def prefix_counts(index_set: IndexSetSpec, stops) -> list[int]:
    """card{k <= n : k in A} at each n of an increasing list of stops."""
    stops = list(stops)
    out, acc, si = [], 0, 0
    for start, mask in index_set.mask_blocks(stops[-1]):
        end = start + len(mask)
        pos = 0
        while si < len(stops) and stops[si] < end:
            cut = stops[si] - start + 1
            acc += int(np.count_nonzero(mask[pos:cut]))
            out.append(acc)
            pos = cut
            si += 1
        acc += int(np.count_nonzero(mask[pos:]))
    return out


def prefix_density(index_set: IndexSetSpec, n: int) -> Fraction:
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    return Fraction(prefix_counts(index_set, [int(n)])[0], int(n))


def classify_density(table, policy: CheckpointPolicy, closed: Fraction | None = None) -> Verdict:
    """Decide the limit of a prefix-density table.

    A limit c is only claimed when each of the last three checkpoints lies
    within ``policy.band`` of c.
    """
    values = [d for _, d in table]
    evidence = tuple(table)
    if len(values) < 3:
        return Verdict(Outcome.INCONCLUSIVE, evidence=evidence, notes=("fewer than 3 checkpoints",))
    tail = values[-3:]
    band = numeric.decimal_fraction(policy.band)

    def within(c):
        return all(abs(v - c) <= band for v in tail)

    if tail[-1] < ZERO_DENSITY and tail[0] >= tail[1] >= tail[2] and within(0):
        if closed is None or closed == 0:
            return Verdict(Outcome.CONVERGES, Point.of(0), evidence, certificate="truncation")
    if closed is not None:
        if within(closed):
            return Verdict(Outcome.CONVERGES, Point.of(closed), evidence, ("closed-form density",), "truncation")
        return Verdict(Outcome.INCONCLUSIVE, evidence=evidence, notes=(f"prefix table disagrees with closed form {closed}",))
    if within(tail[-1]):
        return Verdict(Outcome.CONVERGES, Point.of(tail[-1]), evidence, ("prefix densities stabilised",), "truncation")
    return Verdict(Outcome.INCONCLUSIVE, evidence=evidence, notes=("prefix densities have not stabilised",))


def density_verdict(index_set: IndexSetSpec, policy: CheckpointPolicy | None = None) -> DensityEstimate:
    policy = policy or CheckpointPolicy()
    stops = policy.checkpoints
    table = tuple((n, Fraction(c, n)) for n, c in zip(stops, prefix_counts(index_set, stops)))
    return DensityEstimate(table, classify_density(table, policy, index_set.closed_form()))


# ------------------------------------------------------------------ DSL ---


def parse_index_set(dsl: str, exact: bool = True) -> IndexSetSpec:
    """Parse ``cubes``, ``squares``, ``ap:a=1,step=3``, ``evens``, ``odds``,
    ``naturals``, ``list:1;4;9`` (``list:`` alone is the empty set) and
    ``exceed:seq=<dsl>,L=<point>,eps=<rational>``."""
    name, _, rest = dsl.strip().partition(":")
    simple = {"cubes": Cubes, "squares": Squares, "evens": Evens, "odds": Odds, "naturals": Naturals}
    if name in simple:
        if rest:
            raise ParseError(f"{name} takes no parameters")
        return simple[name]()
    if name == "ap":
        params = split_params(rest)
        if set(params) - {"a", "step"}:
            raise ParseError(f"unknown ap parameter(s): {sorted(set(params) - {'a', 'step'})}")
        try:
            return ArithmeticProgression(int(params.get("a", 1)), int(params.get("step", 1)))
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    if name in ("list", "empty"):
        items = [s for s in rest.replace(",", ";").split(";") if s.strip()]
        try:
            return Explicit(tuple(sorted({int(s) for s in items})))
        except ValueError as exc:
            raise ParseError(f"bad index list {rest!r}") from exc
    if name == "exceed":
        params = split_params(rest)
        missing = {"seq", "L", "eps"} - set(params)
        if missing:
            raise ParseError(f"exceed needs {', '.join(sorted(missing))}")
        seq = parse_sequence(params["seq"].strip("[]"), exact)
        center = parse_point(params["L"], exact)
        eps = numeric.parse_rational(params["eps"])
        return Exceed(seq, center if seq.exact else center.to_float(), eps)
    raise ParseError(f"unknown index set {name!r}")
