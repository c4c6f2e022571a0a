"""Checkpoint schedules and the three-way verdict used by every limit test."""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .sequence_model import Point


@dataclass(frozen=True)
class CheckpointPolicy:
    """Geometric evaluation schedule n0, n0*g, n0*g^2, ... plus decision thresholds.

    ``zero_floor`` treats a residual at or below it as numerically zero, which
    keeps constant floating sequences from failing the decay test on rounding
    noise.
    """

    n0: int = 64
    growth: Fraction | float = 2
    count: int = 14
    abs_tol: float = 0.1
    decay_ratio: float = 0.2
    div_threshold: float = 10.0
    band: float = 0.02
    zero_floor: float = 1e-12

    def __post_init__(self):
        if int(self.n0) != self.n0 or self.n0 < 1:
            raise ValueError("n0 must be a positive integer")
        if not self.growth > 1:
            raise ValueError("growth must exceed 1")
        if int(self.count) != self.count or self.count < 3:
            raise ValueError("count must be an integer >= 3")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if not 0 < self.decay_ratio <= 1:
            raise ValueError("decay_ratio must lie in (0, 1]")
        if not self.div_threshold > self.abs_tol:
            raise ValueError("div_threshold must exceed abs_tol")
        if not 0 < self.band < 1:
            raise ValueError("band must lie in (0, 1)")
        if self.zero_floor < 0:
            raise ValueError("zero_floor must be nonnegative")

    @property
    def checkpoints(self) -> list[int]:
        g = Fraction(self.growth) if not isinstance(self.growth, float) else Fraction(self.growth)
        out: list[int] = []
        for i in range(int(self.count)):
            n = int(Fraction(int(self.n0)) * g**i)
            out.append(max(n, out[-1] + 1) if out else n)
        return out

    @property
    def final(self) -> int:
        return self.checkpoints[-1]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["growth"] = str(self.growth) if isinstance(self.growth, Fraction) else self.growth
        return d


class Outcome(str, enum.Enum):
    CONVERGES = "ConvergesTo"
    DIVERGES = "Diverges"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a limit test with its checkpoint evidence.

    ``certificate`` says how much the outcome is worth: ``"truncation"`` for
    behaviour observed up to the last checkpoint, ``"witness"`` for a
    divergence certified by a subsequence, ``"none"`` for Inconclusive.
    """

    outcome: Outcome
    limit: Point | None = None
    evidence: tuple = ()
    notes: tuple = ()
    certificate: str = "none"
    details: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def converges(self) -> bool:
        return self.outcome is Outcome.CONVERGES

    @property
    def diverges(self) -> bool:
        return self.outcome is Outcome.DIVERGES

    def __str__(self):
        if self.converges:
            return f"ConvergesTo({self.limit})"
        return self.outcome.value


def classify(values, policy: CheckpointPolicy) -> Outcome:
    """Three-way decision on a checkpoint sequence of nonnegative residuals."""
    values = list(values)
    if len(values) < 3:
        return Outcome.INCONCLUSIVE
    first, final = values[0], values[-1]
    if final < policy.abs_tol and (final < policy.decay_ratio * first or final <= policy.zero_floor):
        return Outcome.CONVERGES
    a, b, c = values[-3:]
    if final > policy.div_threshold and a < b < c:
        return Outcome.DIVERGES
    return Outcome.INCONCLUSIVE


def strictly_increasing_tail(values, length: int = 3) -> bool:
    tail = list(values)[-length:]
    return len(tail) == length and all(x < y for x, y in zip(tail, tail[1:]))
