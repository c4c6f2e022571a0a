"""Points, norms and deterministic sequence generators.

A sequence is an index rule ``k -> x_k`` over R^d.  Every generator evaluates
whole index blocks at once (``block(start, stop)``) so analyses can sweep
``10^6`` indices without storing the prefix.
"""

from __future__ import annotations

import csv
import enum
import io
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator

import numpy as np

from . import numeric
from .errors import ModeError, OutOfRangeError, ParseError

BLOCK = 1 << 16


# ---------------------------------------------------------------- points ---


@dataclass(frozen=True)
class Point:
    """A vector in R^d with homogeneous exact (int/Fraction) or float coordinates."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(self.coords)
        if not coords:
            raise ValueError("a Point needs at least one coordinate")
        kinds = {_kind(c) for c in coords}
        if len(kinds) != 1:
            raise ModeError(f"mixed exact/float coordinates: {coords!r}")
        if kinds == {"exact"}:
            coords = tuple(numeric.normalize(Fraction(c)) if not type(c) is int else c for c in coords)
        else:
            coords = tuple(float(c) for c in coords)
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, *coords) -> "Point":
        return cls(tuple(coords))

    @classmethod
    def zero(cls, dim: int, exact: bool = True) -> "Point":
        return cls((0,) * dim if exact else (0.0,) * dim)

    @classmethod
    def from_row(cls, row, exact: bool) -> "Point":
        if exact:
            return cls(tuple(int(v) if isinstance(v, (int, np.integer)) else v for v in row))
        return cls(tuple(float(v) for v in row))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def exact(self) -> bool:
        return _kind(self.coords[0]) == "exact"

    @property
    def scalar(self):
        if self.dim != 1:
            raise ValueError("scalar access on a point with d > 1")
        return self.coords[0]

    def _check(self, other: "Point"):
        if not isinstance(other, Point):
            return NotImplemented
        if other.exact != self.exact:
            raise ModeError("exact and floating points cannot be combined")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return other

    def __add__(self, other: "Point") -> "Point":
        other = self._check(other)
        return Point(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Point") -> "Point":
        other = self._check(other)
        return Point(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Point":
        return Point(tuple(-a for a in self.coords))

    def scale(self, alpha) -> "Point":
        if _kind(alpha) != ("exact" if self.exact else "float"):
            raise ModeError("scalar and point modes differ")
        return Point(tuple(alpha * a for a in self.coords))

    def to_float(self) -> "Point":
        return Point(tuple(float(c) for c in self.coords))

    def as_array(self) -> np.ndarray:
        if self.exact:
            return numeric.as_exact_array(self.coords)
        return np.array(self.coords, dtype=np.float64)

    def __str__(self) -> str:
        body = ",".join(str(c) for c in self.coords)
        return body if self.dim == 1 else f"({body})"


def _kind(x) -> str:
    if isinstance(x, bool):
        raise TypeError("booleans are not coordinates")
    if numeric.is_exact_scalar(x) or isinstance(x, np.integer):
        return "exact"
    if isinstance(x, (float, np.floating)):
        return "float"
    raise TypeError(f"unsupported coordinate type {type(x).__name__}")


class Norm(enum.Enum):
    """Norm on R^d.  Max-norm is the default throughout."""

    MAX = "max"
    EUCLIDEAN = "euclidean"

    def of(self, point: Point):
        """Norm of a point; exact for max-norm, exact-or-ModeError for euclidean."""
        if self is Norm.MAX:
            return max(abs(c) for c in point.coords)
        sq = sum(c * c for c in point.coords)
        if point.exact:
            return numeric.exact_power(sq, Fraction(1, 2))
        return math.sqrt(sq)

    def dual(self) -> "DualNorm":
        return DualNorm.L1 if self is Norm.MAX else DualNorm.L2

    # ---- row-wise helpers on (m, d) arrays
    def rows_pow(self, diff: np.ndarray, p, exact: bool) -> np.ndarray:
        """``||row||**p`` for each row."""
        p = Fraction(p)
        if self is Norm.MAX:
            return numeric.power(_row_absmax(diff, exact), p, exact)
        return numeric.power(_row_sq(diff, exact), p / 2, exact)

    def rows_ge(self, diff: np.ndarray, eps, exact: bool) -> np.ndarray:
        """Mask of rows with ``||row|| >= eps``."""
        if self is Norm.MAX:
            return numeric.greater_equal(_row_absmax(diff, exact), eps, exact)
        eps2 = Fraction(eps) ** 2 if exact else float(eps) ** 2
        return numeric.greater_equal(_row_sq(diff, exact), eps2, exact)

    def rows_le(self, diff: np.ndarray, eps, exact: bool) -> np.ndarray:
        if self is Norm.MAX:
            return numeric.less_equal(_row_absmax(diff, exact), eps, exact)
        eps2 = Fraction(eps) ** 2 if exact else float(eps) ** 2
        return numeric.less_equal(_row_sq(diff, exact), eps2, exact)

    def rows_key(self, diff: np.ndarray, exact: bool) -> np.ndarray:
        """Monotone per-row size: the max-norm itself, or the squared 2-norm."""
        return _row_absmax(diff, exact) if self is Norm.MAX else _row_sq(diff, exact)

    def key_ge(self, key: np.ndarray, eps, exact: bool) -> np.ndarray:
        """``rows_ge`` on a precomputed :meth:`rows_key`."""
        if self is not Norm.MAX:
            eps = Fraction(eps) ** 2 if exact else float(eps) ** 2
        return numeric.greater_equal(key, eps, exact)

    def key_pow(self, key: np.ndarray, p, exact: bool) -> np.ndarray:
        """``rows_pow`` on a precomputed :meth:`rows_key`."""
        p = Fraction(p)
        return numeric.power(key, p if self is Norm.MAX else p / 2, exact)

    def rows_float(self, diff: np.ndarray) -> np.ndarray:
        """Approximate norms as float64, for reporting only."""
        d = numeric.to_float(diff)
        if self is Norm.MAX:
            return _row_absmax(d)
        return np.sqrt((d * d).sum(axis=1))


class DualNorm(enum.Enum):
    L1 = "l1"
    L2 = "l2"

    def of(self, coeffs) -> float:
        if self is DualNorm.L1:
            return sum(abs(c) for c in coeffs)
        return math.sqrt(sum(float(c) ** 2 for c in coeffs))


def _row_absmax(diff: np.ndarray, exact: bool = False) -> np.ndarray:
    # column loop: numpy reduces a short trailing axis slowly
    a = np.abs(diff)
    out = a[:, 0].copy()
    for j in range(1, a.shape[1]):
        np.maximum(out, a[:, j], out=out)
    return out


def _row_sq(diff: np.ndarray, exact: bool) -> np.ndarray:
    sq = numeric.mul(diff, diff, exact)
    if exact and sq.dtype == np.int64 and numeric.maxabs(sq) * diff.shape[1] >= numeric.SAFE:
        sq = sq.astype(object)
    return sq.sum(axis=1)


def parse_point(text: str, exact: bool = True) -> Point:
    """Parse ``"1/2"``, ``"(1,0)"``, ``"[1, 0]"`` or ``"1;0"``."""
    body = text.strip().strip("()[]")
    parts = [s for s in re.split(r"[,;\s]+", body) if s]
    if not parts:
        raise ParseError(f"empty point: {text!r}")
    return Point(tuple(numeric.parse_scalar(s, exact) for s in parts))


# ------------------------------------------------------------ sequences ---


class SequenceSpec:
    """Deterministic index rule ``k -> x_k`` for k = 1, 2, ...

    Subclasses implement ``block``; stateful derivations also override
    ``blocks`` so a forward sweep never recomputes a prefix.
    """

    dim: int = 1
    exact: bool = True

    def block(self, start: int, stop: int) -> np.ndarray:
        """Rows ``x_k`` for ``start <= k < stop`` as an (m, d) array."""
        raise NotImplementedError

    def blocks(self, stop: int, size: int = BLOCK) -> Iterator[tuple[int, np.ndarray]]:
        """Consecutive blocks covering ``k = 1 .. stop``."""
        for start in range(1, stop + 1, size):
            yield start, self.block(start, min(start + size, stop + 1))

    def eval(self, k: int) -> Point:
        if int(k) != k or k < 1:
            raise ValueError(f"index must be a positive integer, got {k!r}")
        return Point.from_row(self.block(int(k), int(k) + 1)[0], self.exact)

    def sup_bound(self) -> float | None:
        """Known sup of ||x_k|| (``inf`` if unbounded) or None when unknown."""
        return None

    def describe(self) -> str:
        return type(self).__name__

    def _shape(self, values: np.ndarray) -> np.ndarray:
        """Turn a 1-D int64/float64/object block into the session's (m, 1) layout."""
        if not self.exact:
            values = values.astype(np.float64)
        return values.reshape(-1, 1)


def _indices(start: int, stop: int) -> np.ndarray:
    return np.arange(start, stop, dtype=np.int64)


def integer_root_mask(k: np.ndarray, t: int) -> tuple[np.ndarray, np.ndarray]:
    """For each k, (root, is_perfect_power) with root = round(k ** (1/t))."""
    kf = k.astype(np.float64)
    root = np.rint(np.cbrt(kf) if t == 3 else np.power(kf, 1.0 / t)).astype(np.int64)
    return root, root**t == k


@dataclass(frozen=True)
class CubeSpike(SequenceSpec):
    """x_k = r when k = r^3, else 0 (unbounded, yet w_p summable to 0)."""

    exact: bool = True

    def block(self, start, stop):
        root, hit = integer_root_mask(_indices(start, stop), 3)
        return self._shape(np.where(hit, root, 0))

    def sup_bound(self):
        return math.inf

    def describe(self):
        return "cube-spike"


@dataclass(frozen=True)
class CubeSpikeSquared(SequenceSpec):
    """x_k = r^2 when k = r^3, else 0."""

    exact: bool = True

    def block(self, start, stop):
        root, hit = integer_root_mask(_indices(start, stop), 3)
        return self._shape(np.where(hit, root * root, 0))

    def sup_bound(self):
        return math.inf

    def describe(self):
        return "cube-spike-squared"


@dataclass(frozen=True)
class PowerSquareSpike(SequenceSpec):
    """x_k = j^(2/p) when k = j^2, else 0 (statistically null, not w_p summable)."""

    p: Fraction = Fraction(1)
    exact: bool = True

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        if self.p <= 0:
            raise ValueError("power-square-spike needs p > 0")
        if self.exact and self.exponent.denominator != 1:
            raise ModeError(f"2/p = {self.exponent} is not an integer; power-square-spike needs floating mode")

    @property
    def exponent(self) -> Fraction:
        return 2 / self.p

    def block(self, start, stop):
        root, hit = integer_root_mask(_indices(start, stop), 2)
        if self.exact:
            e = self.exponent.numerator
            if int(root.max(initial=0)) ** e < numeric.SAFE:
                vals = root**e
            else:
                vals = root.astype(object) ** e
            return self._shape(numeric.tighten(np.where(hit, vals, 0)))
        vals = np.power(root.astype(np.float64), float(self.exponent))
        return self._shape(np.where(hit, vals, 0.0))

    def sup_bound(self):
        return math.inf

    def describe(self):
        return f"power-square-spike:p={self.p}"


@dataclass(frozen=True)
class AltNeg(SequenceSpec):
    """x_k = -1 for odd k, 0 for even k."""

    exact: bool = True

    def block(self, start, stop):
        k = _indices(start, stop)
        return self._shape(np.where(k % 2 == 1, -1, 0).astype(np.int64))

    def sup_bound(self):
        return 1.0

    def describe(self):
        return "alt-neg"


@dataclass(frozen=True)
class Constant(SequenceSpec):
    value: Point = field(default_factory=lambda: Point.of(0))

    @property
    def dim(self):
        return self.value.dim

    @property
    def exact(self):
        return self.value.exact

    def block(self, start, stop):
        row = self.value.as_array()
        return np.tile(row, (stop - start, 1))

    def sup_bound(self):
        return float(Norm.MAX.of(self.value))

    def describe(self):
        return f"constant:value={self.value}"


@dataclass(frozen=True)
class Geometric(SequenceSpec):
    """x_k = c * q^k."""

    c: Point = field(default_factory=lambda: Point.of(1))
    q: Fraction | float = Fraction(1, 2)

    def __post_init__(self):
        if self.c.exact:
            object.__setattr__(self, "q", numeric.to_fraction(self.q))
        else:
            object.__setattr__(self, "q", float(self.q))

    @property
    def dim(self):
        return self.c.dim

    @property
    def exact(self):
        return self.c.exact

    def block(self, start, stop):
        if not self.exact:
            k = np.arange(start, stop, dtype=np.float64)
            factors = np.power(self.q, k)
            return factors[:, None] * np.array(self.c.coords, dtype=np.float64)[None, :]
        factors = []
        cur = self.q**start
        for _ in range(stop - start):
            factors.append(cur)
            cur *= self.q
        f = numeric.as_exact_array(factors)
        return numeric.tighten(numeric.mul(f[:, None], self.c.as_array()[None, :], True))

    def sup_bound(self):
        q = abs(float(self.q))
        return float(Norm.MAX.of(self.c.to_float())) * q if q <= 1 else math.inf

    def describe(self):
        return f"geometric:c={self.c},q={self.q}"


@dataclass(frozen=True)
class HashNoise(SequenceSpec):
    """Deterministic pseudo-random values in [-amplitude, amplitude]^d.

    The value at index k is a splitmix64 hash of (seed, k, coordinate), so the
    rule is a pure function of k and needs no stored state.
    """

    dim: int = 1
    amplitude: float = 1.0
    seed: int = 0
    exact: bool = False

    def __post_init__(self):
        if self.exact:
            raise ModeError("hash noise is floating-only")

    def block(self, start, stop):
        k = np.arange(start, stop, dtype=np.uint64)
        out = np.empty((stop - start, self.dim), dtype=np.float64)
        for j in range(self.dim):
            out[:, j] = _unit_hash(k, self.seed * 1000003 + j)
        return self.amplitude * (2.0 * out - 1.0)

    def sup_bound(self):
        return float(self.amplitude)

    def describe(self):
        return f"noise:amp={self.amplitude},seed={self.seed:#x},dim={self.dim}"


def _unit_hash(k: np.ndarray, salt: int) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = k * np.uint64(0x9E3779B97F4A7C15) + np.uint64(salt % (1 << 64))
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


@dataclass(frozen=True, eq=False)
class FileSequence(SequenceSpec):
    """Values read from a scalar-lines or vector-csv file; x_k is row k."""

    values: np.ndarray
    exact: bool = True
    path: str = ""

    @property
    def dim(self):
        return self.values.shape[1]

    def __len__(self):
        return self.values.shape[0]

    def block(self, start, stop):
        if stop - 1 > len(self):
            raise OutOfRangeError(f"index {stop - 1} beyond end of {self.path or 'file'} ({len(self)} rows)")
        return self.values[start - 1 : stop - 1]

    def sup_bound(self):
        if len(self) == 0:
            return 0.0
        return float(Norm.MAX.rows_float(self.values).max())

    def describe(self):
        return f"file:{self.path}"


# ----------------------------------------------------------- derivations ---


def block_from_blocks(spec: SequenceSpec, start: int, stop: int) -> np.ndarray:
    """Random access for running-state sequences: sweep forward, keep the overlap."""
    parts = []
    for s, b in spec.blocks(stop - 1):
        if s + len(b) > start:
            parts.append(b[max(start - s, 0) :])
    return np.concatenate(parts) if len(parts) > 1 else parts[0]


def _same_mode(*specs):
    modes = {s.exact for s in specs}
    if len(modes) > 1:
        raise ModeError("cannot combine exact and floating sequences")


@dataclass(frozen=True)
class Sum(SequenceSpec):
    left: SequenceSpec
    right: SequenceSpec

    def __post_init__(self):
        _same_mode(self.left, self.right)
        if self.left.dim != self.right.dim:
            raise ValueError("dimension mismatch in Sum")

    @property
    def dim(self):
        return self.left.dim

    @property
    def exact(self):
        return self.left.exact

    def block(self, start, stop):
        return numeric.add(self.left.block(start, stop), self.right.block(start, stop), self.exact)

    def sup_bound(self):
        a, b = self.left.sup_bound(), self.right.sup_bound()
        if a is None or b is None:
            return None
        return a + b

    def describe(self):
        return f"({self.left.describe()})+({self.right.describe()})"


@dataclass(frozen=True)
class Masked(SequenceSpec):
    """``inside`` on the indices of ``where`` and ``outside`` elsewhere.

    ``where`` is any object with a vectorised ``contains(k_array)`` method
    (the index sets of :mod:`summability.density`).
    """

    where: object
    inside: SequenceSpec
    outside: SequenceSpec

    def __post_init__(self):
        _same_mode(self.inside, self.outside)
        if self.inside.dim != self.outside.dim:
            raise ValueError("dimension mismatch in Masked")

    @property
    def dim(self):
        return self.inside.dim

    @property
    def exact(self):
        return self.inside.exact

    def block(self, start, stop):
        mask = self.where.contains(_indices(start, stop))
        a, b = self.inside.block(start, stop), self.outside.block(start, stop)
        if a.dtype != b.dtype:
            a, b = a.astype(object), b.astype(object)
        return np.where(mask[:, None], a, b)

    def sup_bound(self):
        a, b = self.inside.sup_bound(), self.outside.sup_bound()
        if a is None or b is None:
            return None
        return max(a, b)

    def describe(self):
        name = getattr(self.where, "describe", lambda: "set")()
        return f"mask({name};{self.inside.describe()};{self.outside.describe()})"


@dataclass(frozen=True)
class FunctionalImage(SequenceSpec):
    """Scalar sequence f(x_k) for a linear functional given by its d coefficients."""

    seq: SequenceSpec
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.seq.dim:
            raise ValueError("functional and sequence dimensions differ")
        if Point(tuple(self.coeffs)).exact != self.seq.exact:
            raise ModeError("functional and sequence modes differ")

    @property
    def dim(self):
        return 1

    @property
    def exact(self):
        return self.seq.exact

    def block(self, start, stop):
        rows = self.seq.block(start, stop)
        c = Point(tuple(self.coeffs)).as_array()
        prod = numeric.mul(rows, c[None, :], self.exact)
        if self.exact:
            if prod.dtype == np.int64 and numeric.maxabs(prod) * rows.shape[1] >= numeric.SAFE:
                prod = prod.astype(object)
            return numeric.tighten(prod.sum(axis=1).reshape(-1, 1))
        return prod.sum(axis=1).reshape(-1, 1)

    def sup_bound(self):
        b = self.seq.sup_bound()
        if b is None:
            return None
        return b * DualNorm.L1.of(self.coeffs)

    def describe(self):
        return f"f[{','.join(str(c) for c in self.coeffs)}]({self.seq.describe()})"


@dataclass(frozen=True)
class PartialSums(SequenceSpec):
    """S_n = sum_{i<=n} a_i x_i, with a_i = 1 when no coefficients are given."""

    terms: SequenceSpec
    coeffs: SequenceSpec | None = None

    def __post_init__(self):
        if self.coeffs is not None:
            _same_mode(self.terms, self.coeffs)
            if self.coeffs.dim != 1:
                raise ValueError("coefficients must be scalar")

    @property
    def dim(self):
        return self.terms.dim

    @property
    def exact(self):
        return self.terms.exact

    def _weighted(self, start, stop):
        x = self.terms.block(start, stop)
        if self.coeffs is None:
            return x
        return numeric.mul(self.coeffs.block(start, stop), x, self.exact)

    def blocks(self, stop, size=BLOCK):
        running = np.zeros((1, self.dim), dtype=np.int64 if self.exact else np.float64)
        for start in range(1, stop + 1, size):
            end = min(start + size, stop + 1)
            w = self._weighted(start, end)
            if self.exact:
                c = numeric.cumulative(w, True)
                out = numeric.add(c, running, True)
                running = out[-1:].copy()
                yield start, numeric.tighten(out) if out.dtype == object else out
            else:
                out = np.cumsum(w, axis=0) + running
                running = out[-1:].copy()
                yield start, out

    def block(self, start, stop):
        return block_from_blocks(self, start, stop)

    def describe(self):
        if self.coeffs is None:
            return f"partial({self.terms.describe()})"
        return f"partial({self.coeffs.describe()}*{self.terms.describe()})"


@dataclass(frozen=True)
class Terms(SequenceSpec):
    """x_k = c * g(k) for a named scalar rule g; backs the series and coefficient DSLs."""

    rule: str
    c: Point = field(default_factory=lambda: Point.of(1))
    q: Fraction | float | None = None

    RULES = ("const", "reciprocal", "altsign", "harmonic", "altharmonic", "geom")

    def __post_init__(self):
        if self.rule not in self.RULES:
            raise ParseError(f"unknown term rule {self.rule!r}")
        if self.rule == "geom":
            if self.q is None:
                raise ParseError("geom needs a base")
            object.__setattr__(self, "q", numeric.to_fraction(self.q) if self.c.exact else float(self.q))

    @property
    def dim(self):
        return self.c.dim

    @property
    def exact(self):
        return self.c.exact

    def _scalar(self, start, stop):
        k = _indices(start, stop)
        r = self.rule
        if r == "const":
            return np.ones(len(k), dtype=np.int64)
        if r == "altsign":
            return np.where(k % 2 == 0, 1, -1).astype(np.int64)
        if r == "geom":
            if not self.exact:
                return np.power(self.q, k.astype(np.float64))
            vals, cur = [], self.q**start
            for _ in range(stop - start):
                vals.append(cur)
                cur *= self.q
            return numeric.as_exact_array(vals)
        sign = np.where(k % 2 == 0, 1, -1) if r == "altharmonic" else np.ones(len(k), dtype=np.int64)
        if not self.exact:
            return sign / k.astype(np.float64)
        return numeric.as_exact_array([Fraction(int(s), int(i)) for s, i in zip(sign, k)])

    def block(self, start, stop):
        s = self._scalar(start, stop)
        if not self.exact:
            return s.astype(np.float64)[:, None] * np.array(self.c.coords, dtype=np.float64)[None, :]
        return numeric.tighten(numeric.mul(s[:, None], self.c.as_array()[None, :], True))

    def sup_bound(self):
        base = float(Norm.MAX.of(self.c.to_float()))
        if self.rule == "geom":
            return base * abs(float(self.q)) if abs(float(self.q)) <= 1 else math.inf
        return base

    def absolutely_summable(self) -> bool:
        """Closed-form answer to whether sum ||x_i|| converges."""
        if all(c == 0 for c in self.c.coords):
            return True
        if self.rule == "geom":
            return abs(self.q) < 1
        return False

    def describe(self):
        d = f"dir={self.c}"
        if self.rule == "geom":
            return f"geom:base={self.q},{d}"
        return f"{self.rule}:{d}"


# ------------------------------------------------------------------ DSL ---

BUILTINS = (
    "cube-spike",
    "power-square-spike",
    "alt-neg",
    "cube-spike-squared",
    "geometric",
    "constant",
    "file",
)


def make_builtin(name: str, params: dict | None = None, exact: bool = True) -> SequenceSpec:
    """Build one of the named generators.

    ``power-square-spike`` with a non-integer ``2/p`` silently switches to
    floating mode, because its values are irrational.
    """
    params = dict(params or {})
    if name == "cube-spike":
        return CubeSpike(exact=exact)
    if name == "cube-spike-squared":
        return CubeSpikeSquared(exact=exact)
    if name == "alt-neg":
        return AltNeg(exact=exact)
    if name == "power-square-spike":
        if "p" not in params:
            raise ParseError("power-square-spike requires parameter p")
        p = Fraction(params["p"]) if not isinstance(params["p"], str) else numeric.parse_rational(params["p"])
        if p <= 0:
            raise ParseError("power-square-spike requires p > 0")
        return PowerSquareSpike(p=p, exact=exact and (2 / p).denominator == 1)
    if name == "constant":
        value = params.get("value", Point.zero(1, exact))
        if not isinstance(value, Point):
            value = parse_point(str(value), exact)
        return Constant(value)
    if name == "geometric":
        c = params.get("c", Point.zero(1, exact) + Point.of(1 if exact else 1.0))
        if not isinstance(c, Point):
            c = parse_point(str(c), exact)
        q = params.get("q", "1/2")
        q = numeric.parse_scalar(q, exact) if isinstance(q, str) else q
        return Geometric(c=c, q=q)
    if name == "file":
        if "path" not in params:
            raise ParseError("file generator requires a path")
        return parse_sequence_file(params["path"], params.get("format", "auto"), exact)
    raise ParseError(f"unknown generator {name!r}; expected one of {', '.join(BUILTINS)}")


def split_params(text: str) -> dict[str, str]:
    """``"a=1,dir=(1,0)"`` -> ``{"a": "1", "dir": "(1,0)"}``, commas inside brackets kept."""
    out: dict[str, str] = {}
    if not text:
        return out
    depth, cur, items = 0, [], []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            items.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    items.append("".join(cur))
    for item in items:
        if "=" not in item:
            raise ParseError(f"expected key=value, got {item!r}")
        key, value = item.split("=", 1)
        key = key.strip()
        if key in out:
            raise ParseError(f"duplicate parameter {key!r}")
        out[key] = value.strip()
    return out


def parse_sequence(dsl: str, exact: bool = True) -> SequenceSpec:
    """Parse the sequence DSL: ``cube-spike``, ``power-square-spike:p=2``, ``file:<path>`` ..."""
    name, _, rest = dsl.strip().partition(":")
    if name == "file":
        if not rest:
            raise ParseError("file: needs a path")
        return parse_sequence_file(rest, "auto", exact)
    params = split_params(rest)
    allowed = {
        "cube-spike": set(),
        "cube-spike-squared": set(),
        "alt-neg": set(),
        "power-square-spike": {"p"},
        "constant": {"value"},
        "geometric": {"c", "q"},
    }
    if name not in allowed:
        raise ParseError(f"unknown sequence {name!r}")
    unknown = set(params) - allowed[name]
    if unknown:
        raise ParseError(f"unknown parameter(s) for {name}: {', '.join(sorted(unknown))}")
    return make_builtin(name, params, exact)


def parse_sequence_file(path, format: str = "auto", exact: bool = True) -> FileSequence:
    """Read a scalar-lines or vector-csv file into a sequence; row k is x_k."""
    path = str(path)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_sequence_text(text, format, exact, path)


def parse_sequence_text(text: str, format: str = "auto", exact: bool = True, path: str = "") -> FileSequence:
    if format == "auto":
        format = "vector-csv" if (path.endswith(".csv") or "," in text) else "scalar-lines"
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if format == "scalar-lines":
        rows = []
        for i, line in enumerate(lines, 1):
            token = line.strip()
            if not token:
                raise ParseError("blank line", line=i)
            try:
                rows.append([numeric.parse_scalar(token, exact)])
            except ParseError:
                raise ParseError(f"non-numeric token {token!r}", line=i) from None
    elif format == "vector-csv":
        rows = []
        width = None
        for i, fields in enumerate(csv.reader(io.StringIO("\n".join(lines))), 1):
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise ParseError(f"ragged row: {len(fields)} fields, expected {width}", line=i)
            try:
                rows.append([numeric.parse_scalar(f, exact) for f in fields])
            except ParseError:
                raise ParseError(f"non-numeric token in {fields!r}", line=i) from None
    else:
        raise ParseError(f"unknown file format {format!r}")
    if not rows:
        raise ParseError(f"{path or 'input'} holds no rows")
    if exact:
        flat = numeric.as_exact_array([v for row in rows for v in row])
        values = flat.reshape(len(rows), -1)
    else:
        values = np.array(rows, dtype=np.float64)
    return FileSequence(values=values, exact=exact, path=path)
