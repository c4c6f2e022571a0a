"""Exact/floating numeric backend.

Exact values are Python ``int`` or ``fractions.Fraction``; exact arrays are
``int64`` ndarrays while every magnitude stays far from overflow and ``object``
ndarrays otherwise.  Floating arrays are plain ``float64``.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import ModeError, ParseError

# int64 values are kept below this so sums of a block and products of two
# bounded terms cannot wrap.
SAFE = 2**52


def normalize(x):
    """Collapse a Fraction with denominator 1 to int; pass other exact values."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def is_exact_scalar(x) -> bool:
    return isinstance(x, Rational) and not isinstance(x, bool)


def to_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise ModeError(f"floating value {x!r} used where an exact value is required")
    return Fraction(x)


def decimal_fraction(x) -> Fraction:
    """Fraction of a float by its shortest repr, so 0.02 becomes 1/50."""
    return Fraction(repr(x)) if isinstance(x, float) else Fraction(x)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc


def parse_scalar(text: str, exact: bool):
    if exact:
        return normalize(parse_rational(text))
    try:
        return float(Fraction(text.strip())) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a number: {text!r}") from exc


def iroot(n: int, t: int) -> int:
    """Floor of the t-th root of a nonnegative integer."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2 or t == 1:
        return n
    x = 1 << -(-n.bit_length() // t)
    while True:
        y = ((t - 1) * x + n // x ** (t - 1)) // t
        if y >= x:
            return x
        x = y


def exact_power(v, p: Fraction):
    """``v**p`` for exact ``v >= 0``; ModeError when the result is irrational."""
    if p.denominator == 1:
        return normalize(Fraction(v) ** p.numerator) if p.numerator >= 0 else normalize(Fraction(v) ** p)
    v = Fraction(v)
    if v == 0:
        return 0
    s, t = p.numerator, p.denominator
    num, den = v.numerator**s, v.denominator**s
    rn, rd = iroot(num, t), iroot(den, t)
    if rn**t != num or rd**t != den:
        raise ModeError(f"{v}^{p} is irrational; use floating mode")
    return normalize(Fraction(rn, rd))


def as_exact_array(values) -> np.ndarray:
    """Array of exact scalars: int64 when every entry is a small int, else object."""
    arr = np.empty(len(values), dtype=object)
    arr[:] = [normalize(v) for v in values]
    return tighten(arr)


def tighten(arr: np.ndarray) -> np.ndarray:
    """Downcast an object array of exact values to int64 when that is safe."""
    if arr.dtype != object:
        return arr
    flat = arr.ravel()
    if all(type(v) is int and -SAFE < v < SAFE for v in flat):
        return arr.astype(np.int64)
    return arr


def maxabs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return int(np.abs(arr).max())


def _wide(a, b):
    return a.astype(object) if isinstance(a, np.ndarray) and a.dtype == np.int64 else a, \
        b.astype(object) if isinstance(b, np.ndarray) and b.dtype == np.int64 else b


def _as_operand(x, exact):
    if isinstance(x, np.ndarray):
        return x
    if exact:
        x = normalize(Fraction(x)) if not isinstance(x, int) else x
        if type(x) is int and -SAFE < x < SAFE:
            return np.int64(x)
        return np.array(x, dtype=object)
    return float(x)


def _bound(x) -> int | None:
    """Magnitude bound for an int64 operand, None for anything else."""
    if isinstance(x, np.ndarray) and x.dtype == np.int64:
        return maxabs(x)
    if isinstance(x, np.integer):
        return abs(int(x))
    return None


def add(a, b, exact: bool):
    a, b = _as_operand(a, exact), _as_operand(b, exact)
    if not exact:
        return a + b
    ba, bb = _bound(a), _bound(b)
    if ba is not None and bb is not None and ba + bb < SAFE:
        return a + b
    a, b = _wide(np.asarray(a), np.asarray(b))
    return a + b


def sub(a, b, exact: bool):
    a, b = _as_operand(a, exact), _as_operand(b, exact)
    if not exact:
        return a - b
    ba, bb = _bound(a), _bound(b)
    if ba is not None and bb is not None and ba + bb < SAFE:
        return a - b
    a, b = _wide(np.asarray(a), np.asarray(b))
    return a - b


def mul(a, b, exact: bool):
    a, b = _as_operand(a, exact), _as_operand(b, exact)
    if not exact:
        return a * b
    ba, bb = _bound(a), _bound(b)
    if ba is not None and bb is not None and ba * bb < SAFE:
        return a * b
    a, b = _wide(np.asarray(a), np.asarray(b))
    return a * b


def total(arr: np.ndarray, exact: bool):
    """Sum of a 1-D array: Python int/Fraction in exact mode, float otherwise."""
    if not exact:
        return float(arr.sum())
    if arr.dtype == np.int64:
        if arr.size * maxabs(arr) < 2**62:
            return int(arr.sum())
        return sum(int(v) for v in arr.tolist())
    return normalize(_exact_sum(arr.tolist()))


def _exact_sum(values):
    # group by denominator so most additions are plain integer adds
    by_den: dict[int, int] = {}
    for v in values:
        if type(v) is int:
            by_den[1] = by_den.get(1, 0) + v
        else:
            d = v.denominator
            by_den[d] = by_den.get(d, 0) + v.numerator
    out = Fraction(0)
    for d, n in by_den.items():
        out += Fraction(n, d)
    return out


def cumulative(arr: np.ndarray, exact: bool) -> np.ndarray:
    """Running sums along axis 0, overflow-safe in exact mode."""
    if not exact:
        return np.cumsum(arr, axis=0)
    if arr.dtype == np.int64 and arr.shape[0] * maxabs(arr) < SAFE:
        return np.cumsum(arr, axis=0)
    return np.cumsum(arr.astype(object), axis=0)


def power(arr: np.ndarray, p: Fraction, exact: bool) -> np.ndarray:
    """Elementwise ``arr**p`` for a nonnegative array."""
    if not exact:
        return np.power(arr, float(p))
    if arr.size == 0 or p == 1:
        return arr
    if arr.dtype == np.int64:
        mx = maxabs(arr)
        s, t = p.numerator, p.denominator
        if mx**s < SAFE:
            base = arr**s
            if t == 1:
                return base
            root = np.rint(np.power(base.astype(np.float64), 1.0 / t)).astype(np.int64)
            if np.array_equal(root**t, base):
                return root
            bad = base[root**t != base][0]
            raise ModeError(f"{int(bad)}^(1/{t}) is irrational; use floating mode")
        arr = arr.astype(object)
    out = np.empty(arr.shape, dtype=object)
    flat_in, flat_out = arr.ravel(), out.ravel()
    for i, v in enumerate(flat_in):
        flat_out[i] = 0 if v == 0 else exact_power(v, p)
    return out


def greater_equal(arr: np.ndarray, threshold, exact: bool) -> np.ndarray:
    """Boolean mask ``arr >= threshold`` computed without rounding in exact mode."""
    if not exact:
        return arr >= float(threshold)
    threshold = Fraction(threshold)
    if arr.dtype == np.int64:
        num, den = threshold.numerator, threshold.denominator
        if maxabs(arr) * den < SAFE and abs(num) < SAFE:
            return arr * den >= num
        arr = arr.astype(object)
    return np.asarray(arr >= threshold, dtype=bool)


def less_equal(arr: np.ndarray, threshold, exact: bool) -> np.ndarray:
    if not exact:
        return arr <= float(threshold)
    threshold = Fraction(threshold)
    if arr.dtype == np.int64:
        num, den = threshold.numerator, threshold.denominator
        if maxabs(arr) * den < SAFE and abs(num) < SAFE:
            return arr * den <= num
        arr = arr.astype(object)
    return np.asarray(arr <= threshold, dtype=bool)


def greater(arr: np.ndarray, threshold, exact: bool) -> np.ndarray:
    return ~less_equal(arr, threshold, exact)


def to_float(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return np.array([float(v) for v in arr.ravel()], dtype=np.float64).reshape(arr.shape)
    return arr.astype(np.float64)


def as_ratio(x, exact: bool):
    """Scalar quotient helper used for means and densities."""
    return normalize(Fraction(x)) if exact else float(x)
