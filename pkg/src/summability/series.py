"""Series in R^d and the coefficient spaces attached to them.

For a series sum x_i the space S_wp collects the bounded coefficient
sequences (a_i) for which the partial sums S_n = sum_{i<=n} a_i x_i are w_p
summable.  In finite dimension the series is weakly unconditionally Cauchy
(wuc) exactly when H = sup{||sum_{i<=n} a_i x_i|| : |a_i| <= 1, n} is finite,
and under the max-norm H is the largest coordinatewise absolute sum.
"""

from __future__ import annotations

import itertools
import json
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import numeric
from .checkpoints import CheckpointPolicy, Outcome, Verdict, strictly_increasing_tail
from .core import DEFAULT_EPS, prefix, sweep_totals, wp_membership
from .errors import BudgetError, ModeError, ParseError, PreconditionError, UnsupportedError
from .sequence_model import (
    BLOCK,
    Constant,
    FileSequence,
    FunctionalImage,
    HashNoise,
    Masked,
    Norm,
    PartialSums,
    Point,
    SequenceSpec,
    Sum,
    Terms,
    parse_point,
    parse_sequence_file,
    split_params,
)

DEFAULT_SEED = 0xCE5A
VALIDATE_UPTO = 10**5
BRUTE_FORCE_MAX_N = 20
BRUTE_FORCE_MAX_D = 3


# ----------------------------------------------------------------- types ---


@dataclass(frozen=True)
class SeriesSpec:
    """sum_i x_i with terms given by a sequence rule."""

    terms: SequenceSpec
    norm: Norm = Norm.MAX

    @property
    def dim(self) -> int:
        return self.terms.dim

    @property
    def exact(self) -> bool:
        return self.terms.exact

    def closed_form_wuc(self) -> bool | None:
        """Coordinatewise absolute convergence when the term rule knows it."""
        parts = _summands(self.terms)
        if all(isinstance(t, Terms) for t in parts):
            return all(t.absolutely_summable() for t in parts)
        return None

    def describe(self) -> str:
        return self.terms.describe()


def _summands(spec: SequenceSpec) -> list:
    if isinstance(spec, Sum):
        return _summands(spec.left) + _summands(spec.right)
    return [spec]


@dataclass(frozen=True)
class CoefficientSpec:
    """Bounded scalar coefficients a_i with a declared bound on |a_i|.

    The bound is checked against the rule's own sup when it has one, and
    otherwise on every i <= 10^5 (or the file length).
    """

    rule: SequenceSpec
    bound: Fraction | float | None = None
    name: str = ""

    def __post_init__(self):
        if self.rule.dim != 1:
            raise ValueError("coefficients must be scalar")
        known = self.rule.sup_bound()
        if known is not None and not np.isfinite(known):
            raise ValueError(f"coefficients {self.describe()} are unbounded")
        if known is None:
            upto = min(VALIDATE_UPTO, len(self.rule)) if isinstance(self.rule, FileSequence) else VALIDATE_UPTO
            known = max((float(np.abs(numeric.to_float(b)).max()) for _, b in self.rule.blocks(upto)), default=0.0)
        if self.bound is None:
            object.__setattr__(self, "bound", known)
        elif known > float(self.bound) * (1 + 1e-12):
            raise ValueError(f"coefficients exceed the declared bound {self.bound}: sup {known}")

    @property
    def exact(self) -> bool:
        return self.rule.exact

    def describe(self) -> str:
        return self.name or self.rule.describe()


@dataclass(frozen=True)
class FunctionalSpec:
    """Linear functional u -> sum_j c_j u_j on R^d."""

    coeffs: Point

    @property
    def dim(self) -> int:
        return self.coeffs.dim

    def __call__(self, u: Point):
        if u.dim != self.dim:
            raise ValueError("functional and point dimensions differ")
        if u.exact != self.coeffs.exact:
            raise ModeError("functional and point modes differ")
        return numeric.normalize(sum(c * x for c, x in zip(self.coeffs.coords, u.coords)))

    def dual_norm(self, norm: Norm = Norm.MAX) -> float:
        return float(norm.dual().of(self.coeffs.coords))

    def image(self, seq: SequenceSpec) -> SequenceSpec:
        return FunctionalImage(seq, self.coeffs.coords)

    def __str__(self):
        return str(self.coeffs)


# ------------------------------------------------------------ operations ---


def partial_sums(series: SeriesSpec, coeffs: CoefficientSpec | None) -> PartialSums:
    return PartialSums(series.terms, None if coeffs is None else coeffs.rule)


def partial_sum(series: SeriesSpec, coeffs: CoefficientSpec | None, n: int) -> Point:
    """S_n = sum_{i<=n} a_i x_i."""
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    return partial_sums(series, coeffs).eval(int(n))


def _abs_columns(series: SeriesSpec):
    def contributions(start, rows):
        a = np.abs(rows)
        return {j: a[:, j] for j in range(rows.shape[1])}

    return contributions


def h_profile(series: SeriesSpec, stops) -> list:
    """Max-norm wuc bound h(n) = max_j sum_{i<=n} |x_i[j]| at each stop."""
    totals = sweep_totals(series.terms, stops, _abs_columns(series))
    return [max(totals[j][i] for j in range(series.dim)) for i in range(len(totals[0]))]


def h_bound(series: SeriesSpec, n: int):
    """sup over |a_i| <= 1 and m <= n of ||sum_{i<=m} a_i x_i||.

    Max-norm: exact closed form.  Euclidean: floating brute force over the
    sign vertices of the coefficient box, refused beyond n = 20 or d = 3.
    """
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    n = int(n)
    if series.norm is Norm.MAX:
        return h_profile(series, [n])[0]
    if n > BRUTE_FORCE_MAX_N or series.dim > BRUTE_FORCE_MAX_D:
        raise UnsupportedError(f"euclidean h_bound is brute force; needs n <= {BRUTE_FORCE_MAX_N} and d <= {BRUTE_FORCE_MAX_D}")
    return brute_force_h(series.terms.block(1, n + 1), Norm.EUCLIDEAN)


def brute_force_h(rows: np.ndarray, norm: Norm = Norm.MAX):
    """Exhaustive maximum of ||sum a_i x_i|| over a in {-1, 1}^n.

    The norm is convex, so the box maximum sits at a vertex; exact for
    exact max-norm input, floating otherwise.
    """
    n = len(rows)
    if n == 0:
        return 0
    signs = np.array(list(itertools.product((-1, 1), repeat=n)), dtype=np.int64)
    if norm is Norm.MAX and rows.dtype != np.float64:
        # scale to integers by the common denominator, then use int64 matmul
        fr = [Fraction(v) for v in rows.ravel()]
        den = math.lcm(*(v.denominator for v in fr))
        ints = np.array([int(v * den) for v in fr], dtype=object).reshape(rows.shape)
        if numeric.maxabs(ints) * n < numeric.SAFE:
            sums = signs @ ints.astype(np.int64)
        else:
            sums = signs.astype(object) @ ints
        return numeric.normalize(Fraction(int(np.abs(sums).max()), den))
    sums = signs.astype(np.float64) @ numeric.to_float(rows)
    return float(norm.rows_float(sums).max())


def wuc_verdict(series: SeriesSpec, policy: CheckpointPolicy | None = None) -> Verdict:
    """Decide finiteness of H from h(n) on the checkpoints (max-norm only)."""
    if series.norm is not Norm.MAX:
        raise PreconditionError("wuc verdict needs the max-norm closed form")
    policy = policy or CheckpointPolicy()
    stops = policy.checkpoints
    h = h_profile(series, stops)
    evidence = tuple(zip(stops, h))
    closed = series.closed_form_wuc()
    details = {"closed_form_wuc": closed}
    band = numeric.decimal_fraction(policy.band) if series.exact else policy.band
    if abs(h[-1] - h[-3]) <= band:
        v = Verdict(Outcome.CONVERGES, Point.of(h[-1]), evidence, ("h(n) stabilised",), "truncation", details)
    elif h[-1] > policy.div_threshold and strictly_increasing_tail(h):
        v = Verdict(Outcome.DIVERGES, None, evidence, ("h(n) grows past div_threshold",), "truncation", details)
    else:
        v = Verdict(Outcome.INCONCLUSIVE, None, evidence, ("h(n) neither settled nor escaped",), details=details)
    if closed is not None and v.outcome is not Outcome.INCONCLUSIVE and closed != v.converges:
        return Verdict(v.outcome, v.limit, v.evidence, v.notes + ("disagrees with the closed-form classification",),
                       v.certificate, details)
    return v


def swp_membership(series: SeriesSpec, coeffs: CoefficientSpec, p, policy: CheckpointPolicy | None = None,
                   eps_schedule=DEFAULT_EPS) -> Verdict:
    """Is (a_i) in S_wp?  w_p verdict of the partial sums, with witness fallback."""
    return wp_membership(partial_sums(series, coeffs), p, policy, series.norm, eps_schedule)


# ------------------------------------------------------------ constructor ---


@dataclass(frozen=True)
class BlockRow:
    t: int
    start: int
    end: int  # m_t
    coefficient: Fraction | float  # 2^-t
    abs_sum: object  # sum over the block of |f_i|
    block_sum: object  # sum over the block of a_i f_i = 2^-t * abs_sum


def _scalar(v, exact: bool):
    """Plain Python int/Fraction/float from an array element."""
    if not exact:
        return float(v)
    return int(v) if isinstance(v, (int, np.integer)) else numeric.normalize(v)


class ConstructedCoefficients(SequenceSpec):
    """a_i = sign(f_i) * 2^-t on block t, where block t closes at the first
    index whose block sum of |f_i| exceeds 4^t (sign(0) = +1).

    Blocks are discovered lazily by a forward scan shared between threads.
    """

    def __init__(self, f: SequenceSpec, f_name: str = ""):
        if f.dim != 1:
            raise ValueError("the constructor needs a scalar f")
        self.f = f
        self.f_name = f_name or f.describe()
        self._lock = threading.Lock()
        self._ends: list[int] = []
        self._abs_sums: list = []
        self._scanned = 0
        self._acc = 0 if f.exact else 0.0

    @property
    def exact(self):
        return self.f.exact

    @property
    def dim(self):
        return 1

    def _threshold(self, t):
        return 4**t

    def _advance(self, upto: int, blocks_wanted: int | None = None):
        """Scan f up to index ``upto`` or until ``blocks_wanted`` blocks are closed."""
        exact = self.exact
        size = 64  # grows to BLOCK; exact rational prefixes get costly fast
        while self._scanned < upto and (blocks_wanted is None or len(self._ends) < blocks_wanted):
            start = self._scanned + 1
            stop = min(start + size, upto + 1)
            size = min(2 * size, BLOCK)
            a = np.abs(self.f.block(start, stop)[:, 0])
            pos = 0
            while pos < len(a):
                t = len(self._ends) + 1
                c = numeric.add(numeric.cumulative(a[pos:], exact), self._acc, exact)
                over = np.nonzero(numeric.greater(c, self._threshold(t), exact))[0]
                if len(over) == 0:
                    self._acc = _scalar(c[-1], exact)
                    pos = len(a)
                    break
                j = int(over[0])
                self._ends.append(start + pos + j)
                self._abs_sums.append(_scalar(c[j], exact))
                self._acc = 0 if exact else 0.0
                pos += j + 1
                if blocks_wanted is not None and len(self._ends) >= blocks_wanted:
                    self._scanned = start + pos - 1
                    return
            self._scanned = stop - 1

    def block_of(self, k: np.ndarray) -> np.ndarray:
        with self._lock:
            self._advance(int(k.max()))
            ends = np.array(self._ends, dtype=np.int64)
        return np.searchsorted(ends, k, side="left") + 1

    def block(self, start, stop):
        k = np.arange(start, stop, dtype=np.int64)
        t = self.block_of(k)
        fv = self.f.block(start, stop)[:, 0]
        sign = np.where(numeric.greater_equal(fv, 0, self.exact), 1, -1)
        if self.exact:
            out = np.empty(len(k), dtype=object)
            out[:] = [Fraction(int(s), 1 << int(tt)) for s, tt in zip(sign, t)]
            return out.reshape(-1, 1)
        return (sign * np.exp2(-t.astype(np.float64))).reshape(-1, 1)

    def table(self, num_blocks: int, budget: int) -> list[BlockRow]:
        with self._lock:
            self._advance(budget, num_blocks)
            rows = self._rows()
            if len(rows) < num_blocks:
                raise BudgetError(
                    f"index budget {budget} exhausted in block {len(rows) + 1}: "
                    f"block sum of |f_i| reached {self._acc}, needs > {self._threshold(len(rows) + 1)}",
                    blocks=rows,
                    reached=self._scanned,
                    prefix_sum=self._acc,
                )
            return rows[:num_blocks]

    def _rows(self) -> list[BlockRow]:
        rows, start = [], 1
        for t, (end, s) in enumerate(zip(self._ends, self._abs_sums), 1):
            coef = Fraction(1, 2**t) if self.exact else 2.0**-t
            rows.append(BlockRow(t, start, end, coef, s, numeric.normalize(s * coef) if self.exact else s * coef))
            start = end + 1
        return rows

    def sup_bound(self):
        return 0.5

    def describe(self):
        return f"constructed(f={self.f_name})"


@dataclass(frozen=True)
class Construction:
    coeffs: CoefficientSpec
    blocks: tuple


def construct_divergent_coeffs(f: SequenceSpec, num_blocks: int, budget: int = 10**7, f_name: str = "") -> Construction:
    """Coefficients a in c_0 with sum a_i f_i = +inf, built block by block.

    Raises BudgetError (carrying the completed blocks) when the first
    ``budget`` indices do not close ``num_blocks`` blocks.
    """
    if int(num_blocks) != num_blocks or num_blocks < 1:
        raise ValueError("num_blocks must be a positive integer")
    if budget < 1:
        raise ValueError("budget must be positive")
    rule = ConstructedCoefficients(f, f_name)
    rows = rule.table(int(num_blocks), int(budget))
    bound = Fraction(1, 2) if f.exact else 0.5
    return Construction(CoefficientSpec(rule, bound, rule.describe()), tuple(rows))


# ------------------------------------------------------- weak / weak-star ---


@dataclass(frozen=True)
class PanelRow:
    probe: Point  # the functional (weak) or the test point (weak-star)
    verdict: Verdict


@dataclass(frozen=True)
class PanelReport:
    rows: tuple
    aggregate: Verdict
    limit_residual: float | None = None
    flags: tuple = ()


def basis(dim: int, exact: bool) -> list[Point]:
    one, zero = (1, 0) if exact else (1.0, 0.0)
    return [Point(tuple(one if j == i else zero for j in range(dim))) for i in range(dim)]


def random_unit_points(dim: int, count: int, norm: Norm, exact: bool, seed: int = DEFAULT_SEED) -> list[Point]:
    """Seeded points of unit ``norm`` (exact mode: rounded, then rescaled exactly
    for the max- and l1-type norms)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        v = rng.uniform(-1.0, 1.0, dim)
        v /= _float_norm(v, norm)
        if not exact:
            out.append(Point(tuple(float(c) for c in v)))
            continue
        q = [Fraction(float(c)).limit_denominator(1000) for c in v]
        scale = _exact_norm(q, norm)
        out.append(Point(tuple(c / scale for c in q)) if scale else Point(tuple(q)))
    return out


def _float_norm(v, norm) -> float:
    if norm == "l1":
        return float(np.abs(v).sum())
    if norm in (Norm.MAX, "max"):
        return float(np.abs(v).max())
    return float(np.sqrt((v * v).sum()))


def _exact_norm(q, norm):
    if norm == "l1":
        return sum(abs(c) for c in q)
    if norm in (Norm.MAX, "max"):
        return max(abs(c) for c in q)
    return 1  # euclidean length of rationals is rarely rational; keep the rounding


def default_functionals(dim: int, norm: Norm, exact: bool, seed: int = DEFAULT_SEED) -> list[FunctionalSpec]:
    """Coordinate functionals plus 8 seeded functionals of unit dual norm."""
    dual = "l1" if norm is Norm.MAX else Norm.EUCLIDEAN
    pts = basis(dim, exact) + random_unit_points(dim, 8, dual, exact, seed)
    return [FunctionalSpec(p) for p in pts]


def default_test_points(dim: int, norm: Norm, exact: bool, seed: int = DEFAULT_SEED) -> list[Point]:
    return basis(dim, exact) + random_unit_points(dim, 8, norm, exact, seed)


def _run_panel(jobs, workers: int) -> list[Verdict]:
    if workers <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(lambda job: job(), jobs))  # map keeps input order


def _aggregate(probes: list[Point], verdicts: list[Verdict], dim: int, exact: bool, policy: CheckpointPolicy):
    """Combine scalar verdicts v_f = lim f(S_n) into one verdict on a limit in R^d."""
    flags = []
    if any(v.diverges for v in verdicts):
        bad = [str(p) for p, v in zip(probes, verdicts) if v.diverges]
        return Verdict(Outcome.DIVERGES, None, notes=(f"diverges along {', '.join(bad)}",),
                       certificate="witness" if any(v.certificate == "witness" for v in verdicts) else "truncation"), None, ()
    A = np.array([numeric.to_float(p.as_array()) for p in probes]) if probes else np.zeros((0, dim))
    rank = int(np.linalg.matrix_rank(A)) if len(A) else 0
    if rank < dim:
        flags.append("insufficient functional set")
    if not all(v.converges for v in verdicts):
        return Verdict(Outcome.INCONCLUSIVE, notes=("some probes are inconclusive",)), None, tuple(flags)
    if rank < dim:
        note = f"probes span rank {rank} < {dim}; the limit is not determined"
        return Verdict(Outcome.INCONCLUSIVE, notes=(note,)), None, tuple(flags)
    values = [v.limit.scalar for v in verdicts]
    coords = [None] * dim
    for p, val in zip(probes, values):
        nz = [j for j, c in enumerate(p.coords) if c != 0]
        if len(nz) == 1 and p.coords[nz[0]] == 1 and coords[nz[0]] is None:
            coords[nz[0]] = val
    if all(c is not None for c in coords) and len({type(c) is float for c in coords}) == 1:
        limit = Point(tuple(coords))
    else:
        sol = np.linalg.lstsq(A, np.array([float(v) for v in values]), rcond=None)[0]
        limit = Point(tuple(float(c) for c in sol))
    lf = limit.to_float().coords
    residual = max(abs(sum(float(c) * x for c, x in zip(p.coords, lf)) - float(val)) for p, val in zip(probes, values))
    if residual > policy.abs_tol:
        note = f"probe limits are inconsistent with a single limit (misfit {residual:.3g})"
        return Verdict(Outcome.INCONCLUSIVE, notes=(note,)), residual, tuple(flags)
    return Verdict(Outcome.CONVERGES, limit, certificate="truncation"), residual, tuple(flags)


def weak_wp_membership(series: SeriesSpec, coeffs: CoefficientSpec, functionals=None, p=1,
                       policy: CheckpointPolicy | None = None, seed: int = DEFAULT_SEED, workers: int = 1) -> PanelReport:
    """Scalar w_p verdicts of f(S_n) for each functional, then one aggregate."""
    policy = policy or CheckpointPolicy()
    if functionals is None:
        functionals = default_functionals(series.dim, series.norm, series.exact, seed)
    functionals = list(functionals)
    if not functionals:
        raise PreconditionError("at least one functional is required")
    S = prefix(partial_sums(series, coeffs), policy.final)
    jobs = [lambda f=f: wp_membership(f.image(S), p, policy) for f in functionals]
    verdicts = _run_panel(jobs, workers)
    probes = [f.coeffs for f in functionals]
    agg, res, flags = _aggregate(probes, verdicts, series.dim, series.exact, policy)
    return PanelReport(tuple(PanelRow(pr, v) for pr, v in zip(probes, verdicts)), agg, res, flags)


def weak_star_wp_membership(functional_series: SeriesSpec, coeffs: CoefficientSpec, test_points=None, p=1,
                            policy: CheckpointPolicy | None = None, seed: int = DEFAULT_SEED, workers: int = 1) -> PanelReport:
    """Scalar w_p verdicts of sum_{i<=n} a_i f_i(x) at each test point x.

    The rows of ``functional_series`` are the coefficient vectors of f_i; the
    aggregate limit is the functional recovered from the basis points.
    """
    policy = policy or CheckpointPolicy()
    fs = functional_series
    if test_points is None:
        test_points = default_test_points(fs.dim, fs.norm, fs.exact, seed)
    test_points = list(test_points)
    if not test_points:
        raise PreconditionError("at least one test point is required")
    terms = prefix(fs.terms, policy.final)
    rule = prefix(coeffs.rule, policy.final)
    jobs = [
        lambda x=x: wp_membership(PartialSums(FunctionalImage(terms, x.coords), rule), p, policy)
        for x in test_points
    ]
    verdicts = _run_panel(jobs, workers)
    agg, res, flags = _aggregate(test_points, verdicts, fs.dim, fs.exact, policy)
    flags = tuple(f.replace("functional", "test point") for f in flags)
    return PanelReport(tuple(PanelRow(x, v) for x, v in zip(test_points, verdicts)), agg, res, flags)


def subset_sum_wp(functional_series: SeriesSpec, index_set, x: Point, p=1,
                  policy: CheckpointPolicy | None = None) -> Verdict:
    """w_p verdict of the partial sums of sum_{i in M} f_i(x)."""
    fs = functional_series
    if x.exact != fs.exact:
        x = x.to_float() if not fs.exact else None
        if x is None:
            raise ModeError("floating test point for an exact functional series")
    image = FunctionalImage(fs.terms, x.coords)
    zero = Constant(Point.zero(1, fs.exact))
    return wp_membership(PartialSums(Masked(index_set, image, zero)), p, policy)


# --------------------------------------------------------- operator bound ---


@dataclass(frozen=True)
class OperatorSample:
    coeffs: str
    sup_a: float  # max |a_i| over i <= final checkpoint
    norm_T: float | None  # ||T(a)|| when the membership verdict converges
    bound_ok: bool | None
    verdict: Verdict


@dataclass(frozen=True)
class OperatorReport:
    H: object
    samples: tuple

    @property
    def all_ok(self) -> bool:
        return all(s.bound_ok is not False for s in self.samples)


def operator_norm_check(series: SeriesSpec, sample_coeffs, p=1, policy: CheckpointPolicy | None = None,
                        workers: int = 1) -> OperatorReport:
    """Check ||T(a)|| <= H ||a||_inf + abs_tol, T(a) being the w_p limit of S_n.

    T is only defined on all of l_inf for wuc series, so anything else is a
    precondition failure.
    """
    policy = policy or CheckpointPolicy()
    wuc = wuc_verdict(series, policy)
    if not wuc.converges:
        raise PreconditionError(f"series is not wuc at desk scale ({wuc}); T is undefined on l_inf")
    H = wuc.evidence[-1][1]
    N = policy.final

    def one(c: CoefficientSpec):
        v = swp_membership(series, c, p, policy)
        sup_a = max(float(np.abs(numeric.to_float(b)).max()) for _, b in c.rule.blocks(N))
        if not v.converges:
            return OperatorSample(c.describe(), sup_a, None, None, v)
        norm_T = float(series.norm.of(v.limit.to_float()))
        return OperatorSample(c.describe(), sup_a, norm_T, norm_T <= float(H) * sup_a + policy.abs_tol, v)

    samples = _run_panel([lambda c=c: one(c) for c in sample_coeffs], workers)
    return OperatorReport(H, tuple(samples))


# ------------------------------------------------------------------ DSL ---


SERIES_RULES = {"geom": "geom", "harmonic": "harmonic", "altharmonic": "altharmonic"}


def _split_top(text: str, sep: str) -> list[str]:
    depth, cur, out = 0, [], []
    for ch in text:
        depth += ch in "(["
        depth -= ch in ")]"
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def parse_series(dsl: str, exact: bool = True, norm: Norm = Norm.MAX) -> SeriesSpec:
    """``geom:base=1/2,dir=(1,0)``, ``harmonic:dir=(1,0)``, ``altharmonic:dir=...``,
    ``file:<path>``; terms joined by ``+`` are added termwise."""
    parts = [_parse_series_term(s.strip(), exact) for s in _split_top(dsl, "+")]
    terms = parts[0]
    for t in parts[1:]:
        terms = Sum(terms, t)
    return SeriesSpec(terms, norm)


def _parse_series_term(dsl: str, exact: bool) -> SequenceSpec:
    name, _, rest = dsl.partition(":")
    if name == "file":
        if not rest:
            raise ParseError("file: needs a path")
        return parse_sequence_file(rest, "auto", exact)
    if name not in SERIES_RULES:
        raise ParseError(f"unknown series {name!r}; expected geom, harmonic, altharmonic or file")
    params = split_params(rest)
    allowed = {"dir", "base"} if name == "geom" else {"dir"}
    if set(params) - allowed:
        raise ParseError(f"unknown parameter(s) for {name}: {', '.join(sorted(set(params) - allowed))}")
    direction = parse_point(params.get("dir", "1"), exact)
    if name == "geom":
        if "base" not in params:
            raise ParseError("geom needs base=<q>")
        q = numeric.parse_scalar(params["base"], exact)
        return Terms("geom", direction, q)
    return Terms(SERIES_RULES[name], direction)


def parse_coefficients(dsl: str, exact: bool = True, seed: int = DEFAULT_SEED) -> CoefficientSpec:
    """``const:<v>``, ``altsign``, ``reciprocal``, ``geom:<q>``, ``file:<path>``,
    ``constructed:<construct report>`` and ``noise:seed=<hex>,amp=<v>``."""
    dsl = dsl.strip()
    name, _, rest = dsl.partition(":")
    one = Point.of(1 if exact else 1.0)
    if name == "const":
        v = numeric.parse_scalar(rest or "1", exact)
        return CoefficientSpec(Terms("const", Point.of(v)), name=dsl)
    if name == "altsign" and not rest:
        return CoefficientSpec(Terms("altsign", one), name=dsl)
    if name == "reciprocal" and not rest:
        return CoefficientSpec(Terms("harmonic", one), name=dsl)
    if name == "geom":
        if not rest:
            raise ParseError("geom needs a base, e.g. geom:1/2")
        q = numeric.parse_scalar(rest, exact)
        if abs(q) > 1:
            raise ParseError(f"geom:{rest} is unbounded")
        return CoefficientSpec(Terms("geom", one, q), name=dsl)
    if name == "file":
        seq = parse_sequence_file(rest, "scalar-lines", exact)
        return CoefficientSpec(seq, name=dsl)
    if name == "noise":
        if exact:
            raise ModeError("noise coefficients are floating-only; use --mode float")
        params = split_params(rest)
        if set(params) - {"seed", "amp"}:
            raise ParseError("noise takes seed= and amp=")
        amp = float(Fraction(params.get("amp", "1")))
        s = int(params["seed"], 0) if "seed" in params else seed
        return CoefficientSpec(HashNoise(1, amp, s), amp, dsl)
    if name == "constructed":
        return load_constructed(rest, exact)
    raise ParseError(f"unknown coefficients {dsl!r}")


def parse_f_values(dsl: str, exact: bool = True) -> SequenceSpec:
    """Scalar sequence for the constructor: any coefficient rule, unbounded ones included."""
    name, _, rest = dsl.strip().partition(":")
    one = Point.of(1 if exact else 1.0)
    if name == "const":
        return Terms("const", Point.of(numeric.parse_scalar(rest or "1", exact)))
    if name in ("reciprocal", "harmonic"):
        return Terms("harmonic", one)
    if name == "altsign":
        return Terms("altsign", one)
    if name == "altharmonic":
        return Terms("altharmonic", one)
    if name == "geom":
        return Terms("geom", one, numeric.parse_scalar(rest, exact))
    if name == "file":
        return parse_sequence_file(rest, "scalar-lines", exact)
    raise ParseError(f"unknown f rule {dsl!r}")


def load_constructed(path: str, exact: bool = True) -> CoefficientSpec:
    """Rebuild constructed coefficients from a ``construct`` JSON report."""
    try:
        report = json.loads(Path(path).read_text())
        f_dsl = report["spec"]["f"]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"{path} is not a construct report: {exc}") from exc
    rule = ConstructedCoefficients(parse_f_values(f_dsl, exact), f_dsl)
    return CoefficientSpec(rule, Fraction(1, 2) if exact else 0.5, f"constructed:{path}")


def parse_points(text: str, exact: bool = True) -> list[Point]:
    """CSV rows (or ``;``-separated points) as Points."""
    rows = [r for r in text.replace(";", "\n").splitlines() if r.strip()]
    pts = [parse_point(r, exact) for r in rows]
    if len({p.dim for p in pts}) > 1:
        raise ParseError("points have different dimensions")
    return pts


def read_points(arg: str, exact: bool = True) -> list[Point]:
    """``arg`` is a CSV file path or an inline ``1,0;0,1`` list."""
    p = Path(arg)
    if p.is_file():
        return parse_points(p.read_text(), exact)
    return parse_points(arg, exact)
