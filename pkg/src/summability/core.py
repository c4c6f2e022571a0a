"""Convergence modes of a sequence: Cesàro, strong p-Cesàro (w_p), statistical.

All asymptotic statements are decided on a :class:`CheckpointPolicy`.  The
limit of a w_p test is not supplied by the user but discovered: the candidate
is the centre of the tightest ball of radius ``eps_schedule[-1]`` holding a
``1 - band`` share of the tail window ``n/2 < k <= n``, because a statistical
limit is carried by a density-one index set and so dominates every tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import numeric
from .checkpoints import CheckpointPolicy, Outcome, Verdict, classify, strictly_increasing_tail
from .density import classify_density
from .errors import ModeError
from .sequence_model import BLOCK, Norm, Point, SequenceSpec, block_from_blocks

DEFAULT_EPS = (Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(1, 8))


def _rational(p, name="p") -> Fraction:
    p = Fraction(p) if not isinstance(p, str) else numeric.parse_rational(p)
    if p <= 0:
        raise ValueError(f"{name} must be positive")
    return p


def _check_eps(eps_schedule) -> tuple:
    eps = tuple(Fraction(e) for e in eps_schedule)
    if not eps:
        raise ValueError("eps schedule is empty")
    if any(e <= 0 for e in eps) or any(a <= b for a, b in zip(eps, eps[1:])):
        raise ValueError("eps schedule must be positive and strictly decreasing")
    return eps


def _coerce(point: Point, seq: SequenceSpec) -> Point:
    if point.exact == seq.exact:
        return point
    if not seq.exact:
        return point.to_float()
    raise ModeError("floating point supplied for an exact sequence")


def _ratio(total, n: int, exact: bool):
    return numeric.normalize(Fraction(total, n)) if exact else total / n


# -------------------------------------------------------- single sweeps ---

# prefixes up to this many cells are generated once per operation and reused
PREFIX_CELLS = 1 << 23


class Prefix(SequenceSpec):
    """x_1 .. x_n generated once, so an operation's several passes share it."""

    def __init__(self, seq: SequenceSpec, n: int):
        self.seq = seq
        self.n = n
        parts = [rows for _, rows in seq.blocks(n)]
        self.values = parts[0] if len(parts) == 1 else np.concatenate(parts)
        if seq.exact and self.values.dtype == object:
            self.values = numeric.tighten(self.values)

    @property
    def dim(self):
        return self.seq.dim

    @property
    def exact(self):
        return self.seq.exact

    def block(self, start, stop):
        if stop - 1 <= self.n:
            return self.values[start - 1 : stop - 1]
        return self.seq.block(start, stop)

    def blocks(self, stop, size=BLOCK):
        if stop > self.n:
            yield from self.seq.blocks(stop, size)
            return
        for start in range(1, stop + 1, size):
            yield start, self.values[start - 1 : min(start + size, stop + 1) - 1]

    def sup_bound(self):
        return self.seq.sup_bound()

    def describe(self):
        return self.seq.describe()


def prefix(seq: SequenceSpec, n: int) -> SequenceSpec:
    """Cache the first n terms when that is cheap enough."""
    if isinstance(seq, Prefix) and seq.n >= n:
        return seq
    if n * seq.dim > PREFIX_CELLS:
        return seq
    return Prefix(seq, n)



@dataclass
class Profile:
    """Running statistics of ||x_k - centre|| recorded at each stop."""

    stops: list
    counts: dict = field(default_factory=dict)  # eps -> [card{k<=n: ||x_k - c|| >= eps}]
    sums: dict = field(default_factory=dict)  # p -> [sum_{k<=n} ||x_k - c||^p]
    sup: list = field(default_factory=list)  # running max of ||x_k|| (float)


def sweep_totals(seq: SequenceSpec, stops, contributions) -> dict:
    """Prefix totals at each stop of per-row contributions.

    ``contributions(start, rows)`` maps a block to ``{key: 1-D array}``; boolean
    arrays are counted, others summed (exactly in exact mode).
    """
    stops = list(stops)
    acc, out, si = {}, {}, 0

    def add(key, part):
        if part.dtype == bool:
            v = int(np.count_nonzero(part))
        else:
            v = numeric.total(part, seq.exact) if len(part) else 0
        acc[key] = acc.get(key, 0) + v

    for start, rows in seq.blocks(stops[-1]):
        parts = contributions(start, rows)
        end = start + len(rows)
        pos = 0
        while si < len(stops) and stops[si] < end:
            cut = stops[si] - start + 1
            for key, arr in parts.items():
                add(key, arr[pos:cut])
                out.setdefault(key, []).append(acc[key])
            pos = cut
            si += 1
        for key, arr in parts.items():
            add(key, arr[pos:])
    return out


def profile(seq: SequenceSpec, center: Point | None, stops, eps_list=(), p_list=(), norm: Norm = Norm.MAX) -> Profile:
    """One forward pass collecting exceedance counts and power sums at ``stops``."""
    stops = sorted(set(int(s) for s in stops))
    exact = seq.exact
    c_row = None if center is None else _coerce(center, seq).as_array()[None, :]
    sups, running = [], 0.0

    def contributions(start, rows):
        nonlocal running
        sizes = norm.rows_float(rows)
        # sup is a running max, not a sum, so it is tracked here
        for s in stops:
            if start <= s < start + len(rows):
                sups.append(max(running, float(sizes[: s - start + 1].max())))
        running = max(running, float(sizes.max()))
        diff = rows if c_row is None else numeric.sub(rows, c_row, exact)
        key = norm.rows_key(diff, exact)
        parts = {("e", e): norm.key_ge(key, e, exact) for e in eps_list}
        parts.update({("p", p): norm.key_pow(key, p, exact) for p in p_list})
        return parts

    totals = sweep_totals(seq, stops, contributions)
    return Profile(
        stops,
        {e: totals.get(("e", e), []) for e in eps_list},
        {p: totals.get(("p", p), []) for p in p_list},
        sups,
    )


def tail_window(seq: SequenceSpec, n: int) -> np.ndarray:
    """Rows x_k for n/2 < k <= n."""
    return seq.block(n // 2 + 1, n + 1)


# ------------------------------------------------------------- clusters ---


@dataclass(frozen=True)
class Cluster:
    center: Point | None
    radius: float | None
    mass: Fraction
    size: int


def find_cluster(rows: np.ndarray, eps, band, norm: Norm = Norm.MAX, exact: bool = True) -> Cluster:
    """Tightest ball of radius <= eps holding at least ``1 - band`` of the rows.

    Per coordinate the narrowest interval holding the required count is found
    by sorting; when their product box holds enough rows it is optimal for the
    max-norm.  Otherwise the eps-ball about the coordinatewise median is tried.
    Ties go to the smaller radius, then the smaller first coordinate (argmin
    returns the leftmost interval).
    """
    m = len(rows)
    if m == 0:
        return Cluster(None, None, Fraction(0), 0)
    need = math.ceil((1 - numeric.decimal_fraction(band)) * m)
    d = rows.shape[1]
    # candidates are located in floating point and certified exactly below
    approx = numeric.to_float(rows) if exact else rows
    inside = np.ones(m, dtype=bool)
    medians = []
    for j in range(d):
        order = np.argsort(approx[:, j], kind="stable")
        col = approx[order, j]
        medians.append(rows[order[(m - 1) // 2], j])
        widths = col[need - 1 :] - col[: m - need + 1]
        i = int(np.argmin(widths))
        inside &= (approx[:, j] >= col[i]) & (approx[:, j] <= col[i + need - 1])
    candidates = [inside]
    med = np.array(medians, dtype=rows.dtype)[None, :]
    candidates.append(norm.rows_le(numeric.sub(rows, med, exact), eps, exact))
    for mask in candidates:
        count = int(np.count_nonzero(mask))
        if count < need:
            continue
        members = rows[mask]
        center = _centroid(members, exact)
        diff = numeric.sub(members, center.as_array()[None, :], exact)
        if np.all(norm.rows_le(diff, eps, exact)):
            radius = float(norm.rows_float(diff).max())
            return Cluster(center, radius, Fraction(count, m), count)
    return Cluster(None, None, _densest_mass(rows, eps, norm), 0)


def _centroid(members: np.ndarray, exact: bool) -> Point:
    count = len(members)
    coords = []
    for j in range(members.shape[1]):
        col = members[:, j]
        if exact:
            coords.append(numeric.normalize(Fraction(numeric.total(col, True)) / count))
        elif col.min() == col.max():
            coords.append(float(col[0]))
        else:
            coords.append(math.fsum(col.tolist()) / count)
    return Point(tuple(coords))


def _densest_mass(rows: np.ndarray, eps, norm: Norm) -> Fraction:
    """Largest share of rows inside one eps-ball (floating estimate)."""
    m = len(rows)
    vals = numeric.to_float(rows)
    eps = float(eps)
    if vals.shape[1] == 1:
        s = np.sort(vals[:, 0])
        counts = np.searchsorted(s, s + 2 * eps, side="right") - np.arange(m)
        return Fraction(int(counts.max()), m)
    uniq = np.unique(vals, axis=0)
    if len(uniq) > 256:
        uniq = uniq[np.linspace(0, len(uniq) - 1, 256).astype(int)]
    best = 0
    for c in uniq:
        best = max(best, int(np.count_nonzero(norm.rows_float(vals - c[None, :]) <= eps)))
    return Fraction(best, m)


# ---------------------------------------------------------- operations ---


def cesaro_mean(seq: SequenceSpec, n: int) -> Point:
    """(1/n) * sum_{k<=n} x_k, exact in exact mode."""
    n = _positive_index(n)
    totals = [0 if seq.exact else 0.0] * seq.dim
    for _, rows in seq.blocks(n):
        for j in range(seq.dim):
            totals[j] = totals[j] + numeric.total(rows[:, j], seq.exact)
    return Point(tuple(_ratio(t, n, seq.exact) for t in totals))


def cesaro_means(seq: SequenceSpec, stops) -> list[Point]:
    """Cesàro means at each stop, in one pass."""
    stops = sorted(set(int(_positive_index(s)) for s in stops))
    totals = sweep_totals(seq, stops, lambda start, rows: {j: rows[:, j] for j in range(rows.shape[1])})
    return [
        Point(tuple(_ratio(totals[j][i], n, seq.exact) for j in range(seq.dim)))
        for i, n in enumerate(stops)
    ]


def strong_p_residual(seq: SequenceSpec, center: Point, p, n: int, norm: Norm = Norm.MAX):
    """(1/n) * sum_{k<=n} ||x_k - L||^p."""
    n, p = _positive_index(n), _rational(p)
    prof = profile(seq, center, [n], p_list=[p], norm=norm)
    return _ratio(prof.sums[p][0], n, seq.exact)


def _positive_index(n) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return int(n)


def _statistical(seq, policy, eps_schedule, norm, p_list=()):
    eps = _check_eps(eps_schedule)
    stops = policy.checkpoints
    seq = prefix(seq, stops[-1])
    window = tail_window(seq, stops[-1])
    cl = find_cluster(window, eps[-1], policy.band, norm, seq.exact)
    details = {
        "candidate_L": cl.center,
        "cluster_mass": cl.mass,
        "cluster_radius": cl.radius,
        "window": (stops[-1] // 2 + 1, stops[-1]),
    }
    if cl.center is None:
        note = f"no ball of radius {eps[-1]} holds {1 - numeric.decimal_fraction(policy.band)} of the tail window; densest mass {cl.mass}"
        return Verdict(Outcome.INCONCLUSIVE, notes=(note,), details=details), None
    prof = profile(seq, cl.center, stops, eps, p_list, norm)
    tables, failing = {}, []
    for e in eps:
        table = tuple((n, Fraction(c, n)) for n, c in zip(stops, prof.counts[e]))
        tables[e] = table
        v = classify_density(table, policy)
        if not (v.converges and v.limit.scalar == 0):
            failing.append(e)
    details["densities"] = tables
    evidence = tables[eps[-1]]
    if failing:
        note = f"exceedance sets for eps in {[str(e) for e in failing]} are not null at desk scale"
        return Verdict(Outcome.INCONCLUSIVE, evidence=evidence, notes=(note,), details=details), prof
    return Verdict(Outcome.CONVERGES, cl.center, evidence, certificate="truncation", details=details), prof


def statistical_verdict(seq: SequenceSpec, policy: CheckpointPolicy | None = None, eps_schedule=DEFAULT_EPS, norm: Norm = Norm.MAX) -> Verdict:
    """ConvergesTo(L) iff every eps-exceedance set about the candidate L is null.

    Never returns Diverges: refuting statistical convergence needs every L.
    """
    return _statistical(seq, policy or CheckpointPolicy(), eps_schedule, norm)[0]


def wp_verdict(seq: SequenceSpec, p, policy: CheckpointPolicy | None = None, L_hint: Point | None = None,
               eps_schedule=DEFAULT_EPS, norm: Norm = Norm.MAX) -> Verdict:
    """Strong p-Cesàro verdict; without a hint the statistical candidate is used."""
    policy = policy or CheckpointPolicy()
    p = _rational(p)
    stops = policy.checkpoints
    seq = prefix(seq, stops[-1])
    details = {"p": p}
    if L_hint is None:
        stat, prof = _statistical(seq, policy, eps_schedule, norm, p_list=[p])
        details["statistical"] = str(stat)
        details["cluster_mass"] = stat.details["cluster_mass"]
        if prof is None:
            return Verdict(Outcome.INCONCLUSIVE, notes=("no statistical candidate limit",) + stat.notes, details=details)
        center = stat.details["candidate_L"]
    else:
        center = _coerce(L_hint, seq)
        prof = profile(seq, center, stops, p_list=[p], norm=norm)
    details["candidate_L"] = center
    evidence = tuple((n, _ratio(s, n, seq.exact)) for n, s in zip(stops, prof.sums[p]))
    outcome = classify([v for _, v in evidence], policy)
    return Verdict(
        outcome,
        center if outcome is Outcome.CONVERGES else None,
        evidence,
        certificate="none" if outcome is Outcome.INCONCLUSIVE else "truncation",
        details=details,
    )


@dataclass(frozen=True)
class Witness:
    """Subsequence n_j along which (1/n_j) sum_{k<=n_j} ||x_k||^p keeps growing."""

    rule: str
    indices: tuple
    values: tuple


def divergence_witness(seq: SequenceSpec, p, policy: CheckpointPolicy | None = None, norm: Norm = Norm.MAX) -> Witness | None:
    """Search squares, cubes and the checkpoints for a growing power-mean.

    A witness certifies that no L makes the sequence w_p summable: the mean
    of ||x_k||^p is at most the w_p residual about L plus a constant.
    """
    policy = policy or CheckpointPolicy()
    p = _rational(p)
    final = policy.final
    rules = {
        "squares": [j * j for j in range(1, math.isqrt(final) + 1)],
        "cubes": [r**3 for r in range(1, numeric.iroot(final, 3) + 1)],
        "checkpoints": list(policy.checkpoints),
    }
    stops = sorted(set().union(*rules.values()))
    prof = profile(seq, None, stops, p_list=[p], norm=norm)
    at = dict(zip(prof.stops, prof.sums[p]))
    for rule, idx in rules.items():
        values = [_ratio(at[n], n, seq.exact) for n in idx]
        if len(values) >= 3 and values[-1] > policy.div_threshold and strictly_increasing_tail(values):
            return Witness(rule, tuple(idx), tuple(values))
    return None


def wp_membership(seq: SequenceSpec, p, policy: CheckpointPolicy | None = None, norm: Norm = Norm.MAX,
                  eps_schedule=DEFAULT_EPS) -> Verdict:
    """w_p verdict, upgraded to a witnessed Diverges whenever a witness exists."""
    policy = policy or CheckpointPolicy()
    seq = prefix(seq, policy.final)
    v = wp_verdict(seq, p, policy, eps_schedule=eps_schedule, norm=norm)
    if v.converges:
        return v
    w = divergence_witness(seq, p, policy, norm)
    if w is None:
        return v
    details = dict(v.details, witness=w)
    evidence = tuple(zip(w.indices, w.values))
    note = f"power means grow along {w.rule}; no L makes the sequence w_p summable"
    return Verdict(Outcome.DIVERGES, None, evidence, v.notes + (note,), "witness", details)


@dataclass(frozen=True)
class CauchyReport:
    found_p0: int | None
    min_density: Fraction
    candidates: tuple  # ((p0, final density, verdict string), ...)


def statistical_cauchy_check(seq: SequenceSpec, eps, n: int, policy: CheckpointPolicy | None = None,
                             norm: Norm = Norm.MAX) -> CauchyReport:
    """Look for an anchor p0 >= n whose eps-exceedance set is null.

    Anchors tried: n, n+1, ..., n + n0 and every checkpoint >= n, in order.
    """
    policy = policy or CheckpointPolicy()
    eps = _rational(eps, "eps")
    n = _positive_index(n)
    stops = policy.checkpoints
    anchors = sorted(set(range(n, n + policy.n0 + 1)) | {c for c in stops if c >= n})
    values = {p0: seq.eval(p0) for p0 in anchors}
    distinct = list(dict.fromkeys(values.values()))
    rows_c = {v: v.as_array()[None, :] for v in distinct}
    totals = sweep_totals(
        seq,
        stops,
        lambda start, rows: {v: norm.rows_ge(numeric.sub(rows, rows_c[v], seq.exact), eps, seq.exact) for v in distinct},
    )
    counts = {v: totals[v] for v in distinct}
    table = []
    found = None
    best = None
    for p0 in anchors:
        dens = tuple((s, Fraction(c, s)) for s, c in zip(stops, counts[values[p0]]))
        v = classify_density(dens, policy)
        final = dens[-1][1]
        best = final if best is None else min(best, final)
        null = v.converges and v.limit.scalar == 0
        table.append((p0, final, "null" if null else str(v)))
        if null and found is None:
            found = p0
    return CauchyReport(found, best, tuple(table))


@dataclass(frozen=True)
class ConsistencyReport:
    stat_verdict: Verdict
    wp_verdict: Verdict
    bounded_flag: bool
    sup_norm: float
    sample_size: int
    bound_source: str
    consistent: bool
    note: str


def connor_cross_check(seq: SequenceSpec, p, policy: CheckpointPolicy | None = None,
                       eps_schedule=DEFAULT_EPS, norm: Norm = Norm.MAX) -> ConsistencyReport:
    """Run the statistical and w_p tests on one candidate and compare them.

    Bounded sequences must agree (statistical convergence and w_p
    summability coincide there); for unbounded ones disagreement is expected.
    """
    policy = policy or CheckpointPolicy()
    p = _rational(p)
    stops = policy.checkpoints
    seq = prefix(seq, stops[-1])
    stat, prof = _statistical(seq, policy, eps_schedule, norm, p_list=[p])
    center = stat.details["candidate_L"]
    if center is None:
        wp = Verdict(Outcome.INCONCLUSIVE, notes=("no statistical candidate limit",), details={"p": p})
        prof = profile(seq, None, stops, norm=norm)
    else:
        evidence = tuple((n, _ratio(s, n, seq.exact)) for n, s in zip(stops, prof.sums[p]))
        outcome = classify([v for _, v in evidence], policy)
        wp = Verdict(outcome, center if outcome is Outcome.CONVERGES else None, evidence,
                     certificate="none" if outcome is Outcome.INCONCLUSIVE else "truncation",
                     details={"p": p, "candidate_L": center})
    declared = seq.sup_bound()
    if declared is not None:
        bounded, source = math.isfinite(declared), "declared"
    else:
        quarter = prof.sup[max(len(stops) - 3, 0)]
        bounded = prof.sup[-1] <= (1 + policy.band) * quarter
        source = "empirical"
    disagree = {stat.outcome, wp.outcome} == {Outcome.CONVERGES, Outcome.DIVERGES}
    consistent = not (bounded and disagree)
    if disagree and not bounded:
        note = "verdicts differ on an unbounded sequence: boundedness is necessary for the converse"
    elif disagree:
        note = "bounded sequence with statistical and w_p verdicts in conflict"
    elif stat.converges and wp.converges:
        note = "statistical and w_p limits coincide"
    else:
        note = "no conflict between the verdicts"
    return ConsistencyReport(stat, wp, bounded, prof.sup[-1], stops[-1], source, consistent, note)


# ----------------------------------------------------------- Stolz–Cesàro ---


def _exact_divide(c: np.ndarray, k: np.ndarray) -> np.ndarray:
    """Exact c / k for an exact (m, d) array and an (m, 1) int64 column."""
    kk = np.broadcast_to(k, c.shape)
    if c.dtype == np.int64:
        g = np.gcd(c, kk)
        num, den = c // g, kk // g
        if np.all(den == 1):
            return num
        out = np.empty(c.shape, dtype=object)
        out[...] = num
        frac = den != 1
        out[frac] = [Fraction(int(a), int(b)) for a, b in zip(num[frac], den[frac])]
        return out
    out = np.empty(c.shape, dtype=object)
    out.ravel()[:] = [numeric.normalize(Fraction(v) / int(i)) for v, i in zip(c.ravel(), kk.ravel())]
    return numeric.tighten(out)


@dataclass(frozen=True)
class CesaroMeans(SequenceSpec):
    """M_n = (1/n) * sum_{k<=n} x_k as a sequence in its own right."""

    seq: SequenceSpec

    @property
    def dim(self):
        return self.seq.dim

    @property
    def exact(self):
        return self.seq.exact

    def blocks(self, stop, size=BLOCK):
        running = None
        for start, rows in self.seq.blocks(stop, size):
            c = numeric.cumulative(rows, self.exact)
            if running is not None:
                c = numeric.add(c, running, self.exact)
            running = c[-1:].copy()
            k = np.arange(start, start + len(rows), dtype=np.int64)[:, None]
            if self.exact:
                yield start, _exact_divide(c, k)
            else:
                yield start, c / k

    def block(self, start, stop):
        return block_from_blocks(self, start, stop)

    def describe(self):
        return f"means({self.seq.describe()})"


def limit_verdict(seq: SequenceSpec, policy: CheckpointPolicy | None = None, eps=DEFAULT_EPS[-1],
                  norm: Norm = Norm.MAX) -> Verdict:
    """Ordinary (norm) convergence at desk scale.

    With a tail cluster at L, the evidence is the largest deviation
    ||x_k - L|| over each window n/2 < k <= n.  Without one, a scalar sequence
    that exceeds ``div_threshold`` and keeps increasing (or the mirror image)
    is reported as Diverges with its direction.
    """
    policy = policy or CheckpointPolicy()
    stops = policy.checkpoints
    seq = prefix(seq, stops[-1])
    cl = find_cluster(tail_window(seq, stops[-1]), eps, policy.band, norm, seq.exact)
    details = {"candidate_L": cl.center, "cluster_mass": cl.mass}
    devs = [None] * len(stops)
    values = [None] * len(stops)
    c_row = None if cl.center is None else cl.center.as_array()[None, :]
    for start, rows in seq.blocks(stops[-1]):
        end = start + len(rows)
        dev = None if c_row is None else norm.rows_float(numeric.sub(rows, c_row, seq.exact))
        for i, s in enumerate(stops):
            if start <= s < end:
                values[i] = Point.from_row(rows[s - start], seq.exact)
            if dev is not None:
                lo, hi = max(s // 2 + 1, start), min(s, end - 1)
                if lo <= hi:
                    m = float(dev[lo - start : hi - start + 1].max())
                    devs[i] = m if devs[i] is None else max(devs[i], m)
    if c_row is not None:
        evidence = tuple(zip(stops, devs))
        if classify(devs, policy) is Outcome.CONVERGES:
            return Verdict(Outcome.CONVERGES, cl.center, evidence, certificate="truncation", details=details)
    if seq.dim == 1:
        trend = [v.scalar for v in values]
    else:
        trend = [norm.of(v) for v in values]
    evidence = tuple(zip(stops, trend))
    if trend[-1] > policy.div_threshold and strictly_increasing_tail(trend):
        details["direction"] = "+inf"
        return Verdict(Outcome.DIVERGES, None, evidence, ("grows past div_threshold",), "truncation", details)
    if seq.dim == 1 and trend[-1] < -policy.div_threshold and strictly_increasing_tail([-t for t in trend]):
        details["direction"] = "-inf"
        return Verdict(Outcome.DIVERGES, None, evidence, ("falls past -div_threshold",), "truncation", details)
    return Verdict(Outcome.INCONCLUSIVE, None, evidence, ("no limit and no monotone escape at desk scale",), details=details)


@dataclass(frozen=True)
class StolzReport:
    series_verdict: Verdict
    mean_of_sums_verdict: Verdict
    consistent: bool
    note: str


def stolz_cesaro_check(partial_sums: SequenceSpec, policy: CheckpointPolicy | None = None,
                       eps=DEFAULT_EPS[-1]) -> StolzReport:
    """Check that the means of the partial sums follow the partial sums."""
    if partial_sums.dim != 1:
        raise ValueError("Stolz–Cesàro check needs scalar partial sums")
    policy = policy or CheckpointPolicy()
    sv = limit_verdict(partial_sums, policy, eps)
    mv = limit_verdict(CesaroMeans(partial_sums), policy, eps)
    consistent, note = True, "means follow the partial sums"
    if sv.converges and mv.converges:
        gap = abs(float(sv.limit.scalar) - float(mv.limit.scalar))
        if gap > policy.abs_tol:
            consistent, note = False, f"limits differ by {gap:.3g}"
    elif sv.diverges:
        direction = sv.details.get("direction")
        final_mean = mv.evidence[-1][1] if mv.evidence else None
        if not mv.diverges and final_mean is not None:
            if direction == "+inf" and float(final_mean) < policy.div_threshold:
                consistent, note = False, "partial sums escape to +inf but the means stay bounded"
            if direction == "-inf" and float(final_mean) > -policy.div_threshold:
                consistent, note = False, "partial sums escape to -inf but the means stay bounded"
    return StolzReport(sv, mv, consistent, note)
