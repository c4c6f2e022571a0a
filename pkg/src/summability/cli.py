"""Command-line front end: one subcommand per operation, JSON or CSV out.

Exit status: 0 when a report is written (whatever the verdict), 2 for
parse/configuration errors, 3 when an operation's precondition fails.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import core, density, numeric, report, series
from .checkpoints import CheckpointPolicy
from .errors import BudgetError, ModeError, OutOfRangeError, ParseError, PreconditionError
from .sequence_model import Norm, parse_point, parse_sequence

SEED_ENV = "SUMMABILITY_SEED"

EXIT_OK, EXIT_CONFIG, EXIT_PRECONDITION = 0, 2, 3

POLICY_FLAGS = {
    "n0": int,
    "growth": numeric.parse_rational,
    "count": int,
    "abs_tol": float,
    "decay_ratio": float,
    "div_threshold": float,
    "band": float,
}


@dataclass
class RunConfig:
    """Everything a run depends on; unknown keys are rejected by argparse."""

    command: str
    specs: dict = field(default_factory=dict)
    p: Fraction | None = None
    policy: CheckpointPolicy = field(default_factory=CheckpointPolicy)
    mode: str = "float"
    norm: Norm = Norm.MAX
    fmt: str = "json"
    out: str | None = None
    seed: int = series.DEFAULT_SEED
    extra: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.mode == "exact"


# ------------------------------------------------------------- handlers ---


def _need(cfg: RunConfig, *names):
    missing = [n for n in names if cfg.specs.get(n) is None]
    if missing:
        raise ParseError(f"{cfg.command} needs --{', --'.join(missing)}")


def _seq(cfg):
    _need(cfg, "seq")
    return parse_sequence(cfg.specs["seq"], cfg.exact)


def _series(cfg):
    _need(cfg, "series")
    return series.parse_series(cfg.specs["series"], cfg.exact, cfg.norm)


def _coeffs(cfg, default=None):
    text = cfg.specs.get("coeffs") or default
    if text is None:
        raise ParseError(f"{cfg.command} needs --coeffs")
    return series.parse_coefficients(text, cfg.exact, cfg.seed)


def _p(cfg):
    if cfg.p is None:
        raise ParseError(f"{cfg.command} needs --p")
    return cfg.p


def _report(cfg, **kw):
    return report.make_report(cfg.command, cfg.specs, cfg.mode, cfg.policy, **kw)


def run_density(cfg):
    """Prefix and asymptotic natural density of an index set."""
    _need(cfg, "set")
    s = density.parse_index_set(cfg.specs["set"], cfg.exact)
    est = density.density_verdict(s, cfg.policy)
    extra = {"closed_form": s.closed_form()}
    if cfg.extra.get("n"):
        extra["prefix_density"] = density.prefix_density(s, cfg.extra["n"])
    return _report(cfg, verdict=est.verdict, **extra)


def run_cesaro(cfg):
    """Cesàro means at the checkpoints."""
    seq = _seq(cfg)
    stops = cfg.policy.checkpoints
    n = cfg.extra.get("n")
    means = core.cesaro_means(seq, stops + ([n] if n else []))
    at = dict(zip(sorted(set(stops + ([n] if n else []))), means))
    table = [(k, at[k]) for k in stops]
    final = at[n or stops[-1]]
    return _report(
        cfg,
        checkpoints=table,
        n=n or stops[-1],
        mean=final,
        mean_norm=report.point(cfg.norm.of(final)),
        tables={"mean_norm": [(k, report.point(cfg.norm.of(at[k]))) for k in stops]},
    )


def run_wp(cfg):
    """Strong p-Cesàro (w_p) verdict."""
    seq = _seq(cfg)
    hint = parse_point(cfg.specs["L"], seq.exact) if cfg.specs.get("L") else None
    v = core.wp_verdict(seq, _p(cfg), cfg.policy, L_hint=hint, norm=cfg.norm)
    final = v.evidence[-1][1] if v.evidence else None
    return _report(cfg, p=cfg.p, verdict=v, final_residual=report.point(final), cluster_mass=v.details.get("cluster_mass"))


def run_stat(cfg):
    """Statistical convergence verdict."""
    v = core.statistical_verdict(_seq(cfg), cfg.policy, norm=cfg.norm)
    return _report(cfg, verdict=v, cluster_mass=v.details.get("cluster_mass"),
                   cluster_radius=v.details.get("cluster_radius"))


def run_cauchy(cfg):
    """Statistical Cauchy anchor search."""
    seq = _seq(cfg)
    eps = cfg.extra.get("eps") or Fraction(1, 2)
    n = cfg.extra.get("n") or 1
    r = core.statistical_cauchy_check(seq, eps, n, cfg.policy, cfg.norm)
    notes = [f"anchor p0 = {r.found_p0} has a null exceedance set"] if r.found_p0 else ["no anchor with a null exceedance set"]
    return _report(
        cfg,
        notes=notes,
        eps=eps,
        n=n,
        found_p0=r.found_p0,
        min_density=r.min_density,
        checkpoints=[(p0, d) for p0, d, _ in r.candidates],
        anchors=[{"p0": p0, "final_density": d, "verdict": s} for p0, d, s in r.candidates],
    )


def run_connor(cfg):
    """Statistical vs w_p cross-check."""
    r = core.connor_cross_check(_seq(cfg), _p(cfg), cfg.policy, norm=cfg.norm)
    return _report(
        cfg,
        p=cfg.p,
        verdict=r.wp_verdict,
        candidate=r.stat_verdict.details.get("candidate_L"),
        notes=[r.note],
        statistical=r.stat_verdict,
        wp=r.wp_verdict,
        bounded=r.bounded_flag,
        bound_source=r.bound_source,
        sup_norm=r.sup_norm,
        sample_size=r.sample_size,
        consistent=r.consistent,
    )


def run_witness(cfg):
    """Divergence witness search."""
    w = core.divergence_witness(_seq(cfg), _p(cfg), cfg.policy, cfg.norm)
    if w is None:
        return _report(cfg, p=cfg.p, notes=["no growing power mean along squares, cubes or checkpoints"], witness=None)
    return _report(
        cfg,
        p=cfg.p,
        checkpoints=list(zip(w.indices, w.values)),
        notes=[f"power means grow along {w.rule}"],
        witness={"rule": w.rule, "n_j": list(w.indices), "values": [report.point(v) for v in w.values]},
    )


def run_stolz(cfg):
    """Partial sums vs their Cesàro means."""
    if cfg.specs.get("series"):
        S = series.partial_sums(_series(cfg), _coeffs(cfg, "const:1"))
    else:
        S = _seq(cfg)
    r = core.stolz_cesaro_check(S, cfg.policy)
    return _report(
        cfg,
        verdict=r.series_verdict,
        notes=[r.note],
        partial_sums=r.series_verdict,
        means=r.mean_of_sums_verdict,
        consistent=r.consistent,
    )


def run_hbound(cfg):
    """wuc bound H of a series."""
    s = _series(cfg)
    n = cfg.extra.get("n") or cfg.policy.final
    h = series.h_bound(s, n)
    table = []
    if s.norm is Norm.MAX:
        stops = [k for k in cfg.policy.checkpoints if k < n] + [n]
        table = list(zip(stops, series.h_profile(s, stops)))
    return _report(cfg, checkpoints=table, n=n, H=report.point(h))


def run_wuc(cfg):
    """Is the series weakly unconditionally Cauchy?"""
    v = series.wuc_verdict(_series(cfg), cfg.policy)
    return _report(cfg, verdict=v, closed_form_wuc=v.details.get("closed_form_wuc"))


def run_member(cfg):
    """Membership of coefficients in S_wp."""
    s = _series(cfg)
    v = series.swp_membership(s, _coeffs(cfg), _p(cfg), cfg.policy)
    w = v.details.get("witness")
    extra = {"witness": {"rule": w.rule, "n_j": list(w.indices)}} if w else {}
    return _report(cfg, p=cfg.p, verdict=v, **extra)


def _block_rows(rows):
    return [
        {"t": r.t, "start": r.start, "m_t": r.end, "coefficient": report.point(r.coefficient),
         "abs_sum": report.point(r.abs_sum), "block_sum": report.point(r.block_sum)}
        for r in rows
    ]


def run_construct(cfg):
    """Blockwise divergent coefficients."""
    _need(cfg, "f")
    f = series.parse_f_values(cfg.specs["f"], cfg.exact)
    blocks = cfg.extra.get("blocks") or 2
    budget = cfg.extra.get("budget") or 10**7
    try:
        c = series.construct_divergent_coeffs(f, blocks, budget, cfg.specs["f"])
    except BudgetError as exc:
        partial = _report(
            cfg,
            checkpoints=[(r.end, r.block_sum) for r in exc.blocks],
            notes=[str(exc)],
            complete=False,
            blocks=_block_rows(exc.blocks),
            reached_index=exc.reached,
            reached_block_abs_sum=report.point(exc.prefix_sum),
        )
        exc.report = partial
        raise
    return _report(
        cfg,
        checkpoints=[(r.end, r.block_sum) for r in c.blocks],
        complete=True,
        blocks=_block_rows(c.blocks),
    )


def _panel(rep: series.PanelReport, probe_name: str) -> list:
    return [{probe_name: row.probe, **report.verdict_fields(row.verdict)} for row in rep.rows]


def run_weak(cfg):
    """Weak w_p membership over functionals."""
    s = _series(cfg)
    fs = None
    if cfg.specs.get("functionals"):
        fs = [series.FunctionalSpec(p) for p in series.read_points(cfg.specs["functionals"], s.exact)]
    rep = series.weak_wp_membership(s, _coeffs(cfg), fs, _p(cfg), cfg.policy, cfg.seed)
    return _report(cfg, p=cfg.p, verdict=rep.aggregate, flags=list(rep.flags),
                   limit_misfit=rep.limit_residual, functionals=_panel(rep, "functional"))


def run_weakstar(cfg):
    """Weak* w_p membership over test points."""
    s = _series(cfg)
    pts = series.read_points(cfg.specs["points"], s.exact) if cfg.specs.get("points") else None
    rep = series.weak_star_wp_membership(s, _coeffs(cfg), pts, _p(cfg), cfg.policy, cfg.seed)
    return _report(cfg, p=cfg.p, verdict=rep.aggregate, flags=list(rep.flags),
                   limit_misfit=rep.limit_residual, test_points=_panel(rep, "x"))


def run_subset(cfg):
    """w_p verdict of a subseries at a point."""
    s = _series(cfg)
    _need(cfg, "set", "x")
    index_set = density.parse_index_set(cfg.specs["set"], cfg.exact)
    x = parse_point(cfg.specs["x"], s.exact)
    v = series.subset_sum_wp(s, index_set, x, _p(cfg), cfg.policy)
    return _report(cfg, p=cfg.p, verdict=v)


def run_opnorm(cfg):
    """Operator bound ||T(a)|| <= H ||a||."""
    s = _series(cfg)
    samples = []
    if cfg.specs.get("coeffs"):
        samples.append(_coeffs(cfg))
    count = cfg.extra.get("samples")
    if count is None and not samples:
        count = 8
    if count:
        if cfg.exact:
            raise ModeError("random coefficient samples are floating-only; use --mode float or --coeffs")
        samples += [
            series.CoefficientSpec(series.HashNoise(1, 1.0, cfg.seed + i), 1.0, f"noise:seed={cfg.seed + i:#x},amp=1")
            for i in range(count)
        ]
    rep = series.operator_norm_check(s, samples, _p(cfg), cfg.policy)
    rows = [
        {"coeffs": r.coeffs, "sup_a": r.sup_a, "norm_T": r.norm_T, "bound_ok": r.bound_ok,
         "outcome": r.verdict.outcome.value, "limit": r.verdict.limit}
        for r in rep.samples
    ]
    notes = ["every sample satisfies ||T(a)|| <= H ||a|| + abs_tol" if rep.all_ok else "bound violated"]
    return _report(cfg, p=cfg.p, notes=notes, H=report.point(rep.H), all_ok=rep.all_ok, samples=rows)


HANDLERS = {
    "density": run_density,
    "cesaro": run_cesaro,
    "wp": run_wp,
    "stat": run_stat,
    "cauchy": run_cauchy,
    "connor": run_connor,
    "witness": run_witness,
    "stolz": run_stolz,
    "hbound": run_hbound,
    "wuc": run_wuc,
    "member": run_member,
    "construct": run_construct,
    "weak": run_weak,
    "weakstar": run_weakstar,
    "subset": run_subset,
    "opnorm": run_opnorm,
}

# spec-string flags each subcommand accepts
SPEC_FLAGS = {
    "density": ("set",),
    "cesaro": ("seq",),
    "wp": ("seq", "L"),
    "stat": ("seq",),
    "cauchy": ("seq",),
    "connor": ("seq",),
    "witness": ("seq",),
    "stolz": ("seq", "series", "coeffs"),
    "hbound": ("series",),
    "wuc": ("series",),
    "member": ("series", "coeffs"),
    "construct": ("f",),
    "weak": ("series", "coeffs", "functionals"),
    "weakstar": ("series", "coeffs", "points"),
    "subset": ("series", "set", "x"),
    "opnorm": ("series", "coeffs"),
}
USES_P = {"wp", "connor", "witness", "member", "weak", "weakstar", "subset", "opnorm"}
EXTRA_FLAGS = {
    "density": ("n",),
    "cesaro": ("n",),
    "cauchy": ("eps", "n"),
    "hbound": ("n",),
    "construct": ("blocks", "budget"),
    "opnorm": ("samples",),
}
EXTRA_TYPES = {"n": int, "eps": numeric.parse_rational, "blocks": int, "budget": int, "samples": int}


# --------------------------------------------------------------- parser ---


def _seed(text: str) -> int:
    try:
        return int(text, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be hexadecimal, got {text!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return numeric.parse_rational(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="summability",
        description="Strong p-Cesàro, statistical and series-space summability checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in HANDLERS:
        sp = sub.add_parser(name, help=HANDLERS[name].__doc__)
        for flag in SPEC_FLAGS[name]:
            sp.add_argument(f"--{flag}", dest=f"spec_{flag}", metavar="DSL")
        if name in USES_P:
            sp.add_argument("--p", type=_rational, required=True, help="exponent, a positive rational")
        for flag in EXTRA_FLAGS.get(name, ()):
            sp.add_argument(f"--{flag}", dest=f"extra_{flag}", type=EXTRA_TYPES[flag] if flag != "eps" else _rational)
        sp.add_argument("--mode", choices=("exact", "float"), default="float")
        sp.add_argument("--norm", choices=[n.value for n in Norm], default="max")
        sp.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")
        sp.add_argument("--out", help="write the report here instead of standard output")
        sp.add_argument("--seed", type=_seed, help=f"hex seed (fallback: ${SEED_ENV}, then 0xCE5A)")
        for flag, kind in POLICY_FLAGS.items():
            sp.add_argument(f"--{flag.replace('_', '-')}", dest=f"policy_{flag}",
                            type=kind if kind is not numeric.parse_rational else _rational)
    return parser


def config_from_args(args: argparse.Namespace, environ=None) -> RunConfig:
    environ = os.environ if environ is None else environ
    ns = vars(args)
    overrides = {k[len("policy_"):]: v for k, v in ns.items() if k.startswith("policy_") and v is not None}
    policy = CheckpointPolicy(**overrides)  # ValueError on invalid values
    seed = args.seed
    if seed is None:
        env = environ.get(SEED_ENV)
        seed = _seed(env) if env else series.DEFAULT_SEED
    return RunConfig(
        command=args.command,
        specs={k[len("spec_"):]: v for k, v in ns.items() if k.startswith("spec_")},
        p=ns.get("p"),
        policy=policy,
        mode=args.mode,
        norm=Norm(args.norm),
        fmt=args.fmt,
        out=args.out,
        seed=seed,
        extra={k[len("extra_"):]: v for k, v in ns.items() if k.startswith("extra_")},
    )


def run(cfg: RunConfig) -> dict:
    if cfg.p is not None and cfg.p <= 0:
        raise ValueError("p must be positive")
    return HANDLERS[cfg.command](cfg)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on usage errors
    try:
        cfg = config_from_args(args)
        rep = run(cfg)
    except BudgetError as exc:
        if getattr(exc, "report", None) is not None:
            _emit(report.render(exc.report, args.fmt), args.out)
        print(f"summability: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ParseError, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"summability: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PreconditionError, OutOfRangeError, ModeError) as exc:
        print(f"summability: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    _emit(report.render(rep, cfg.fmt), cfg.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
