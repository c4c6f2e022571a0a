"""Summability toolkit: strong p-Cesàro (w_p) summability, statistical
convergence, natural density and the coefficient spaces of series in R^d."""

from .checkpoints import CheckpointPolicy, Outcome, Verdict
from .core import (
    cesaro_mean,
    cesaro_means,
    connor_cross_check,
    divergence_witness,
    find_cluster,
    statistical_cauchy_check,
    statistical_verdict,
    stolz_cesaro_check,
    strong_p_residual,
    wp_membership,
    wp_verdict,
)
from .density import density_verdict, parse_index_set, prefix_density
from .errors import (
    BudgetError,
    ModeError,
    OutOfRangeError,
    ParseError,
    PreconditionError,
    SummabilityError,
    UnsupportedError,
)
from .sequence_model import Norm, Point, SequenceSpec, make_builtin, parse_sequence, parse_sequence_file
from .series import (
    CoefficientSpec,
    FunctionalSpec,
    SeriesSpec,
    construct_divergent_coeffs,
    h_bound,
    operator_norm_check,
    parse_coefficients,
    parse_series,
    partial_sum,
    subset_sum_wp,
    swp_membership,
    weak_star_wp_membership,
    weak_wp_membership,
    wuc_verdict,
)

__version__ = "0.1.0"
