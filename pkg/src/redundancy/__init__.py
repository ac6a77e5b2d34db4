"""Expected completion time of [n, k]-coded distributed jobs.

A job of n computing units runs on n workers; any k task completions finish
it. The library gives closed-form expectations for shifted-exponential,
Pareto and two-point service times under three task-size scaling models, a
seeded Monte Carlo cross-check, optimal-strategy selection, and a CLI that
reproduces the standard figure data.
"""

from .analysis import (
    SweepResult,
    SweepRow,
    bimodal_lln,
    bimodal_lln_optimum,
    bimodal_lln_threshold,
    expected_time,
    optimal_k_pareto_server,
    optimal_k_sexp_data,
    pareto_data_approx,
    pareto_replication_lower_bound,
    splitting_vs_replication_report,
    sweep,
)
from .birthday import (
    QuadratureSpec,
    birthday_asymptotic,
    birthday_expectation,
    replication_additive_sexp_mean,
    replication_additive_sexp_asymptotic,
)
from .distributions import (
    BiModal,
    Pareto,
    ServiceDistribution,
    ShiftedExp,
    distribution_literal,
    parse_distribution,
)
from .errors import (
    EvaluationOverflow,
    MethodUnavailable,
    MomentDoesNotExist,
    NoClosedForm,
    QuadratureFailure,
)
from .jobs import JobConfig, divisors, strategy_label
from .montecarlo import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    JobSpec,
    McEstimate,
    empirical_cdf_compare,
    estimate,
)
from .order_stats import (
    HarmonicTable,
    bimodal_order_mean,
    bimodal_sum_order_mean,
    bimodal_sum_order_pmf,
    erlang_order_mean,
    exp_order_mean,
    gamma_ratio_approx,
    harmonic,
    pareto_order_mean,
)
from .rng import RandomStream
from .scaling import Scaling, TaskModel

__version__ = "0.1.0"
