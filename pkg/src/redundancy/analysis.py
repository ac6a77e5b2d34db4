"""Expected job completion time per (distribution, scaling) cell and optimal-k selection.

A job of n CUs runs on n workers under an [n, k] assignment; completion time
is the k-th smallest task time. Every cell with a closed form is dispatched
through :func:`expected_time`; sums of Pareto CU times have none except at
k = n, and callers are pointed to Monte Carlo or the replication lower bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import montecarlo
from .birthday import replication_additive_sexp_mean
from .distributions import BiModal, Pareto, ServiceDistribution, ShiftedExp
from .errors import (
    EvaluationOverflow,
    MethodUnavailable,
    MomentDoesNotExist,
    NoClosedForm,
    QuadratureFailure,
)
from .jobs import CODING, SPLITTING, JobConfig, divisors, strategy_label
from .montecarlo import DEFAULT_SEED, DEFAULT_TRIALS
from .order_stats import (
    bimodal_order_mean,
    bimodal_sum_order_mean,
    erlang_order_mean,
    harmonic,
    pareto_order_mean,
)
from .scaling import Scaling, TaskModel


# ---------------------------------------------------------------------------
# per-cell closed forms; k may be any integer in 1..n unless the cell needs
# an integer task size (additive sums), in which case k must divide n.

def sexp_server_mean(n: int, k: int, delta: float, w: float) -> float:
    """delta + (n/k) w (H_n - H_{n-k}): the shift is paid once per server."""
    return delta + (n / k) * w * (harmonic(n) - harmonic(n - k))


def sexp_data_mean(n: int, k: int, delta: float, w: float) -> float:
    """(n/k) delta + w (H_n - H_{n-k}): per-CU cost plus one random term."""
    return (n / k) * delta + w * (harmonic(n) - harmonic(n - k))


def sexp_additive_mean(n: int, k: int, delta: float, w: float) -> float:
    """s delta plus the k-th order statistic of n Erlang(s, w) sums.

    Replication (k = 1) goes through the birthday-problem integral, which is
    both exact and cheap where the alternating Erlang sum is at its worst.
    """
    cfg = JobConfig(n, k)
    if w == 0.0:
        return cfg.s * delta
    if k == 1:
        return replication_additive_sexp_mean(n, delta, w)
    return cfg.s * delta + erlang_order_mean(n, k, cfg.s, w)


def pareto_server_mean(n: int, k: int, lam: float, alpha: float) -> float:
    return (n / k) * pareto_order_mean(n, k, lam, alpha)


def pareto_data_mean(n: int, k: int, shift: float, lam: float, alpha: float) -> float:
    return (n / k) * shift + pareto_order_mean(n, k, lam, alpha)


def pareto_additive_splitting_mean(n: int, lam: float, alpha: float) -> float:
    """Splitting is the one additive-Pareto case with a closed form (s = 1)."""
    return pareto_order_mean(n, n, lam, alpha)


def bimodal_server_mean(n: int, k: int, b: float, eps: float) -> float:
    return (n / k) * bimodal_order_mean(n, k, b, eps)


def bimodal_data_mean(n: int, k: int, shift: float, b: float, eps: float) -> float:
    return (n / k) * shift + bimodal_order_mean(n, k, b, eps)


def bimodal_additive_mean(n: int, k: int, b: float, eps: float) -> float:
    cfg = JobConfig(n, k)
    return bimodal_sum_order_mean(n, k, cfg.s, b, eps)


def expected_time(
    dist: ServiceDistribution,
    scaling: Scaling,
    n: int,
    k: int,
    shift: Optional[float] = None,
) -> float:
    """Exact E[completion time] for the cell, or NoClosedForm where none exists."""
    cfg = JobConfig(n, k)
    TaskModel(dist, scaling, cfg.s, shift)  # validates the shift rules
    if isinstance(dist, ShiftedExp):
        if scaling == Scaling.SERVER:
            return sexp_server_mean(n, k, dist.delta, dist.w)
        if scaling == Scaling.DATA:
            return sexp_data_mean(n, k, dist.delta, dist.w)
        return sexp_additive_mean(n, k, dist.delta, dist.w)
    if isinstance(dist, Pareto):
        if math.isinf(dist.alpha):  # degenerate point mass at lam
            base = cfg.s * dist.lam if scaling != Scaling.DATA else cfg.s * shift + dist.lam
            return base
        if scaling == Scaling.SERVER:
            return pareto_server_mean(n, k, dist.lam, dist.alpha)
        if scaling == Scaling.DATA:
            return pareto_data_mean(n, k, shift, dist.lam, dist.alpha)
        if k == n:
            return pareto_additive_splitting_mean(n, dist.lam, dist.alpha)
        raise NoClosedForm(
            "sums of Pareto CU times have no closed-form order statistics for "
            f"k < n (k={k}, n={n}); use Monte Carlo or the replication bound"
        )
    if scaling == Scaling.SERVER:
        return bimodal_server_mean(n, k, dist.b, dist.eps)
    if scaling == Scaling.DATA:
        return bimodal_data_mean(n, k, shift, dist.b, dist.eps)
    return bimodal_additive_mean(n, k, dist.b, dist.eps)


# ---------------------------------------------------------------------------
# sweeps over the divisors of n

@dataclass(frozen=True)
class SweepRow:
    k: int
    s: int
    rate: float
    value: Optional[float]
    method: str  # analytic | mc | lln | unavailable
    stderr: Optional[float] = None
    error: Optional[str] = None


@dataclass(frozen=True)
class SweepResult:
    rows: list[SweepRow]
    optimal: Optional[SweepRow]
    ties: list[int]  # every k achieving the minimum, increasing
    strategy: Optional[str]

    @property
    def optimal_k(self) -> Optional[int]:
        return self.optimal.k if self.optimal else None


def sweep(
    dist: ServiceDistribution,
    scaling: Scaling,
    n: int,
    shift: Optional[float] = None,
    method: str = "auto",
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
) -> SweepResult:
    """Evaluate every divisor k of n and mark the argmin.

    ``method``: 'analytic' (closed forms only; rows without one are marked
    unavailable), 'mc' (seeded Monte Carlo), 'lln' (two-point large-n limit,
    server/data only), or 'auto' (analytic with Monte Carlo fallback).
    Ties break toward larger k and are all reported.
    """
    if method not in ("auto", "analytic", "mc", "lln"):
        raise ValueError(f"unknown method {method!r}")
    if method == "lln" and not (
        isinstance(dist, BiModal) and scaling in (Scaling.SERVER, Scaling.DATA)
    ):
        raise MethodUnavailable("the LLN approximation only covers two-point server/data cells")
    rows = []
    for k in divisors(n):
        cfg = JobConfig(n, k)
        try:
            if method == "lln":
                value = bimodal_lln(scaling, cfg.rate, dist.b, dist.eps, shift)
                rows.append(SweepRow(k, cfg.s, cfg.rate, value, "lln"))
            elif method == "mc":
                rows.append(_mc_row(dist, scaling, n, k, shift, trials, seed))
            else:
                try:
                    value = expected_time(dist, scaling, n, k, shift)
                    rows.append(SweepRow(k, cfg.s, cfg.rate, value, "analytic"))
                except (NoClosedForm, EvaluationOverflow, QuadratureFailure) as exc:
                    # the expectation exists; only the exact route is out of
                    # reach, so auto mode estimates it instead
                    if method == "analytic":
                        rows.append(
                            SweepRow(k, cfg.s, cfg.rate, None, "unavailable", error=str(exc))
                        )
                    else:
                        rows.append(_mc_row(dist, scaling, n, k, shift, trials, seed))
        except MomentDoesNotExist as exc:
            rows.append(SweepRow(k, cfg.s, cfg.rate, None, "unavailable", error=str(exc)))
    available = [r for r in rows if r.value is not None]
    if not available:
        return SweepResult(rows, None, [], None)
    best = min(r.value for r in available)
    ties = [r.k for r in available if r.value == best]
    optimal = next(r for r in reversed(available) if r.k == ties[-1])
    return SweepResult(rows, optimal, ties, strategy_label(n, optimal.k))


def _mc_row(dist, scaling, n, k, shift, trials, seed) -> SweepRow:
    cfg = JobConfig(n, k)
    est = montecarlo.estimate(dist, scaling, n, k, trials=trials, seed=seed, shift=shift)
    return SweepRow(k, cfg.s, cfg.rate, est.mean, "mc", stderr=est.stderr)


# ---------------------------------------------------------------------------
# optimal-k characterizations

@dataclass(frozen=True)
class KStarResult:
    continuous: Optional[float]  # unconstrained stationary point, diagnostic only
    best_k: int  # best divisor, by exact evaluation
    best_value: float
    degenerate: bool = False  # deterministic service time, value independent of k
    best_integer_k: Optional[int] = None  # best over all k in 1..n where meaningful


def optimal_k_sexp_data(n: int, delta: float, w: float) -> KStarResult:
    """Data-dependent shifted exponential: k* = n(-d/2 + sqrt(d + d^2/4)), d = delta/w.

    The best divisor is found by exact evaluation, never by rounding k*.
    """
    if w == 0.0:
        return KStarResult(None, n, float(delta), degenerate=True)
    d = delta / w
    continuous = n * (-d / 2.0 + math.sqrt(d + d * d / 4.0))
    best_k = min(divisors(n), key=lambda k: (sexp_data_mean(n, k, delta, w), -k))
    ints = range(1, n + 1)
    best_int = min(ints, key=lambda k: (sexp_data_mean(n, k, delta, w), -k))
    return KStarResult(
        continuous, best_k, sexp_data_mean(n, best_k, delta, w), best_integer_k=best_int
    )


def optimal_k_pareto_server(n: int, alpha: float) -> KStarResult:
    """Server-dependent Pareto: k* = (alpha n - 1)/(alpha + 1); optimum is its floor or ceil."""
    if not alpha > 1:
        raise MomentDoesNotExist(f"needs alpha > 1, got {alpha}")
    continuous = (alpha * n - 1.0) / (alpha + 1.0)
    best_k = min(divisors(n), key=lambda k: (pareto_server_mean(n, k, 1.0, alpha), -k))
    best_int = min(range(1, n + 1), key=lambda k: (pareto_server_mean(n, k, 1.0, alpha), -k))
    return KStarResult(
        continuous,
        best_k,
        pareto_server_mean(n, best_k, 1.0, alpha),
        best_integer_k=best_int,
    )


def pareto_data_approx(n: int, k: int, delta: float, lam: float, alpha: float) -> float:
    """Gamma-ratio approximation n delta / k + lam (n/(n-k))^(1/alpha); needs k < n."""
    if not alpha > 1:
        raise MomentDoesNotExist(f"needs alpha > 1, got {alpha}")
    if not 1 <= k < n:
        raise ValueError("the approximation requires 1 <= k < n")
    return n * delta / k + lam * (n / (n - k)) ** (1.0 / alpha)


# ---------------------------------------------------------------------------
# two-point large-n (LLN) limits

def bimodal_lln(
    scaling: Scaling, r: float, b: float, eps: float, shift: Optional[float] = None
) -> float:
    """Large-n limit of E[completion] at code rate r.

    The fraction of fast workers concentrates at 1 - eps: the job finishes
    fast iff r < 1 - eps. At the undefined boundary r = 1 - eps the fast
    probability is taken as 1/2; use :func:`lln_at_boundary` to detect it.
    """
    if not 0.0 < r <= 1.0:
        raise ValueError("rate r must lie in (0, 1]")
    if not b > 1:
        raise ValueError("b must be > 1")
    p = 1.0 if 1.0 - eps > r else (0.0 if 1.0 - eps < r else 0.5)
    q = 1.0 - p
    if scaling == Scaling.SERVER:
        return (p + b * q) / r
    if scaling == Scaling.DATA:
        if shift is None:
            raise ValueError("data-dependent LLN needs the per-CU shift")
        return shift / r + p + b * q
    raise MethodUnavailable("no LLN limit for additive scaling")


def lln_at_boundary(r: float, eps: float) -> bool:
    """True when the rate sits exactly on the discontinuity r = 1 - eps."""
    return r == 1.0 - eps


def bimodal_lln_threshold(scaling: Scaling, b: float, shift: Optional[float] = None) -> float:
    """Straggling probability below which coding (rate 1 - eps) beats splitting.

    Server: (b-1)/b. Data: (b-1)/(shift + b - 1).
    """
    if not b > 1:
        raise ValueError("b must be > 1")
    if scaling == Scaling.SERVER:
        return (b - 1.0) / b
    if scaling == Scaling.DATA:
        shift = 0.0 if shift is None else shift
        return (b - 1.0) / (shift + b - 1.0)
    raise MethodUnavailable("no LLN threshold for additive scaling")


@dataclass(frozen=True)
class LlnOptimum:
    rate: float
    value: float
    strategy: str
    threshold: float


def bimodal_lln_optimum(
    scaling: Scaling, b: float, eps: float, shift: Optional[float] = None
) -> LlnOptimum:
    """Globally best rate under the LLN limit: 1 - eps below threshold, else 1."""
    thr = bimodal_lln_threshold(scaling, b, shift)
    shift_v = 0.0 if shift is None else shift
    if eps <= thr and eps < 1.0:
        rate = 1.0 - eps
        value = 1.0 / rate if scaling == Scaling.SERVER else 1.0 + shift_v / rate
    else:
        rate = 1.0
        value = b if scaling == Scaling.SERVER else shift_v + b
    strategy = SPLITTING if rate == 1.0 else CODING
    return LlnOptimum(rate, value, strategy, thr)


# ---------------------------------------------------------------------------
# replication lower bound and the splitting-vs-replication comparison

@dataclass(frozen=True)
class ReplicationBound:
    value: float
    vacuous: bool  # the concentration bracket was nonpositive


def pareto_replication_lower_bound(
    n: int, lam: float, alpha: float, eta: float
) -> ReplicationBound:
    """Lower bound n (m - eta) (1 - 21 xi / (n^2 eta^4))^n on replication time.

    m is the CU mean and xi its fourth moment; needs alpha > 4. When the
    bracket is nonpositive the bound is vacuous and reported as 0.
    """
    if not alpha > 4:
        raise MomentDoesNotExist(f"the bound needs a 4th moment (alpha > 4), got {alpha}")
    if eta <= 0:
        raise ValueError("eta must be > 0")
    if n < 1:
        raise ValueError("n must be >= 1")
    m = lam * alpha / (alpha - 1.0)
    xi = alpha * lam**4 / (alpha - 4.0)
    bracket = 1.0 - 21.0 * xi / (n * n * eta**4)
    if bracket <= 0.0:
        return ReplicationBound(0.0, True)
    return ReplicationBound(n * (m - eta) * bracket**n, False)


@dataclass(frozen=True)
class SplitVsReplication:
    n: int
    splitting: float
    replication: Optional[float]  # exact value where one exists
    replication_estimate: Optional[montecarlo.McEstimate]
    replication_bound: Optional[ReplicationBound]
    verdict: str  # splitting | replication | tie | inconclusive
    first_splitting_win: Optional[int] = None


def splitting_vs_replication_report(
    dist: ServiceDistribution,
    n: int,
    eta: float = 1.0,
    trials: int = 10_000,
    seed: int = DEFAULT_SEED,
    scan_max: int = 200,
) -> SplitVsReplication:
    """Compare k = n against k = 1 under additive scaling.

    Shifted-exponential and two-point jobs are settled exactly; Pareto
    replication is bracketed by a Monte Carlo estimate and, when the fourth
    moment exists, the concentration lower bound.
    """
    if n == 1:
        m = dist.mean()
        return SplitVsReplication(1, m, m, None, None, "tie")
    if isinstance(dist, ShiftedExp):
        split = sexp_additive_mean(n, n, dist.delta, dist.w)
        repl = sexp_additive_mean(n, 1, dist.delta, dist.w)
        first = None
        for m in range(1, scan_max + 1):
            if sexp_additive_mean(m, m, dist.delta, dist.w) < sexp_additive_mean(
                m, 1, dist.delta, dist.w
            ):
                first = m
                break
        return SplitVsReplication(
            n, split, repl, None, None, _exact_verdict(split, repl), first
        )
    if isinstance(dist, BiModal):
        split = bimodal_additive_mean(n, n, dist.b, dist.eps)
        repl = bimodal_additive_mean(n, 1, dist.b, dist.eps)
        return SplitVsReplication(n, split, repl, None, None, _exact_verdict(split, repl))
    split = pareto_additive_splitting_mean(n, dist.lam, dist.alpha)
    bound = None
    if dist.alpha > 4:
        bound = pareto_replication_lower_bound(n, dist.lam, dist.alpha, eta)
    est = montecarlo.estimate(
        dist, Scaling.ADDITIVE, n, 1, trials=trials, seed=seed
    )
    if bound is not None and not bound.vacuous and bound.value > split:
        verdict = "splitting"
    elif est.mean - 4.0 * est.stderr > split:
        verdict = "splitting"
    elif est.mean + 4.0 * est.stderr < split:
        verdict = "replication"
    else:
        verdict = "inconclusive"
    return SplitVsReplication(n, split, None, est, bound, verdict)


def _exact_verdict(split: float, repl: float) -> str:
    if split < repl:
        return "splitting"
    if repl < split:
        return "replication"
    return "tie"
