"""Seeded, reproducible Monte Carlo estimation of job completion times.

Trial i consumes a fixed window of a counter-based uniform stream, so every
trial is a pure function of (seed, i): estimates are bit-identical across
runs, chunk sizes, and worker counts. Chunks start at trial indices that are
multiples of four so the Philox block counter can jump straight to them.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .distributions import Pareto, ServiceDistribution
from .jobs import JobConfig
from .rng import uniform_block
from .scaling import Scaling, TaskModel

DEFAULT_TRIALS = 100_000
DEFAULT_SEED = 123456789
QUANTILE_POINTS = (0.5, 0.9, 0.99)

_TARGET_WORDS_PER_CHUNK = 1 << 22


def thread_count() -> int:
    """Parallelism cap from REDUNDANCY_THREADS (default 1). Results never depend on it."""
    raw = os.environ.get("REDUNDANCY_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    trials: int
    seed: int
    median: float
    quantiles: tuple[tuple[float, float], ...]
    stderr_unreliable: bool = False  # infinite-variance tail: stderr is not meaningful


@dataclass(frozen=True)
class JobSpec:
    """One Monte Carlo cell: distribution, scaling, [n, k], optional shift."""

    dist: ServiceDistribution
    scaling: Scaling
    n: int
    k: int
    shift: Optional[float] = None


class TrialPlan:
    """Maps trial index -> fixed word offset in the (seed)-keyed uniform stream."""

    def __init__(self, seed: int, words_per_trial: int):
        self.seed = int(seed)
        self.words_per_trial = int(words_per_trial)

    def uniforms(self, first_trial: int, count: int) -> np.ndarray:
        """Uniform block for trials [first_trial, first_trial + count).

        first_trial must be a multiple of 4 so the stream offset lands on a
        Philox block boundary for every words_per_trial.
        """
        if first_trial % 4:
            raise ValueError("chunks must start at trial indices divisible by 4")
        u = uniform_block(
            self.seed, first_trial * self.words_per_trial, count * self.words_per_trial
        )
        return u.reshape(count, self.words_per_trial)


def _chunk_bounds(trials: int, words_per_trial: int) -> list[tuple[int, int]]:
    per_chunk = max(_TARGET_WORDS_PER_CHUNK // max(words_per_trial, 1), 4)
    per_chunk -= per_chunk % 4  # keep starts on block boundaries
    return [(start, min(start + per_chunk, trials)) for start in range(0, trials, per_chunk)]


def sample_completion_times(
    dist: ServiceDistribution,
    scaling: Scaling,
    n: int,
    k: int,
    trials: int,
    seed: int,
    shift: Optional[float] = None,
) -> np.ndarray:
    """Array of `trials` seeded completion-time realizations of the [n, k] job."""
    cfg = JobConfig(n, k)
    tm = TaskModel(dist, scaling, cfg.s, shift)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    words_per_trial = n * tm.uniforms_per_task
    plan = TrialPlan(seed, words_per_trial)
    values = np.empty(trials, dtype=np.float64)

    def run(bounds: tuple[int, int]) -> None:
        start, stop = bounds
        count = stop - start
        u = plan.uniforms(start, count).reshape(count, n, tm.uniforms_per_task)
        times = tm.task_times(u)
        values[start:stop] = np.partition(times, k - 1, axis=1)[:, k - 1]

    chunks = _chunk_bounds(trials, words_per_trial)
    workers = thread_count()
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, chunks))
    else:
        for c in chunks:
            run(c)
    return values


def estimate(
    dist: ServiceDistribution,
    scaling: Scaling,
    n: int,
    k: int,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    shift: Optional[float] = None,
) -> McEstimate:
    """Seeded mean completion time of the [n, k] job with its standard error.

    Deterministic given the arguments; for Pareto tails with alpha <= 2 the
    variance is infinite and the stderr is flagged unreliable (the quantiles
    remain trustworthy).
    """
    if trials < 2:
        raise ValueError("trials must be >= 2")
    values = sample_completion_times(dist, scaling, n, k, trials, seed, shift)
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(trials))
    qs = tuple((p, float(np.quantile(values, p))) for p in QUANTILE_POINTS)
    unreliable = isinstance(dist, Pareto) and dist.alpha <= 2.0
    return McEstimate(
        mean=mean,
        stderr=stderr,
        trials=trials,
        seed=seed,
        median=float(np.median(values)),
        quantiles=qs,
        stderr_unreliable=unreliable,
    )


@dataclass(frozen=True)
class DominanceReport:
    """Empirical tail comparison P{A > x} <= P{B > x} over a grid."""

    grid: np.ndarray
    tail_a: np.ndarray
    tail_b: np.ndarray
    sigma: np.ndarray
    max_violation: float  # max over the grid of P_A - P_B
    max_violation_sigmas: float  # the same, in units of the binomial band
    dominated: bool  # no violation beyond 3 sigma


def empirical_cdf_compare(
    config_a: JobSpec,
    config_b: JobSpec,
    trials: int,
    seed: int,
    grid: np.ndarray,
) -> DominanceReport:
    """Check whether B stochastically dominates A on the given grid.

    Both configurations are driven by the same seed, so identical configs
    compare exactly equal.
    """
    grid = np.asarray(grid, dtype=np.float64)
    va = sample_completion_times(
        config_a.dist, config_a.scaling, config_a.n, config_a.k, trials, seed, config_a.shift
    )
    vb = sample_completion_times(
        config_b.dist, config_b.scaling, config_b.n, config_b.k, trials, seed, config_b.shift
    )
    tail_a = (va[None, :] > grid[:, None]).mean(axis=1)
    tail_b = (vb[None, :] > grid[:, None]).mean(axis=1)
    sigma = np.sqrt((tail_a * (1 - tail_a) + tail_b * (1 - tail_b)) / trials)
    diff = tail_a - tail_b
    max_violation = float(diff.max()) if diff.size else 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        sigmas = np.where(sigma > 0, diff / sigma, np.where(diff > 0, np.inf, 0.0))
    max_violation_sigmas = float(sigmas.max()) if sigmas.size else 0.0
    return DominanceReport(
        grid=grid,
        tail_a=tail_a,
        tail_b=tail_b,
        sigma=sigma,
        max_violation=max_violation,
        max_violation_sigmas=max_violation_sigmas,
        dominated=max_violation_sigmas <= 3.0,
    )
