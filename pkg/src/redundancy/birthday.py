"""Generalized birthday problem: expected draws until some coupon repeats d times.

The exact expectation is E(n, d) = int_0^inf e^{-t} [S_d(t/n)]^n dt with
S_d(x) the first d terms of the exponential series. The integrand is a
survival probability, so it lives in (0, 1] and decays past t ~ E(n, d);
we truncate where a closed-form tail bound drops below a fixed fraction of
the integral and hand the finite interval to adaptive Gauss-Kronrod
quadrature. This expectation drives the replication strategy under
additive scaling: a job of n exponential CUs replicated on n workers
finishes in expected time n*delta + (w/n) E(n, n).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from scipy.integrate import quad

from .errors import QuadratureFailure


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy controls for the truncated semi-infinite integral."""

    rel_tol: float = 1e-10  # tolerance handed to the adaptive integrator
    target_rel_error: float = 1e-8  # acceptance threshold for the result
    tail_frac: float = 1e-12  # neglected-tail budget relative to the integral
    limit: int = 500  # max adaptive subintervals

    def __post_init__(self):
        if self.rel_tol <= 0 or self.target_rel_error <= 0 or self.tail_frac <= 0:
            raise ValueError("tolerances must be positive")
        if self.limit < 10:
            raise ValueError("limit must be at least 10")


DEFAULT_QUADRATURE = QuadratureSpec()


class BirthdayResult(NamedTuple):
    value: float
    error_estimate: float
    truncation: float


def _log_partial_exp(x: float, d: int) -> float:
    """log S_d(x) with S_d(x) = sum_{j<d} x^j / j!, factored at the max term."""
    if x == 0.0 or d == 1:
        return 0.0
    logx = math.log(x)
    # term j has log j*logx - lgamma(j+1); it peaks near j = min(d-1, x)
    j_star = min(d - 1, max(int(x), 0))
    anchor = j_star * logx - math.lgamma(j_star + 1)
    total = 0.0
    for j in range(d):
        total += math.exp(j * logx - math.lgamma(j + 1) - anchor)
    return anchor + math.log(total)


def _integrand(t: float, n: int, d: int) -> float:
    # e^{-t} [S_d(t/n)]^n = exp(n log S_d(t/n) - t), always in (0, 1]
    if t <= 0.0:
        return 1.0
    return math.exp(n * _log_partial_exp(t / n, d) - t)


def _log_tail_bound(big_t: float, n: int, d: int) -> float:
    """log of a bound on int_T^inf of the integrand.

    The integrand g is nonincreasing with local decay rate
    lambda(t) = 1 - S_{d-1}(t/n)/S_d(t/n), which itself is nondecreasing in t
    (the partial sums of exp are log-concave in d), so the tail past T is at
    most g(T)/lambda(T).
    """
    if d == 1:
        return -big_t
    if big_t <= 0.0:
        return math.inf
    x = big_t / n
    log_s = _log_partial_exp(x, d)
    log_g = n * log_s - big_t
    # lambda = (x^{d-1}/(d-1)!) / S_d(x)
    log_lambda = (d - 1) * math.log(x) - math.lgamma(d) - log_s
    return log_g - log_lambda


def _truncation_point(n: int, d: int, spec: QuadratureSpec) -> float:
    # the integral is at least d, so budget the tail against that floor
    log_budget = math.log(spec.tail_frac) + math.log(d)
    hi = n * d + 50.0 * math.sqrt(n * d) + 50.0
    while _log_tail_bound(hi, n, d) > log_budget:
        hi *= 1.5
    lo = 0.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if _log_tail_bound(mid, n, d) <= log_budget:
            hi = mid
        else:
            lo = mid
    return hi


def birthday_expectation_detail(
    n: int, d: int, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> BirthdayResult:
    """E(n, d) with the integrator's error estimate and truncation point."""
    if not isinstance(n, int) or n < 1 or not isinstance(d, int) or d < 1:
        raise ValueError("n and d must be positive integers")
    big_t = _truncation_point(n, d, spec)
    value, abserr, *rest = quad(
        _integrand,
        0.0,
        big_t,
        args=(n, d),
        epsabs=spec.rel_tol * d,
        epsrel=spec.rel_tol,
        limit=spec.limit,
        full_output=1,
    )
    if len(rest) > 1:  # infodict plus a warning message
        raise QuadratureFailure(f"E({n}, {d}): {rest[1]}")
    if abserr > spec.target_rel_error * max(abs(value), float(d)):
        raise QuadratureFailure(
            f"E({n}, {d}): error estimate {abserr:.3e} exceeds target"
        )
    return BirthdayResult(value, abserr, big_t)


def birthday_expectation(n: int, d: int, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Expected draws with replacement from n coupons until one shows up d times."""
    return birthday_expectation_detail(n, d, spec).value


def birthday_asymptotic(n: int, d: int) -> float:
    """Large-n asymptotic (d!)^(1/d) Gamma(1 + 1/d) n^(1 - 1/d)."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive integers")
    return math.exp(math.lgamma(d + 1) / d) * math.gamma(1.0 + 1.0 / d) * n ** (1.0 - 1.0 / d)


def replication_additive_sexp_mean(
    n: int, delta: float, w: float, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Expected completion of an n-CU shifted-exponential job replicated on n workers.

    Each worker sums n i.i.d. CU times; the first to finish all n wins:
    n*delta + (w/n) E(n, n).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if delta < 0 or w < 0:
        raise ValueError("delta and w must be >= 0")
    if w == 0.0:
        return n * delta
    return n * delta + (w / n) * birthday_expectation(n, n, spec)


def replication_additive_sexp_asymptotic(n: int, delta: float, w: float) -> float:
    """Large-n form: n*delta + (w/n) (n!)^(1/n) Gamma(1 + 1/n) n^(1 - 1/n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return n * delta + (w / n) * birthday_asymptotic(n, n)
