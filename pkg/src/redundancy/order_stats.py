"""Closed-form expectations of k-th order statistics.

Covers the four families the job-completion analysis needs: exponential
(harmonic numbers), Erlang (Gupta's alternating finite sum for gamma order
statistics), Pareto (log-gamma ratio), and the two-point distribution and
sums of it (binomial tail sums).

The Erlang sum alternates over terms that dwarf the result, so it is
evaluated in exact rational arithmetic and only rounded once at the end;
double precision would lose every significant digit beyond n of about 20.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .errors import EvaluationOverflow, MomentDoesNotExist

# Largest inner polynomial degree (s-1)*(n-1) accepted by erlang_order_mean
# and largest n accepted by the two-point sum formulas. Both cover the
# validated range (n = 60, s <= 12) with room to spare; beyond them cost or
# float range become the binding constraint.
ERLANG_DEGREE_GUARD = 800
BIMODAL_N_GUARD = 1000


class HarmonicTable:
    """Cached harmonic numbers H_j = sum_{i<=j} 1/i, immutable once built."""

    def __init__(self, max_index: int):
        values = [0.0]
        h = 0.0
        for j in range(1, max_index + 1):
            h += 1.0 / j
            values.append(h)
        self._values = tuple(values)

    @property
    def max_index(self) -> int:
        return len(self._values) - 1

    def value(self, j: int) -> float:
        if j < 0:
            raise ValueError("harmonic index must be >= 0")
        return self._values[j]


_table = HarmonicTable(64)


def harmonic(j: int) -> float:
    """H_j, growing the shared table on demand (atomic swap, thread-safe)."""
    global _table
    t = _table
    if j > t.max_index:
        t = HarmonicTable(max(j, 2 * t.max_index))
        _table = t
    return t.value(j)


def _check_order_args(n: int, k: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    if not isinstance(k, int) or k < 1 or k > n:
        raise ValueError(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")


def exp_order_mean(n: int, k: int, w: float) -> float:
    """E of the k-th smallest of n i.i.d. Exp(w): w * (H_n - H_{n-k})."""
    _check_order_args(n, k)
    if w < 0:
        raise ValueError("w must be >= 0")
    return w * (harmonic(n) - harmonic(n - k))


def _binomial_log_terms_max(n: int, upto: int, log_e: float, log_c: float) -> int:
    # index of the largest term C(n,i) * eps^(n-i) * (1-eps)^i over 0..upto;
    # the term ratio is monotone, so the max sits at the clamped mode
    mode = (n + 1) * math.exp(log_c) / (math.exp(log_c) + math.exp(log_e)) - 1
    return min(max(int(math.ceil(mode)), 0), upto)


def straggler_tail(n: int, k: int, eps: float) -> float:
    """sum_{i=0}^{k-1} C(n,i) eps^(n-i) (1-eps)^i.

    This is the probability that fewer than k of n workers are fast when
    each is independently fast with probability 1 - eps. Summed from the
    largest term outward in log space, so it stays accurate when the raw
    terms underflow (large n, small eps).
    """
    _check_order_args(n, k)
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must lie in [0, 1]")
    if eps == 0.0:
        return 1.0 if k - 1 >= n else 0.0
    if eps == 1.0:
        return 1.0
    log_e, log_c = math.log(eps), math.log1p(-eps)

    def log_term(i: int) -> float:
        return (
            math.lgamma(n + 1)
            - math.lgamma(i + 1)
            - math.lgamma(n - i + 1)
            + (n - i) * log_e
            + i * log_c
        )

    i_star = _binomial_log_terms_max(n, k - 1, log_e, log_c)
    anchor = log_term(i_star)
    total = 1.0
    # walk down from the peak in both directions; terms decay geometrically
    ratio_down = 1.0
    for i in range(i_star - 1, -1, -1):
        # T_i / T_{i+1} = ((i+1) / (n-i)) * (eps / (1-eps))
        ratio_down *= (i + 1) / (n - i) * (eps / (1.0 - eps))
        total += ratio_down
        if ratio_down < 1e-18:
            break
    ratio_up = 1.0
    for i in range(i_star + 1, k):
        # T_i / T_{i-1} = ((n-i+1) / i) * ((1-eps) / eps)
        ratio_up *= (n - i + 1) / i * ((1.0 - eps) / eps)
        total += ratio_up
        if ratio_up < 1e-18:
            break
    log_total = anchor + math.log(total)
    if log_total < -745.0:
        return 0.0
    return min(math.exp(log_total), 1.0)


def bimodal_order_mean(n: int, k: int, b: float, eps: float) -> float:
    """E of the k-th smallest of n i.i.d. two-point values in {1, b}."""
    _check_order_args(n, k)
    if not b > 1:
        raise ValueError("b must be > 1")
    return 1.0 + (b - 1.0) * straggler_tail(n, k, eps)


def pareto_order_mean(n: int, k: int, lam: float, alpha: float) -> float:
    """E of the k-th smallest of n i.i.d. Pareto(lam, alpha), alpha > 1.

    lam * n!/(n-k)! * Gamma(n-k+1-1/alpha) / Gamma(n+1-1/alpha), evaluated
    entirely in log space so large n cannot overflow.
    """
    _check_order_args(n, k)
    if lam <= 0:
        raise ValueError("lam must be > 0")
    if not alpha > 1:
        raise MomentDoesNotExist(f"Pareto order mean needs alpha > 1, got {alpha}")
    inv = 1.0 / alpha
    log_val = (
        math.lgamma(n + 1)
        - math.lgamma(n - k + 1)
        + math.lgamma(n - k + 1 - inv)
        - math.lgamma(n + 1 - inv)
    )
    return lam * math.exp(log_val)


def gamma_ratio_approx(x: float, beta: float, alpha: float) -> float:
    """Asymptotic Gamma(x + beta) / Gamma(x + alpha) ~ x^(beta - alpha)."""
    if x <= 0:
        raise ValueError("x must be > 0")
    return x ** (beta - alpha)


def _erlang_scaled_powers(s: int, max_power: int) -> list[list[int]]:
    """Integer coefficient arrays of ((s-1)! * sum_{l<s} t^l / l!)^y, y = 0..max_power."""
    fact = math.factorial(s - 1)
    base = [fact // math.factorial(l) for l in range(s)]
    powers = [[1]]
    for _ in range(max_power):
        prev = powers[-1]
        nxt = [0] * (len(prev) + s - 1)
        for i, c in enumerate(prev):
            if c:
                for l, bcoef in enumerate(base):
                    nxt[i + l] += c * bcoef
        powers.append(nxt)
    return powers


def erlang_order_mean(n: int, k: int, s: int, w: float) -> float:
    """E of the k-th smallest of n i.i.d. Erlang(s, w) via Gupta's formula.

    (w k/(s-1)!) C(n,k) sum_i (-1)^i C(k-1,i) sum_j a_j(s, n-k+i)
    (s+j)!/(n-k+i+1)^(s+j+1), where a_j(x, y) is the coefficient of t^j in
    (sum_{l<x} t^l/l!)^y. The alternating outer sum cancels many digits, so
    everything up to the final rounding is exact rational arithmetic.
    """
    _check_order_args(n, k)
    if not isinstance(s, int) or s < 1:
        raise ValueError("s must be a positive integer")
    if w < 0:
        raise ValueError("w must be >= 0")
    if (s - 1) * (n - 1) > ERLANG_DEGREE_GUARD:
        raise EvaluationOverflow("erlang_order_mean", n=n, s=s)
    fact = math.factorial(s - 1)
    powers = _erlang_scaled_powers(s, n - k + (k - 1))
    total = Fraction(0)
    for i in range(k):
        m = n - k + i
        coeffs = powers[m]
        denom_scale = fact**m
        inner = Fraction(0)
        for j, c in enumerate(coeffs):
            if c:
                inner += Fraction(
                    c * math.factorial(s + j), denom_scale * (m + 1) ** (s + j + 1)
                )
        term = math.comb(k - 1, i) * inner
        total += -term if i % 2 else term
    exact = Fraction(k * math.comb(n, k), fact) * total
    return w * float(exact)


def bimodal_sum_order_pmf(n: int, k: int, s: int, b: float, eps: float) -> list[tuple[float, float]]:
    """Distribution of the k-th smallest of n sums of s i.i.d. two-point CUs.

    Each sum takes the value s + w(b-1) when w of its CUs straggle. Returns
    the (value, probability) pairs for w = 0..s.
    """
    _check_order_args(n, k)
    if not isinstance(s, int) or s < 1:
        raise ValueError("s must be a positive integer")
    if not b > 1:
        raise ValueError("b must be > 1")
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must lie in [0, 1]")
    if n > BIMODAL_N_GUARD:
        raise EvaluationOverflow("bimodal_sum_order_pmf", n=n, s=s)
    # p[w] = P{exactly w of the s CUs straggle}
    p = [math.comb(s, w) * (1.0 - eps) ** (s - w) * eps**w for w in range(s + 1)]
    below = [0.0] * (s + 1)  # below[w] = P{fewer than w straggle}
    for w in range(1, s + 1):
        below[w] = below[w - 1] + p[w - 1]
    above = [0.0] * (s + 1)  # above[w] = P{more than w straggle}
    for w in range(s - 1, -1, -1):
        above[w] = above[w + 1] + p[w + 1]

    pmf = [(float(s + w * (b - 1.0)), 0.0) for w in range(s + 1)]
    pmf[0] = (float(s), straggler_tail(n, n - k + 1, p[0]) if p[0] > 0.0 else 0.0)
    pmf[s] = (float(s * b), straggler_tail(n, k, p[s]) if p[s] > 0.0 else 0.0)
    for w in range(1, s):
        if p[w] == 0.0:
            continue
        prob = 0.0
        for i in range(k):
            lo = below[w] ** i  # i of the n sums fall strictly below
            if lo == 0.0:
                continue
            inner = 0.0
            for l in range(k - i, n - i + 1):
                inner += math.comb(n - i, l) * p[w] ** l * above[w] ** (n - i - l)
            prob += math.comb(n, i) * lo * inner
        pmf[w] = (pmf[w][0], prob)
    return pmf


def bimodal_sum_order_mean(n: int, k: int, s: int, b: float, eps: float) -> float:
    """E of the k-th smallest of n sums of s i.i.d. two-point CU times."""
    pmf = bimodal_sum_order_pmf(n, k, s, b, eps)
    middle = sum(w * pmf[w][1] for w in range(1, s))
    return s + (b - 1.0) * middle + s * (b - 1.0) * pmf[s][1]
