"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines alongside pytest's own pass/fail report.
"""
import time

import numpy as np
import pytest

from redundancy import analysis
from redundancy.analysis import (
    expected_time,
    pareto_additive_splitting_mean,
    pareto_replication_lower_bound,
    sexp_server_mean,
    sweep,
)
from redundancy.birthday import birthday_asymptotic, birthday_expectation
from redundancy.cli import main
from redundancy.distributions import BiModal, Pareto, ShiftedExp
from redundancy.jobs import divisors
from redundancy.montecarlo import JobSpec, empirical_cdf_compare, estimate
from redundancy.order_stats import erlang_order_mean, exp_order_mean
from redundancy.scaling import Scaling


def _report(number: int, label: str, started: float) -> None:
    print(f"[criterion {number:02d}] PASS {label} ({time.perf_counter() - started:.2f}s)")


def _cli_lines(capsys, *argv) -> dict:
    assert main(list(argv)) == 0
    out = capsys.readouterr().out
    return dict(line.split(": ", 1) for line in out.strip().split("\n") if ": " in line)


def test_c01_pareto_server_optima(capsys):
    t0 = time.perf_counter()
    quoted = {1.5: 6.8, 2: 7.7, 3: 8.8, 5: 9.8}
    exact = {1.5: 6.8, 2: 23 / 3, 3: 8.75, 5: 59 / 6}
    for alpha, quote in quoted.items():
        report = _cli_lines(
            capsys, "optimal", "--dist", f"pareto:1,{alpha}", "--scaling", "server",
            "--n", "12",
        )
        kstar = float(report["continuous-kstar"])
        assert kstar == pytest.approx(exact[alpha], rel=1e-9)
        assert abs(kstar - quote) <= 0.05 + 1e-9  # agrees after one-decimal rounding
        assert int(report["optimal-k"]) in (6, 12)
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    _report(1, "pareto server-dependent optima via CLI", t0)


def test_c02_birthday_oracle():
    t0 = time.perf_counter()
    assert birthday_expectation(2, 2) == pytest.approx(2.5, abs=1e-8)
    for n in range(1, 51):
        assert birthday_expectation(n, 1) == pytest.approx(1.0, abs=1e-8)
    for d in range(1, 51):
        assert birthday_expectation(1, d) == pytest.approx(float(d), abs=1e-8)
    ratio = birthday_expectation(10_000, 2) / birthday_asymptotic(10_000, 2)
    assert abs(ratio - 1.0) <= 0.02
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    _report(2, "generalized birthday expectation", t0)


def test_c03_sexp_server_monotone():
    sexp_server_mean(12, 12, 1.0, 5.0)  # warm the harmonic cache
    t0 = time.perf_counter()
    for w in (5.0, 10.0):
        values = [sexp_server_mean(12, k, 1.0, w) for k in range(1, 13)]
        assert all(b > a for a, b in zip(values, values[1:]))
    elapsed = time.perf_counter() - t0
    assert elapsed < 0.001
    _report(3, "server-dependent shifted-exp strictly increases in k", t0)


def test_c04_half_rate_dominates_splitting():
    t0 = time.perf_counter()
    for n in (4, 6, 8, 10, 12):
        assert erlang_order_mean(n, n // 2, 2, 1.0) <= erlang_order_mean(n, n, 1, 1.0)
    half = JobSpec(ShiftedExp(0, 1), Scaling.ADDITIVE, 12, 6)
    split = JobSpec(ShiftedExp(0, 1), Scaling.ADDITIVE, 12, 12)
    rep = empirical_cdf_compare(half, split, 100_000, 2024, np.linspace(0.4, 10, 49))
    assert rep.dominated, f"violation of {rep.max_violation_sigmas:.2f} sigma"
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    _report(4, "rate-1/2 coding dominates splitting (additive exp)", t0)


def test_c05_erlang_exponential_reduction():
    t0 = time.perf_counter()
    for n in range(1, 13):
        for k in divisors(n):
            for w in (1.0, 3.5):
                assert erlang_order_mean(n, k, 1, w) == pytest.approx(
                    exp_order_mean(n, k, w), rel=1e-10
                )
    _report(5, "Erlang order statistics reduce to exponential at s=1", t0)


CLOSED_FORM_GRID = (
    [(ShiftedExp(d, w), sc, None) for d in (0, 1, 5) for w in (1, 5)
     for sc in (Scaling.SERVER, Scaling.DATA, Scaling.ADDITIVE)]
    + [(Pareto(1, a), Scaling.SERVER, None) for a in (2, 3, 5)]
    + [(Pareto(1, a), Scaling.DATA, 5.0) for a in (2, 3, 5)]
    + [(BiModal(b, e), sc, 5.0 if sc == Scaling.DATA else None)
       for b in (2, 10) for e in (0.2, 0.6)
       for sc in (Scaling.SERVER, Scaling.DATA, Scaling.ADDITIVE)]
)


def test_c06_analytic_matches_monte_carlo():
    t0 = time.perf_counter()
    checked = 0
    for dist, scaling, shift in CLOSED_FORM_GRID:
        for k in divisors(12):
            want = expected_time(dist, scaling, 12, k, shift)
            est = estimate(dist, scaling, 12, k, trials=100_000, seed=90210, shift=shift)
            tol = max(4 * est.stderr, 0.005 * abs(want))
            assert abs(est.mean - want) <= tol, (dist, scaling, k, est.mean, want)
            checked += 1
    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0
    _report(6, f"{checked} analytic cells within max(4 SE, 0.5%) of Monte Carlo", t0)


def test_c07_bimodal_lln_vs_exact_at_n60():
    t0 = time.perf_counter()
    exact_argmin = {
        eps: sweep(BiModal(10, eps), Scaling.SERVER, 60).optimal_k
        for eps in (0.2, 0.6, 0.9)
    }
    lln_argmin = {
        eps: sweep(BiModal(10, eps), Scaling.SERVER, 60, method="lln").optimal_k
        for eps in (0.2, 0.6, 0.9)
    }
    assert exact_argmin[0.6] == 15
    assert lln_argmin[0.6] == 20  # rate 1/3
    assert exact_argmin[0.2] == lln_argmin[0.2]
    assert exact_argmin[0.9] == lln_argmin[0.9]
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    _report(7, "two-point LLN vs exact argmins at n=60", t0)


def test_c08_bimodal_additive_rate_transition():
    t0 = time.perf_counter()
    at_106 = sweep(BiModal(106, 0.4), Scaling.ADDITIVE, 12)
    at_107 = sweep(BiModal(107, 0.4), Scaling.ADDITIVE, 12)
    assert at_106.optimal.rate == pytest.approx(0.5)
    assert at_107.optimal.rate == pytest.approx(1 / 3)
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    _report(8, "two-point additive optimal rate drops 1/2 -> 1/3 at B=107", t0)


def test_c09_pareto_replication_bound_regime():
    t0 = time.perf_counter()
    ns = range(20, 201)
    bound = {n: pareto_replication_lower_bound(n, 1, 4.5, 1).value for n in ns}
    split = {n: pareto_additive_splitting_mean(n, 1, 4.5) for n in ns}
    assert bound[100] == pytest.approx(100 * (2 / 7) * (1 - 189 / 100**2) ** 100, rel=1e-12)
    crossover = next(n for n in ns if bound[n] > split[n])
    assert 20 < crossover < 200
    assert all(bound[n] > split[n] for n in range(crossover, 201))
    for n in (20, 60, 120, 200):
        est = estimate(Pareto(1, 4.5), Scaling.ADDITIVE, n, 1, trials=10_000, seed=n)
        assert est.mean - 4 * est.stderr > bound[n]
    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0
    _report(9, f"replication bound beats splitting from n={crossover}; MC above bound", t0)


def test_c10_threshold_values_and_strategy_flip():
    t0 = time.perf_counter()
    assert analysis.bimodal_lln_threshold(Scaling.SERVER, 10) == pytest.approx(0.9)
    assert analysis.bimodal_lln_threshold(Scaling.DATA, 10, 5.0) == pytest.approx(9 / 14)
    # exact n=60 sweeps on either side of each threshold flip the label
    below = sweep(BiModal(10, 0.6), Scaling.SERVER, 60)
    above = sweep(BiModal(10, 0.95), Scaling.SERVER, 60)
    assert below.strategy == "coding" and above.strategy == "splitting"
    below = sweep(BiModal(10, 0.3), Scaling.DATA, 60, shift=5.0)
    above = sweep(BiModal(10, 0.8), Scaling.DATA, 60, shift=5.0)
    assert below.strategy == "coding" and above.strategy == "splitting"
    _report(10, "LLN thresholds and exact strategy flips at n=60", t0)


def test_c11_byte_identical_mc_output(capsys, monkeypatch):
    t0 = time.perf_counter()
    args = (
        "sweep", "--dist", "pareto:1,2", "--scaling", "additive", "--n", "12",
        "--method", "mc", "--trials", "20000", "--seed", "99",
    )
    outputs = []
    for threads in ("1", "4", "1", "3"):
        monkeypatch.setenv("REDUNDANCY_THREADS", threads)
        assert main(list(args)) == 0
        outputs.append(capsys.readouterr().out)
    assert len(set(outputs)) == 1
    fig_args = ("figure", "fig14", "--trials", "500", "--seed", "5")
    for threads in ("1", "6"):
        monkeypatch.setenv("REDUNDANCY_THREADS", threads)
        assert main(list(fig_args)) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[-1] == outputs[-2]
    _report(11, "MC CSV byte-identical across runs and thread counts", t0)
