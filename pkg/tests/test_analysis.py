import math

import pytest

from redundancy import analysis, montecarlo
from redundancy.analysis import (
    bimodal_lln,
    bimodal_lln_optimum,
    bimodal_lln_threshold,
    bimodal_server_mean,
    expected_time,
    optimal_k_pareto_server,
    optimal_k_sexp_data,
    pareto_data_approx,
    pareto_replication_lower_bound,
    pareto_server_mean,
    sexp_additive_mean,
    sexp_data_mean,
    sexp_server_mean,
    splitting_vs_replication_report,
    sweep,
)
from redundancy.distributions import BiModal, Pareto, ShiftedExp
from redundancy.errors import MethodUnavailable, MomentDoesNotExist, NoClosedForm
from redundancy.jobs import divisors
from redundancy.order_stats import erlang_order_mean
from redundancy.scaling import Scaling


# ---------------------------------------------------------------------------
# dispatcher

def test_deterministic_sexp_server_flat():
    for k in divisors(12):
        assert expected_time(ShiftedExp(1, 0), Scaling.SERVER, 12, k) == 1.0


def test_bimodal_server_example():
    want = 1 + 9 * (1 - 0.995**12)  # direct binomial evaluation
    got = expected_time(BiModal(10, 0.005), Scaling.SERVER, 12, 12)
    assert got == pytest.approx(want, rel=1e-12)
    assert got == pytest.approx(1.52539, abs=2e-5)


def test_pareto_server_product_form():
    want = 2 * math.prod((12 - i) / (11.5 - i) for i in range(6))
    got = expected_time(Pareto(1, 2), Scaling.SERVER, 12, 6)
    assert got == pytest.approx(want, rel=1e-12)


def test_dispatcher_validations():
    with pytest.raises(ValueError):
        expected_time(ShiftedExp(1, 1), Scaling.SERVER, 12, 5)  # k must divide n
    with pytest.raises(ValueError):
        expected_time(Pareto(1, 2), Scaling.DATA, 12, 6)  # missing shift
    with pytest.raises(MomentDoesNotExist):
        expected_time(Pareto(1, 1), Scaling.SERVER, 12, 6)
    with pytest.raises(NoClosedForm):
        expected_time(Pareto(1, 2), Scaling.ADDITIVE, 12, 6)
    with pytest.raises(NoClosedForm):
        expected_time(Pareto(1, 2), Scaling.ADDITIVE, 12, 1)
    # splitting is the one additive-pareto closed form
    assert expected_time(Pareto(1, 2), Scaling.ADDITIVE, 12, 12) > 0


def test_pareto_infinite_alpha_degenerates_to_point_mass():
    dist = Pareto(2.0, math.inf)
    assert expected_time(dist, Scaling.SERVER, 12, 6) == pytest.approx(4.0)
    assert expected_time(dist, Scaling.DATA, 12, 6, shift=5.0) == pytest.approx(12.0)
    assert expected_time(dist, Scaling.ADDITIVE, 12, 6) == pytest.approx(4.0)
    assert expected_time(dist, Scaling.ADDITIVE, 12, 12) == pytest.approx(2.0)


def test_heavy_tail_additive_coding_beats_both_extremes():
    # at alpha = 1.3 only the mean exists; with a fixed seed the rate-1/2
    # code sits below both replication and splitting
    values = {
        k: montecarlo.estimate(
            Pareto(1, 1.3), Scaling.ADDITIVE, 12, k, trials=10_000, seed=1414
        ).mean
        for k in (1, 6, 12)
    }
    assert values[6] < values[1]
    assert values[6] < values[12]


def test_additive_k1_birthday_and_gupta_routes_agree():
    for n in (2, 6, 12):
        birthday_route = sexp_additive_mean(n, 1, 0.5, 2.0)
        gupta_route = n * 0.5 + erlang_order_mean(n, 1, n, 2.0)
        assert birthday_route == pytest.approx(gupta_route, rel=1e-9)


# ---------------------------------------------------------------------------
# optimality characterizations as properties

def test_sexp_server_strictly_increasing_in_k():
    for w in (5.0, 10.0):
        values = [sexp_server_mean(12, k, 1.0, w) for k in range(1, 13)]
        assert all(b > a for a, b in zip(values, values[1:]))


def test_sexp_additive_half_rate_beats_splitting():
    for n in (4, 6, 8, 10, 12):
        half = erlang_order_mean(n, n // 2, 2, 1.0)
        full = erlang_order_mean(n, n, 1, 1.0)
        assert half <= full


def test_pareto_server_integer_optimum_is_floor_or_ceil():
    # compare by value: when the continuous k* lands exactly on an integer,
    # its two neighbours tie and any of them is a legitimate argmin
    for alpha in (1.1, 1.5, 2, 3, 5, 10):
        for n in (5, 12, 23, 40):
            res = optimal_k_pareto_server(n, alpha)
            lo = max(math.floor(res.continuous), 1)
            hi = max(min(math.ceil(res.continuous), n), 1)
            best_value = min(
                pareto_server_mean(n, k, 1.0, alpha) for k in range(1, n + 1)
            )
            rounded = min(
                pareto_server_mean(n, lo, 1.0, alpha),
                pareto_server_mean(n, hi, 1.0, alpha),
            )
            assert rounded == pytest.approx(best_value, rel=1e-12)
            assert pareto_server_mean(n, res.best_integer_k, 1.0, alpha) == pytest.approx(
                best_value, rel=1e-12
            )


def test_pareto_server_quoted_optima():
    for alpha, kstar, divisor in [(1.5, 6.8, 6), (2, 23 / 3, 6), (3, 8.75, 6), (5, 59 / 6, 12)]:
        res = optimal_k_pareto_server(12, alpha)
        assert res.continuous == pytest.approx(kstar, rel=1e-12)
        assert res.best_k == divisor


def test_sexp_data_optimum():
    res = optimal_k_sexp_data(12, 1.0, 1.0)
    assert res.continuous == pytest.approx(12 * (-0.5 + math.sqrt(1.25)), rel=1e-12)
    brute = min(divisors(12), key=lambda k: sexp_data_mean(12, k, 1.0, 1.0))
    assert res.best_k == brute
    # d -> 0: replication; d -> infinity: splitting
    small = optimal_k_sexp_data(12, 1e-9, 1.0)
    assert small.continuous / 12 < 1e-4 and small.best_k == 1
    large = optimal_k_sexp_data(12, 1e6, 1.0)
    assert large.continuous / 12 == pytest.approx(1.0, abs=1e-5)
    assert large.best_k == 12
    degenerate = optimal_k_sexp_data(12, 1.0, 0.0)
    assert degenerate.degenerate and degenerate.best_k == 12


def test_pareto_data_approx():
    assert pareto_data_approx(1000, 1, 0.0, 1.0, 3.0) == pytest.approx(1.0, abs=1e-3)
    want = 10 + 2 ** (1 / 3)
    assert pareto_data_approx(12, 6, 5.0, 1.0, 3.0) == pytest.approx(want, rel=1e-12)
    exact = analysis.pareto_data_mean(100, 50, 5.0, 1.0, 3.0)
    approx = pareto_data_approx(100, 50, 5.0, 1.0, 3.0)
    assert abs(approx / exact - 1.0) <= 0.02
    with pytest.raises(ValueError):
        pareto_data_approx(12, 12, 5.0, 1.0, 3.0)


def test_bimodal_b_at_most_two_splitting_optimal():
    for scaling in (Scaling.SERVER, Scaling.ADDITIVE):
        for n in (2, 4, 6, 12):
            for eps10 in range(0, 11):
                r = sweep(BiModal(2.0, eps10 / 10), scaling, n)
                assert r.optimal_k == n, (scaling, n, eps10)


# ---------------------------------------------------------------------------
# LLN pieces

def test_lln_values():
    assert bimodal_lln(Scaling.SERVER, 1.0, 10, 0.3) == 10.0  # 1 - eps < 1
    r = 0.7 - 1e-9  # just below 1 - eps
    assert bimodal_lln(Scaling.SERVER, r, 10, 0.3) == pytest.approx(1 / 0.7, rel=1e-6)
    # boundary convention: half weight each side
    assert bimodal_lln(Scaling.SERVER, 0.7, 10, 0.3) == pytest.approx((0.5 + 5.0) / 0.7)
    assert bimodal_lln(Scaling.DATA, 0.5, 10, 0.3, shift=5.0) == pytest.approx(5 / 0.5 + 1)
    with pytest.raises(MethodUnavailable):
        bimodal_lln(Scaling.ADDITIVE, 0.5, 10, 0.3)
    with pytest.raises(ValueError):
        bimodal_lln(Scaling.DATA, 0.5, 10, 0.3)  # missing shift


def test_lln_thresholds():
    assert bimodal_lln_threshold(Scaling.SERVER, 10) == pytest.approx(0.9)
    # with no per-CU cost the data-scaling coding minimum is 1 < b, so the
    # limit favours coding for every eps < 1: the threshold degenerates to 1
    assert bimodal_lln_threshold(Scaling.DATA, 10, 0.0) == pytest.approx(1.0)
    assert bimodal_lln_threshold(Scaling.DATA, 10, 5.0) == pytest.approx(9 / 14)


def test_lln_optimum_data_example():
    # eps = 0.6 <= 9/14: coding at rate 0.4 with value 1 + 5/0.4 = 13.5,
    # versus splitting at shift + B = 15
    opt = bimodal_lln_optimum(Scaling.DATA, 10, 0.6, shift=5.0)
    assert opt.strategy == "coding"
    assert opt.rate == pytest.approx(0.4)
    assert opt.value == pytest.approx(13.5)
    above = bimodal_lln_optimum(Scaling.DATA, 10, 0.7, shift=5.0)
    assert above.strategy == "splitting" and above.value == pytest.approx(15.0)


def test_lln_converges_to_exact():
    # away from the threshold the exact value approaches the limit as n grows
    r, eps = 0.5, 0.2  # 1 - eps = 0.8 well above r
    limit = bimodal_lln(Scaling.SERVER, r, 10, eps)
    gaps = []
    for n in (12, 60, 300, 1500):
        k = int(r * n)
        exact = bimodal_server_mean(n, k, 10, eps)
        gaps.append(abs(exact - limit))
    assert all(b <= a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-9


# ---------------------------------------------------------------------------
# replication lower bound and the split-vs-replicate comparison

def test_lower_bound_values():
    with pytest.raises(MomentDoesNotExist):
        pareto_replication_lower_bound(100, 1, 4, 1)
    vac = pareto_replication_lower_bound(13, 1, 4.5, 1)
    assert vac.vacuous and vac.value == 0.0
    ok = pareto_replication_lower_bound(100, 1, 4.5, 1)
    want = 100 * (9 / 7 - 1) * (1 - 189 / 100**2) ** 100
    assert not ok.vacuous
    assert ok.value == pytest.approx(want, rel=1e-12)
    assert ok.value == pytest.approx(4.239, abs=2e-3)


def test_split_vs_replication_sexp():
    # splitting costs H_12 ~ 3.10 while replication costs E(12,12)/12 ~ 7.05
    rep = splitting_vs_replication_report(ShiftedExp(0, 1), 12)
    assert rep.verdict == "splitting"
    assert rep.splitting == pytest.approx(sum(1 / i for i in range(1, 13)), rel=1e-12)
    assert rep.first_splitting_win is not None
    assert 1 < rep.first_splitting_win <= 12


def test_split_vs_replication_tie_at_n1():
    rep = splitting_vs_replication_report(ShiftedExp(2, 3), 1)
    assert rep.verdict == "tie"
    assert rep.splitting == rep.replication == pytest.approx(5.0)


def test_split_vs_replication_pareto_regime():
    rep = splitting_vs_replication_report(Pareto(1, 4.5), 100, trials=4000, seed=5)
    assert rep.verdict == "splitting"
    assert rep.replication_bound is not None and rep.replication_bound.value > rep.splitting
    assert rep.replication_estimate.mean > rep.replication_bound.value


# ---------------------------------------------------------------------------
# sweeps

def test_sweep_examples():
    assert sweep(ShiftedExp(1, 5), Scaling.SERVER, 12).optimal_k == 1
    assert sweep(BiModal(10, 0.2), Scaling.SERVER, 12).optimal_k in range(2, 7)
    assert sweep(BiModal(10, 0.4), Scaling.ADDITIVE, 12).optimal_k == 6
    single = sweep(ShiftedExp(1, 5), Scaling.SERVER, 1)
    assert [r.k for r in single.rows] == [1] and single.optimal_k == 1


def test_sweep_rows_cover_divisors_in_order():
    r = sweep(ShiftedExp(1, 5), Scaling.DATA, 60)
    assert [row.k for row in r.rows] == divisors(60)


def test_sweep_tie_break_prefers_larger_k():
    r = sweep(ShiftedExp(1, 0), Scaling.SERVER, 12)  # flat in k
    assert r.optimal_k == 12
    assert r.ties == divisors(12)
    assert r.strategy == "splitting"


def test_sweep_marks_unavailable_rows():
    r = sweep(Pareto(1, 2), Scaling.ADDITIVE, 12, method="analytic")
    errors = {row.k: row.error for row in r.rows}
    assert all(errors[k] for k in divisors(12) if k != 12)
    assert errors[12] is None
    assert r.optimal_k == 12  # the only evaluable row


def test_sweep_auto_falls_back_to_mc():
    r = sweep(Pareto(1, 2), Scaling.ADDITIVE, 12, trials=2000, seed=9)
    methods = {row.k: row.method for row in r.rows}
    assert methods[12] == "analytic"
    assert all(methods[k] == "mc" for k in divisors(12) if k != 12)
    assert all(row.value is not None for row in r.rows)


def test_sweep_lln_restricted():
    with pytest.raises(MethodUnavailable):
        sweep(ShiftedExp(1, 1), Scaling.SERVER, 12, method="lln")
    with pytest.raises(MethodUnavailable):
        sweep(BiModal(10, 0.2), Scaling.ADDITIVE, 12, method="lln")
    r = sweep(BiModal(10, 0.2), Scaling.SERVER, 60, method="lln")
    assert all(row.method == "lln" for row in r.rows)


ANALYTIC_CELLS = [
    (ShiftedExp(1, 5), Scaling.SERVER, None),
    (ShiftedExp(1, 5), Scaling.DATA, None),
    (ShiftedExp(1, 5), Scaling.ADDITIVE, None),
    (Pareto(1, 3), Scaling.SERVER, None),
    (Pareto(1, 3), Scaling.DATA, 5.0),
    (BiModal(10, 0.2), Scaling.SERVER, None),
    (BiModal(10, 0.2), Scaling.DATA, 5.0),
    (BiModal(10, 0.2), Scaling.ADDITIVE, None),
]


@pytest.mark.parametrize("dist,scaling,shift", ANALYTIC_CELLS, ids=str)
def test_dispatcher_consistent_with_mc(dist, scaling, shift):
    for k in (1, 6, 12):
        want = expected_time(dist, scaling, 12, k, shift)
        est = montecarlo.estimate(dist, scaling, 12, k, trials=100_000, seed=4242, shift=shift)
        tol = max(3 * est.stderr, 0.005 * abs(want))
        assert abs(est.mean - want) <= tol
