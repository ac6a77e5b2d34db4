"""Reproducible data sets behind the standard report figures.

Each figure id maps to the parameter set of one study: expected completion
time against the recovery threshold k (or code rate, or worker count) for a
family of service-time parameters. Builders return plain rows so the CLI can
emit CSV and the plotting helper can render the same data.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from . import analysis
from .distributions import BiModal, Pareto, ShiftedExp
from .jobs import divisors
from .montecarlo import DEFAULT_SEED, estimate
from .scaling import Scaling


@dataclass(frozen=True)
class Row:
    series: str
    x: float
    value: float
    stderr: Optional[float] = None


@dataclass(frozen=True)
class Panel:
    title: str
    xlabel: str
    ylabel: str = "expected completion time"
    logy: bool = False
    series_prefix: str = ""  # rows whose series starts with this go here


@dataclass(frozen=True)
class FigureData:
    fig_id: str
    title: str
    xname: str  # CSV column name for the x field
    panels: tuple[Panel, ...]
    rows: list[Row]


@dataclass(frozen=True)
class FigureSpec:
    fig_id: str
    description: str
    build: Callable[..., FigureData]
    mc: bool = False  # honours --trials/--seed
    takes_n: bool = False  # honours --n


def _divisor_sweep_rows(series, dist, scaling, n, shift=None) -> list[Row]:
    return [
        Row(series, k, analysis.expected_time(dist, scaling, n, k, shift))
        for k in divisors(n)
    ]


def _single_panel(fig_id, title, rows, xname="k", logy=False) -> FigureData:
    return FigureData(
        fig_id, title, xname, (Panel(title, xname, logy=logy),), rows
    )


def _fig3(**_):
    rows = []
    for delta, w in [(1, 0), (1, 5), (1, 10), (0, 1), (5, 1), (10, 1)]:
        rows += _divisor_sweep_rows(
            f"delta={delta} w={w}", ShiftedExp(delta, w), Scaling.SERVER, 12
        )
    return _single_panel("fig3", "shifted-exp, server-dependent, n=12", rows)


_SEXP_RATIO_COMBOS = [(10, 0), (10, 1), (5, 5), (1, 10), (0, 10)]


def _fig4(**_):
    rows = []
    for delta, w in _SEXP_RATIO_COMBOS:
        rows += _divisor_sweep_rows(
            f"delta={delta} w={w}", ShiftedExp(delta, w), Scaling.DATA, 12
        )
    return _single_panel("fig4", "shifted-exp, data-dependent, n=12", rows)


def _fig5(**_):
    rows = []
    for delta, w in _SEXP_RATIO_COMBOS:
        rows += _divisor_sweep_rows(
            f"delta={delta} w={w}", ShiftedExp(delta, w), Scaling.ADDITIVE, 12
        )
    return _single_panel("fig5", "shifted-exp, additive, n=12", rows)


def _fig6(**_):
    rows = []
    for alpha in (1.5, 2, 3, 5):
        rows += _divisor_sweep_rows(f"alpha={alpha}", Pareto(1, alpha), Scaling.SERVER, 12)
    return _single_panel("fig6", "pareto (lam=1), server-dependent, n=12", rows)


def _fig7(**_):
    rows = []
    for alpha in (1.5, 2, 3, 5):
        rows += _divisor_sweep_rows(
            f"alpha={alpha}", Pareto(1, alpha), Scaling.DATA, 12, shift=5.0
        )
    return _single_panel("fig7", "pareto (lam=1), data-dependent shift=5, n=12", rows)


def _fig8(**_):
    rows = []
    for shift in (0.1, 0.5, 5, 10):
        rows += _divisor_sweep_rows(
            f"shift={shift}", Pareto(5, 3), Scaling.DATA, 12, shift=float(shift)
        )
    return _single_panel("fig8", "pareto (lam=5, alpha=3), data-dependent, n=12", rows)


def _fig9(**_):
    rows = []
    for eps in (0.005, 0.2, 0.4, 0.6, 0.8, 0.9):
        rows += _divisor_sweep_rows(f"eps={eps}", BiModal(10, eps), Scaling.SERVER, 12)
    return _single_panel("fig9", "two-point (B=10), server-dependent, n=12", rows)


def _fig10(**_):
    rows = []
    for b in (2, 5, 10, 15):
        rows += _divisor_sweep_rows(f"B={b}", BiModal(b, 0.6), Scaling.SERVER, 12)
    return _single_panel("fig10", "two-point (eps=0.6), server-dependent, n=12", rows)


def _lln_figure(fig_id, scaling, shift, n):
    n = n or 60
    rows = []
    grid = [i / 200 for i in range(1, 201)]
    for eps in (0.2, 0.6, 0.9):
        dist = BiModal(10, eps)
        for r in grid:
            rows.append(
                Row(f"lln eps={eps}", r, analysis.bimodal_lln(scaling, r, 10, eps, shift))
            )
        for k in divisors(n):
            rows.append(
                Row(f"exact eps={eps}", k, analysis.expected_time(dist, scaling, n, k, shift))
            )
    title = f"two-point (B=10), {scaling.value}-dependent, n={n}: limit vs exact"
    return FigureData(
        fig_id,
        title,
        "x",
        (
            Panel("large-n limit", "rate", series_prefix="lln"),
            Panel("exact", "k", series_prefix="exact"),
        ),
        rows,
    )


def _fig11(n=None, **_):
    return _lln_figure("fig11", Scaling.SERVER, None, n)


def _fig12(**_):
    rows = []
    for eps in (0.05, 0.2, 0.5, 0.6, 0.9):
        rows += _divisor_sweep_rows(
            f"eps={eps}", BiModal(10, eps), Scaling.DATA, 12, shift=5.0
        )
    return _single_panel("fig12", "two-point (B=10), data-dependent shift=5, n=12", rows)


def _fig13(**_):
    rows = []
    for b in (2, 10, 30, 60):
        rows += _divisor_sweep_rows(
            f"B={b}", BiModal(b, 0.6), Scaling.DATA, 12, shift=5.0
        )
    return _single_panel("fig13", "two-point (eps=0.6), data-dependent shift=5, n=12", rows)


def _fig14(trials=None, seed=None, **_):
    trials = trials or 10_000
    seed = DEFAULT_SEED if seed is None else seed
    rows = []
    for alpha in (1.3, 2, 3, 5):
        for k in divisors(12):
            est = estimate(Pareto(1, alpha), Scaling.ADDITIVE, 12, k, trials, seed)
            rows.append(Row(f"alpha={alpha}", k, est.mean, est.stderr))
    return _single_panel("fig14", "pareto (lam=1), additive, n=12, simulated", rows)


def _fig15(**_):
    rows = []
    for eps in (0.005, 0.2, 0.6, 0.9):
        rows += _divisor_sweep_rows(f"eps={eps}", BiModal(10, eps), Scaling.ADDITIVE, 12)
    return _single_panel("fig15", "two-point (B=10), additive, n=12", rows)


def _fig16(trials=None, seed=None, **_):
    trials = trials or 10_000
    seed = DEFAULT_SEED if seed is None else seed
    rows = []
    for n in range(20, 201, 20):
        est = estimate(Pareto(1, 4.5), Scaling.ADDITIVE, n, 1, trials, seed)
        rows.append(Row("replication-mc", n, est.mean, est.stderr))
    for n in range(20, 201, 20):
        rows.append(Row("splitting", n, analysis.pareto_additive_splitting_mean(n, 1, 4.5)))
    for n in range(20, 201, 20):
        bound = analysis.pareto_replication_lower_bound(n, 1, 4.5, 1.0)
        rows.append(Row("lower-bound", n, bound.value))
    return _single_panel(
        "fig16", "pareto (lam=1, alpha=4.5), additive: splitting vs replication", rows,
        xname="n", logy=True,
    )


def _bimodal_data_lln(n=None, **_):
    return _lln_figure("bimodal-data-lln", Scaling.DATA, 5.0, n)


def _bimodal_add_b(**_):
    rows = []
    for b in (2, 5, 10, 20):
        rows += _divisor_sweep_rows(f"B={b}", BiModal(b, 0.4), Scaling.ADDITIVE, 12)
    return _single_panel(
        "bimodal-add-b", "two-point (eps=0.4), additive, n=12", rows
    )


FIGURES: dict[str, FigureSpec] = {
    spec.fig_id: spec
    for spec in [
        FigureSpec("fig3", "shifted-exp x server: six (delta, w) pairs, n=12", _fig3),
        FigureSpec("fig4", "shifted-exp x data: five w/delta ratios, n=12", _fig4),
        FigureSpec("fig5", "shifted-exp x additive: five w/delta ratios, n=12", _fig5),
        FigureSpec("fig6", "pareto x server: alpha in {1.5,2,3,5}, lam=1, n=12", _fig6),
        FigureSpec("fig7", "pareto x data: alpha sweep, shift=5, n=12", _fig7),
        FigureSpec("fig8", "pareto x data: shift sweep, lam=5, alpha=3, n=12", _fig8),
        FigureSpec("fig9", "two-point x server: eps sweep, B=10, n=12", _fig9),
        FigureSpec("fig10", "two-point x server: B sweep, eps=0.6, n=12", _fig10),
        FigureSpec(
            "fig11", "two-point x server at n=60: large-n limit vs exact", _fig11, takes_n=True
        ),
        FigureSpec("fig12", "two-point x data: eps sweep, B=10, shift=5, n=12", _fig12),
        FigureSpec("fig13", "two-point x data: B sweep, eps=0.6, shift=5, n=12", _fig13),
        FigureSpec(
            "fig14", "pareto x additive: simulated alpha sweep, n=12", _fig14, mc=True
        ),
        FigureSpec("fig15", "two-point x additive: eps sweep, B=10, n=12", _fig15),
        FigureSpec(
            "fig16",
            "pareto x additive vs n: simulated replication, splitting, lower bound",
            _fig16,
            mc=True,
        ),
        FigureSpec(
            "bimodal-data-lln",
            "two-point x data at n=60: large-n limit vs exact",
            _bimodal_data_lln,
            takes_n=True,
        ),
        FigureSpec(
            "bimodal-add-b", "two-point x additive: B sweep, eps=0.4, n=12", _bimodal_add_b
        ),
    ]
}

FIGURE_ALIASES = {"fig11-lln": "fig11"}


def build_figure(
    fig_id: str,
    n: Optional[int] = None,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
) -> FigureData:
    canonical = FIGURE_ALIASES.get(fig_id, fig_id)
    if canonical not in FIGURES:
        raise KeyError(fig_id)
    return FIGURES[canonical].build(n=n, trials=trials, seed=seed)


def supported_ids() -> list[str]:
    return sorted(FIGURES) + sorted(FIGURE_ALIASES)
