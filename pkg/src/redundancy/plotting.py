"""Render figure data to image files next to the CSV output.

Uses the Agg backend so rendering works headless; matplotlib is imported
lazily to keep data-only runs light.
"""
from __future__ import annotations

from collections import OrderedDict

from .figures import FigureData


def render_figure(data: FigureData, path: str) -> None:
    """Draw one line-with-markers plot per panel and save to ``path``."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    panels = data.panels
    fig, axes = plt.subplots(
        1, len(panels), figsize=(6.0 * len(panels), 4.2), squeeze=False
    )
    for ax, panel in zip(axes[0], panels):
        series: "OrderedDict[str, tuple[list, list, list]]" = OrderedDict()
        for row in data.rows:
            if not row.series.startswith(panel.series_prefix):
                continue
            xs, ys, es = series.setdefault(row.series, ([], [], []))
            xs.append(row.x)
            ys.append(row.value)
            es.append(row.stderr)
        for name, (xs, ys, es) in series.items():
            if any(e is not None for e in es):
                ax.errorbar(
                    xs, ys, yerr=[e or 0.0 for e in es], marker="o", ms=3.5,
                    capsize=2, lw=1.2, label=name,
                )
            else:
                marker = "o" if len(xs) <= 40 else None
                ax.plot(xs, ys, marker=marker, ms=3.5, lw=1.2, label=name)
        if panel.logy:
            ax.set_yscale("log")
        ax.set_xlabel(panel.xlabel)
        ax.set_ylabel(panel.ylabel)
        ax.set_title(panel.title, fontsize=10)
        ax.grid(alpha=0.3)
        ax.legend(fontsize=8)
    fig.suptitle(data.title, fontsize=11)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
