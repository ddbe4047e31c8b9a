"""Render report figures to PNG next to their plot-data CSVs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .report import smooth  # noqa: E402

STYLE = {
    "figure.figsize": (6.4, 3.6),
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.fontsize": 8,
    "font.size": 9,
    # deterministic PNG bytes
    "svg.hashsalt": "wsgreedy",
}


def render_figures(figures, out_dir, prefix: str = "fig_") -> list:
    out = Path(out_dir)
    paths = []
    with plt.rc_context(STYLE):
        for fig_data in figures:
            fig, ax = plt.subplots()
            for label, values in fig_data.series.items():
                style = "--" if label in ("entire set", "Top-K", "SSA") else "-"
                ax.plot(fig_data.steps, smooth(values, fig_data.window), style, label=label, lw=1.2)
            ax.set_xlabel("time step")
            ax.set_ylabel(fig_data.ylabel)
            title = fig_data.title
            if fig_data.window > 1:
                title += f" (moving average, window {fig_data.window})"
            ax.set_title(title)
            ax.legend(loc="best", frameon=False)
            fig.tight_layout()
            path = out / f"{prefix}{fig_data.name}.png"
            fig.savefig(path, dpi=120, metadata={"Software": None})
            plt.close(fig)
            paths.append(path)
    return paths
