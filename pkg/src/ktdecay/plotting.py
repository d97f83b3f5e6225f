"""Log-log figures written next to the CSV tables.

Uses the non-interactive Agg backend; every figure is saved to a file and
closed immediately.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

golden_mean = (np.sqrt(5) - 1.0) / 2.0
fig_width = 4.5
colors = ["#08589e", "#d95f02", "#1b9e77", "#7570b3", "#e7298a"]

params = {
    "axes.prop_cycle": matplotlib.cycler(color=colors),
    "axes.labelsize": 10,
    "font.family": "serif",
    "font.size": 9,
    "mathtext.fontset": "stix",
    "legend.fontsize": 8,
    "legend.frameon": False,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.figsize": [fig_width, fig_width * golden_mean],
    "figure.dpi": 150,
    "savefig.dpi": 150,
    "lines.linewidth": 1.2,
    "lines.markersize": 3,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "figure.subplot.left": 0.16,
    "figure.subplot.bottom": 0.18,
    "figure.subplot.right": 0.96,
    "figure.subplot.top": 0.90,
}


def loglog_figure(path, series, xlabel, ylabel, title=""):
    """Save a log-log plot of ``{label: (x, y)}`` to ``path``.

    Non-positive values are dropped from each series since they have no
    place on logarithmic axes.
    """
    with plt.rc_context(params):
        fig, ax = plt.subplots()
        for label, (x, y) in series.items():
            x = np.asarray(x, dtype=float)
            y = np.asarray(y, dtype=float)
            keep = (x > 0) & (y > 0) & np.isfinite(y)
            if np.any(keep):
                ax.loglog(x[keep], y[keep], marker="o", label=label)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        if len(series) > 1:
            ax.legend()
        fig.savefig(path, metadata={"Software": None})
        plt.close(fig)
    return path
