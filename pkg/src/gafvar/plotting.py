"""Static figures written to SVG with the Agg backend."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["ratio_plot", "curves_plot", "histogram_plot"]


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def ratio_plot(x, ratio, path, xlabel, title="", reference=1.0, logx=False):
    """Line plot of a ratio against a grid variable with a horizontal reference line.

    Args:
        x: grid values.
        ratio: ratio values, same length as x.
        path: output SVG path.
        xlabel: label of the grid axis.
        title: figure title.
        reference: level of the dashed reference line (None to omit).
        logx: logarithmic grid axis.

    Returns:
        The output path.
    """
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(x, ratio, "o-", lw=1.5)
    if reference is not None:
        ax.axhline(reference, color="0.4", ls="--", lw=1)
    if logx:
        ax.set_xscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("exact / asymptotic")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def curves_plot(curves, path, xlabel, ylabel, title="", logy=True):
    """Several labelled curves on one set of axes.

    Args:
        curves: mapping label -> (x, y).
        path: output SVG path.
        xlabel: x axis label.
        ylabel: y axis label.
        title: figure title.
        logy: logarithmic y axis.

    Returns:
        The output path.
    """
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, (x, y) in curves.items():
        ax.plot(x, y, "o-", lw=1.2, ms=3, label=label)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def histogram_plot(values, path, xlabel, title="", bins=50):
    """Histogram of per-sample values with the sample mean marked.

    Args:
        values: 1-D data.
        path: output SVG path.
        xlabel: x axis label.
        title: figure title.
        bins: number of bins.

    Returns:
        The output path.
    """
    values = np.asarray(values, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(values, bins=bins, color="C0", alpha=0.8)
    ax.axvline(values.mean(), color="k", lw=1)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("count")
    if title:
        ax.set_title(title)
    return _finish(fig, path)
