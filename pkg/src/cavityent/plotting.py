"""Figure rendering for sweeps, event scans and oracle runs.

Uses the object-oriented matplotlib API with the Agg canvas so nothing
depends on an interactive backend or pyplot global state.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

# solid, dashed, dot-dashed, dotted, then repeat with markers off
LINESTYLES = ("-", "--", "-.", ":")

RC = {
    "figsize": (5.0, 3.4),
    "dpi": 150,
}


def _new_figure(nrows: int = 1, height: Optional[float] = None):
    w, h = RC["figsize"]
    fig = Figure(figsize=(w, height or h * nrows), dpi=RC["dpi"])
    FigureCanvasAgg(fig)
    axes = fig.subplots(nrows, 1, sharex=True, squeeze=False)[:, 0]
    return fig, axes


def _save(fig: Figure, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path)
    return path


def plot_series(
    times: Sequence[float],
    columns: Mapping[str, Sequence[float]],
    path,
    *,
    ylabel: str = "entanglement",
    title: Optional[str] = None,
    markers: Sequence[tuple[float, str]] = (),
    baseline: Optional[float] = None,
) -> Path:
    """Line plot of named series against ``kappa t``.

    ``markers`` are ``(time, label)`` pairs drawn as vertical guides.
    """
    fig, (ax,) = _new_figure()
    for i, (name, values) in enumerate(columns.items()):
        ax.plot(times, values, LINESTYLES[i % len(LINESTYLES)], color="k" if i < 4 else None,
                lw=1.2, label=name)
    if baseline is not None:
        ax.axhline(baseline, color="0.6", lw=0.6)
    for t, label in markers:
        ax.axvline(t, color="tab:red", lw=0.7, ls=":")
        ax.annotate(label, (t, 1.0), xycoords=("data", "axes fraction"), xytext=(2, -10),
                    textcoords="offset points", fontsize=7, color="tab:red")
    ax.set_xlabel(r"$\kappa t$")
    ax.set_ylabel(ylabel)
    ax.set_xlim(times[0], times[-1])
    if title:
        ax.set_title(title, fontsize=9)
    ax.legend(fontsize=7, frameon=False)
    return _save(fig, path)


def plot_panels(panels: Sequence[tuple[str, Sequence[float], Mapping[str, Sequence[float]]]], path,
                *, ylabel: str = "entanglement") -> Path:
    """Stacked panels, each ``(title, times, columns)``; shares the time axis."""
    fig, axes = _new_figure(len(panels), height=2.0 * len(panels) + 0.6)
    for ax, (title, times, columns) in zip(axes, panels):
        for i, (name, values) in enumerate(columns.items()):
            ax.plot(times, values, LINESTYLES[i % len(LINESTYLES)], lw=1.1, label=name)
        ax.set_title(title, fontsize=8)
        ax.set_ylabel(ylabel, fontsize=8)
        ax.legend(fontsize=6, frameon=False)
    axes[-1].set_xlabel(r"$\kappa t$")
    return _save(fig, path)


def plot_oracle(times, xi_numeric, xi_markov, path, *, title: Optional[str] = None) -> Path:
    fig, (top, bottom) = _new_figure(2)
    top.plot(times, xi_numeric, "-", color="k", lw=1.2, label=r"$|\xi_N(t)|$")
    top.plot(times, xi_markov, "--", color="tab:blue", lw=1.0, label=r"$e^{-\kappa t/2}$")
    top.set_ylabel("amplitude")
    top.legend(fontsize=7, frameon=False)
    if title:
        top.set_title(title, fontsize=9)
    bottom.plot(times, np.abs(np.asarray(xi_numeric) - np.asarray(xi_markov)), color="k", lw=1.0)
    bottom.set_ylabel("|deviation|")
    bottom.set_xlabel(r"$\kappa t$")
    return _save(fig, path)
