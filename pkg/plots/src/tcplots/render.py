"""Figure rendering for the simulator's data files.

Four figure kinds cover the experiment classes: population/phase time series,
max-fidelity heatmaps with their time-to-max companion, comparison curves,
and the log-log time-step benchmark with its fitted slope.  Rendering never
computes physics beyond phase unwrapping and the benchmark regression, and
never modifies its inputs.
"""
from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .io import SchemaError, read_heatmap, read_table, read_trajectory, unwrap_phases

PLOT_KINDS = ("timeseries", "heatmap", "curves", "benchmark")

# f_max color scale is pinned to [0, 1] so heatmaps from different runs are
# directly comparable
FIDELITY_VMIN, FIDELITY_VMAX = 0.0, 1.0


@dataclass(frozen=True)
class PlotSpec:
    inputs: tuple[str, ...]
    kind: str
    output: str
    xlabel: str | None = None
    ylabel: str | None = None
    title: str | None = None
    unwrap: bool = False

    def __post_init__(self):
        if self.kind not in PLOT_KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}; expected one of {PLOT_KINDS}")
        if not self.inputs:
            raise ValueError("at least one input file is required")


def _apply_labels(ax, spec: PlotSpec, xlabel: str, ylabel: str):
    ax.set_xlabel(spec.xlabel or xlabel)
    ax.set_ylabel(spec.ylabel or ylabel)


def _figure_timeseries(spec: PlotSpec):
    data = read_trajectory(spec.inputs[0])
    fig, (ax_pop, ax_phase) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    t = data["t"]
    for key, label in (("p1", "qubit 1"), ("pc", "cavity"), ("p2", "qubit 2")):
        ax_pop.plot(t, data[key], label=label)
    ax_pop.set_ylabel("excited-state population")
    ax_pop.set_ylim(-0.05, 1.05)
    ax_pop.legend(loc="upper right")
    for key, label in (("phase1", "qubit 1"), ("phasec", "cavity"), ("phase2", "qubit 2")):
        series = unwrap_phases(data[key]) if spec.unwrap else data[key]
        ax_phase.plot(t, series, label=label)
    ax_phase.set_ylabel("relative phase (rad)" + (" [unwrapped]" if spec.unwrap else ""))
    ax_phase.legend(loc="upper right")
    _apply_labels(ax_phase, spec, "t (1/g)", ax_phase.get_ylabel())
    if spec.title:
        fig.suptitle(spec.title)
    return fig


def _figure_heatmap(spec: PlotSpec):
    grid = read_heatmap(spec.inputs[0])
    fig, (ax_f, ax_t) = plt.subplots(1, 2, figsize=(11, 4.4))
    extent = (
        grid["delta2"][0], grid["delta2"][-1], grid["delta1"][0], grid["delta1"][-1]
    )
    im_f = ax_f.imshow(
        grid["f_max"], origin="lower", extent=extent, aspect="auto",
        vmin=FIDELITY_VMIN, vmax=FIDELITY_VMAX, cmap="viridis",
    )
    fig.colorbar(im_f, ax=ax_f, label="F_max")
    ax_f.set_title("maximum transfer fidelity")
    im_t = ax_t.imshow(
        grid["t_max"], origin="lower", extent=extent, aspect="auto", cmap="magma",
    )
    fig.colorbar(im_t, ax=ax_t, label="t_max (1/g)")
    ax_t.set_title("time to maximum fidelity")
    for ax in (ax_f, ax_t):
        _apply_labels(ax, spec, "delta_2 (g)", "delta_1 (g)")
    if spec.title:
        fig.suptitle(spec.title)
    return fig


def _numeric_columns(table: dict) -> list[str]:
    return [k for k, v in table.items() if v.dtype.kind == "f"]


def _figure_curves(spec: PlotSpec):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for path in spec.inputs:
        table = read_table(path)
        numeric = _numeric_columns(table)
        if len(numeric) < 2:
            raise SchemaError(f"{path}: need at least two numeric columns for curves")
        x = numeric[0]
        label_col = next((k for k in table if table[k].dtype.kind != "f"), None)
        groups = (
            {lbl: table[label_col] == lbl for lbl in dict.fromkeys(table[label_col])}
            if label_col is not None
            else {None: np.ones(table[x].size, dtype=bool)}
        )
        for lbl, mask in groups.items():
            for y in numeric[1:]:
                name = y if lbl is None else f"{lbl}: {y}"
                if len(spec.inputs) > 1:
                    name = f"{path}: {name}"
                ax.plot(table[x][mask], table[y][mask], marker="o", label=name)
        _apply_labels(ax, spec, x, "value")
    ax.legend(fontsize=8)
    if spec.title:
        ax.set_title(spec.title)
    return fig


def _figure_benchmark(spec: PlotSpec):
    table = read_table(spec.inputs[0], required=("dt",))
    numeric = [k for k in _numeric_columns(table) if k != "dt"]
    error_cols = [k for k in numeric if k not in ("t_max",)]
    if not error_cols:
        raise SchemaError(f"{spec.inputs[0]}: no error columns to plot against dt")
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    dts = table["dt"]
    order = np.argsort(dts)
    for col in error_cols:
        values = table[col][order]
        slope = np.polyfit(np.log(dts[order]), np.log(np.maximum(values, 1e-300)), 1)[0]
        ax.loglog(dts[order], values, marker="o", label=f"{col} (slope {slope:.2f})")
    ax.legend()
    _apply_labels(ax, spec, "dt (1/g)", "error")
    if spec.title:
        ax.set_title(spec.title)
    return fig


_FIGURES = {
    "timeseries": _figure_timeseries,
    "heatmap": _figure_heatmap,
    "curves": _figure_curves,
    "benchmark": _figure_benchmark,
}


def render_figure(spec: PlotSpec):
    """Build the matplotlib figure for a spec without saving it."""
    return _FIGURES[spec.kind](spec)


def render(spec: PlotSpec) -> str:
    """Render the figure to ``spec.output`` (PNG or SVG); returns the path.

    Output bytes depend only on the input files and the spec: figures carry
    no timestamps or environment-dependent metadata.
    """
    fig = render_figure(spec)
    try:
        if spec.output.endswith(".svg"):
            metadata = {"Date": None, "Creator": None}
        else:
            metadata = {}
        fig.savefig(spec.output, dpi=150, metadata=metadata)
    finally:
        plt.close(fig)
    return spec.output
