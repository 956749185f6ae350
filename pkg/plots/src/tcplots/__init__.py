"""Figure rendering for tcsim data files: no physics, just plots."""
from .io import SchemaError, read_heatmap, read_table, read_trajectory, unwrap_phases
from .render import PLOT_KINDS, PlotSpec, render, render_figure

__version__ = "0.1.0"

__all__ = [
    "PLOT_KINDS",
    "PlotSpec",
    "SchemaError",
    "read_heatmap",
    "read_table",
    "read_trajectory",
    "render",
    "render_figure",
    "unwrap_phases",
    "__version__",
]
