"""Secondary acceptance: render real simulator outputs end to end.

Drives the simulator through its command line (the only interface shared
with this package) and renders the files it writes.
"""
import shutil
import subprocess

import numpy as np
import pytest

from tcplots import PlotSpec, read_trajectory, render, render_figure, unwrap_phases

needs_tcsim = pytest.mark.skipif(shutil.which("tcsim") is None, reason="tcsim CLI not installed")


@needs_tcsim
def test_render_simulator_outputs(tmp_path):
    traj = tmp_path / "run.csv"
    subprocess.run(
        ["tcsim", "evolve", "--delta1", "0", "--delta2", "0",
         "--t-max", "2.3", "--dt", "0.01", "-o", str(traj)],
        check=True, capture_output=True,
    )
    hm = tmp_path / "hm.csv"
    subprocess.run(
        ["tcsim", "heatmap", "--range", "-2", "2", "--points", "5",
         "--horizon", "8", "-o", str(hm)],
        check=True, capture_output=True,
    )

    ts_fig = render_figure(PlotSpec((str(traj),), "timeseries", str(tmp_path / "ts.png"),
                                    unwrap=True))
    assert len(ts_fig.axes) == 2
    render(PlotSpec((str(traj),), "timeseries", str(tmp_path / "ts.png"), unwrap=True))
    assert (tmp_path / "ts.png").stat().st_size > 0

    hm_fig = render_figure(PlotSpec((str(hm),), "heatmap", str(tmp_path / "hm.png")))
    fidelity_image = hm_fig.axes[0].images[0]
    assert fidelity_image.norm.vmin == 0.0
    assert fidelity_image.norm.vmax == 1.0
    render(PlotSpec((str(hm),), "heatmap", str(tmp_path / "hm.png")))
    assert (tmp_path / "hm.png").stat().st_size > 0

    # unwrapping changes real phase data only by whole 2 pi cycles
    for key in ("phase1", "phasec", "phase2"):
        raw = read_trajectory(str(traj))[key]
        steps = (unwrap_phases(raw) - raw) / (2 * np.pi)
        np.testing.assert_allclose(steps, np.round(steps), atol=1e-9)
