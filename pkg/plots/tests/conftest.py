import numpy as np
import pytest

TRAJ_HEADER = (
    "t,p1,pc,p2,phase1,phasec,phase2,coh_1c,coh_2c,coh_12,energy,fidelity,total_excitation"
)


@pytest.fixture
def trajectory_csv(tmp_path):
    """Synthetic trajectory with rapidly wrapping phases."""
    path = tmp_path / "traj.csv"
    t = np.arange(0, 2.0, 0.01)
    p1 = np.cos(t) ** 2
    p2 = np.sin(t) ** 2
    pc = 1.0 - p1 - p2
    phase = np.angle(np.exp(-1j * 40.0 * t))  # wrapped series
    rows = [TRAJ_HEADER]
    for k in range(t.size):
        rows.append(",".join(repr(float(v)) for v in (
            t[k], p1[k], pc[k], p2[k], phase[k], phase[k] / 2, -phase[k],
            0.0, 0.0, 0.1, 1.0, p2[k], 1.0,
        )))
    path.write_text("\n".join(rows) + "\n")
    return str(path)


@pytest.fixture
def heatmap_csv(tmp_path):
    """11x11 grid with a bright diagonal band, like a transfer-fidelity map."""
    path = tmp_path / "hm.csv"
    deltas = np.linspace(-5, 5, 11)
    lines = ["delta1,delta2,f_max,t_max"]
    for d1 in deltas:
        for d2 in deltas:
            f = float(np.exp(-0.5 * (d1 - d2) ** 2))
            tmax = float(2.2 + abs(d1 + d2))
            lines.append(f"{float(d1)!r},{float(d2)!r},{f!r},{tmax!r}")
    path.write_text("\n".join(lines) + "\n")
    return str(path)


@pytest.fixture
def benchmark_csv(tmp_path):
    """dt-scan table with exact quadratic error scaling."""
    path = tmp_path / "bench.csv"
    lines = ["dt,one_minus_fmax,oracle_infidelity,t_max"]
    for dt in (0.005, 0.01, 0.02, 0.04, 0.08):
        lines.append(f"{dt!r},{(0.5 * dt**2)!r},{(0.8 * dt**2)!r},{2.22!r}")
    path.write_text("\n".join(lines) + "\n")
    return str(path)
