"""Throughput comparison of the two evolution engines on a heatmap workload.

The per-cell stepper applies each exact string exponential to one state
vector; the batched engine stacks every cell's step matrix and advances all
of them with a single einsum per step.  Both produce bit-identical
fidelities; the batched path is what the sweep harness uses.

Run:  python benchmarks/bench_engines.py
"""
import time

import numpy as np

from tcsim import SweepGrid, SystemParams, init_state, target_state
from tcsim.sweeps import (
    _cell_step_unitary,
    max_fidelity_scan,
    max_fidelity_scan_batched,
    resolve_horizon,
)


def main():
    params = SystemParams()
    grid = SweepGrid(horizon=60.0, dt=0.01)
    horizon = resolve_horizon(params, grid)
    n_steps = int(round(horizon / grid.dt))
    deltas1, deltas2 = grid.axis(1), grid.axis(2)
    cells = [(d1, d2) for d1 in deltas1 for d2 in deltas2]
    print(f"{len(cells)} cells x {n_steps} steps (horizon {horizon:g}/g, dt {grid.dt})")

    unitaries = np.stack([
        _cell_step_unitary(SystemParams(delta_1=d1, delta_2=d2), "full", grid.dt)
        for d1, d2 in cells
    ])
    psi0 = init_state("polarized").amplitudes
    tgt = target_state("polarized").amplitudes

    t0 = time.perf_counter()
    f_batched, _, _ = max_fidelity_scan_batched(unitaries, psi0, tgt, n_steps, grid.dt)
    t_batched = time.perf_counter() - t0

    t0 = time.perf_counter()
    f_stepped = np.array([
        max_fidelity_scan(unitaries[k], psi0, tgt, n_steps, grid.dt)[0]
        for k in range(len(cells))
    ])
    t_stepped = time.perf_counter() - t0

    assert np.abs(f_batched - f_stepped).max() < 1e-12
    rate_b = len(cells) * n_steps / t_batched
    rate_s = len(cells) * n_steps / t_stepped
    print(f"batched: {t_batched:.2f}s  ({rate_b:.0f} cell-steps/s)")
    print(f"stepped: {t_stepped:.2f}s  ({rate_s:.0f} cell-steps/s)")
    print(f"speedup: {t_stepped / t_batched:.1f}x (results identical)")


if __name__ == "__main__":
    main()
