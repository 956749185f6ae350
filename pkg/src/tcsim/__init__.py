"""Trotterized simulator for cavity-mediated two-qubit state transfer.

Builds qubit-register Hamiltonians for two emitters exchanging an excitation
through a cavity mode (with or without the counter-rotating terms, and with a
one- or three-photon cavity truncation), evolves pure states and damped
density matrices step by step, checks everything against closed-form
references, and sweeps transfer fidelity across the system's parameter space.
"""
from ._version import __version__
from .hamiltonian import (
    LAYOUT_FOUR_LEVEL,
    LAYOUT_THREE_QUBIT,
    PauliHamiltonian,
    PauliTerm,
    SystemParams,
    build_cavity_frame,
    build_full_qubitized,
    build_fourlevel_qubitized,
    build_rwa_qubitized,
    split_trotter,
)
from .simulator import (
    DensityMatrix,
    KrausChannel,
    StateVector,
    Trajectory,
    TrotterConfig,
    apply_kraus,
    cavity_occupations,
    coherence,
    evolve,
    evolve_damped,
    fidelity,
    init_state,
    partial_trace,
    populations_and_phase,
    target_state,
    total_energy,
    trotter_step,
)
from .analytic import (
    SingleExcitationAmplitudes,
    dispersive_state,
    effective_coupling_J,
    exact_evolve,
    max_p2,
    rabi_frequency,
    rwa_resonant_state,
    transfer_time_dispersive,
    transfer_time_nonrwa,
    transfer_time_resonant,
    trotter_error_bound,
)
from .sweeps import (
    SweepGrid,
    SweepResult,
    SweepTable,
    asymmetry_scan,
    coupling_ratio_detuning_heatmap,
    coupling_ratio_sweep,
    damping_trajectories,
    detuning_heatmap,
    resolve_horizon,
    rwa_comparison,
    timestep_benchmark,
    write_results,
)

__all__ = [name for name in dir() if not name.startswith("_")]
