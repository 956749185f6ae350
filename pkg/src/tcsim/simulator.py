"""Pure-state and density-matrix evolution plus every recorded observable.

A Trotter step applies the diagonal part as an exact phase and each
interaction block as an ordered product of exact single-string exponentials,
exp(-i theta P) = cos(theta) I - i sin(theta) P (valid because P^2 = I), so
every factor is unitary to machine precision.  Cavity photon loss enters as
an amplitude-damping Kraus pair on the cavity qubit after each step, the
deterministic equivalent of draining the cavity into a reset sink at rate
kappa.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

from .hamiltonian import (
    LAYOUT_THREE_QUBIT,
    PauliHamiltonian,
    PauliTerm,
    split_trotter,
)

PHASE_EPS = 1e-12
NORM_TOL = 1e-10


@dataclass
class StateVector:
    """Pure register state; amplitudes indexed with register index 0 as msb."""

    amplitudes: np.ndarray
    layout: tuple[str, ...]

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (2 ** len(self.layout),):
            raise ValueError(
                f"amplitude vector of length {self.amplitudes.shape} does not match "
                f"layout {self.layout}"
            )
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalised: |psi| = {norm}")

    @property
    def n_qubits(self) -> int:
        return len(self.layout)


@dataclass
class DensityMatrix:
    """Mixed register state; Hermitian with unit trace and eigenvalues >= 0."""

    matrix: np.ndarray
    layout: tuple[str, ...]

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        dim = 2 ** len(self.layout)
        if self.matrix.shape != (dim, dim):
            raise ValueError("density matrix shape does not match layout")

    def validate(self, eig_tol: float = 1e-9):
        herm = np.abs(self.matrix - self.matrix.conj().T).max()
        if herm > 1e-10:
            raise ValueError(f"density matrix not Hermitian: deviation {herm}")
        tr = np.trace(self.matrix).real
        if not (0.0 <= tr <= 1.0 + 1e-10):
            raise ValueError(f"density matrix trace {tr} outside [0, 1]")
        if np.linalg.eigvalsh(self.matrix).min() < -eig_tol:
            raise ValueError("density matrix has a significantly negative eigenvalue")

    @classmethod
    def from_state(cls, state: StateVector) -> "DensityMatrix":
        return cls(np.outer(state.amplitudes, state.amplitudes.conj()), state.layout)


@dataclass(frozen=True)
class TrotterConfig:
    dt: float = 0.01
    n_steps: int = 1
    record_stride: int = 1

    def __post_init__(self):
        if not (self.dt > 0):
            raise ValueError("dt must be positive")
        if self.n_steps < 1 or self.record_stride < 1:
            raise ValueError("n_steps and record_stride must be >= 1")

    @classmethod
    def for_horizon(cls, t_max: float, dt: float = 0.01, record_stride: int = 1) -> "TrotterConfig":
        return cls(dt=dt, n_steps=max(1, int(round(t_max / dt))), record_stride=record_stride)


@dataclass(frozen=True)
class KrausChannel:
    """Single-photon amplitude damping on the cavity qubit.

    Kraus pair O0 = |0><0| + sqrt(1 - gamma^2)|1><1|, O1 = gamma |0><1|;
    completeness O0+O0 + O1+O1 = I holds exactly for any gamma in [0, 1].
    """

    gamma: float
    target: int = 1

    def __post_init__(self):
        if not (0.0 <= self.gamma <= 1.0):
            raise ValueError(f"damping amplitude must be in [0, 1], got {self.gamma}")

    @property
    def theta_d(self) -> float:
        """Rotation angle of the equivalent sink-qubit circuit, 2 asin(gamma)."""
        return 2.0 * math.asin(self.gamma)

    def kraus_pair(self) -> tuple[np.ndarray, np.ndarray]:
        om0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - self.gamma**2)]], dtype=complex)
        om1 = np.array([[0.0, self.gamma], [0.0, 0.0]], dtype=complex)
        return om0, om1

    @classmethod
    def from_rate(cls, kappa: float, dt: float, target: int = 1) -> "KrausChannel":
        if kappa < 0:
            raise ValueError("kappa must be >= 0")
        return cls(gamma=math.sqrt(1.0 - math.exp(-kappa * dt)), target=target)


class CoherenceSample(NamedTuple):
    phase: float
    magnitude: float
    defined: bool


# ---------------------------------------------------------------------------
# state preparation
# ---------------------------------------------------------------------------


def basis_index(layout: Sequence[str], qubit1: int, cavity: int, qubit2: int) -> int:
    """Register basis index for given occupations (index 0 is the msb)."""
    n = len(layout)
    bits = [0] * n
    bits[0] = qubit1
    bits[-1] = qubit2
    cav = [i for i, role in enumerate(layout) if role.startswith("cavity")]
    if len(cav) == 1:
        bits[cav[0]] = cavity
    else:
        bits[cav[0]], bits[cav[1]] = (cavity >> 1) & 1, cavity & 1
    return sum(b << (n - 1 - i) for i, b in enumerate(bits))


StateSpec = Union[str, tuple, np.ndarray]


def init_state(spec: StateSpec, layout: Sequence[str] = LAYOUT_THREE_QUBIT) -> StateVector:
    """Prepare emitter 1 in the requested state, cavity and emitter 2 in ground.

    ``spec`` is "polarized" (emitter 1 excited), ("superposition", alpha,
    beta) with alpha weighting the ground component and beta the excited one,
    or a full custom amplitude vector.
    """
    layout = tuple(layout)
    dim = 2 ** len(layout)
    if isinstance(spec, str):
        if spec != "polarized":
            raise ValueError(f"unknown state spec {spec!r}")
        amps = np.zeros(dim, dtype=complex)
        amps[basis_index(layout, 1, 0, 0)] = 1.0
        return StateVector(amps, layout)
    if isinstance(spec, tuple) and len(spec) == 3 and spec[0] == "superposition":
        alpha, beta = complex(spec[1]), complex(spec[2])
        if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > NORM_TOL:
            raise ValueError("superposition weights must satisfy |alpha|^2 + |beta|^2 = 1")
        amps = np.zeros(dim, dtype=complex)
        amps[basis_index(layout, 0, 0, 0)] = alpha
        amps[basis_index(layout, 1, 0, 0)] = beta
        return StateVector(amps, layout)
    return StateVector(np.asarray(spec, dtype=complex), layout)


def target_state(
    spec: StateSpec,
    layout: Sequence[str] = LAYOUT_THREE_QUBIT,
    convention: str = "corrected",
) -> StateVector:
    """Transferred state on emitter 2 used as the fidelity target.

    The exchange imprints a pi phase on the transferred excited component, so
    the "corrected" target is alpha |g 0 g> - beta |g 0 e> (what a Z gate on
    emitter 2 would repair); "raw" keeps the + sign of the literal transferred
    superposition.  The two coincide, up to global phase, for polarized input.
    """
    layout = tuple(layout)
    if convention not in ("corrected", "raw"):
        raise ValueError(f"unknown target convention {convention!r}")
    sign = -1.0 if convention == "corrected" else 1.0
    dim = 2 ** len(layout)
    amps = np.zeros(dim, dtype=complex)
    if isinstance(spec, str) and spec == "polarized":
        amps[basis_index(layout, 0, 0, 1)] = 1.0
        return StateVector(amps, layout)
    if isinstance(spec, tuple) and spec[0] == "superposition":
        alpha, beta = complex(spec[1]), complex(spec[2])
        amps[basis_index(layout, 0, 0, 0)] = alpha
        amps[basis_index(layout, 0, 0, 1)] = sign * beta
        return StateVector(amps, layout)
    raise ValueError("target_state needs a 'polarized' or superposition spec")


# ---------------------------------------------------------------------------
# Trotter stepping
# ---------------------------------------------------------------------------


def _string_action(term: PauliTerm, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Permutation/phase form of a Pauli string: (P psi)[j] = phase[j] psi[perm[j]]."""
    dim = 1 << n
    idx = np.arange(dim)
    flip = 0
    phase = np.ones(dim, dtype=complex)
    for q, label in term.factors:
        pos = n - 1 - q
        bit = (idx >> pos) & 1
        if label == "X":
            flip |= 1 << pos
        elif label == "Y":
            flip |= 1 << pos
            phase = phase * np.where(bit == 1, 1j, -1j)
        else:  # Z
            phase = phase * (1.0 - 2.0 * bit)
    return idx ^ flip, phase


class CompiledStep:
    """One Trotter step with permutation/phase tables precomputed."""

    def __init__(self, h0: PauliHamiltonian, blocks: Sequence[PauliHamiltonian], dt: float):
        n = h0.n_qubits
        self.layout = h0.layout
        self.dt = dt
        self.diag_phase = np.exp(-1j * h0.diagonal_energies() * dt)
        self.factors = []
        for block in blocks:
            for term in block.terms:
                perm, phase = _string_action(term, n)
                theta = term.coefficient * dt
                self.factors.append((math.cos(theta), math.sin(theta), perm, phase))

    def apply(self, psi: np.ndarray) -> np.ndarray:
        psi = self.diag_phase * psi
        for c, s, perm, phase in self.factors:
            psi = c * psi - 1j * s * (phase * psi[perm])
        return psi

    def unitary(self) -> np.ndarray:
        """Dense matrix of the step (column-wise application to the identity)."""
        u = np.diag(self.diag_phase)
        for c, s, perm, phase in self.factors:
            u = c * u - 1j * s * (phase[:, None] * u[perm, :])
        return u


def step_unitary(h0: PauliHamiltonian, blocks: Sequence[PauliHamiltonian], dt: float) -> np.ndarray:
    return CompiledStep(h0, blocks, dt).unitary()


def trotter_step(
    state: StateVector,
    h0: PauliHamiltonian,
    blocks: Sequence[PauliHamiltonian],
    dt: float,
) -> StateVector:
    """Apply exp(-i h0 dt) then each block's exact string exponentials in order."""
    if tuple(state.layout) != tuple(h0.layout):
        raise ValueError(f"state layout {state.layout} does not match Hamiltonian {h0.layout}")
    step = CompiledStep(h0, blocks, dt)
    return StateVector(step.apply(state.amplitudes), state.layout)


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------


def _reduce(rho_tensor: np.ndarray, n: int, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix over ``keep`` (ascending), from a [2]*2n tensor."""
    letters = "abcdefghijklmnop"
    row = list(letters[:n])
    col = [letters[i].upper() if i in keep else letters[i] for i in range(n)]
    out = "".join(letters[i] for i in keep) + "".join(letters[i].upper() for i in keep)
    expr = "".join(row) + "".join(col) + "->" + out
    dim = 2 ** len(keep)
    return np.einsum(expr, rho_tensor).reshape(dim, dim)


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Trace out everything but ``keep``; kept indices stay in layout order."""
    keep = sorted(set(int(k) for k in keep))
    n = len(rho.layout)
    if not keep or any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep set {keep} must be a nonempty subset of range({n})")
    tensor = rho.matrix.reshape([2] * (2 * n))
    reduced = _reduce(tensor, n, keep)
    return DensityMatrix(reduced, tuple(rho.layout[k] for k in keep))


def populations_and_phase(rho_single) -> tuple[float, float, bool]:
    """Excited population and relative phase arg(rho_eg) of a 2x2 reduced state.

    The phase is reported as 0.0 with ``defined=False`` when the off-diagonal
    magnitude is below 1e-12 (population eigenstates have no relative phase).
    """
    mat = rho_single.matrix if isinstance(rho_single, DensityMatrix) else np.asarray(rho_single)
    if mat.shape != (2, 2):
        raise ValueError("expected a 2x2 reduced density matrix")
    p_excited = float(mat[1, 1].real)
    off = mat[1, 0]
    if abs(off) < PHASE_EPS:
        return p_excited, 0.0, False
    return p_excited, float(np.angle(off)), True


_COHERENCE_SLOTS = {
    "qubit_cavity": (2, 1),  # <e 0| rho |g 1>, qubit first in the pair layout
    "cavity_qubit": (1, 2),  # <0 e| rho |1 g>, cavity first in the pair layout
    "qubit_qubit": (2, 1),  # <e g| rho |g e>
}


def coherence(rho_pair, pair_kind: str) -> CoherenceSample:
    """Phase and magnitude of the single-excitation coherence of a 4x4 pair state."""
    if pair_kind not in _COHERENCE_SLOTS:
        raise ValueError(f"unknown pair kind {pair_kind!r}; expected one of {sorted(_COHERENCE_SLOTS)}")
    mat = rho_pair.matrix if isinstance(rho_pair, DensityMatrix) else np.asarray(rho_pair)
    if mat.shape != (4, 4):
        raise ValueError("expected a 4x4 pair density matrix")
    element = mat[_COHERENCE_SLOTS[pair_kind]]
    magnitude = float(abs(element))
    if magnitude < PHASE_EPS:
        return CoherenceSample(0.0, magnitude, False)
    return CoherenceSample(float(np.angle(element)), magnitude, True)


def fidelity(state_or_rho, target: StateVector) -> float:
    """|<target|psi>|^2 for pure states, <target|rho|target> for mixed ones."""
    tvec = target.amplitudes if isinstance(target, StateVector) else np.asarray(target)
    if isinstance(state_or_rho, StateVector):
        vec = state_or_rho.amplitudes
    elif isinstance(state_or_rho, DensityMatrix):
        mat = state_or_rho.matrix
        if mat.shape[0] != tvec.shape[0]:
            raise ValueError("state and target dimensions differ")
        return float(np.real(tvec.conj() @ mat @ tvec))
    else:
        vec = np.asarray(state_or_rho)
    if vec.shape != tvec.shape:
        raise ValueError("state and target dimensions differ")
    return float(abs(np.vdot(tvec, vec)) ** 2)


def total_energy(state_or_rho, h: PauliHamiltonian) -> float:
    hmat = h.to_matrix()
    if isinstance(state_or_rho, DensityMatrix):
        return float(np.trace(state_or_rho.matrix @ hmat).real)
    vec = state_or_rho.amplitudes if isinstance(state_or_rho, StateVector) else np.asarray(state_or_rho)
    return float(np.real(np.vdot(vec, hmat @ vec)))


def _cavity_bit_positions(layout: Sequence[str]) -> list[int]:
    return [i for i, role in enumerate(layout) if role.startswith("cavity")]


def cavity_occupations(state) -> tuple[float, float, float, float]:
    """Marginal probabilities of the four binary-encoded cavity number states."""
    layout = tuple(state.layout)
    cav = _cavity_bit_positions(layout)
    if len(cav) != 2:
        raise ValueError("cavity_occupations needs a two-bit (4-level) cavity layout")
    n = len(layout)
    if isinstance(state, DensityMatrix):
        probs = np.diag(state.matrix).real
    else:
        probs = np.abs(np.asarray(state.amplitudes)) ** 2
    idx = np.arange(probs.size)
    number = 2 * ((idx >> (n - 1 - cav[0])) & 1) + ((idx >> (n - 1 - cav[1])) & 1)
    return tuple(float(probs[number == k].sum()) for k in range(4))


def _excitation_weights(layout: Sequence[str]) -> np.ndarray:
    """Diagonal of the total-excitation operator (photon number + excited emitters)."""
    n = len(layout)
    idx = np.arange(1 << n)
    weights = np.zeros(1 << n)
    cav = _cavity_bit_positions(layout)
    for i, role in enumerate(layout):
        bit = (idx >> (n - 1 - i)) & 1
        w = 2.0 if (len(cav) == 2 and i == cav[0]) else 1.0
        weights = weights + w * bit
    return weights


# ---------------------------------------------------------------------------
# trajectories
# ---------------------------------------------------------------------------

TRAJECTORY_COLUMNS = (
    "t,p1,pc,p2,phase1,phasec,phase2,coh_1c,coh_2c,coh_12,energy,fidelity,total_excitation"
)


@dataclass
class Trajectory:
    """Time-stamped observable record of one evolution run.

    ``coh_*`` are the coherence phases that appear in the CSV schema; the
    corresponding magnitudes and the defined-ness flags ride along in memory
    for analysis and the optional extended CSV.
    """

    times: np.ndarray
    p1: np.ndarray
    pc: np.ndarray
    p2: np.ndarray
    phase1: np.ndarray
    phasec: np.ndarray
    phase2: np.ndarray
    coh_1c: np.ndarray
    coh_2c: np.ndarray
    coh_12: np.ndarray
    energy: np.ndarray
    fidelity: np.ndarray
    total_excitation: np.ndarray
    phase1_defined: np.ndarray
    phasec_defined: np.ndarray
    phase2_defined: np.ndarray
    coh_1c_mag: np.ndarray
    coh_2c_mag: np.ndarray
    coh_12_mag: np.ndarray

    def to_csv(self, path, include_coherence_mags: bool = False) -> None:
        header = TRAJECTORY_COLUMNS
        extra = ()
        if include_coherence_mags:
            header = header + ",coh_1c_mag,coh_2c_mag,coh_12_mag"
            extra = (self.coh_1c_mag, self.coh_2c_mag, self.coh_12_mag)
        columns = (
            self.times, self.p1, self.pc, self.p2,
            self.phase1, self.phasec, self.phase2,
            self.coh_1c, self.coh_2c, self.coh_12,
            self.energy, self.fidelity, self.total_excitation,
        ) + extra
        with open(path, "w", newline="") as fh:
            fh.write(header + "\n")
            for row in zip(*columns):
                fh.write(",".join(repr(float(v)) for v in row) + "\n")


class _SampleExtractor:
    """Shared observable extraction for pure and damped runs."""

    def __init__(self, layout, h, target, phase_frame="lab", omega_c=None):
        self.layout = tuple(layout)
        self.n = len(self.layout)
        self.hmat = h.to_matrix()
        self.target = None if target is None else np.asarray(
            target.amplitudes if isinstance(target, StateVector) else target
        )
        if phase_frame not in ("lab", "cavity"):
            raise ValueError(f"unknown phase frame {phase_frame!r}")
        if phase_frame == "cavity" and omega_c is None:
            raise ValueError("cavity phase frame needs omega_c")
        self.phase_frame = phase_frame
        self.omega_c = omega_c
        self.exc_weights = _excitation_weights(self.layout)
        self.cav = _cavity_bit_positions(self.layout)
        self.q1, self.q2 = 0, self.n - 1

    def _frame_shift(self, phase: float, defined: bool, t: float) -> float:
        if not defined or self.phase_frame == "lab":
            return phase
        shifted = phase + self.omega_c * t
        return float((shifted + math.pi) % (2 * math.pi) - math.pi)

    def sample(self, rho: np.ndarray, t: float) -> dict:
        tensor = rho.reshape([2] * (2 * self.n))
        red_q1 = _reduce(tensor, self.n, [self.q1])
        red_q2 = _reduce(tensor, self.n, [self.q2])
        red_cav = _reduce(tensor, self.n, self.cav)
        p1, phase1, def1 = populations_and_phase(red_q1)
        p2, phase2, def2 = populations_and_phase(red_q2)
        if len(self.cav) == 1:
            pc, phasec, defc = populations_and_phase(red_cav)
        else:
            pc = float(1.0 - red_cav[0, 0].real)
            off = red_cav[1, 0]
            defc = abs(off) >= PHASE_EPS
            phasec = float(np.angle(off)) if defc else 0.0
        coh = {}
        for name, pair, kind in (
            ("1c", [self.q1, self.cav[0]], "qubit_cavity"),
            ("2c", [self.cav[-1], self.q2], "cavity_qubit"),
            ("12", [self.q1, self.q2], "qubit_qubit"),
        ):
            if len(self.cav) == 2 and "c" in name:
                coh[name] = self._fourlevel_pair_coherence(tensor, name)
            else:
                coh[name] = coherence(_reduce(tensor, self.n, pair), kind)
        energy = float(np.trace(rho @ self.hmat).real)
        fid = 0.0
        if self.target is not None:
            fid = float(np.real(self.target.conj() @ rho @ self.target))
        exc = float(np.sum(np.diag(rho).real * self.exc_weights))
        return {
            "p1": p1, "pc": pc, "p2": p2,
            "phase1": self._frame_shift(phase1, def1, t),
            "phasec": self._frame_shift(phasec, defc, t),
            "phase2": self._frame_shift(phase2, def2, t),
            "phase1_defined": def1, "phasec_defined": defc, "phase2_defined": def2,
            "coh_1c": coh["1c"].phase, "coh_2c": coh["2c"].phase, "coh_12": coh["12"].phase,
            "coh_1c_mag": coh["1c"].magnitude, "coh_2c_mag": coh["2c"].magnitude,
            "coh_12_mag": coh["12"].magnitude,
            "energy": energy, "fidelity": fid, "total_excitation": exc,
        }

    def _fourlevel_pair_coherence(self, tensor, name) -> CoherenceSample:
        # single-excitation element <e_i, n=0| rho |g_i, n=1> of the qubit+2-bit
        # cavity reduction (8x8); generalises the 4x4 two-level slot.
        if name == "1c":
            red = _reduce(tensor, self.n, [self.q1] + self.cav)
            element = red[4, 1]
        else:
            red = _reduce(tensor, self.n, self.cav + [self.q2])
            element = red[1, 2]
        magnitude = float(abs(element))
        if magnitude < PHASE_EPS:
            return CoherenceSample(0.0, magnitude, False)
        return CoherenceSample(float(np.angle(element)), magnitude, True)


def _collect_trajectory(samples: list[dict], times: list[float]) -> Trajectory:
    def arr(key, dtype=float):
        return np.array([s[key] for s in samples], dtype=dtype)

    return Trajectory(
        times=np.array(times),
        p1=arr("p1"), pc=arr("pc"), p2=arr("p2"),
        phase1=arr("phase1"), phasec=arr("phasec"), phase2=arr("phase2"),
        coh_1c=arr("coh_1c"), coh_2c=arr("coh_2c"), coh_12=arr("coh_12"),
        energy=arr("energy"), fidelity=arr("fidelity"),
        total_excitation=arr("total_excitation"),
        phase1_defined=arr("phase1_defined", bool),
        phasec_defined=arr("phasec_defined", bool),
        phase2_defined=arr("phase2_defined", bool),
        coh_1c_mag=arr("coh_1c_mag"), coh_2c_mag=arr("coh_2c_mag"),
        coh_12_mag=arr("coh_12_mag"),
    )


def evolve(
    state0: StateVector,
    h: PauliHamiltonian,
    config: TrotterConfig,
    target: StateVector | None = None,
    phase_frame: str = "lab",
    omega_c: float | None = None,
) -> Trajectory:
    """Trotter-evolve a pure state, recording observables every record_stride steps."""
    if tuple(state0.layout) != tuple(h.layout):
        raise ValueError(f"state layout {state0.layout} does not match Hamiltonian {h.layout}")
    h0, blocks = split_trotter(h)
    step = CompiledStep(h0, blocks, config.dt)
    extractor = _SampleExtractor(h.layout, h, target, phase_frame, omega_c)
    psi = state0.amplitudes.copy()
    samples = [extractor.sample(np.outer(psi, psi.conj()), 0.0)]
    times = [0.0]
    for n in range(1, config.n_steps + 1):
        psi = step.apply(psi)
        if n % config.record_stride == 0 or n == config.n_steps:
            t = n * config.dt
            samples.append(extractor.sample(np.outer(psi, psi.conj()), t))
            times.append(t)
    return _collect_trajectory(samples, times)


def apply_kraus(rho: DensityMatrix, ch: KrausChannel) -> DensityMatrix:
    """Apply the damping channel on the cavity qubit, identity elsewhere."""
    layout = tuple(rho.layout)
    cav = _cavity_bit_positions(layout)
    if len(cav) != 1:
        raise ValueError("amplitude damping supports the single-qubit (2-level) cavity only")
    if ch.target != cav[0]:
        raise ValueError(f"channel target {ch.target} is not the cavity index {cav[0]}")
    n = len(layout)
    om0, om1 = ch.kraus_pair()
    lifted = []
    for om in (om0, om1):
        full = np.array([[1.0]], dtype=complex)
        for i in range(n):
            full = np.kron(full, om if i == ch.target else np.eye(2))
        lifted.append(full)
    k0, k1 = lifted
    out = k0 @ rho.matrix @ k0.conj().T + k1 @ rho.matrix @ k1.conj().T
    return DensityMatrix(out, layout)


def evolve_damped(
    rho0: DensityMatrix,
    h: PauliHamiltonian,
    kappa: float,
    config: TrotterConfig,
    target: StateVector | None = None,
    phase_frame: str = "lab",
    omega_c: float | None = None,
) -> Trajectory:
    """Density-matrix evolution: unitary Trotter conjugation then cavity damping.

    The per-step damping amplitude gamma = sqrt(1 - exp(-kappa dt)) makes the
    channel the deterministic equivalent of a sink qubit reset and measured
    around every step.
    """
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    layout = tuple(rho0.layout)
    if tuple(h.layout) != layout:
        raise ValueError("density matrix layout does not match Hamiltonian")
    cav = _cavity_bit_positions(layout)
    if len(cav) != 1:
        raise ValueError("damped evolution supports the 2-level cavity layout only")
    h0, blocks = split_trotter(h)
    u = CompiledStep(h0, blocks, config.dt).unitary()
    ch = KrausChannel.from_rate(kappa, config.dt, target=cav[0])
    om0, om1 = ch.kraus_pair()
    k0 = np.eye(1, dtype=complex)
    k1 = np.eye(1, dtype=complex)
    for i in range(len(layout)):
        k0 = np.kron(k0, om0 if i == cav[0] else np.eye(2))
        k1 = np.kron(k1, om1 if i == cav[0] else np.eye(2))
    extractor = _SampleExtractor(layout, h, target, phase_frame, omega_c)
    rho = rho0.matrix.copy()
    samples = [extractor.sample(rho, 0.0)]
    times = [0.0]
    for n in range(1, config.n_steps + 1):
        rho = u @ rho @ u.conj().T
        rho = k0 @ rho @ k0.conj().T + k1 @ rho @ k1.conj().T
        if n % config.record_stride == 0 or n == config.n_steps:
            t = n * config.dt
            samples.append(extractor.sample(rho, t))
            times.append(t)
    return _collect_trajectory(samples, times)
