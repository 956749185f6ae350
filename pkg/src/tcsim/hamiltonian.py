"""Qubit-register Hamiltonians for two emitters coupled through one cavity mode.

The cavity mode is truncated to one photon (one register qubit) or three
photons (two register qubits, binary-encoded occupation), which is adequate
while the total excitation stays near one.  Emitter raising/lowering
operators and the truncated mode operators map onto Pauli ladder
combinations, so every Hamiltonian here is a real-weighted sum of Pauli
strings on a small register.

Conventions, fixed package-wide:

* computational ``|0>`` is the ground state (cavity vacuum), ``|1>`` the
  excited state (one photon); the emitters' sigma^z maps to ``-Z``.
* register index 0 is emitter 1, the last index is emitter 2, the cavity
  sits in between (two indices in the 4-level case, most significant
  occupation bit first).
* dense exports order basis states with index 0 as the most significant
  bit, so ``|e_1 0_c g_2>`` is row 4 of the 8-dim register.
* energies are in units of the reference coupling g, times in 1/g.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

LAYOUT_THREE_QUBIT = ("qubit1", "cavity", "qubit2")
LAYOUT_FOUR_LEVEL = ("qubit1", "cavity_bit0", "cavity_bit1", "qubit2")

MAX_DENSE_QUBITS = 12

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class SystemParams:
    """Physical configuration of the two-emitter/cavity system, in units of g.

    ``delta_1`` and ``delta_2`` are the emitter-cavity detunings; the emitter
    frequencies are ``omega_i = omega_c + delta_i`` and must stay positive.
    """

    omega_c: float = 100.0
    delta_1: float = 0.0
    delta_2: float = 0.0
    g_1: float = 1.0
    g_2: float = 1.0
    kappa: float = 0.0

    def __post_init__(self):
        values = (self.omega_c, self.delta_1, self.delta_2, self.g_1, self.g_2, self.kappa)
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"non-finite system parameter in {values}")
        if self.omega_c <= 0:
            raise ValueError(f"cavity frequency must be positive, got {self.omega_c}")
        if self.g_1 < 0 or self.g_2 < 0:
            raise ValueError("couplings g_1, g_2 must be >= 0")
        if self.kappa < 0:
            raise ValueError("damping rate kappa must be >= 0")
        if self.omega_1 <= 0 or self.omega_2 <= 0:
            raise ValueError("emitter frequencies omega_c + delta_i must be positive")

    @property
    def omega_1(self) -> float:
        return self.omega_c + self.delta_1

    @property
    def omega_2(self) -> float:
        return self.omega_c + self.delta_2


@dataclass(frozen=True)
class PauliTerm:
    """One real-weighted Pauli string; ``factors`` maps register index to label.

    Indices absent from ``factors`` carry the identity, so an empty mapping is
    a global energy offset.
    """

    coefficient: float
    factors: tuple[tuple[int, str], ...]

    def __post_init__(self):
        if not math.isfinite(self.coefficient):
            raise ValueError("Pauli term coefficient must be finite")
        seen = set()
        for idx, label in self.factors:
            if label not in ("X", "Y", "Z"):
                raise ValueError(f"unknown Pauli label {label!r}")
            if idx < 0 or idx in seen:
                raise ValueError(f"bad or repeated register index {idx}")
            seen.add(idx)
        ordered = tuple(sorted(self.factors))
        if ordered != self.factors:
            object.__setattr__(self, "factors", ordered)

    @classmethod
    def make(cls, coefficient: float, factors: dict[int, str] | None = None) -> "PauliTerm":
        return cls(float(coefficient), tuple(sorted((factors or {}).items())))

    @property
    def is_diagonal(self) -> bool:
        return all(label == "Z" for _, label in self.factors)

    def commutes_with(self, other: "PauliTerm") -> bool:
        """Pauli strings commute iff they anticommute on an even number of sites."""
        mine = dict(self.factors)
        clashes = sum(
            1 for idx, label in other.factors if mine.get(idx, "I") not in ("I", label)
        )
        return clashes % 2 == 0


@dataclass
class PauliHamiltonian:
    """Real-weighted Pauli-string sum over a fixed register layout."""

    n_qubits: int
    layout: tuple[str, ...]
    terms: list[PauliTerm] = field(default_factory=list)

    def __post_init__(self):
        if len(self.layout) != self.n_qubits:
            raise ValueError("layout length must equal n_qubits")
        for term in self.terms:
            self._check_term(term)

    def _check_term(self, term: PauliTerm):
        for idx, _ in term.factors:
            if idx >= self.n_qubits:
                raise ValueError(
                    f"term touches index {idx} outside the {self.n_qubits}-qubit layout"
                )

    def add(self, coefficient: float, factors: dict[int, str] | None = None):
        """Append a term, dropping structurally absent (zero-coefficient) ones."""
        if coefficient == 0.0:
            return
        term = PauliTerm.make(coefficient, factors)
        self._check_term(term)
        self.terms.append(term)

    def to_matrix(self) -> np.ndarray:
        """Dense Hermitian matrix of dimension 2**n_qubits (index 0 = msb)."""
        if self.n_qubits > MAX_DENSE_QUBITS:
            raise ValueError(
                f"dense export limited to {MAX_DENSE_QUBITS} qubits, got {self.n_qubits}"
            )
        dim = 2**self.n_qubits
        out = np.zeros((dim, dim), dtype=complex)
        for term in self.terms:
            factors = dict(term.factors)
            mat = np.array([[term.coefficient]], dtype=complex)
            for idx in range(self.n_qubits):
                mat = np.kron(mat, PAULI_MATRICES[factors.get(idx, "I")])
            out += mat
        return out

    def diagonal_energies(self) -> np.ndarray:
        """Diagonal of the dense matrix, computed without forming it.

        Only meaningful when every term is diagonal (Z/I); off-diagonal terms
        contribute nothing here by construction of the Pauli basis.
        """
        dim = 2**self.n_qubits
        idx = np.arange(dim)
        energies = np.zeros(dim)
        for term in self.terms:
            if not term.is_diagonal:
                continue
            signs = np.ones(dim)
            for q, _ in term.factors:
                bit = (idx >> (self.n_qubits - 1 - q)) & 1
                signs *= 1.0 - 2.0 * bit
            energies += term.coefficient * signs
        return energies

    def to_json_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "layout": list(self.layout),
            "terms": [
                {"coeff": t.coefficient, "factors": {str(i): lbl for i, lbl in t.factors}}
                for t in self.terms
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def build_full_qubitized(params: SystemParams) -> PauliHamiltonian:
    """Lab-frame register Hamiltonian with counter-rotating terms kept.

    H = -(w1/2) Z_1 - (w2/2) Z_2 + (wc/2)(I - Z_c) + g_1 X_c X_1 + g_2 X_c X_2

    The X_c X_i coupling is (a + a^dag)(sigma^+ + sigma^-) in the one-photon
    truncation, i.e. rotating and counter-rotating exchange together.
    """
    h = PauliHamiltonian(3, LAYOUT_THREE_QUBIT)
    h.add(-params.omega_1 / 2, {0: "Z"})
    h.add(-params.omega_2 / 2, {2: "Z"})
    h.add(params.omega_c / 2, {})
    h.add(-params.omega_c / 2, {1: "Z"})
    h.add(params.g_1, {0: "X", 1: "X"})
    h.add(params.g_2, {1: "X", 2: "X"})
    return h


def build_rwa_qubitized(params: SystemParams) -> PauliHamiltonian:
    """Rotating-wave register Hamiltonian: excitation-conserving exchange only.

    The interaction is (g_i/2)(X_c X_i + Y_c Y_i), the Pauli form of
    g_i (a^dag sigma^-_i + a sigma^+_i).
    """
    h = PauliHamiltonian(3, LAYOUT_THREE_QUBIT)
    h.add(-params.omega_1 / 2, {0: "Z"})
    h.add(-params.omega_2 / 2, {2: "Z"})
    h.add(params.omega_c / 2, {})
    h.add(-params.omega_c / 2, {1: "Z"})
    for g, q in ((params.g_1, 0), (params.g_2, 2)):
        h.add(g / 2, {1: "X", q: "X"})
        h.add(g / 2, {1: "Y", q: "Y"})
    return h


def build_cavity_frame(params: SystemParams, t: float) -> PauliHamiltonian:
    """Snapshot at time ``t`` of the Hamiltonian in the cavity rotating frame.

    Per emitter i: -(Delta_i/2) Z_i + (g_i/2)(X_c X_i + Y_c Y_i)
                   + (g_i/2) cos(2 wc t) (X_c X_i - Y_c Y_i)
                   + (g_i/2) sin(2 wc t) (X_c Y_i + Y_c X_i)

    The sine block is the Hermitian combination obtained by expanding the
    frame-rotated ladder products e^(+-2i wc t) a^dag sigma^+ / a sigma^-;
    a typeset variant carrying an imaginary unit on the Y_c X_i string is not
    Hermitian and fails the dense self-adjointness check, so the re-derived
    form above is used.  Diagnostic only: the simulators evolve in the lab
    frame, where the generator is time-independent.
    """
    if not math.isfinite(t) or t < 0:
        raise ValueError(f"time must be finite and >= 0, got {t}")
    h = PauliHamiltonian(3, LAYOUT_THREE_QUBIT)
    c = math.cos(2 * params.omega_c * t)
    s = math.sin(2 * params.omega_c * t)
    for delta, g, q in ((params.delta_1, params.g_1, 0), (params.delta_2, params.g_2, 2)):
        h.add(-delta / 2, {q: "Z"})
        h.add(g / 2 + (g / 2) * c, {1: "X", q: "X"})
        h.add(g / 2 - (g / 2) * c, {1: "Y", q: "Y"})
        h.add((g / 2) * s, {1: "X", q: "Y"})
        h.add((g / 2) * s, {1: "Y", q: "X"})
    return h


_SQRT3 = math.sqrt(3.0)
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def build_fourlevel_qubitized(params: SystemParams) -> PauliHamiltonian:
    """Lab-frame Hamiltonian with the cavity truncated at three photons.

    The occupation n = 0..3 is binary-encoded on two register qubits
    (cavity_bit0 most significant), so the number operator reads
    n = (3/2) I - Z_c0 - (1/2) Z_c1 and the photon energy block is wc times
    that, with eigenvalues wc * {0, 1, 2, 3}.  The position-like coupling
    (a + a^dag) decomposes into four strings per emitter with weights
    (1 +- sqrt 3)/2 on the single-bit-flip strings and 1/sqrt 2 on the
    double-flip strings.
    """
    h = PauliHamiltonian(4, LAYOUT_FOUR_LEVEL)
    h.add(-params.omega_1 / 2, {0: "Z"})
    h.add(-params.omega_2 / 2, {3: "Z"})
    h.add(1.5 * params.omega_c, {})
    h.add(-params.omega_c, {1: "Z"})
    h.add(-params.omega_c / 2, {2: "Z"})
    for g, q in ((params.g_1, 0), (params.g_2, 3)):
        h.add(g * (1 + _SQRT3) / 2, {q: "X", 2: "X"})
        h.add(g * (1 - _SQRT3) / 2, {q: "X", 1: "Z", 2: "X"})
        h.add(g * _INV_SQRT2, {q: "X", 1: "X", 2: "X"})
        h.add(g * _INV_SQRT2, {q: "X", 1: "Y", 2: "Y"})
    return h


def _emitter_indices(layout: tuple[str, ...]) -> tuple[int, ...]:
    return tuple(i for i, role in enumerate(layout) if role.startswith("qubit"))


def _cavity_indices(layout: tuple[str, ...]) -> tuple[int, ...]:
    return tuple(i for i, role in enumerate(layout) if role.startswith("cavity"))


def split_trotter(
    h: PauliHamiltonian,
) -> tuple[PauliHamiltonian, list[PauliHamiltonian]]:
    """Split into the diagonal part and ordered mutually-commuting blocks.

    The diagonal part collects every Z/I term.  The remaining exchange terms
    are grouped greedily, in emission order, into blocks whose members all
    pairwise commute, so each block exponential factorises exactly into
    single-string exponentials.  For the plain X_c X_i Hamiltonian this is
    one block; for the rotating-wave form, one {XX, YY} block per emitter;
    for the 4-level form, two four-string blocks (the per-emitter groups do
    not commute internally there, e.g. [X_1 I X_c1', X_1 Y_c0 Y_c1'] != 0, so
    the commuting partition regroups by string type instead).
    """
    emitters = _emitter_indices(h.layout)
    cavities = _cavity_indices(h.layout)
    h0 = PauliHamiltonian(h.n_qubits, h.layout)
    blocks: list[list[PauliTerm]] = []
    for term in h.terms:
        if term.is_diagonal:
            h0.terms.append(term)
            continue
        touched = dict(term.factors)
        hits_cavity = any(touched.get(i, "I") in ("X", "Y") for i in cavities)
        hits_emitter = any(touched.get(i, "I") in ("X", "Y") for i in emitters)
        if not (hits_cavity and hits_emitter):
            raise ValueError(
                f"unrecognised interaction term {term}: expected cavity-emitter exchange strings"
            )
        for block in blocks:
            if all(term.commutes_with(member) for member in block):
                block.append(term)
                break
        else:
            blocks.append([term])
    return h0, [PauliHamiltonian(h.n_qubits, h.layout, blk) for blk in blocks]
