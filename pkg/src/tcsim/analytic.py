"""Closed-form solutions, transfer-time formulas, and the dense evolution oracle.

Everything here works in the single-excitation subspace spanned by
{|e_1 0_c g_2>, |g_1 1_c g_2>, |g_1 0_c e_2>}, extended by the dark ground
component |g_1 0_c g_2> for superposition inputs.  These expressions are the
independent reference the Trotter simulator is benchmarked against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SingleExcitationAmplitudes:
    """Amplitudes on (|e_1 0 g_2>, |g_1 1 g_2>, |g_1 0 e_2>, |g_1 0 g_2>)."""

    a_e0g: complex
    a_g1g: complex
    a_g0e: complex
    a_g0g: complex = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.a_e0g, self.a_g1g, self.a_g0e, self.a_g0g], dtype=complex)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))


def _check_weights(alpha: complex, beta: complex):
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-10:
        raise ValueError("superposition weights must satisfy |alpha|^2 + |beta|^2 = 1")


def rwa_resonant_state(
    t: float, g1: float, g2: float, alpha: complex = 0.0, beta: complex = 1.0
) -> SingleExcitationAmplitudes:
    """Exchange dynamics at zero detuning, exact for the excitation-conserving model.

    The excited component precesses at the collective rate sqrt(g1^2 + g2^2):

        a_e0g = beta (g1^2 cos(Omega t) + g2^2) / Omega^2
        a_g1g = -i beta g1 sin(Omega t) / Omega
        a_g0e = beta g1 g2 (cos(Omega t) - 1) / Omega^2

    with Omega = sqrt(g1^2 + g2^2); the ground component alpha is dark.  With
    both couplings zero the initial state is returned unchanged.
    """
    _check_weights(alpha, beta)
    rabi2 = g1 * g1 + g2 * g2
    if rabi2 == 0.0:
        return SingleExcitationAmplitudes(beta, 0.0, 0.0, alpha)
    rabi = math.sqrt(rabi2)
    cos_t = math.cos(rabi * t)
    return SingleExcitationAmplitudes(
        a_e0g=beta * (g1 * g1 * cos_t + g2 * g2) / rabi2,
        a_g1g=-1j * beta * g1 * math.sin(rabi * t) / rabi,
        a_g0e=beta * g1 * g2 * (cos_t - 1.0) / rabi2,
        a_g0g=alpha,
    )


def dispersive_state(
    t: float, g1: float, g2: float, delta: float, alpha: complex = 0.0, beta: complex = 1.0
) -> SingleExcitationAmplitudes:
    """Far-detuned exchange with the cavity eliminated (virtual occupation only).

    Valid when |delta| >> g (not enforced); the cavity amplitude is
    identically zero and the qubit pair precesses with the phase factor
    exp(-i t (g1^2 + g2^2) / delta).  For g1 = g2 = g this phase rate is
    2 g^2 / delta, the convention consistent with the equal-coupling transfer
    time pi delta / (2 g^2); effective-Hamiltonian forms written with
    g_i g_j / (2 delta) differ from it by a factor of two in the exchange
    term and are not used here.
    """
    _check_weights(alpha, beta)
    if delta == 0.0:
        raise ValueError("dispersive closed form requires a nonzero detuning")
    rabi2 = g1 * g1 + g2 * g2
    if rabi2 == 0.0:
        return SingleExcitationAmplitudes(beta, 0.0, 0.0, alpha)
    phase = np.exp(-1j * t * rabi2 / delta)
    return SingleExcitationAmplitudes(
        a_e0g=beta * (1.0 + (g2 * g2 / rabi2) * (phase - 1.0)),
        a_g1g=0.0,
        a_g0e=beta * (g1 * g2 / rabi2) * (phase - 1.0),
        a_g0g=alpha,
    )


def transfer_time_resonant(g1: float, g2: float) -> float:
    """First complete-transfer time at zero detuning, pi / sqrt(g1^2 + g2^2)."""
    rabi2 = g1 * g1 + g2 * g2
    if rabi2 <= 0.0:
        raise ValueError("at least one coupling must be nonzero")
    return math.pi / math.sqrt(rabi2)


def transfer_time_dispersive_raw(g: float, delta: float) -> float:
    """Signed dispersive transfer time pi delta / (2 g^2) for equal couplings."""
    if delta == 0.0:
        raise ValueError("dispersive transfer time requires a nonzero detuning")
    if g == 0.0:
        raise ValueError("dispersive transfer time requires a nonzero coupling")
    return math.pi * delta / (2.0 * g * g)


def transfer_time_dispersive(g: float, delta: float) -> float:
    """Magnitude of the dispersive transfer time (sign available via _raw)."""
    return abs(transfer_time_dispersive_raw(g, delta))


def transfer_time_nonrwa_raw(g: float, delta: float, omega1: float) -> float:
    """Signed first-transfer time with the counter-rotating correction.

        t = pi / (g^2 (2/delta - 2/(2 omega1 - delta)))

    The correction term breaks the +delta / -delta symmetry of the plain
    dispersive result.
    """
    if delta == 0.0:
        raise ValueError("nonzero detuning required")
    if 2.0 * omega1 - delta == 0.0:
        raise ValueError("pole at 2 omega1 = delta")
    denom = g * g * (2.0 / delta - 2.0 / (2.0 * omega1 - delta))
    if denom == 0.0:
        raise ValueError("degenerate parameters: vanishing effective exchange rate")
    return math.pi / denom


def transfer_time_nonrwa(g: float, delta: float, omega1: float) -> float:
    """Magnitude of the counter-rotating-corrected transfer time."""
    return abs(transfer_time_nonrwa_raw(g, delta, omega1))


def effective_coupling_J(
    g1: float, g2: float, delta1: float, delta2: float, omega1: float, omega2: float
) -> float:
    """Qubit-qubit exchange rate with the counter-rotating correction.

        J = g1 g2 (1/d1 + 1/d2 - 1/(2 w1 - d1) - 1/(2 w2 - d2))

    The subtracted terms vanish as the emitter frequencies grow, recovering
    the excitation-conserving limit 2 g^2 / delta for symmetric detunings.
    """
    for d, w in ((delta1, omega1), (delta2, omega2)):
        if d == 0.0:
            raise ValueError("detunings must be nonzero")
        if 2.0 * w - d == 0.0:
            raise ValueError("pole at 2 omega = delta")
    return g1 * g2 * (
        1.0 / delta1 + 1.0 / delta2 - 1.0 / (2.0 * omega1 - delta1) - 1.0 / (2.0 * omega2 - delta2)
    )


def max_p2(g1: float, g2: float) -> float:
    """Peak excited-state occupation of emitter 2, (2 g1 g2 / (g1^2 + g2^2))^2.

    The oscillatory factor (cos - 1) in the transferred amplitude reaches -2
    at the cosine minimum, so the physical maximum carries the factor
    2 g1 g2 / (g1^2 + g2^2) squared; evaluating the same expression at the
    cosine zero instead (factor -1) gives the half-amplitude value, which is
    not the maximum.  Equals 1 exactly when g1 = g2.
    """
    rabi2 = g1 * g1 + g2 * g2
    if rabi2 <= 0.0:
        raise ValueError("at least one coupling must be nonzero")
    return (2.0 * g1 * g2 / rabi2) ** 2


def rabi_frequency(g: float, delta: float) -> float:
    """Generalised oscillation rate sqrt(g^2 + delta^2) of one emitter."""
    return math.hypot(g, delta)


def trotter_error_bound(
    g1: float, g2: float, delta1: float, delta2: float, total_time: float, dt: float
) -> float:
    """Order-of-magnitude accumulated step error (g1|d1| + g2|d2| + g1 g2) T dt.

    The prefactor is fixed at 1 by convention; validation against the dense
    oracle allows a x5 slack on top of it.
    """
    return (g1 * abs(delta1) + g2 * abs(delta2) + g1 * g2) * total_time * dt


def exact_evolve(h_matrix: np.ndarray, psi0: np.ndarray, t: float) -> np.ndarray:
    """Evolve by e^(-i H t) through the eigendecomposition of a Hermitian H.

    The brute-force oracle for every simulator comparison; dimension capped
    at 2**12.
    """
    h_matrix = np.asarray(h_matrix, dtype=complex)
    if h_matrix.ndim != 2 or h_matrix.shape[0] != h_matrix.shape[1]:
        raise ValueError("Hamiltonian matrix must be square")
    if h_matrix.shape[0] > 2**12:
        raise ValueError("dense oracle limited to dimension 4096")
    if np.abs(h_matrix - h_matrix.conj().T).max() > 1e-10:
        raise ValueError("Hamiltonian matrix is not Hermitian")
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-10:
        raise ValueError("initial state must be normalised")
    eigvals, eigvecs = np.linalg.eigh(h_matrix)
    return eigvecs @ (np.exp(-1j * eigvals * t) * (eigvecs.conj().T @ psi0))


def single_excitation_matrix(g1: float, g2: float, delta1: float = 0.0, delta2: float = 0.0) -> np.ndarray:
    """3x3 block on {|e_1 0 g_2>, |g_1 1 g_2>, |g_1 0 e_2>}, energies relative to |g 1 g>."""
    return np.array(
        [[delta1, g1, 0.0], [g1, 0.0, g2], [0.0, g2, delta2]], dtype=complex
    )
