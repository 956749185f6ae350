"""Builder checks against an independent ladder-operator construction."""
import json

import numpy as np
import pytest

from tcsim import (
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

# independent quantum-optics operators in the (ground, excited) ordering used
# by the register: |0> = ground/vacuum, |1> = excited/one photon
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |g><e|
SIGMA_PLUS = SIGMA_MINUS.T.conj()
SIGMA_Z = np.diag([-1.0, 1.0]).astype(complex)  # |e><e| - |g><g|
A_TRUNC = np.array([[0, 1], [0, 0]], dtype=complex)  # one-photon truncation
I2 = np.eye(2, dtype=complex)


def kron3(a, b, c):
    return np.kron(a, np.kron(b, c))


def dense_two_level_cavity(params, rwa=False):
    """Brute-force ladder-operator Hamiltonian, cavity truncated at one photon."""
    w1, w2, wc = params.omega_1, params.omega_2, params.omega_c
    h = (w1 / 2) * kron3(SIGMA_Z, I2, I2) + (w2 / 2) * kron3(I2, I2, SIGMA_Z)
    h += wc * kron3(I2, A_TRUNC.conj().T @ A_TRUNC, I2)
    for g, emb in (
        (params.g_1, lambda op_c, op_q: kron3(op_q, op_c, I2)),
        (params.g_2, lambda op_c, op_q: kron3(I2, op_c, op_q)),
    ):
        h += g * (emb(A_TRUNC.conj().T, SIGMA_MINUS) + emb(A_TRUNC, SIGMA_PLUS))
        if not rwa:
            h += g * (emb(A_TRUNC.conj().T, SIGMA_PLUS) + emb(A_TRUNC, SIGMA_MINUS))
    return h


def excitation_number(i, n=3):
    return bin(i).count("1") if n == 3 else None


def term_map(h):
    return {t.factors: t.coefficient for t in h.terms}


class TestSystemParams:
    def test_defaults(self):
        p = SystemParams()
        assert p.omega_c == 100.0 and p.g_1 == 1.0 and p.kappa == 0.0
        assert p.omega_1 == 100.0

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"omega_c": 0.0},
            {"omega_c": -1.0},
            {"g_1": -0.5},
            {"kappa": -1e-9},
            {"delta_1": -200.0},  # omega_1 <= 0
            {"delta_2": float("nan")},
            {"g_2": float("inf")},
        ],
    )
    def test_rejects_bad_parameters(self, kwargs):
        with pytest.raises(ValueError):
            SystemParams(**kwargs)


class TestFullHamiltonian:
    def test_term_coefficients_at_resonance(self):
        h = build_full_qubitized(SystemParams(omega_c=100.0))
        terms = term_map(h)
        assert terms[((0, "Z"),)] == -50.0
        assert terms[((2, "Z"),)] == -50.0
        assert terms[()] == 50.0
        assert terms[((1, "Z"),)] == -50.0
        assert terms[((0, "X"), (1, "X"))] == 1.0
        assert terms[((1, "X"), (2, "X"))] == 1.0
        assert len(h.terms) == 6

    def test_decoupled_limit_is_diagonal(self):
        h = build_full_qubitized(SystemParams(g_1=0.0, g_2=0.0))
        assert all(t.is_diagonal for t in h.terms)

    @pytest.mark.parametrize("delta1,delta2,g1,g2", [(0, 0, 1, 1), (2.5, -1.5, 0.7, 1.3)])
    def test_matches_ladder_operator_construction(self, delta1, delta2, g1, g2):
        p = SystemParams(delta_1=delta1, delta_2=delta2, g_1=g1, g_2=g2)
        built = build_full_qubitized(p).to_matrix()
        oracle = dense_two_level_cavity(p)
        np.testing.assert_allclose(
            np.linalg.eigvalsh(built), np.linalg.eigvalsh(oracle), atol=1e-12
        )
        np.testing.assert_allclose(built, oracle, atol=1e-12)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            build_full_qubitized(SystemParams(g_1=float("nan")))


class TestRwaHamiltonian:
    def test_interaction_coefficients(self):
        h = build_rwa_qubitized(SystemParams())
        terms = term_map(h)
        for factors in (
            ((0, "X"), (1, "X")), ((0, "Y"), (1, "Y")),
            ((1, "X"), (2, "X")), ((1, "Y"), (2, "Y")),
        ):
            assert terms[factors] == 0.5

    def test_matches_ladder_operator_construction(self):
        p = SystemParams(delta_1=1.0, delta_2=-2.0, g_1=0.8, g_2=1.1)
        np.testing.assert_allclose(
            build_rwa_qubitized(p).to_matrix(), dense_two_level_cavity(p, rwa=True), atol=1e-12
        )

    def test_counter_rotating_residue_changes_excitation_by_two(self):
        p = SystemParams(delta_1=0.3, delta_2=-0.7)
        residue = build_full_qubitized(p).to_matrix() - build_rwa_qubitized(p).to_matrix()
        for i in range(8):
            for j in range(8):
                if abs(residue[i, j]) > 1e-12:
                    assert abs(excitation_number(i) - excitation_number(j)) == 2

    def test_ground_state_is_eigenvector(self):
        h = build_rwa_qubitized(SystemParams()).to_matrix()
        ground = np.zeros(8)
        ground[0] = 1.0
        out = h @ ground
        assert abs(out[0]) > 0  # diagonal energy offset
        np.testing.assert_allclose(out - out[0] * ground, 0.0, atol=1e-12)


class TestCavityFrame:
    def test_t0_resonant_blocks(self):
        h = build_cavity_frame(SystemParams(), t=0.0)
        terms = term_map(h)
        # static (g/2)(XX+YY) combines with a full-strength cosine block;
        # the YY pieces cancel exactly and the term is dropped
        assert terms[((0, "X"), (1, "X"))] == pytest.approx(1.0)
        assert ((0, "Y"), (1, "Y")) not in terms
        assert ((0, "Z"),) not in terms  # zero detuning drops the Z terms

    def test_quarter_period_swaps_blocks(self):
        p = SystemParams()
        t = np.pi / (4 * p.omega_c)
        terms = term_map(build_cavity_frame(p, t))
        assert terms[((0, "X"), (1, "Y"))] == pytest.approx(0.5)
        assert terms[((0, "Y"), (1, "X"))] == pytest.approx(0.5)
        assert terms[((0, "X"), (1, "X"))] == pytest.approx(0.5, abs=1e-12)
        assert terms[((0, "Y"), (1, "Y"))] == pytest.approx(0.5, abs=1e-12)

    def test_counter_rotating_blocks_average_to_zero_over_period(self):
        p = SystemParams(delta_1=0.5, delta_2=-0.5)
        period = np.pi / p.omega_c  # 2 pi / (2 wc)
        samples = 64
        avg = sum(
            build_cavity_frame(p, k * period / samples).to_matrix() for k in range(samples)
        ) / samples
        static = PauliHamiltonian(3, LAYOUT_THREE_QUBIT)
        static.add(-p.delta_1 / 2, {0: "Z"})
        static.add(-p.delta_2 / 2, {2: "Z"})
        for g, q in ((p.g_1, 0), (p.g_2, 2)):
            static.add(g / 2, {1: "X", q: "X"})
            static.add(g / 2, {1: "Y", q: "Y"})
        np.testing.assert_allclose(avg, static.to_matrix(), atol=1e-12)

    def test_every_snapshot_is_hermitian(self):
        p = SystemParams(delta_1=1.0, delta_2=2.0)
        for t in (0.0, 0.0123, 0.5, 2.0):
            m = build_cavity_frame(p, t).to_matrix()
            assert np.abs(m - m.conj().T).max() < 1e-12


class TestFourLevel:
    def test_cavity_number_block_eigenvalues(self):
        wc = 7.0
        p = SystemParams(omega_c=wc, g_1=0.0, g_2=0.0)
        h = build_fourlevel_qubitized(p)
        diag = np.diag(h.to_matrix()).real
        # subtract the qubit Z energies to isolate wc * n
        idx = np.arange(16)
        q1 = (idx >> 3) & 1
        q2 = idx & 1
        qubit_part = -(p.omega_1 / 2) * (1 - 2 * q1) - (p.omega_2 / 2) * (1 - 2 * q2)
        cavity_part = diag - qubit_part
        n = 2 * ((idx >> 2) & 1) + ((idx >> 1) & 1)
        np.testing.assert_allclose(cavity_part, wc * n, atol=1e-12)

    def test_decoupled_limit_is_diagonal(self):
        h = build_fourlevel_qubitized(SystemParams(g_1=0.0, g_2=0.0))
        assert all(t.is_diagonal for t in h.terms)

    def test_single_photon_sector_matches_two_level_build(self):
        p = SystemParams(delta_1=0.3, delta_2=-0.7, g_1=1.2, g_2=0.8)
        h4 = build_fourlevel_qubitized(p).to_matrix()
        h3 = build_full_qubitized(p).to_matrix()
        # embed |q1, cav, q2> into |q1, 0, cav, q2>
        sel = [((i >> 2) & 1) * 8 + ((i >> 1) & 1) * 2 + (i & 1) for i in range(8)]
        np.testing.assert_allclose(h4[np.ix_(sel, sel)], h3, atol=1e-12)

    def test_interaction_weights(self):
        h = build_fourlevel_qubitized(SystemParams())
        terms = term_map(h)
        s3 = np.sqrt(3.0)
        assert terms[((0, "X"), (2, "X"))] == pytest.approx((1 + s3) / 2)
        assert terms[((0, "X"), (1, "Z"), (2, "X"))] == pytest.approx((1 - s3) / 2)
        assert terms[((0, "X"), (1, "X"), (2, "X"))] == pytest.approx(1 / np.sqrt(2))
        assert terms[((0, "X"), (1, "Y"), (2, "Y"))] == pytest.approx(1 / np.sqrt(2))


class TestSplitTrotter:
    def test_full_single_commuting_block(self):
        h = build_full_qubitized(SystemParams())
        h0, blocks = split_trotter(h)
        assert all(t.is_diagonal for t in h0.terms)
        assert len(blocks) == 1 and len(blocks[0].terms) == 2
        a, b = (PauliHamiltonian(3, h.layout, [t]).to_matrix() for t in blocks[0].terms)
        np.testing.assert_allclose(a @ b - b @ a, 0.0, atol=1e-12)

    def test_rwa_two_blocks_noncommuting_across(self):
        h0, blocks = split_trotter(build_rwa_qubitized(SystemParams()))
        assert [len(b.terms) for b in blocks] == [2, 2]
        m1, m2 = blocks[0].to_matrix(), blocks[1].to_matrix()
        assert np.abs(m1 @ m2 - m2 @ m1).max() > 0.1

    def test_zero_coupling_drops_block(self):
        h0, blocks = split_trotter(build_rwa_qubitized(SystemParams(g_2=0.0)))
        assert len(blocks) == 1

    @pytest.mark.parametrize("builder", [build_full_qubitized, build_rwa_qubitized, build_fourlevel_qubitized])
    def test_within_block_commutators_vanish(self, builder):
        h = builder(SystemParams(delta_1=0.4, delta_2=-1.1, g_1=0.9, g_2=1.4))
        _, blocks = split_trotter(h)
        for block in blocks:
            mats = [PauliHamiltonian(h.n_qubits, h.layout, [t]).to_matrix() for t in block.terms]
            for i in range(len(mats)):
                for j in range(i + 1, len(mats)):
                    comm = mats[i] @ mats[j] - mats[j] @ mats[i]
                    assert np.abs(comm).max() < 1e-12

    def test_fourlevel_splits_into_two_blocks(self):
        _, blocks = split_trotter(build_fourlevel_qubitized(SystemParams()))
        assert [len(b.terms) for b in blocks] == [4, 4]

    def test_rejects_unrecognised_terms(self):
        h = PauliHamiltonian(3, LAYOUT_THREE_QUBIT)
        h.add(1.0, {0: "X"})  # emitter drive without cavity partner
        with pytest.raises(ValueError):
            split_trotter(h)


class TestDenseExport:
    def test_single_z(self):
        h = PauliHamiltonian(1, ("qubit1",))
        h.add(1.0, {0: "Z"})
        np.testing.assert_allclose(h.to_matrix(), np.diag([1.0, -1.0]), atol=0)

    def test_single_excitation_block_structure(self):
        p = SystemParams(delta_1=0.5, delta_2=-0.25, g_1=0.9, g_2=1.7)
        m = build_full_qubitized(p).to_matrix()
        order = [4, 2, 1]  # |e 0 g>, |g 1 g>, |g 0 e>
        block = m[np.ix_(order, order)]
        assert block[0, 1] == pytest.approx(p.g_1)
        assert block[1, 2] == pytest.approx(p.g_2)
        assert block[0, 2] == pytest.approx(0.0)
        assert block[0, 0] - block[1, 1] == pytest.approx(p.delta_1)
        assert block[2, 2] - block[1, 1] == pytest.approx(p.delta_2)

    @pytest.mark.parametrize("builder", [build_full_qubitized, build_rwa_qubitized, build_fourlevel_qubitized])
    def test_hermitian(self, builder):
        m = builder(SystemParams(delta_1=1.1, delta_2=-0.6, g_1=1.3, g_2=0.4)).to_matrix()
        assert np.abs(m - m.conj().T).max() < 1e-12

    def test_dimension_guard(self):
        h = PauliHamiltonian(13, tuple(f"q{i}" for i in range(13)))
        with pytest.raises(ValueError):
            h.to_matrix()

    def test_swap_symmetry_under_parameter_exchange(self):
        p = SystemParams(delta_1=1.5, delta_2=-0.5, g_1=0.8, g_2=1.2)
        q = SystemParams(delta_1=-0.5, delta_2=1.5, g_1=1.2, g_2=0.8)
        perm = [int(f"{i:03b}"[::-1], 2) for i in range(8)]  # swap qubit1 <-> qubit2
        swapped = build_full_qubitized(p).to_matrix()[np.ix_(perm, perm)]
        np.testing.assert_allclose(swapped, build_full_qubitized(q).to_matrix(), atol=1e-12)


class TestTermValidation:
    def test_bad_label(self):
        with pytest.raises(ValueError):
            PauliTerm.make(1.0, {0: "Q"})

    def test_repeated_index(self):
        with pytest.raises(ValueError):
            PauliTerm(1.0, ((0, "X"), (0, "Y")))

    def test_index_outside_layout(self):
        h = PauliHamiltonian(2, ("qubit1", "cavity"))
        with pytest.raises(ValueError):
            h.add(1.0, {5: "X"})

    def test_identity_term_allowed(self):
        h = PauliHamiltonian(1, ("qubit1",))
        h.add(2.5, {})
        np.testing.assert_allclose(h.to_matrix(), 2.5 * np.eye(2))

    def test_non_finite_coefficient(self):
        with pytest.raises(ValueError):
            PauliTerm.make(float("inf"), {0: "X"})


def test_json_dump_schema():
    h = build_full_qubitized(SystemParams())
    data = json.loads(h.to_json())
    assert data["n_qubits"] == 3
    assert data["layout"] == ["qubit1", "cavity", "qubit2"]
    assert len(data["terms"]) == len(h.terms)
    for entry in data["terms"]:
        assert set(entry) == {"coeff", "factors"}
        assert all(lbl in ("X", "Y", "Z") for lbl in entry["factors"].values())
