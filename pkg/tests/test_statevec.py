"""Initial states, mixers, phase separation, expectation, and sampling."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qroutelab.encoding import (
    BlockLayout,
    bits_of_index,
    build_tsp_qubo,
    energy_table,
    index_of_bits,
    string_of_bits,
)
from qroutelab.instances import generate_instance
from qroutelab.statevec import (
    RelaxedBits,
    apply_diagonal_phase,
    apply_ws_mixer,
    apply_x_mixer,
    apply_xy_pair,
    apply_xy_ring,
    clamped_thetas,
    expectation,
    init_biased_onehot,
    init_minus_all,
    init_w_blocks,
    init_ws_product,
    onehot_subspace_indices,
    relax_bits,
    sample,
    ws_mixer_matrix,
)

RTOL = 1e-12


def random_state(n_qubits: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    amp = rng.standard_normal(1 << n_qubits) + 1j * rng.standard_normal(1 << n_qubits)
    return amp / np.linalg.norm(amp)


def random_onehot_state(layout: BlockLayout, seed: int) -> np.ndarray:
    """Random complex state supported on the one-hot-per-block subspace."""
    rng = np.random.default_rng(seed)
    idx = onehot_subspace_indices(layout)
    state = np.zeros(1 << layout.n_vars, dtype=complex)
    amp = rng.standard_normal(idx.size) + 1j * rng.standard_normal(idx.size)
    state[idx] = amp / np.linalg.norm(amp)
    return state


def onehot_mass(state: np.ndarray, layout: BlockLayout) -> float:
    idx = onehot_subspace_indices(layout)
    return float(np.sum(np.abs(state[idx]) ** 2))


class TestRelaxBits:
    def test_four_bit_example(self):
        relaxed = relax_bits([1, 0, 1, 1], 0.25)
        assert np.allclose(relaxed.probs, [0.75, 0.25, 0.75, 0.75])
        assert relaxed.epsilon == 0.25

    def test_epsilon_zero_returns_bits(self):
        relaxed = relax_bits([1, 0, 0, 1], 0.0)
        assert np.allclose(relaxed.probs, [1.0, 0.0, 0.0, 1.0])

    def test_epsilon_half_is_uninformative(self):
        relaxed = relax_bits([1, 0, 1], 0.5)
        assert np.allclose(relaxed.probs, 0.5)

    @pytest.mark.parametrize("epsilon", [-0.01, 0.51, 1.0])
    def test_epsilon_out_of_range(self, epsilon):
        with pytest.raises(ValueError):
            relax_bits([0, 1], epsilon)


class TestClampedThetas:
    def test_theta_from_quarter_probability(self):
        relaxed = RelaxedBits(probs=np.array([0.25]), epsilon=0.25)
        assert np.allclose(clamped_thetas(relaxed), np.pi / 3)

    def test_extreme_probs_clamped_to_epsilon(self):
        # A raw 0/1 probability is pulled back to the regularized angle.
        relaxed = RelaxedBits(probs=np.array([0.0, 1.0]), epsilon=0.25)
        thetas = clamped_thetas(relaxed)
        assert np.allclose(thetas[0], np.pi / 3)
        assert np.allclose(thetas[1], 2 * np.arcsin(np.sqrt(0.75)))

    def test_half_probability_gives_right_angle(self):
        relaxed = RelaxedBits(probs=np.array([0.5]), epsilon=0.25)
        assert np.allclose(clamped_thetas(relaxed), np.pi / 2)


class TestInitMinusAll:
    def test_single_qubit(self):
        state = init_minus_all(1)
        assert np.allclose(state, [1 / np.sqrt(2), -1 / np.sqrt(2)])

    def test_two_qubit_sign_pattern(self):
        state = init_minus_all(2)
        assert np.allclose(state, np.array([1, -1, -1, 1]) / 2)

    @pytest.mark.parametrize("n", [1, 3, 8, 16])
    def test_normalized(self, n):
        state = init_minus_all(n)
        assert state.shape == (1 << n,)
        assert np.isclose(np.linalg.norm(state), 1.0)

    def test_size_guard(self):
        with pytest.raises(ValueError):
            init_minus_all(25)


class TestInitWBlocks:
    def test_three_wide_blocks(self):
        # m = 3: each block is (|100> + |010> + |001>)/sqrt(3); the product
        # leaves 27 nonzero amplitudes of 3**(-3/2) each.
        layout = BlockLayout(4)
        state = init_w_blocks(layout)
        nonzero = np.flatnonzero(np.abs(state) > 1e-15)
        assert len(nonzero) == 27
        assert np.allclose(state[nonzero], 3 ** -1.5)
        # single-block marginal: qubits 0..2 carry amplitude 1/sqrt(3) each
        one_city_states = [index_of_bits([1, 0, 0] + [1, 0, 0] * 2)]
        assert np.isclose(state[one_city_states[0]], 3 ** -1.5)

    def test_five_city_amplitudes(self):
        layout = BlockLayout(5)
        state = init_w_blocks(layout)
        nonzero = np.flatnonzero(np.abs(state) > 1e-15)
        assert len(nonzero) == 256
        assert np.allclose(state[nonzero], 1 / 16)

    def test_no_mass_outside_subspace(self):
        layout = BlockLayout(4)
        state = init_w_blocks(layout)
        assert np.isclose(onehot_mass(state, layout), 1.0, atol=1e-12)

    def test_one_bit_per_block_support(self):
        layout = BlockLayout(4)
        state = init_w_blocks(layout)
        for k in np.flatnonzero(np.abs(state) > 1e-15):
            bits = bits_of_index(int(k), layout.n_vars)
            for t in range(1, layout.m + 1):
                assert sum(bits[q] for q in layout.block(t)) == 1


class TestInitWsProduct:
    def test_quarter_probability_amplitudes(self):
        relaxed = RelaxedBits(probs=np.array([0.25]), epsilon=0.25)
        state = init_ws_product(relaxed)
        assert np.allclose(state, [np.sqrt(3) / 2, 0.5])

    def test_clamped_zero_probability(self):
        relaxed = RelaxedBits(probs=np.array([0.0]), epsilon=0.25)
        state = init_ws_product(relaxed)
        assert np.allclose(state, [np.cos(np.pi / 6), np.sin(np.pi / 6)])

    def test_half_probability_is_plus_like(self):
        relaxed = RelaxedBits(probs=np.array([0.5]), epsilon=0.25)
        state = init_ws_product(relaxed)
        assert np.allclose(state, [1 / np.sqrt(2), 1 / np.sqrt(2)])

    def test_product_structure_and_qubit_order(self):
        # qubit 0 biased up, qubit 1 biased down; qubit 0 is the LSB
        relaxed = RelaxedBits(probs=np.array([0.75, 0.25]), epsilon=0.25)
        state = init_ws_product(relaxed)
        a0 = np.array([np.cos(np.pi / 3), np.sin(np.pi / 3)])  # theta = 2pi/3
        a1 = np.array([np.cos(np.pi / 6), np.sin(np.pi / 6)])  # theta = pi/3
        expected = np.array(
            [a1[0] * a0[0], a1[0] * a0[1], a1[1] * a0[0], a1[1] * a0[1]]
        )
        assert np.allclose(state, expected)


class TestInitBiasedOnehot:
    def test_single_block_amplitudes(self):
        layout = BlockLayout(5)
        probs = np.array([0.75, 0.25, 0.25, 0.25] * 4)
        state = init_biased_onehot(layout, RelaxedBits(probs=probs, epsilon=0.25))
        # per block: Z = 1.5, amplitudes sqrt(p/Z)
        one_hot_first = index_of_bits([1, 0, 0, 0] * 4)
        expected_first = np.sqrt(0.5) ** 4
        assert np.isclose(state[one_hot_first], expected_first)
        mixed = index_of_bits([0, 1, 0, 0] + [1, 0, 0, 0] * 3)
        assert np.isclose(state[mixed], np.sqrt(1 / 6) * np.sqrt(0.5) ** 3)

    def test_uniform_probs_reduce_to_w_blocks(self):
        layout = BlockLayout(5)
        relaxed = relax_bits([0] * 16, 0.25)
        assert np.allclose(init_biased_onehot(layout, relaxed), init_w_blocks(layout))

    def test_sharp_bits_approach_basis_state(self):
        layout = BlockLayout(4)
        warm = [1, 0, 0, 0, 1, 0, 0, 0, 1]
        relaxed = relax_bits(warm, 1e-12)
        state = init_biased_onehot(layout, relaxed)
        assert np.isclose(abs(state[index_of_bits(warm)]), 1.0, atol=1e-5)

    def test_degenerate_block_rejected(self):
        layout = BlockLayout(4)
        relaxed = RelaxedBits(probs=np.zeros(9), epsilon=0.0)
        with pytest.raises(ValueError):
            init_biased_onehot(layout, relaxed)

    def test_normalized(self):
        layout = BlockLayout(5)
        relaxed = relax_bits(np.arange(16) % 2, 0.25)
        state = init_biased_onehot(layout, relaxed)
        assert np.isclose(np.linalg.norm(state), 1.0)


class TestDiagonalPhase:
    def test_gamma_zero_is_identity(self):
        state = random_state(4, 7)
        energies = np.arange(16.0)
        assert np.allclose(apply_diagonal_phase(state, energies, 0.0), state)

    def test_basis_state_probabilities_unchanged(self):
        state = np.zeros(8, dtype=complex)
        state[5] = 1.0
        out = apply_diagonal_phase(state, np.arange(8.0), 1.3)
        assert np.allclose(np.abs(out) ** 2, np.abs(state) ** 2)

    def test_phase_differences_follow_energy_gaps(self):
        state = np.full(2, 1 / np.sqrt(2), dtype=complex)
        energies = np.array([1.0, 3.5])
        out = apply_diagonal_phase(state, energies, 0.7)
        # relative phase between the two amplitudes is exp(-i*gamma*(E1-E0))
        ratio = (out[1] / out[0]) / (state[1] / state[0])
        assert np.isclose(ratio, np.exp(-1j * 0.7 * 2.5))

    def test_norm_preserved_over_many_applications(self):
        rng = np.random.default_rng(3)
        state = random_state(6, 11)
        energies = rng.uniform(0, 40, 64)
        for _ in range(100):
            state = apply_diagonal_phase(state, energies, rng.uniform(0, 2 * np.pi))
        assert np.isclose(np.linalg.norm(state), 1.0, atol=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            apply_diagonal_phase(random_state(3, 0), np.zeros(7), 0.1)


class TestXMixer:
    def test_beta_zero_is_identity(self):
        state = random_state(5, 13)
        assert np.allclose(apply_x_mixer(state, 0.0), state)

    def test_full_flip_at_beta_pi_over_two(self):
        state = np.zeros(2, dtype=complex)
        state[0] = 1.0
        out = apply_x_mixer(state, np.pi / 2)
        # exp(-i (pi/2) X)|0> = -i|1>
        assert np.allclose(out, [0, -1j])

    def test_minus_state_is_eigenstate(self):
        state = init_minus_all(4)
        for beta in (0.3, 1.1, 2.9):
            out = apply_x_mixer(state, beta)
            assert np.allclose(np.abs(out) ** 2, np.abs(state) ** 2, atol=1e-12)

    def test_inverse_composition(self):
        state = random_state(6, 17)
        out = apply_x_mixer(apply_x_mixer(state, 0.77), -0.77)
        assert np.allclose(out, state, atol=1e-12)

    def test_single_qubit_rotation_matrix(self):
        # against the dense 2x2: cos(b) I - i sin(b) X
        beta = 0.41
        state = np.array([0.6, 0.8j])
        out = apply_x_mixer(state, beta)
        u = np.array([[np.cos(beta), -1j * np.sin(beta)], [-1j * np.sin(beta), np.cos(beta)]])
        assert np.allclose(out, u @ state)


class TestXyPairGate:
    def test_quarter_pi_rotation_on_01(self):
        # |01> in LSB convention: qubit 0 set -> index 1
        state = np.zeros(4, dtype=complex)
        state[1] = 1.0
        out = apply_xy_pair(state, 0, 1, np.pi / 8)
        expected = np.zeros(4, dtype=complex)
        expected[1] = np.sqrt(2) / 2
        expected[2] = -1j * np.sqrt(2) / 2
        assert np.allclose(out, expected)

    def test_00_and_11_fixed(self):
        state = np.zeros(4, dtype=complex)
        state[0] = 0.6
        state[3] = 0.8
        out = apply_xy_pair(state, 0, 1, 1.234)
        assert np.allclose(out, state)

    def test_full_swap_at_quarter_pi(self):
        state = np.zeros(4, dtype=complex)
        state[1] = 1.0
        out = apply_xy_pair(state, 0, 1, np.pi / 4)
        assert np.isclose(out[2], -1j)
        assert abs(out[1]) < 1e-12

    def test_against_dense_exponential(self):
        scipy_linalg = pytest.importorskip("scipy.linalg")
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        y = np.array([[0, -1j], [1j, 0]])
        xx_yy = np.kron(x, x) + np.kron(y, y)  # acts on (qubit1, qubit0)
        beta = 0.37
        u = scipy_linalg.expm(-1j * beta * xx_yy)
        state = random_state(2, 23)
        assert np.allclose(apply_xy_pair(state, 0, 1, beta), u @ state, atol=1e-12)


class TestXyRing:
    def test_beta_zero_is_identity(self):
        layout = BlockLayout(5)
        state = random_onehot_state(layout, 5)
        assert np.allclose(apply_xy_ring(state, layout, 0.0), state)

    def test_subspace_leakage_bounded(self):
        layout = BlockLayout(5)
        rng = np.random.default_rng(29)
        state = random_onehot_state(layout, 31)
        energies = rng.uniform(0, 30, 1 << layout.n_vars)
        for _ in range(20):
            state = apply_diagonal_phase(state, energies, rng.uniform(0, 2 * np.pi))
            state = apply_xy_ring(state, layout, rng.uniform(0, np.pi))
        assert 1.0 - onehot_mass(state, layout) <= 1e-12
        assert np.isclose(np.linalg.norm(state), 1.0, atol=1e-12)

    def test_w_state_mixing_spreads_within_block(self):
        # Single excitation hops around the ring but never leaves the block.
        layout = BlockLayout(4)
        state = np.zeros(1 << 9, dtype=complex)
        state[index_of_bits([1, 0, 0, 0, 1, 0, 0, 0, 1])] = 1.0
        out = apply_xy_ring(state, layout, 0.3)
        assert np.isclose(np.linalg.norm(out), 1.0, atol=1e-12)
        for k in np.flatnonzero(np.abs(out) > 1e-15):
            bits = bits_of_index(int(k), 9)
            for t in (1, 2, 3):
                assert sum(bits[q] for q in layout.block(t)) == 1

    def test_two_city_ring_applies_pair_twice(self):
        # m = 1 has a single qubit per block: the ring has no pairs at all.
        layout = BlockLayout(2)
        state = np.array([0.6, 0.8], dtype=complex)
        assert np.allclose(apply_xy_ring(state, layout, 0.9), state)

    def test_three_city_ring_duplicated_pair(self):
        # m = 2: the ring (1,2),(2,1) applies the same gate twice -> angle doubles.
        layout = BlockLayout(3)
        state = random_onehot_state(layout, 37)
        once = apply_xy_ring(state, layout, 0.2)
        # build the expected state by applying each block's pair gate twice
        expected = state.copy()
        for t in (1, 2):
            block = list(layout.block(t))
            expected = apply_xy_pair(expected, block[0], block[1], 0.2)
            expected = apply_xy_pair(expected, block[0], block[1], 0.2)
        assert np.allclose(once, expected, atol=1e-12)


class TestWsMixer:
    def test_beta_zero_reduces_to_ry_theta(self):
        thetas = np.array([0.7])
        state = np.array([1.0, 0.0], dtype=complex)
        out = apply_ws_mixer(state, thetas, 0.0)
        # net R_Y(theta)|0> up to global phase
        expected = np.array([np.cos(0.35), np.sin(0.35)])
        phase = out[0] / expected[0]
        assert np.isclose(abs(phase), 1.0)
        assert np.allclose(out, phase * expected, atol=1e-12)

    def test_mixer_matrix_diagonal_entry(self):
        h = ws_mixer_matrix(0.75)
        assert np.isclose(h[0, 0], 0.5)
        assert np.isclose(h[1, 1], -0.5)
        assert np.isclose(h[0, 1], -2 * np.sqrt(0.75 * 0.25))

    @pytest.mark.parametrize("prob", [0.1, 0.25, 0.5, 0.75, 0.9])
    def test_warm_state_is_minus_one_eigenstate(self, prob):
        theta = 2 * np.arcsin(np.sqrt(prob))
        phi = np.array([np.cos(theta / 2), np.sin(theta / 2)])
        assert np.allclose(ws_mixer_matrix(prob) @ phi, -phi, atol=1e-9)

    def test_against_dense_rotation_sequence(self):
        # The gate is the literal rotation product RY(-theta) RZ(-2b) RY(2theta)
        # (first-listed applied last), not the exponential of the mixer matrix.
        theta, beta = 0.7, 0.83

        def ry(a):
            return np.array(
                [[np.cos(a / 2), -np.sin(a / 2)], [np.sin(a / 2), np.cos(a / 2)]],
                dtype=complex,
            )

        rz = np.diag([np.exp(1j * beta), np.exp(-1j * beta)])  # RZ(-2*beta)
        u = ry(-theta) @ rz @ ry(2 * theta)
        state = np.array([0.48j, 0.6 + 0.64j])
        state = state / np.linalg.norm(state)
        assert np.allclose(apply_ws_mixer(state, np.array([theta]), beta), u @ state)

    def test_two_qubit_per_qubit_application(self):
        # Each qubit gets its own angle; the composite is the kron of the 2x2s.
        thetas = np.array([0.7, 1.9])
        beta = 0.42

        def ry(a):
            return np.array(
                [[np.cos(a / 2), -np.sin(a / 2)], [np.sin(a / 2), np.cos(a / 2)]],
                dtype=complex,
            )

        rz = np.diag([np.exp(1j * beta), np.exp(-1j * beta)])
        u0 = ry(-thetas[0]) @ rz @ ry(2 * thetas[0])
        u1 = ry(-thetas[1]) @ rz @ ry(2 * thetas[1])
        state = random_state(2, 61)
        # qubit 0 is the least-significant axis
        expected = np.kron(u1, u0) @ state
        assert np.allclose(apply_ws_mixer(state, thetas, beta), expected)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            apply_ws_mixer(random_state(3, 41), np.zeros(2), 0.1)


class TestExpectation:
    def test_basis_state_returns_its_energy(self):
        state = np.zeros(8, dtype=complex)
        state[3] = 1.0
        assert expectation(state, np.arange(8.0) * 2) == pytest.approx(6.0)

    def test_equal_superposition_averages(self):
        state = np.zeros(4, dtype=complex)
        state[0] = state[3] = 1 / np.sqrt(2)
        assert expectation(state, np.array([1.0, 9.0, 9.0, 5.0])) == pytest.approx(3.0)

    def test_matches_dense_quadratic_form(self):
        state = random_state(6, 43)
        energies = np.random.default_rng(44).uniform(-5, 5, 64)
        dense = np.real(np.conj(state) @ (energies * state))
        assert expectation(state, energies) == pytest.approx(dense, rel=1e-12)

    def test_tsp_energy_expectation_on_w_state(self):
        # W blocks put uniform mass on the one-hot subspace; compare against
        # a direct average over that subspace.
        inst = generate_instance(50, 4)
        qubo = build_tsp_qubo(inst)
        table = energy_table(qubo)
        layout = qubo.layout
        state = init_w_blocks(layout)
        idx = onehot_subspace_indices(layout)
        assert expectation(state, table) == pytest.approx(float(np.mean(table[idx])))


class TestSample:
    def test_basis_state_all_shots_on_one_string(self):
        state = np.zeros(8, dtype=complex)
        state[5] = 1.0  # bits 101 -> qubits 0 and 2 set -> "101" serialized
        counts = sample(state, 1000, seed=1)
        assert counts == {"101": 1000}

    def test_counts_sum_to_shots(self):
        state = random_state(4, 47)
        counts = sample(state, 1000, seed=2)
        assert sum(counts.values()) == 1000
        assert all(len(s) == 4 and set(s) <= {"0", "1"} for s in counts)

    def test_deterministic_given_seed(self):
        state = random_state(5, 53)
        assert sample(state, 500, seed=9) == sample(state, 500, seed=9)
        assert sample(state, 500, seed=9) != sample(state, 500, seed=10)

    def test_plus_state_within_three_sigma(self):
        state = np.full(2, 1 / np.sqrt(2), dtype=complex)
        shots = 100_000
        counts = sample(state, shots, seed=3)
        sigma = np.sqrt(shots * 0.25)
        assert abs(counts["0"] - shots / 2) <= 3 * sigma
        assert abs(counts["1"] - shots / 2) <= 3 * sigma

    def test_string_convention_matches_serializer(self):
        # qubit 0 is the leftmost character
        state = np.zeros(4, dtype=complex)
        state[1] = 1.0  # only qubit 0 set
        assert sample(state, 10, seed=4) == {"10": 10}
        assert string_of_bits(bits_of_index(1, 2)) == "10"


class TestNormPreservation:
    @given(st.integers(0, 2**32 - 1), st.floats(0.0, 2 * np.pi))
    @settings(max_examples=25, deadline=None)
    def test_all_operators_preserve_norm(self, seed, angle):
        layout = BlockLayout(4)
        state = random_state(9, seed % 1000)
        energies = np.random.default_rng(seed % 97).uniform(0, 20, 512)
        thetas = np.random.default_rng(seed % 89).uniform(0, np.pi, 9)
        for out in (
            apply_diagonal_phase(state, energies, angle),
            apply_x_mixer(state, angle),
            apply_xy_ring(state, layout, angle),
            apply_ws_mixer(state, thetas, angle),
        ):
            assert np.isclose(np.linalg.norm(out), 1.0, atol=1e-12)
