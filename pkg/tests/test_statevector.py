import math

import numpy as np
import pytest

from qaoa_maxcut.graphs import Graph
from qaoa_maxcut.statevector import (
    StateVector,
    bitstring,
    bitstring_to_index,
    expected_cut,
    expected_zz_sum,
    zz_sum_diagonal,
)

K3 = Graph(3, ((0, 1), (0, 2), (1, 2)))
SQ2 = 1.0 / math.sqrt(2.0)


def random_state(n, seed):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    amps /= np.linalg.norm(amps)
    return StateVector(n, amps)


class TestConstruction:
    def test_plus_state_n1(self):
        assert np.allclose(StateVector.plus_state(1).amplitudes, [SQ2, SQ2])

    def test_plus_state_n2(self):
        assert np.allclose(StateVector.plus_state(2).amplitudes, [0.5] * 4)

    def test_plus_state_norm(self):
        assert abs(StateVector.plus_state(10).norm() - 1.0) < 1e-12

    def test_qubit_guard(self):
        with pytest.raises(ValueError):
            StateVector.plus_state(0)
        with pytest.raises(ValueError):
            StateVector.plus_state(25)

    def test_bitstring_round_trip(self):
        assert bitstring(5, 4) == "1010"  # qubit 0 first
        assert bitstring_to_index("1010") == 5


class TestHadamard:
    def test_on_zero(self):
        s = StateVector.computational_basis(1, 0)
        s.apply_hadamard(0)
        assert np.allclose(s.amplitudes, [SQ2, SQ2])

    def test_involution(self):
        s = random_state(4, 0)
        ref = s.amplitudes.copy()
        s.apply_hadamard(2)
        s.apply_hadamard(2)
        assert np.max(np.abs(s.amplitudes - ref)) < 1e-12

    def test_little_endian_placement(self):
        s = StateVector.computational_basis(2, 0)
        s.apply_hadamard(1)
        assert np.allclose(s.amplitudes, [SQ2, 0.0, SQ2, 0.0])

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            StateVector.plus_state(2).apply_hadamard(2)


class TestRx:
    def test_pi_is_x_up_to_phase(self):
        s = StateVector.computational_basis(1, 0)
        s.apply_rx(0, math.pi)
        assert np.allclose(s.amplitudes, [0.0, -1j])

    def test_zero_is_identity(self):
        s = random_state(3, 1)
        ref = s.amplitudes.copy()
        s.apply_rx(1, 0.0)
        assert np.max(np.abs(s.amplitudes - ref)) < 1e-12

    def test_inverse(self):
        s = random_state(3, 2)
        ref = s.amplitudes.copy()
        s.apply_rx(0, 0.7)
        s.apply_rx(0, -0.7)
        assert np.max(np.abs(s.amplitudes - ref)) < 1e-12


class TestRz:
    def test_on_zero_phase_only(self):
        s = StateVector.computational_basis(1, 0)
        s.apply_rz(0, 0.9)
        assert abs(s.amplitudes[0] - np.exp(-0.45j)) < 1e-12
        assert np.allclose(s.probabilities(), [1.0, 0.0])

    def test_two_pi_is_minus_identity(self):
        s = StateVector.plus_state(1)
        ref = s.amplitudes.copy()
        s.apply_rz(0, 2 * math.pi)
        assert np.max(np.abs(s.amplitudes + ref)) < 1e-12

    def test_diagonality(self):
        s = random_state(4, 3)
        probs = s.probabilities().copy()
        s.apply_rz(2, 0.7)
        assert np.max(np.abs(s.probabilities() - probs)) < 1e-14


class TestCnot:
    def test_truth_table_little_endian(self):
        s = StateVector.computational_basis(2, 1)  # q0=1, q1=0
        s.apply_cnot(0, 1)
        assert np.allclose(s.amplitudes, StateVector.computational_basis(2, 3).amplitudes)

    def test_control_zero_unchanged(self):
        s = StateVector.computational_basis(2, 0)
        s.apply_cnot(0, 1)
        assert np.allclose(s.amplitudes, StateVector.computational_basis(2, 0).amplitudes)

    def test_involution(self):
        s = random_state(3, 4)
        ref = s.amplitudes.copy()
        s.apply_cnot(2, 0)
        s.apply_cnot(2, 0)
        assert np.max(np.abs(s.amplitudes - ref)) < 1e-12

    def test_equal_indices_rejected(self):
        with pytest.raises(ValueError):
            StateVector.plus_state(2).apply_cnot(1, 1)


def aligned_deviation(a, b):
    """Max amplitude deviation after removing a global phase."""
    i = int(np.argmax(np.abs(b)))
    phase = a[i] / b[i]
    return np.max(np.abs(a - phase * b)), abs(abs(phase) - 1.0)


class TestZz:
    def test_zero_identity(self):
        s = random_state(3, 5)
        ref = s.amplitudes.copy()
        s.apply_zz(0, 2, 0.0)
        assert np.max(np.abs(s.amplitudes - ref)) < 1e-12

    def test_pi_global_phase(self):
        s = random_state(2, 6)
        ref = s.amplitudes.copy()
        s.apply_zz(0, 1, math.pi)
        assert np.max(np.abs(s.amplitudes + ref)) < 1e-12

    def test_decomposition_identity_many_states(self):
        # exp(-i*gamma*ZZ) == CNOT . RZ(2*gamma) . CNOT up to global phase
        gamma = 0.37
        worst = 0.0
        for seed in range(1000):
            s1 = random_state(3, seed)
            s2 = s1.copy()
            s1.apply_zz(0, 2, gamma)
            s2.apply_cnot(0, 2)
            s2.apply_rz(2, 2 * gamma)
            s2.apply_cnot(0, 2)
            dev, phase_dev = aligned_deviation(s1.amplitudes, s2.amplitudes)
            worst = max(worst, dev, phase_dev)
        assert worst < 1e-12

    def test_diagonality(self):
        s = random_state(4, 7)
        probs = s.probabilities().copy()
        s.apply_zz(1, 3, 0.7)
        assert np.max(np.abs(s.probabilities() - probs)) < 1e-14


class TestExpectations:
    def test_plus_state_k3_zero(self):
        assert abs(expected_zz_sum(StateVector.plus_state(3), K3)) < 1e-12

    def test_basis_000(self):
        assert expected_zz_sum(StateVector.computational_basis(3, 0), K3) == pytest.approx(3.0)

    def test_basis_001(self):
        # partition 001 cuts 2 of K3's edges: 2*(-1) + 1*(+1)
        assert expected_zz_sum(StateVector.computational_basis(3, 1), K3) == pytest.approx(-1.0)

    def test_expected_cut_plus_state(self):
        assert expected_cut(StateVector.plus_state(3), K3) == pytest.approx(1.5)

    def test_expected_cut_basis(self):
        assert expected_cut(StateVector.computational_basis(3, 1), K3) == pytest.approx(2.0)

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            expected_zz_sum(StateVector.plus_state(2), K3)

    def test_zz_diagonal_matches_definition(self):
        diag = zz_sum_diagonal(K3)
        for i in range(8):
            bits = [(i >> v) & 1 for v in range(3)]
            cut = sum(1 for u, v in K3.edges if bits[u] != bits[v])
            assert diag[i] == K3.n_edges - 2 * cut


class TestSampling:
    def test_basis_state_all_mass(self):
        s = StateVector.computational_basis(2, 2)
        counts = s.sample_bitstrings(100, seed=1)
        assert counts.counts == {"01": 100}  # qubit 0 first: index 2 -> "01"
        assert counts.total_shots == 100

    def test_plus_state_binomial(self):
        counts = StateVector.plus_state(1).sample_bitstrings(100_000, seed=2)
        sigma = math.sqrt(100_000 * 0.25)
        for key in ("0", "1"):
            assert abs(counts.counts.get(key, 0) - 50_000) < 3 * sigma

    def test_deterministic(self):
        s = StateVector.plus_state(3)
        assert s.sample_bitstrings(500, seed=9) == s.sample_bitstrings(500, seed=9)

    def test_zero_shots_rejected(self):
        with pytest.raises(ValueError):
            StateVector.plus_state(1).sample_bitstrings(0, seed=0)


def test_norm_preservation_random_circuit():
    rng = np.random.default_rng(13)
    s = StateVector.plus_state(8)
    for _ in range(100):
        kind = rng.integers(0, 4)
        if kind == 0:
            s.apply_hadamard(int(rng.integers(8)))
        elif kind == 1:
            s.apply_rx(int(rng.integers(8)), float(rng.uniform(0, 2 * math.pi)))
        elif kind == 2:
            q, r = rng.choice(8, size=2, replace=False)
            s.apply_zz(int(q), int(r), float(rng.uniform(0, 2 * math.pi)))
        else:
            q, r = rng.choice(8, size=2, replace=False)
            s.apply_cnot(int(q), int(r))
    assert abs(s.norm() - 1.0) < 1e-10
