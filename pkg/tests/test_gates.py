import math

import numpy as np
import pytest

from ketsim import (
    DimensionMismatch,
    states_equivalent,
    InvalidInput,
    RngStream,
    StateVector,
    TruthTable,
    apply,
    apply_gate_at,
    apply_oracle_at,
    basis_cloner,
    bell_pair,
    classical_toffoli,
    cnot,
    embed_single,
    embed_two,
    hadamard,
    identity,
    is_product_split,
    is_unitary,
    ket,
    nand_via_toffoli,
    oracle_from_truth_table,
    pauli_x,
    pauli_y,
    pauli_z,
    tensor,
    toffoli_unitary,
    u2_from_params,
    walsh_hadamard,
)
from ketsim.decompose import haar_random_unitary
from ketsim.errors import CapacityExceeded
from conftest import kron_chain, rand_state

SQ2 = math.sqrt(0.5)


def random_u2(rng):
    return u2_from_params(*(rng.uniform() * 2 * math.pi for _ in range(4)))


class TestGateConstants:
    def test_pauli_and_hadamard_entries(self):
        assert np.array_equal(pauli_x(), [[0, 1], [1, 0]])
        assert np.array_equal(pauli_y(), [[0, -1j], [1j, 0]])
        assert np.array_equal(pauli_z(), [[1, 0], [0, -1]])
        assert np.array_equal(hadamard(), np.array([[1, 1], [1, -1]]) * SQ2)
        assert np.allclose(hadamard(), np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-15)

    def test_actions_on_generic_qubit(self):
        rng = RngStream(1)
        s = rand_state(1, rng)
        a, b = s.amplitudes
        assert np.allclose(apply(pauli_x(), s).amplitudes, [b, a], atol=1e-15)
        assert np.allclose(apply(pauli_z(), s).amplitudes, [a, -b], atol=1e-15)
        # matrix action (-ib, ia); equals -i(-b|0> + a|1>) up to a global sign
        got = apply(pauli_y(), s)
        assert np.allclose(got.amplitudes, [-1j * b, 1j * a], atol=1e-15)
        assert states_equivalent(got, StateVector(-1j * np.array([-b, a])), tol=1e-12)

    def test_involutions_exact(self):
        eye = np.eye(2, dtype=complex)
        for gate in (pauli_x(), pauli_y(), pauli_z()):
            assert np.array_equal(gate @ gate, eye)
        # H has irrational entries; its square meets the identity at the
        # rounding floor, and the integer core squares exactly to 2I.
        core = np.array([[1, 1], [1, -1]])
        assert np.array_equal(core @ core, 2 * np.eye(2, dtype=int))
        h = hadamard()
        assert np.max(np.abs(h @ h - eye)) <= 4 * np.finfo(float).eps

    def test_all_pass_unitarity(self):
        for gate in (pauli_x(), pauli_y(), pauli_z(), hadamard(), cnot(), toffoli_unitary()):
            assert is_unitary(gate, 1e-9)


class TestU2:
    def test_zero_params_identity(self):
        assert np.array_equal(u2_from_params(0, 0, 0, 0), np.eye(2, dtype=complex))

    def test_plane_rotation(self):
        c = 0.8
        expected = [[math.cos(c), -math.sin(c)], [math.sin(c), math.cos(c)]]
        assert np.allclose(u2_from_params(0, 0, c, 0), expected, atol=1e-15)

    def test_random_unitary(self):
        rng = RngStream(2)
        for _ in range(100):
            assert is_unitary(random_u2(rng), 1e-9)

    def test_nonfinite_rejected(self):
        with pytest.raises(InvalidInput):
            u2_from_params(math.inf, 0, 0, 0)


class TestCnot:
    def test_truth_action(self):
        assert np.array_equal(apply(cnot(), ket([1, 0])).amplitudes, ket([1, 1]).amplitudes)
        assert np.array_equal(apply(cnot(), ket([0, 1])).amplitudes, ket([0, 1]).amplitudes)

    def test_amplitude_permutation(self):
        rng = RngStream(3)
        s = rand_state(2, rng)
        a, b, c, d = s.amplitudes
        assert np.array_equal(apply(cnot(), s).amplitudes, [a, b, d, c])


class TestToffoli:
    # full input-output table of the reversible gate
    TABLE = [
        ((0, 0, 0), (0, 0, 0)),
        ((0, 0, 1), (0, 0, 1)),
        ((0, 1, 0), (0, 1, 0)),
        ((0, 1, 1), (0, 1, 1)),
        ((1, 0, 0), (1, 0, 0)),
        ((1, 0, 1), (1, 0, 1)),
        ((1, 1, 0), (1, 1, 1)),
        ((1, 1, 1), (1, 1, 0)),
    ]

    @pytest.mark.parametrize("inp,out", TABLE)
    def test_classical_table(self, inp, out):
        assert classical_toffoli(*inp) == out

    def test_self_inverse(self):
        for inp, _ in self.TABLE:
            assert classical_toffoli(*classical_toffoli(*inp)) == inp

    def test_unitary_matches_table(self):
        t = toffoli_unitary()
        for inp, out in self.TABLE:
            assert np.array_equal(apply(t, ket(list(inp))).amplitudes, ket(list(out)).amplitudes)

    def test_unitary_self_inverse_exact(self):
        t = toffoli_unitary()
        assert np.array_equal(t @ t, np.eye(8, dtype=complex))

    def test_bad_bit_rejected(self):
        with pytest.raises(InvalidInput):
            classical_toffoli(2, 0, 0)


class TestNand:
    def test_known_values(self):
        assert nand_via_toffoli(1, 1) == 0
        assert nand_via_toffoli(0, 0) == 1

    def test_matches_not_and(self):
        for a in (0, 1):
            for b in (0, 1):
                assert nand_via_toffoli(a, b) == 1 - (a & b)


class TestBellPair:
    def test_amplitudes(self):
        assert np.allclose(bell_pair(0, 0).amplitudes, [SQ2, 0, 0, SQ2])
        assert np.allclose(bell_pair(0, 1).amplitudes, [0, SQ2, SQ2, 0])
        assert np.allclose(bell_pair(1, 0).amplitudes, [SQ2, 0, 0, -SQ2])
        assert np.allclose(bell_pair(1, 1).amplitudes, [0, SQ2, -SQ2, 0])

    def test_orthonormal_family(self):
        states = [bell_pair(i, j).amplitudes for i in (0, 1) for j in (0, 1)]
        gram = np.array([[np.vdot(u, v) for v in states] for u in states])
        assert np.allclose(gram, np.eye(4), atol=1e-15)

    def test_all_entangled(self):
        for i in (0, 1):
            for j in (0, 1):
                assert not is_product_split(bell_pair(i, j), 1)

    def test_bad_bits(self):
        with pytest.raises(InvalidInput):
            bell_pair(2, 0)


def _move_pair_front(i: int, j: int, n: int) -> np.ndarray:
    """Permutation matrix sending qubits (i, j) to the two front positions."""
    dim = 1 << n
    perm = np.zeros((dim, dim), dtype=complex)
    rest = [q for q in range(n) if q not in (i, j)]
    for b in range(dim):
        bits = [(b >> (n - 1 - q)) & 1 for q in range(n)]
        new_bits = [bits[i], bits[j]] + [bits[q] for q in rest]
        target = int("".join(map(str, new_bits)), 2)
        perm[target, b] = 1
    return perm


class TestEmbeddings:
    def test_single_n1_is_gate(self):
        assert np.array_equal(embed_single(pauli_x(), 0, 1), pauli_x())

    def test_single_low_qubit(self):
        got = apply(embed_single(pauli_x(), 1, 2), ket([0, 0]))
        assert np.array_equal(got.amplitudes, ket([0, 1]).amplitudes)

    def test_single_high_qubit(self):
        got = apply(embed_single(hadamard(), 0, 2), ket([0, 0]))
        expected = tensor(apply(hadamard(), ket([0])), ket([0]))
        assert np.allclose(got.amplitudes, expected.amplitudes, atol=1e-15)

    def test_single_matches_kron_oracle(self):
        rng = RngStream(4)
        for n in (2, 3):
            for i in range(n):
                g = random_u2(rng)
                expected = kron_chain(identity(1 << i), g, identity(1 << (n - 1 - i)))
                assert np.allclose(embed_single(g, i, n), expected, atol=1e-14)

    def test_disjoint_supports_commute(self):
        rng = RngStream(5)
        a = embed_single(random_u2(rng), 0, 3)
        b = embed_single(random_u2(rng), 2, 3)
        assert np.max(np.abs(a @ b - b @ a)) <= 1e-12

    def test_single_index_out_of_range(self):
        with pytest.raises(InvalidInput):
            embed_single(pauli_x(), 2, 2)

    def test_two_n2_is_gate(self):
        assert np.array_equal(embed_two(cnot(), 0, 1, 2), cnot())

    def test_two_control_low_target_high(self):
        got = apply(embed_two(cnot(), 0, 2, 3), ket([1, 0, 0]))
        assert np.array_equal(got.amplitudes, ket([1, 0, 1]).amplitudes)

    def test_two_reversed_order(self):
        got = apply(embed_two(cnot(), 2, 0, 3), ket([0, 0, 1]))
        assert np.array_equal(got.amplitudes, ket([1, 0, 1]).amplitudes)

    def test_two_cnot_matches_bit_logic(self):
        # permutation oracle: flip target bit wherever the control bit is set
        for n in (2, 3):
            for i in range(n):
                for j in range(n):
                    if i == j:
                        continue
                    got = embed_two(cnot(), i, j, n)
                    for b in range(1 << n):
                        control = (b >> (n - 1 - i)) & 1
                        expected = b ^ (control << (n - 1 - j))
                        column = np.zeros(1 << n)
                        column[expected] = 1
                        assert np.array_equal(got[:, b], column)

    def test_two_matches_permuted_kron_oracle(self):
        rng = RngStream(6)
        for n in (3, 4):
            for _ in range(5):
                i, j = rng.next_u64() % n, rng.next_u64() % n
                if i == j:
                    continue
                g = np.kron(random_u2(rng), random_u2(rng)) @ cnot()
                perm = _move_pair_front(i, j, n)
                expected = perm.T @ np.kron(g, identity(1 << (n - 2))) @ perm
                assert np.allclose(embed_two(g, i, j, n), expected, atol=1e-13)

    def test_two_same_qubit_rejected(self):
        with pytest.raises(InvalidInput):
            embed_two(cnot(), 1, 1, 3)


class TestApply:
    def test_identity(self):
        rng = RngStream(7)
        s = rand_state(2, rng)
        assert np.array_equal(apply(identity(4), s).amplitudes, s.amplitudes)

    def test_hadamard_on_zero(self):
        assert np.allclose(apply(hadamard(), ket([0])).amplitudes, [SQ2, SQ2])

    def test_double_not_is_identity(self):
        rng = RngStream(8)
        s = rand_state(1, rng)
        assert np.allclose(apply(pauli_x(), apply(pauli_x(), s)).amplitudes, s.amplitudes)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            apply(cnot(), ket([0]))


class TestApplyGateAt:
    def test_single_equals_apply(self):
        got = apply_gate_at(hadamard(), [0], ket([0]))
        assert np.allclose(got.amplitudes, [SQ2, SQ2])

    def test_cnot_pair(self):
        got = apply_gate_at(cnot(), [0, 1], ket([1, 0]))
        assert np.array_equal(got.amplitudes, ket([1, 1]).amplitudes)

    def test_matches_dense_embedding_oracle(self):
        rng = RngStream(9)
        for n in range(2, 6):
            for _ in range(8):
                s = rand_state(n, rng)
                g1 = random_u2(rng)
                i = int(rng.next_u64() % n)
                dense = apply(embed_single(g1, i, n), s)
                fast = apply_gate_at(g1, [i], s)
                assert np.max(np.abs(dense.amplitudes - fast.amplitudes)) <= 1e-12

                g2 = haar_random_unitary(4, rng)
                j = int(rng.next_u64() % n)
                k = int(rng.next_u64() % n)
                if j == k:
                    continue
                dense = apply(embed_two(g2, j, k, n), s)
                fast = apply_gate_at(g2, [j, k], s)
                assert np.max(np.abs(dense.amplitudes - fast.amplitudes)) <= 1e-12

    def test_duplicate_targets_rejected(self):
        with pytest.raises(InvalidInput):
            apply_gate_at(cnot(), [0, 0], ket([0, 0]))


class TestOracle:
    def test_constant_zero_is_identity(self):
        f = TruthTable(2, (0, 0, 0, 0))
        assert np.array_equal(oracle_from_truth_table(f), np.eye(8, dtype=complex))

    def test_identity_function_is_cnot(self):
        f = TruthTable(1, (0, 1))
        assert np.array_equal(oracle_from_truth_table(f), cnot())

    def test_maps_blank_output_to_function_value(self):
        rng = RngStream(10)
        for arity in (1, 2, 3):
            f = TruthTable(arity, tuple(int(rng.next_u64() % 2) for _ in range(1 << arity)))
            u = oracle_from_truth_table(f)
            for x in range(1 << arity):
                bits = [(x >> (arity - 1 - i)) & 1 for i in range(arity)]
                got = apply(u, ket(bits + [0]))
                assert np.array_equal(got.amplitudes, ket(bits + [f.outputs[x]]).amplitudes)

    def test_permutation_and_self_inverse(self):
        f = TruthTable(2, (1, 0, 0, 1))
        u = oracle_from_truth_table(f)
        assert set(np.unique(u.real)) <= {0.0, 1.0}
        assert np.array_equal(u @ u, np.eye(8, dtype=complex))
        assert np.array_equal(u.sum(axis=0), np.ones(8)) and np.array_equal(
            u.sum(axis=1), np.ones(8)
        )

    def test_kernel_matches_dense_oracle(self):
        rng = RngStream(11)
        for arity in (1, 2):
            f = TruthTable(arity, tuple(int(rng.next_u64() % 2) for _ in range(1 << arity)))
            s = rand_state(arity + 1, rng)
            dense = apply(oracle_from_truth_table(f), s)
            fast = apply_oracle_at(f, list(range(arity + 1)), s)
            assert np.max(np.abs(dense.amplitudes - fast.amplitudes)) <= 1e-15

    def test_kernel_on_permuted_targets(self):
        # bit-logic oracle: output-bit flip controlled by f of the input bits
        f = TruthTable(2, (0, 1, 1, 1))
        targets = [2, 0, 1]  # x1 = qubit 2, x2 = qubit 0, output = qubit 1
        for b in range(8):
            bits = [(b >> (2 - q)) & 1 for q in range(3)]
            x = (bits[2] << 1) | bits[0]
            expected = bits.copy()
            expected[1] ^= f.outputs[x]
            got = apply_oracle_at(f, targets, ket(bits))
            assert np.array_equal(got.amplitudes, ket(expected).amplitudes)

    def test_truth_table_validation(self):
        with pytest.raises(InvalidInput):
            TruthTable(2, (0, 1))
        with pytest.raises(InvalidInput):
            TruthTable(1, (0, 2))


class TestWalshHadamard:
    def test_n1(self):
        assert np.array_equal(walsh_hadamard(1), hadamard())

    def test_uniform_superposition(self):
        got = apply(walsh_hadamard(2), ket([0, 0]))
        assert np.allclose(got.amplitudes, [0.5, 0.5, 0.5, 0.5], atol=1e-15)

    def test_matches_kron_oracle(self):
        assert np.allclose(walsh_hadamard(3), kron_chain(*[hadamard()] * 3), atol=1e-15)

    def test_involution(self):
        for n in range(1, 5):
            w = walsh_hadamard(n)
            assert np.max(np.abs(w @ w - np.eye(1 << n))) <= 1e-12

    def test_dense_cap(self):
        with pytest.raises(CapacityExceeded):
            walsh_hadamard(11)


class TestBasisCloner:
    def test_copies_basis_states_n2(self):
        u = basis_cloner(2)
        blank = np.array([1, 0])
        for i, basis in enumerate((np.array([1, 0]), np.array([0, 1]))):
            out = u @ np.kron(basis, blank)
            assert np.array_equal(out, np.kron(basis, basis))

    def test_copies_basis_states_any_n(self):
        for n in (2, 3, 7):
            u = basis_cloner(n)
            blank = np.zeros(n)
            blank[0] = 1
            for i in range(n):
                basis = np.zeros(n)
                basis[i] = 1
                assert np.array_equal(u @ np.kron(basis, blank), np.kron(basis, basis))

    def test_superposition_entangles_instead_of_cloning(self):
        u = basis_cloner(2)
        plus = np.array([1, 1]) / math.sqrt(2)
        out = u @ np.kron(plus, [1, 0])
        assert np.allclose(out, np.array([1, 0, 0, 1]) / math.sqrt(2), atol=1e-15)
        assert not is_product_split(StateVector(out), 1)

    def test_is_permutation(self):
        for n in (2, 3, 5):
            u = basis_cloner(n)
            assert np.array_equal(u @ u.conj().T, np.eye(n * n, dtype=complex))
            assert np.array_equal(np.sort(np.abs(u), axis=0)[-1], np.ones(n * n))

    def test_range(self):
        with pytest.raises(InvalidInput):
            basis_cloner(1)
        with pytest.raises(InvalidInput):
            basis_cloner(33)


class TestIsUnitary:
    def test_hadamard(self):
        assert is_unitary(hadamard(), 1e-9)

    def test_all_ones_rejected(self):
        assert not is_unitary(np.ones((2, 2)), 1e-9)

    def test_non_square_rejected(self):
        assert not is_unitary(np.ones((2, 3)), 1e-9)
