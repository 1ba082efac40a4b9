import numpy as np
import pytest

from macrobell.pauli import PauliUtils
from macrobell.states import DensityMatrix, Partition, PureState, ReducedStateCache, \
    StateUtils, WernerState
from macrobell.utils import DimensionMismatchError, InvalidStateError, PartitionError, \
    StateSizeError


class TestDensityMatrix:
    def test_max_mixed(self):
        rho = DensityMatrix(np.eye(4) / 4)
        assert rho.qubit_count == 2
        assert rho.dimension == 4

    def test_not_hermitian(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix([[0.5, 0.5], [0.0, 0.5]])

    def test_bad_trace(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.eye(2))

    def test_negative_eigenvalue(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix([[1.5, 0.0], [0.0, -0.5]])

    def test_not_power_of_two(self):
        with pytest.raises(DimensionMismatchError):
            DensityMatrix(np.eye(3) / 3)

    def test_read_only(self):
        rho = DensityMatrix(np.eye(2) / 2)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1

    def test_pure_norm(self):
        with pytest.raises(InvalidStateError):
            PureState([1.0, 1.0])


class TestPartition:
    def test_overlap(self):
        with pytest.raises(PartitionError):
            Partition([[0, 1], [1, 2]])

    def test_empty_region(self):
        with pytest.raises(PartitionError):
            Partition([[0, 1], []])

    def test_out_of_range(self):
        with pytest.raises(PartitionError):
            Partition([[0], [3]], qubit_count=3)

    def test_from_sizes(self):
        assert Partition.from_sizes([2, 3]).regions == ((0, 1), (2, 3, 4))

    def test_bipartition_count(self):
        # 2|2 splits of 4 qubits with qubit 0 pinned to region A
        assert len(list(Partition.bipartitions(4, 2))) == 3
        assert len(list(Partition.bipartitions(4, 1))) == 7

    def test_bipartitions_cover(self):
        for partition in Partition.bipartitions(6, 2):
            assert partition.qubits == tuple(range(6))
            assert min(partition.region_sizes) >= 2
            assert 0 in partition.regions[0]


class TestReductions:
    def test_partial_trace_singlet(self):
        singlet = StateUtils.named_state('singlet', 2)
        assert np.allclose(StateUtils.partial_trace(singlet, [0]).matrix, np.eye(2) / 2)

    def test_partial_trace_product(self):
        # |0><0| x |1><1|
        state = PureState([0, 1, 0, 0])
        assert np.allclose(StateUtils.partial_trace(state, [1]).matrix, np.diag([0, 1]))
        assert np.allclose(StateUtils.partial_trace(state, [0]).matrix, np.diag([1, 0]))

    def test_partial_trace_ghz(self):
        ghz = StateUtils.named_state('ghz', 3)
        assert np.allclose(StateUtils.partial_trace(ghz, [0, 1]).matrix,
                           np.diag([0.5, 0, 0, 0.5]))

    def test_reduced_order(self):
        # |01>: qubit 0 is |0>, qubit 1 is |1>
        state = PureState([0, 1, 0, 0])
        forward = StateUtils.reduced_matrix(state, [0, 1])
        backward = StateUtils.reduced_matrix(state, [1, 0])
        assert np.isclose(forward[1, 1], 1.0)
        assert np.isclose(backward[2, 2], 1.0)

    def test_pure_and_mixed_agree(self):
        rng = np.random.default_rng(3)
        psi = StateUtils.named_state('random_pure', 5, rng)
        for qubits in ([0, 3], [4, 1, 2], [2]):
            assert np.allclose(StateUtils.reduced_matrix(psi, qubits),
                               StateUtils.reduced_matrix(psi.density_matrix(), qubits))

    def test_repeated_qubit(self):
        with pytest.raises(PartitionError):
            StateUtils.reduced_matrix(StateUtils.named_state('ghz', 3), [0, 0])

    def test_cache(self):
        psi = StateUtils.named_state('ghz', 4)
        cache = ReducedStateCache(psi)
        first = cache.reduced_matrix((0, 2))
        assert cache.reduced_matrix((0, 2)) is first
        assert len(cache) == 1


class TestEffectiveState:
    def test_singlet_is_its_own(self):
        singlet = StateUtils.named_state('singlet', 2)
        effective = StateUtils.effective_state(singlet, Partition([[0], [1]]))
        assert np.allclose(effective.matrix, singlet.density_matrix().matrix)

    def test_singlet_cover_dilutes(self):
        # two of the four cross pairs are singlets
        state = StateUtils.named_state('singlet_cover', 4)
        effective = StateUtils.effective_state(state, Partition.from_sizes([2, 2]))
        assert np.isclose(StateUtils.twirl_werner(effective).visibility, 0.5)

    def test_singlet_with_spectator(self):
        singlet = StateUtils.named_state('singlet', 2)
        state = PureState(np.kron(singlet.amplitudes, [1, 0]))
        effective = StateUtils.effective_state(state, Partition([[0], [1, 2]]))
        spectator = np.kron(np.eye(2) / 2, np.diag([1, 0]))
        expected = (singlet.density_matrix().matrix + spectator) / 2
        assert np.allclose(effective.matrix, expected)

    def test_linear(self):
        rng = np.random.default_rng(21)
        first = StateUtils.as_density(StateUtils.named_state('random_mixed', 5, rng))
        second = StateUtils.as_density(StateUtils.named_state('random_pure', 5, rng))
        partition = Partition([[0, 3], [1, 2, 4]])
        alpha = 0.3
        mixed = DensityMatrix(alpha * first.matrix + (1 - alpha) * second.matrix)
        expected = alpha * StateUtils.effective_state(first, partition).matrix \
            + (1 - alpha) * StateUtils.effective_state(second, partition).matrix
        assert np.max(np.abs(StateUtils.effective_state(mixed, partition).matrix
                             - expected)) <= 1e-10

    def test_trace_and_size(self):
        rng = np.random.default_rng(11)
        state = StateUtils.random_state(6, rng)
        effective = StateUtils.effective_state(state, Partition.from_sizes([1, 2, 3]))
        assert effective.qubit_count == 3
        assert np.isclose(np.trace(effective.matrix).real, 1.0)

    def test_block_size(self):
        state = StateUtils.named_state('ghz', 4)
        effective = StateUtils.effective_state(state, Partition.from_sizes([2, 2]),
                                               block_size=2)
        assert effective.qubit_count == 4
        assert np.allclose(effective.matrix, state.density_matrix().matrix)

    def test_cache_from_other_state(self):
        cache = ReducedStateCache(StateUtils.named_state('ghz', 2))
        with pytest.raises(DimensionMismatchError):
            StateUtils.effective_state(StateUtils.named_state('w', 2),
                                       Partition([[0], [1]]), cache=cache)


class TestSymmetrize:
    def test_invariant(self):
        rng = np.random.default_rng(5)
        state = StateUtils.random_state(4, rng)
        partition = Partition.from_sizes([2, 2])
        symmetric = StateUtils.permutation_symmetrize(state, partition)
        swapped = StateUtils._permute_qubits(symmetric.matrix.reshape([2] * 8), 4,
                                             [1, 0, 2, 3]).reshape(16, 16)
        assert np.allclose(swapped, symmetric.matrix)

    def test_keeps_effective_state(self):
        rng = np.random.default_rng(9)
        state = StateUtils.random_state(5, rng)
        partition = Partition.from_sizes([2, 3])
        symmetric = StateUtils.permutation_symmetrize(state, partition)
        assert np.allclose(StateUtils.effective_state(symmetric, partition).matrix,
                           StateUtils.effective_state(state, partition).matrix)

    def test_every_pair_is_effective(self):
        rng = np.random.default_rng(13)
        state = StateUtils.random_state(4, rng)
        partition = Partition([[0, 1], [2, 3]])
        symmetric = StateUtils.permutation_symmetrize(state, partition)
        effective = StateUtils.effective_state(state, partition).matrix
        for i in (0, 1):
            for j in (2, 3):
                assert np.allclose(StateUtils.reduced_matrix(symmetric, [i, j]), effective)

    def test_idempotent(self):
        rng = np.random.default_rng(14)
        state = StateUtils.random_state(5, rng)
        partition = Partition([[0, 2], [1, 3, 4]])
        once = StateUtils.permutation_symmetrize(state, partition)
        twice = StateUtils.permutation_symmetrize(once, partition)
        assert np.allclose(twice.matrix, once.matrix)

    def test_single_qubit_regions_unchanged(self):
        rng = np.random.default_rng(15)
        state = StateUtils.as_density(StateUtils.random_state(2, rng))
        symmetric = StateUtils.permutation_symmetrize(state, Partition([[0], [1]]))
        assert np.allclose(symmetric.matrix, state.matrix)

    def test_sampled_without_rng(self):
        rng = np.random.default_rng(16)
        state = StateUtils.random_state(8, rng)
        partition = Partition([[0, 1], [2, 3, 4, 5, 6, 7]])
        symmetric = StateUtils.permutation_symmetrize(state, partition)
        assert np.isclose(np.trace(symmetric.matrix).real, 1.0)
        effective = StateUtils.effective_state(state, partition).matrix
        for i in (0, 1):
            for j in (2, 5, 7):
                assert np.allclose(StateUtils.reduced_matrix(symmetric, [i, j]), effective,
                                   atol=2e-2)
        again = StateUtils.permutation_symmetrize(state, partition)
        assert np.allclose(again.matrix, symmetric.matrix)


class TestWerner:
    def test_range(self):
        with pytest.raises(InvalidStateError):
            WernerState(1.2)
        with pytest.raises(InvalidStateError):
            WernerState(-0.5)

    def test_twirl_roundtrip(self):
        for v in (-1.0 / 3.0, 0.0, 0.4, 1.0):
            assert np.isclose(StateUtils.twirl_werner(WernerState(v).matrix()).visibility, v)

    def test_twirl_wrong_size(self):
        with pytest.raises(DimensionMismatchError):
            StateUtils.twirl_werner(StateUtils.named_state('ghz', 3))

    def test_heisenberg_ground_state_is_singlet(self):
        state = StateUtils.heisenberg_thermal(2, 50.0, [(0, 1, 1.0)])
        assert np.isclose(StateUtils.twirl_werner(state).visibility, 1.0)

    def test_infinite_temperature(self):
        state = StateUtils.heisenberg_thermal(3, 0.0, StateUtils.chain_couplings(3))
        assert np.allclose(state.matrix, np.eye(8) / 8)

    def test_swap_identity(self):
        terms = sum(np.kron(PauliUtils.pauli_matrix(c), PauliUtils.pauli_matrix(c))
                    for c in 'XYZ')
        assert np.allclose(StateUtils.heisenberg_hamiltonian(2, [(0, 1, 1.0)]), terms.real)

    def test_thermal_rotation_invariant(self):
        rng = np.random.default_rng(2)
        state = StateUtils.heisenberg_thermal(4, 1.3, StateUtils.chain_couplings(4, 0.7, True))
        rotated = StateUtils.collective_rotation(state, StateUtils.random_unitary(rng))
        assert np.allclose(rotated.matrix, state.matrix)

    def test_dense_limit(self):
        with pytest.raises(StateSizeError):
            StateUtils.heisenberg_hamiltonian(13, [])


class TestNamedStates:
    def test_singlet_cover_pairs(self):
        state = StateUtils.named_state('singlet_cover', 6)
        for i in range(3):
            pair = DensityMatrix(StateUtils.reduced_matrix(state, [i, i + 3]))
            assert np.isclose(StateUtils.twirl_werner(pair).visibility, 1.0)

    def test_unknown(self):
        with pytest.raises(InvalidStateError):
            StateUtils.named_state('cat', 2)

    def test_random_needs_rng(self):
        with pytest.raises(InvalidStateError):
            StateUtils.named_state('random_pure', 2)

    def test_random_valid(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            rho = StateUtils.as_density(StateUtils.random_state(3, rng))
            assert np.min(np.linalg.eigvalsh(rho.matrix)) > -1e-9

    def test_expectation_routes_agree(self):
        rng = np.random.default_rng(4)
        state = StateUtils.random_state(4, rng)
        ops = [PauliUtils.pauli_matrix('X'), PauliUtils.pauli_matrix('Y')]
        direct = StateUtils.expectation(state, [3, 1], ops)
        reduced = StateUtils.local_expectations(StateUtils.reduced_matrix(state, [3, 1]),
                                                [np.stack([ops[0]]), np.stack([ops[1]])])
        assert np.isclose(direct, reduced[0, 0])
