from functools import reduce

import numpy as np
import pytest

from macrobell.criteria import BellCoefficients, CorrelationTensor, CriteriaUtils
from macrobell.pauli import Direction, MeasurementFrame, PauliUtils
from macrobell.states import Partition, PureState, StateUtils, WernerState
from macrobell.utils import DomainError, FrameCountError, InvalidStateError, \
    MissingCorrelationError, PartitionError

Z = Direction((0.0, 0.0, 1.0))
X = Direction((1.0, 0.0, 0.0))


class TestCorrelationTensor:
    def test_singlet_standard_frames(self):
        singlet = StateUtils.named_state('singlet', 2)
        tensor = CriteriaUtils.correlation_tensor(
            singlet, [MeasurementFrame.standard(), MeasurementFrame.standard()])
        assert np.isclose(tensor.entry("xx"), -1.0)
        assert np.isclose(tensor.entry("yy"), -1.0)
        assert np.isclose(tensor.entry("xy"), 0.0)
        assert abs(CriteriaUtils.zb_value(tensor) - 2.0) <= 1e-9
        assert not CriteriaUtils.zb_admits_lhv(tensor)

    def test_setting_pairs(self):
        s = np.sqrt(0.5)
        singlet = StateUtils.named_state('singlet', 2)
        pairs = [((s, s, 0.0), (s, -s, 0.0))] * 2
        assert np.isclose(CriteriaUtils.zb_value(
            CriteriaUtils.correlation_tensor(singlet, pairs)), 2.0)

    def test_werner(self):
        frames = [MeasurementFrame.standard()] * 2
        for v in (0.0, 0.5, 1.0 / np.sqrt(2)):
            tensor = CriteriaUtils.correlation_tensor(WernerState(v).matrix(), frames)
            assert np.isclose(CriteriaUtils.zb_value(tensor), 2 * v ** 2)

    def test_frame_count(self):
        with pytest.raises(FrameCountError):
            CriteriaUtils.correlation_tensor(StateUtils.named_state('singlet', 2),
                                             [MeasurementFrame.standard()])

    def test_entries_bounded(self):
        with pytest.raises(InvalidStateError):
            CorrelationTensor([[1.5, 0.0], [0.0, 0.0]], [MeasurementFrame.standard()] * 2)

    def test_to_frame(self):
        tensor = CriteriaUtils.correlation_tensor(
            StateUtils.named_state('ghz', 3), [MeasurementFrame.standard()] * 3)
        df = tensor.to_frame()
        assert list(df['axes'])[:2] == ['xxx', 'xxy']
        assert np.isclose(df['value'].iloc[0], 1.0)
        assert len(tensor.to_document()['values']) == 8

    def test_batched_values_match(self):
        rng = np.random.default_rng(21)
        state = StateUtils.random_state(3, rng)
        pauli = CriteriaUtils.pauli_correlations(state)
        batch = [tuple(MeasurementFrame.random(rng) for _ in range(3)) for _ in range(10)]
        values = CriteriaUtils.zb_values(pauli, batch)
        for frames, value in zip(batch, values):
            direct = CriteriaUtils.zb_value(CriteriaUtils.correlation_tensor(state, frames))
            projected = CriteriaUtils.zb_value(CriteriaUtils.correlation_from_pauli(pauli, frames))
            assert np.isclose(value, direct)
            assert np.isclose(projected, direct)


class TestNoViolation:
    def test_effective_states_admit_lhv(self):
        rng = np.random.default_rng(1000)
        for n in (4, 5, 6):
            state = StateUtils.random_state(n, rng)
            for partition in Partition.bipartitions(n, 2):
                effective = StateUtils.effective_state(state, partition)
                pauli = CriteriaUtils.pauli_correlations(effective)
                batch = [(MeasurementFrame.random(rng), MeasurementFrame.random(rng))
                         for _ in range(10)]
                assert np.max(CriteriaUtils.zb_values(pauli, batch)) <= 1 + 1e-9

    def test_singlet_cover_effective_state(self):
        state = StateUtils.named_state('singlet_cover', 4)
        effective = StateUtils.effective_state(state, Partition.from_sizes([2, 2]))
        tensor = CriteriaUtils.correlation_tensor(effective, [MeasurementFrame.standard()] * 2)
        assert np.isclose(CriteriaUtils.zb_value(tensor), 0.5)


def _collective(direction, region, qubit_count):
    observable = PauliUtils.direction_observable(direction)
    total = np.zeros((2 ** qubit_count, 2 ** qubit_count), dtype=complex)
    for qubit in region:
        factors = [observable if q == qubit else np.eye(2) for q in range(qubit_count)]
        total += reduce(np.kron, factors)
    return total


class TestSpectatorQubit:
    """Singlet on qubits 0, 1 and |0> on qubit 2, regions {0} and {1, 2}"""

    def _state(self):
        singlet = StateUtils.named_state('singlet', 2)
        return PureState(np.kron(singlet.amplitudes, [1, 0])), Partition([[0], [1, 2]])

    def test_zb_value(self):
        state, partition = self._state()
        effective = StateUtils.effective_state(state, partition)
        tensor = CriteriaUtils.correlation_tensor(effective, [MeasurementFrame.standard()] * 2)
        assert np.allclose(tensor.values, [[-0.5, 0.0], [0.0, -0.5]])
        assert np.isclose(CriteriaUtils.zb_value(tensor), 0.5)
        assert CriteriaUtils.zb_admits_lhv(tensor)


class TestMagnetizationRoutes:
    def test_random_six_qubits(self):
        rng = np.random.default_rng(31)
        state = StateUtils.as_density(StateUtils.random_state(6, rng))
        partition = Partition([[0, 2, 5], [1, 3, 4]])
        a, b = Direction.random(rng), Direction.random(rng)
        value = CriteriaUtils.magnetization_correlation(state, partition, a, b)
        operator = _collective(a, partition.regions[0], 6) @ _collective(b, partition.regions[1], 6)
        assert np.isclose(value.value, np.trace(state.matrix @ operator).real)
        assert abs(value.value) <= 9


class TestMagnetization:
    def test_singlet_cover(self):
        state = StateUtils.named_state('singlet_cover', 4)
        value = CriteriaUtils.magnetization_correlation(state, Partition.from_sizes([2, 2]), Z, Z)
        assert np.isclose(value.value, -2.0)

    def test_three_regions(self):
        ghz = StateUtils.named_state('ghz', 3)
        value = CriteriaUtils.magnetization_correlations(
            ghz, Partition([[0], [1], [2]]), [X, X, X])
        assert np.isclose(float(value), 1.0)

    def test_needs_two_regions(self):
        with pytest.raises(PartitionError):
            CriteriaUtils.magnetization_correlation(
                StateUtils.named_state('ghz', 3), Partition([[0], [1], [2]]), Z, Z)

    def test_bell_parameter(self):
        s = np.sqrt(0.5)
        singlet = StateUtils.named_state('singlet', 2)
        partition = Partition([[0], [1]])
        a = [Z, X]
        b = [Direction((-s, 0.0, -s)), Direction((s, 0.0, -s))]
        correlations = {(i, j): CriteriaUtils.magnetization_correlation(
            singlet, partition, a[i], b[j]) for i in range(2) for j in range(2)}
        value = CriteriaUtils.macroscopic_bell_parameter(BellCoefficients.chsh(), correlations)
        assert np.isclose(value, 2 * np.sqrt(2))

    def test_missing_correlation(self):
        with pytest.raises(MissingCorrelationError):
            CriteriaUtils.macroscopic_bell_parameter(BellCoefficients.chsh(), {(0, 0): 1.0})

    def test_coefficients_finite(self):
        with pytest.raises(DomainError):
            BellCoefficients({(0, 0): float('nan')})
