from fractions import Fraction

import numpy as np
import pytest

from macrobell.criteria import CriteriaUtils
from macrobell.monogamy import MonogamyUtils, WernerCategory
from macrobell.pauli import MeasurementFrame, PauliString
from macrobell.states import Partition, PureState, StateUtils
from macrobell.trees import TreeUtils
from macrobell.utils import DimensionMismatchError, InvalidStateError, RegionTooSmallError


def _frames(rng, count):
    return [MeasurementFrame.random(rng) for _ in range(count)]


class TestExpectationVector:
    def test_pauli_triple(self):
        triple = [PauliString.from_label(c) for c in "XYZ"]
        vector = MonogamyUtils.expectation_vector(StateUtils.named_state('product', 1), triple)
        assert np.allclose(vector.components, [0.0, 0.0, 1.0])
        assert np.isclose(vector.squared_norm(), 1.0)

    def test_tree_families_bounded(self):
        rng = np.random.default_rng(77)
        for family in (TreeUtils.simple_tree(2), TreeUtils.simple_tree(3),
                       TreeUtils.folded_tree(4)):
            for _ in range(20):
                state = StateUtils.named_state('random_pure', family.total_qubits, rng)
                vector = MonogamyUtils.expectation_vector(state, family)
                assert len(vector) == 2 ** family.k
                assert vector.squared_norm() <= 1 + 1e-9

    def test_size_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            MonogamyUtils.expectation_vector(StateUtils.named_state('ghz', 2),
                                             [PauliString.from_label("XYZ")])


class TestPQ:
    def test_matches_tensor(self):
        rng = np.random.default_rng(8)
        for n in (4, 5, 6):
            state = StateUtils.random_state(n, rng)
            for partition in Partition.bipartitions(n, 1):
                frames = _frames(rng, 2)
                effective = StateUtils.effective_state(state, partition)
                direct = CriteriaUtils.zb_value(
                    CriteriaUtils.correlation_tensor(effective, frames))
                value = MonogamyUtils.pq_bound(state, partition, frames)
                assert abs(value - direct) <= 1e-9
                assert value <= 1 + 1e-9

    def test_vectors_are_unit_bounded(self):
        rng = np.random.default_rng(9)
        state = StateUtils.random_state(5, rng)
        p, q = MonogamyUtils.pq_vectors(state, Partition.from_sizes([2, 3]), _frames(rng, 2))
        assert p.shape == (2, 3, 4)
        assert np.max(np.sum(p ** 2, axis=2)) <= 1 + 1e-9
        assert np.max(np.sum(q ** 2, axis=2)) <= 1 + 1e-9

    def test_singlet_with_spectator(self):
        singlet = StateUtils.named_state('singlet', 2)
        state = PureState(np.kron(singlet.amplitudes, [1, 0]))
        partition = Partition([[0], [1, 2]])
        frames = [MeasurementFrame.standard()] * 2
        assert np.isclose(MonogamyUtils.pq_bound(state, partition, frames), 0.5)
        assert np.isclose(MonogamyUtils.max_effective_visibility(state, partition), 0.5)
        assert MonogamyUtils.max_effective_visibility(state, partition) \
            <= MonogamyUtils.singlet_monogamy_cap(1, 2).value + 1e-9

    def test_single_qubit_regions(self):
        with pytest.raises(RegionTooSmallError):
            MonogamyUtils.pq_bound(StateUtils.named_state('singlet', 2),
                                   Partition([[0], [1]]), [MeasurementFrame.standard()] * 2)


class TestFamilyBound:
    def test_three_regions(self):
        rng = np.random.default_rng(31)
        state = StateUtils.random_state(8, rng)
        partition = Partition.from_sizes([2, 2, 4])
        bound = MonogamyUtils.family_bound(state, partition, _frames(rng, 3),
                                           TreeUtils.folded_tree(3))
        assert abs(bound.value - bound.zb_value) <= 1e-9
        assert bound.value <= bound.max_squared_norm + 1e-12
        assert bound.max_squared_norm <= 1 + 1e-9
        assert bound.copies == 16

    def test_regions_too_small(self):
        with pytest.raises(RegionTooSmallError):
            MonogamyUtils.family_bound(StateUtils.named_state('ghz', 3),
                                       Partition([[0], [1], [2]]),
                                       [MeasurementFrame.standard()] * 3,
                                       TreeUtils.simple_tree(3))


class TestWerner:
    def test_caps(self):
        assert MonogamyUtils.singlet_monogamy_cap(1, 2).cap == Fraction(2, 3)
        assert MonogamyUtils.singlet_monogamy_cap(2, 1).cap == Fraction(2, 3)
        assert MonogamyUtils.singlet_monogamy_cap(8, 8).cap == Fraction(5, 12)
        assert MonogamyUtils.singlet_monogamy_cap(1, 1).cap == 1

    def test_classification(self):
        expected = [
            (-1.0 / 3.0, WernerCategory.NO_POVM_VIOLATION),
            (0.4, WernerCategory.NO_POVM_VIOLATION),
            (5.0 / 12.0, WernerCategory.NO_POVM_VIOLATION),
            (0.5, WernerCategory.NO_PROJECTIVE_VIOLATION),
            (2.0 / 3.0, WernerCategory.NO_PROJECTIVE_VIOLATION),
            (0.7, WernerCategory.UNCONSTRAINED),
        ]
        for visibility, category in expected:
            assert MonogamyUtils.werner_classify(visibility, 1, 1).category == category

    def test_exceeds_cap(self):
        assert MonogamyUtils.werner_classify(0.5, 8, 8).exceeds_cap
        assert not MonogamyUtils.werner_classify(0.4, 8, 8).exceeds_cap

    def test_out_of_range(self):
        with pytest.raises(InvalidStateError):
            MonogamyUtils.werner_classify(1.5, 1, 1)

    def test_optimum_reaches_cap(self):
        visibility, state, partition = MonogamyUtils.maximize_effective_visibility(1, 2)
        assert abs(visibility - 2.0 / 3.0) <= 1e-9
        assert abs(MonogamyUtils.max_effective_visibility(state, partition) - 2.0 / 3.0) <= 0.01

    def test_optimum_for_larger_split(self):
        visibility, _, _ = MonogamyUtils.maximize_effective_visibility(2, 3)
        assert visibility <= MonogamyUtils.singlet_monogamy_cap(2, 3).value + 1e-9

    def test_singlet_cover(self):
        state = StateUtils.named_state('singlet_cover', 4)
        assert np.isclose(MonogamyUtils.max_effective_visibility(
            state, Partition.from_sizes([2, 2])), 0.5)
