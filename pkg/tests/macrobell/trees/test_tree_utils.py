import itertools
from fractions import Fraction

import numpy as np
import pytest

from macrobell.pauli import PauliString
from macrobell.trees import FamilyRenderer, OperatorFamily, OperatorSequence, TreeUtils
from macrobell.utils import ConstructionError, DomainError, OffsetOutOfRangeError, \
    RegionTooSmallError, TreeSizeError


class TestBounds:
    def test_g(self):
        assert TreeUtils.g(Fraction(1, 3)) == 1
        assert TreeUtils.g(3) == 4
        assert TreeUtils.g(4) == 4
        assert TreeUtils.g(Fraction(8, 3)) == 4
        assert TreeUtils.g(5) == 8
        assert TreeUtils.g(1) == 1
        with pytest.raises(DomainError):
            TreeUtils.g(0)

    def test_min_region_size(self):
        assert TreeUtils.min_region_size(4) == 2
        assert TreeUtils.min_region_size(10) == 29
        assert TreeUtils.min_region_size(2) == 1

    def test_fold_bound(self):
        assert TreeUtils.fold_bound(4) == 8
        assert TreeUtils.fold_bound(5) == 9

    def test_max_lhv_regions(self):
        assert TreeUtils.max_lhv_regions(8) == 3
        assert TreeUtils.max_lhv_regions(1000) == 9
        assert TreeUtils.max_lhv_regions(10 ** 6) == 19

    def test_k_range(self):
        with pytest.raises(TreeSizeError):
            TreeUtils.folded_tree(1)
        with pytest.raises(TreeSizeError):
            TreeUtils.simple_tree(17)


class TestConstructions:
    def test_simple_tree(self):
        for k in range(1, 7):
            family = TreeUtils.simple_tree(k)
            assert len(family) == 2 ** k
            assert family.region_sizes == tuple(2 ** j for j in range(k))
            assert TreeUtils.verify_anticommuting(family)

    def test_folded_tree(self):
        for k in range(2, 9):
            family = TreeUtils.folded_tree(k)
            assert len(family) == 2 ** k
            assert len(family.term_set()) == 2 ** k
            assert TreeUtils.verify_anticommuting(family)
            assert TreeUtils.within_fold_bound(family)

    def test_folded_over_bound(self):
        # k = 9 puts 128 qubits in region 4 against a bound of 66
        assert TreeUtils.fold_bound(9) == 66
        with pytest.raises(ConstructionError):
            TreeUtils.folded_tree(9)

    def test_folded_smaller_than_simple(self):
        for k in range(4, 9):
            assert max(TreeUtils.folded_tree(k).region_sizes) \
                < max(TreeUtils.simple_tree(k).region_sizes)

    def test_folded_four(self):
        assert TreeUtils.folded_tree(4).region_sizes == (1, 5, 4, 5)

    def test_small_folded_is_simple(self):
        assert TreeUtils.folded_tree(3).term_set() == TreeUtils.simple_tree(3).term_set()

    def test_complete(self):
        for k in (1, 2, 3):
            assert TreeUtils.extension_candidates(TreeUtils.simple_tree(k)) == []

    def test_incomplete_family_extends(self):
        family = TreeUtils.simple_tree(2)
        missing = family.sequences[-1]
        partial = OperatorFamily(family.sequences[:-1], family.region_sizes)
        assert TreeUtils.extension_candidates(partial) == [missing]

    def test_verify_detects_commuting(self):
        assert not TreeUtils.verify_anticommuting(
            [PauliString.from_label("XX"), PauliString.from_label("YY")])


class TestFamilies:
    def test_too_many_sequences(self):
        family = TreeUtils.simple_tree(1)
        with pytest.raises(ConstructionError):
            OperatorFamily(list(family.sequences) * 2, family.region_sizes)

    def test_qubit_outside_region(self):
        with pytest.raises(OffsetOutOfRangeError):
            OperatorFamily([OperatorSequence([(1, 2, 1)])], [1])

    def test_sequence_region_twice(self):
        with pytest.raises(ConstructionError):
            OperatorSequence([(1, 1, 1), (1, 2, 2)])

    def test_strings(self):
        strings = TreeUtils.simple_tree(2).to_pauli_strings()
        assert sorted(str(s) for s in strings) == ["XXI", "XYI", "YIX", "YIY"]

    def test_document(self):
        document = TreeUtils.simple_tree(1).to_document()
        assert document['region_sizes'] == [1]
        assert document['sequences'] == [[{'region': 1, 'qubit': 1, 'pauli': 'X'}],
                                         [{'region': 1, 'qubit': 1, 'pauli': 'Y'}]]

    def test_render(self):
        text = FamilyRenderer.render_ascii(TreeUtils.simple_tree(2))
        lines = text.splitlines()
        assert lines[0] == "k=2 sequences=4 region sizes=1,2"
        assert len(lines) == 1 + 2 + 4


class TestGeneration:
    def test_random_shifts_and_flips(self):
        rng = np.random.default_rng(17)
        for k in range(2, 6):
            base = TreeUtils.folded_tree(k)
            for _ in range(20):
                shifts = [int(rng.integers(n)) for n in base.region_sizes]
                flips = [bool(rng.integers(2)) for _ in range(k)]
                family = TreeUtils.generate_vector_family(base, shifts, flips)
                assert TreeUtils.verify_anticommuting(family)

    def test_larger_register(self):
        base = TreeUtils.simple_tree(2)
        family = TreeUtils.generate_vector_family(base, [2, 3], [True, False], [3, 4])
        assert family.region_sizes == (3, 4)
        assert TreeUtils.verify_anticommuting(family)

    def test_shift_range(self):
        with pytest.raises(OffsetOutOfRangeError):
            TreeUtils.generate_vector_family(TreeUtils.simple_tree(2), [0, 2], [False, False])

    def test_register_too_small(self):
        with pytest.raises(RegionTooSmallError):
            TreeUtils.generate_vector_family(TreeUtils.simple_tree(2), [0, 0], [False, False],
                                             [1, 1])

    def test_shifted_copies_partition_terms(self):
        base = TreeUtils.simple_tree(2)
        keys = [s.key() for _, family in TreeUtils.vector_families(base, (2, 3))
                for s in family.sequences]
        # 4 label tuples times 2 * 3 qubit tuples, each exactly once
        assert len(keys) == 24
        assert len(set(keys)) == 24

    def test_shifts_and_flips_give_n_to_the_k_families(self):
        base = TreeUtils.simple_tree(2)
        families = set()
        for shifts in itertools.product(range(2), range(2)):
            for flips in itertools.product([False, True], repeat=2):
                family = TreeUtils.generate_vector_family(base, shifts, flips, (2, 2))
                assert TreeUtils.verify_anticommuting(family)
                families.add(family.term_set())
        # flipping region 1 repeats a shift of region 2, flipping region 2 changes no term set
        assert len(families) == 2 ** 2
