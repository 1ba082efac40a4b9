"""
Copyright 2024 macrobell-utils contributors. All Rights Reserved.

Permission is hereby granted, free of charge, to any person obtaining a copy of this
software and associated documentation files (the "Software"), to deal in the Software
without restriction, including without limitation the rights to use, copy, modify,
merge, publish, distribute, sublicense, and/or sell copies of the Software, and to
permit persons to whom the Software is furnished to do so.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED,
INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A
PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT
HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION
OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE
SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.
"""

import itertools
import logging
from fractions import Fraction

import numpy as np

from ..pauli import PauliLabel, PauliString, PauliUtils
from ..utils import ConstructionError, DomainError, OffsetOutOfRangeError, \
    RegionTooSmallError, TreeSizeError

# Largest k accepted by the tree constructions
MAX_TREE_REGIONS = 16
# Largest k for which constructions check every pair of sequences
EXHAUSTIVE_VERIFY_LIMIT = 8

PAULI_NAMES = {1: 'X', 2: 'Y'}


def sequence_strings(sequences, region_sizes):
    """Lay sequences out on one register, region 1 first, as PauliString objects"""
    offsets = np.concatenate([[0], np.cumsum(region_sizes)[:-1]])
    total = int(sum(region_sizes))
    strings = []
    for sequence in sequences:
        labels = [PauliLabel.I] * total
        for region, qubit, pauli in sequence.terms:
            labels[int(offsets[region - 1]) + qubit - 1] = PauliLabel.from_pauli_index(pauli)
        strings.append(PauliString(labels))
    return strings


class OperatorSequence:
    """One operator per region: qubit l_j (1-based) and pauli index i_j (1 = X, 2 = Y)

    Terms are kept in the order they were placed along the tree path, which is
    what FamilyRenderer draws; lookups are by region.

    Fields:
    terms - tuple of (region, qubit, pauli) with 1-based region numbers
    """

    def __init__(self, terms):
        terms = tuple((int(r), int(q), int(p)) for r, q, p in terms)
        regions = [r for r, _, _ in terms]
        if len(set(regions)) != len(regions):
            raise ConstructionError("sequence names region twice: {}".format(regions))
        for region, qubit, pauli in terms:
            if pauli not in (1, 2):
                raise DomainError("pauli index must be 1 or 2, got {}".format(pauli))
            if qubit < 1 or region < 1:
                raise DomainError("region and qubit numbers are 1-based")
        self.terms = terms
        self._by_region = {r: (q, p) for r, q, p in terms}

    @property
    def region_count(self):
        return len(self.terms)

    def qubit(self, region):
        return self._by_region[region][0]

    def pauli(self, region):
        return self._by_region[region][1]

    def key(self):
        """Terms ordered by region, independent of the path order"""
        return tuple(sorted(self.terms))

    def __eq__(self, other):
        return isinstance(other, OperatorSequence) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        return " ".join("{}{}^{}".format(PAULI_NAMES[p], q, r) for r, q, p in self.key())

    def __repr__(self):
        return "OperatorSequence({})".format(self)


class OperatorFamily:
    """Sequences of {X, Y} operators over k regions

    Region j (1-based) holds region_sizes[j - 1] qubits. Laid out on a single
    register, region 1 comes first.

    Fields:
    sequences - tuple of OperatorSequence
    region_sizes - tuple of k positive integers
    k - number of regions
    """

    def __init__(self, sequences, region_sizes):
        self.region_sizes = tuple(int(n) for n in region_sizes)
        self.k = len(self.region_sizes)
        if self.k < 1 or min(self.region_sizes) < 1:
            raise DomainError("region sizes must be positive, got {}".format(self.region_sizes))
        self.sequences = tuple(sequences)
        if len(self.sequences) > 2 ** self.k:
            raise ConstructionError("{} sequences exceed the 2^{} limit".format(
                len(self.sequences), self.k))
        for sequence in self.sequences:
            if sorted(r for r, _, _ in sequence.terms) != list(range(1, self.k + 1)):
                raise ConstructionError("sequence {} does not cover regions 1..{}".format(
                    sequence, self.k))
            for region, qubit, _ in sequence.terms:
                if qubit > self.region_sizes[region - 1]:
                    raise OffsetOutOfRangeError(
                        "qubit {} outside region {} of size {}".format(
                            qubit, region, self.region_sizes[region - 1]))

    @property
    def total_qubits(self):
        return sum(self.region_sizes)

    def to_pauli_strings(self):
        """Each sequence as a PauliString on total_qubits qubits"""
        return sequence_strings(self.sequences, self.region_sizes)

    def term_set(self):
        return frozenset(s.key() for s in self.sequences)

    def to_document(self):
        return {
            'region_sizes': list(self.region_sizes),
            'sequences': [[{'region': r, 'qubit': q, 'pauli': PAULI_NAMES[p]}
                           for r, q, p in s.key()] for s in self.sequences],
        }

    def __len__(self):
        return len(self.sequences)

    def __iter__(self):
        return iter(self.sequences)

    def __repr__(self):
        return "OperatorFamily(k={}, sequences={}, region_sizes={})".format(
            self.k, len(self.sequences), self.region_sizes)


class TreeUtils:
    """Constructions of mutually anti-commuting {X, Y} operator families

    Every construction grows a binary tree: a node takes a fresh qubit of its
    region, its two children carry X and Y on that qubit. Two leaves meet at
    the node where they split, with X against Y on the same qubit; everything
    below the split lives on distinct qubits, so every pair anti-commutes.
    """

    @staticmethod
    def g(x):
        """Smallest power of two >= x, x > 0; never below 1"""
        if x <= 0:
            raise DomainError("g is defined for positive arguments, got {}".format(x))
        power = 1
        while power < x:
            power *= 2
        return power

    @staticmethod
    def fold_bound(k):
        """Region size limit of the folded tree, sum over l of g(2^(l-1) / (k-1))"""
        if k < 2:
            raise TreeSizeError("the folded tree needs k >= 2, got {}".format(k))
        return sum(TreeUtils.g(Fraction(2 ** (l - 1), k - 1)) for l in range(1, k + 1))

    @staticmethod
    def min_region_size(k):
        """Lower bound ceil(2^(k-2) / (k-1)) on the region size for k regions"""
        if k < 2:
            raise TreeSizeError("k must be at least 2, got {}".format(k))
        return -(-2 ** (k - 2) // (k - 1))

    @staticmethod
    def max_lhv_regions(qubit_count):
        """floor(log2 N)"""
        if qubit_count < 2:
            raise DomainError("need at least 2 qubits, got {}".format(qubit_count))
        return int(qubit_count).bit_length() - 1

    @staticmethod
    def _check_k(k, smallest):
        if k < smallest or k > MAX_TREE_REGIONS:
            raise TreeSizeError("k must be between {} and {}, got {}".format(
                smallest, MAX_TREE_REGIONS, k))

    @staticmethod
    def _grow(order, counters):
        """Paths of a complete binary tree over the regions in order"""
        if not order:
            return [()]
        region = order[0]
        counters[region] += 1
        qubit = counters[region]
        paths = []
        for pauli in (1, 2):
            for rest in TreeUtils._grow(order[1:], counters):
                paths.append(((region, qubit, pauli),) + rest)
        return paths

    @staticmethod
    def _family(paths, counters, k):
        sequences = [OperatorSequence(path) for path in paths]
        return OperatorFamily(sequences, [counters[r] for r in range(1, k + 1)])

    @staticmethod
    def simple_tree(k):
        """2^k anti-commuting sequences with region sizes 1, 2, 4, ..., 2^(k-1)

        Arguments:
        k - region count, 1 <= k <= MAX_TREE_REGIONS

        Returns:
        OperatorFamily
        """
        TreeUtils._check_k(k, 1)
        counters = {r: 0 for r in range(1, k + 1)}
        family = TreeUtils._family(TreeUtils._grow(list(range(1, k + 1)), counters), counters, k)
        TreeUtils._check(family, "simple tree")
        return family

    @staticmethod
    def fold_schedule(k):
        """Layout of the folded tree

        A spine of J - 1 nodes carries blocks of complete subtrees. Block 1
        holds m = g(2^(k-1) / (k-1)) sequences and ends in region k; block j
        holds 2^(j-2) m sequences and ends in region k - j + 1, one region
        further left each time.

        Returns:
        (spine, blocks) where spine lists the region of each spine node by
        depth and blocks is a list of (hang_depth, child, region_order)
        """
        m = TreeUtils.g(Fraction(2 ** (k - 1), k - 1))
        p = m.bit_length() - 1
        blocks_count = k + 1 - p
        spine = [1] + [p - 1 + d for d in range(1, blocks_count - 1)]

        blocks = []
        for j in range(1, blocks_count + 1):
            hang = blocks_count - 2 if j == 1 else blocks_count - j
            child = 1 if j == 1 else 2
            leaf = k - j + 1
            used = set(spine[:hang + 1])
            inner = sorted((r for r in range(1, k + 1) if r not in used and r != leaf),
                           key=lambda r: (r < p, r))
            blocks.append((hang, child, inner + [leaf]))
        return spine, blocks

    @staticmethod
    def folded_tree(k):
        """2^k anti-commuting sequences with region sizes close to the folded bound

        For k <= 3 the simple tree already fits the bound and is returned.
        From k = 9 on the layout no longer fits the bound and ConstructionError
        is raised.

        Arguments:
        k - region count, 2 <= k <= MAX_TREE_REGIONS

        Returns:
        OperatorFamily
        """
        TreeUtils._check_k(k, 2)
        m = TreeUtils.g(Fraction(2 ** (k - 1), k - 1))
        if m < 4:
            return TreeUtils.simple_tree(k)

        spine, blocks = TreeUtils.fold_schedule(k)
        counters = {r: 0 for r in range(1, k + 1)}
        spine_terms = []
        for region in spine:
            counters[region] += 1
            spine_terms.append((region, counters[region]))

        hanging = {(hang, child): order for hang, child, order in blocks}
        paths = []

        def walk(depth, prefix):
            region, qubit = spine_terms[depth]
            for pauli in (1, 2):
                here = prefix + ((region, qubit, pauli),)
                if (depth, pauli) in hanging:
                    for rest in TreeUtils._grow(hanging[(depth, pauli)], counters):
                        paths.append(here + rest)
                else:
                    walk(depth + 1, here)

        walk(0, ())
        family = TreeUtils._family(paths, counters, k)
        if len(family) != 2 ** k:
            raise ConstructionError("folded tree produced {} sequences".format(len(family)))
        TreeUtils._check(family, "folded tree")

        bound = TreeUtils.fold_bound(k)
        if max(family.region_sizes) > bound:
            raise ConstructionError("folded tree k={} has a region of {} qubits, above {}".format(
                k, max(family.region_sizes), bound))
        return family

    @staticmethod
    def within_fold_bound(family):
        return max(family.region_sizes) <= TreeUtils.fold_bound(family.k)

    @staticmethod
    def _check(family, what):
        if family.k > EXHAUSTIVE_VERIFY_LIMIT:
            logging.debug("{} k={}: pairwise check skipped".format(what, family.k))
            return
        if not TreeUtils.verify_anticommuting(family):
            raise ConstructionError("{} k={} is not anti-commuting".format(what, family.k))

    @staticmethod
    def verify_anticommuting(family):
        """Does every pair of members anti-commute?

        Arguments:
        family - OperatorFamily, or a list of PauliString

        Returns:
        bool
        """
        strings = family.to_pauli_strings() if isinstance(family, OperatorFamily) \
            else list(family)
        if len(strings) < 2:
            return True
        matrix = PauliUtils.anticommutation_matrix(strings)
        off_diagonal = ~np.eye(len(strings), dtype=bool)
        return bool(np.all(matrix[off_diagonal]))

    @staticmethod
    def generate_vector_family(base, shifts, flips, region_sizes=None):
        """Shift qubit numbers and swap X with Y per region

        Qubit l of region j becomes ((l - 1 + shifts[j]) mod N_j) + 1 and, where
        flips[j] is set, X and Y trade places. Both maps keep every pair
        anti-commuting.

        Arguments:
        base - OperatorFamily
        shifts - one offset per region, 0 <= s < N_j
        flips - one boolean per region
        region_sizes - register sizes N_j, each >= the family's own. Default: the family's sizes

        Returns:
        OperatorFamily on region_sizes
        """
        sizes = base.region_sizes if region_sizes is None else tuple(region_sizes)
        if len(sizes) != base.k or len(shifts) != base.k or len(flips) != base.k:
            raise DomainError("expected {} sizes, shifts and flips".format(base.k))
        for j, (size, own) in enumerate(zip(sizes, base.region_sizes)):
            if size < own:
                raise RegionTooSmallError("region {} has {} qubits, the family needs {}".format(
                    j + 1, size, own))
        for j, (shift, size) in enumerate(zip(shifts, sizes)):
            if not 0 <= shift < size:
                raise OffsetOutOfRangeError("shift {} outside [0, {}) for region {}".format(
                    shift, size, j + 1))

        sequences = []
        for sequence in base.sequences:
            terms = []
            for region, qubit, pauli in sequence.terms:
                size = sizes[region - 1]
                qubit = (qubit - 1 + shifts[region - 1]) % size + 1
                if flips[region - 1]:
                    pauli = 3 - pauli
                terms.append((region, qubit, pauli))
            sequences.append(OperatorSequence(terms))
        return OperatorFamily(sequences, sizes)

    @staticmethod
    def vector_families(base, region_sizes):
        """Every shifted copy of a family on a register of the given sizes

        For a family holding each label tuple once, the copies cover every
        (label tuple, qubit tuple) term exactly once.

        Returns:
        A generator of (shifts, OperatorFamily)
        """
        flips = [False] * base.k
        for shifts in itertools.product(*[range(n) for n in region_sizes]):
            yield shifts, TreeUtils.generate_vector_family(base, shifts, flips, region_sizes)

    @staticmethod
    def extension_candidates(family):
        """{X, Y} sequences on the family's qubits that anti-commute with every member

        Returns:
        List of OperatorSequence; empty for a complete family
        """
        members = family.to_pauli_strings()
        present = family.term_set()
        candidates = []
        for choice in itertools.product(*[[(r + 1, q + 1, p) for q in range(n) for p in (1, 2)]
                                          for r, n in enumerate(family.region_sizes)]):
            sequence = OperatorSequence(choice)
            if sequence.key() not in present:
                candidates.append(sequence)
        if not candidates:
            return []

        matrix = PauliUtils.anticommutation_matrix(
            sequence_strings(candidates, family.region_sizes), members)
        return [c for c, row in zip(candidates, matrix) if np.all(row)]


class FamilyRenderer:
    """Text drawing of an operator family as the tree it was grown from"""

    @staticmethod
    def render_ascii(family):
        """Draw the sequences as a tree, one node per line

        Returns:
        str
        """
        trie = {}
        for sequence in family.sequences:
            node = trie
            for term in sequence.terms:
                node = node.setdefault(term, {})

        lines = ["k={} sequences={} region sizes={}".format(
            family.k, len(family), ",".join(str(n) for n in family.region_sizes))]

        def draw(node, indent):
            items = list(node.items())
            for position, ((region, qubit, pauli), child) in enumerate(items):
                last = position == len(items) - 1
                lines.append("{}{}-- {}{} (region {})".format(
                    indent, '`' if last else '+', PAULI_NAMES[pauli], qubit, region))
                draw(child, indent + ('    ' if last else '|   '))

        draw(trie, '')
        return "\n".join(lines)
