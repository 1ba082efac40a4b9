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
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from ..criteria import CriteriaUtils
from ..pauli import PauliUtils
from ..states import DensityMatrix, Partition, PureState, ReducedStateCache, StateUtils
from ..trees import OperatorFamily, TreeUtils
from ..utils import CRITERION_TOL, THRESHOLD_SLACK, DimensionMismatchError, DomainError, \
    InternalConsistencyError, InvalidStateError, PartitionError, RegionTooSmallError

# Werner visibility at or below which no POVM Bell inequality is violated
POVM_THRESHOLD = Fraction(5, 12)
# Werner visibility at or below which no projective Bell inequality is violated
PROJECTIVE_THRESHOLD = Fraction(2, 3)


@dataclass(frozen=True)
class FamilyBound:
    value: float
    zb_value: float
    max_squared_norm: float
    copies: int


@dataclass(frozen=True)
class WernerClassification:
    category: 'WernerCategory'
    visibility: float
    cap: Fraction
    exceeds_cap: bool


class WernerCategory(Enum):
    NO_POVM_VIOLATION = 'no-POVM-violation'
    NO_PROJECTIVE_VIOLATION = 'no-projective-violation'
    UNCONSTRAINED = 'unconstrained'


class ExpectationVector:
    """Expectations of the members of an operator family, in family order"""

    def __init__(self, components, family):
        components = np.array(components, dtype=float)
        if components.size and np.max(np.abs(components)) > 1 + CRITERION_TOL:
            raise InvalidStateError("expectation of an involution outside [-1, 1]")
        components.flags.writeable = False
        self.components = components
        self.family = family

    def squared_norm(self):
        return float(np.sum(self.components ** 2))

    def __len__(self):
        return len(self.components)

    def __repr__(self):
        return "ExpectationVector(size={}, |v|^2={:.6g})".format(
            len(self.components), self.squared_norm())


class VisibilityCap:
    """(R + 2) / (3R) with R = max(N_A, N_B), kept as an exact fraction"""

    def __init__(self, region_sizes):
        self.region_sizes = tuple(int(n) for n in region_sizes)
        if min(self.region_sizes) < 1:
            raise DomainError("region sizes must be positive, got {}".format(self.region_sizes))
        largest = max(self.region_sizes)
        self.cap = Fraction(largest + 2, 3 * largest)

    @property
    def value(self):
        return float(self.cap)

    def __repr__(self):
        return "VisibilityCap({}, sizes={})".format(self.cap, self.region_sizes)


class MonogamyUtils:
    """Norm bounds of anti-commuting expectation vectors and Werner visibility caps"""

    @staticmethod
    def expectation_vector(state, family):
        """<O_i> for every member of a family

        Arguments:
        state - DensityMatrix or PureState spanning the family's qubits
        family - OperatorFamily (laid out region 1 first) or a list of PauliString

        Returns:
        ExpectationVector
        """
        strings = family.to_pauli_strings() if isinstance(family, OperatorFamily) \
            else list(family)
        components = []
        for string in strings:
            if string.qubit_count != state.qubit_count:
                raise DimensionMismatchError("{}-qubit operator on a {}-qubit state".format(
                    string.qubit_count, state.qubit_count))
            support = string.support()
            if not support:
                components.append(1.0)
                continue
            labels = string.labels
            ops = [PauliUtils.pauli_matrix(labels[q]) for q in support]
            components.append(StateUtils.expectation(state, support, ops))
        return ExpectationVector(components, family)

    @staticmethod
    def _pair_tensors(state, partition, frames, cache):
        cache = cache if cache is not None else ReducedStateCache(state)
        region_a, region_b = partition.regions
        tensors = np.zeros((len(region_a), len(region_b), 2, 2))
        for a, i in enumerate(region_a):
            for b, j in enumerate(region_b):
                pair = DensityMatrix(cache.reduced_matrix((i, j)))
                tensors[a, b] = CriteriaUtils.correlation_tensor(pair, frames).values
        return tensors

    @staticmethod
    def _oriented(partition, frames):
        if partition.region_count != 2:
            raise PartitionError("expected 2 regions, got {}".format(partition.region_count))
        size_a, size_b = partition.region_sizes
        if size_b >= 2:
            return partition, list(frames)
        if size_a >= 2:
            logging.debug("region B has one qubit; pairing over region A instead")
            return partition.swapped(), list(frames)[::-1]
        raise RegionTooSmallError("the P/Q pairing needs a region of at least 2 qubits")

    @staticmethod
    def pq_vectors(state, partition, frames, cache=None):
        """The four-component P and Q vectors of every cross-region pair

        With T^{ij} the x/y correlation tensor of qubits i (region A) and j
        (region B), and j + 1 taken cyclically within region B:
        P^{ij} = (T_xx^{ij}, T_xy^{ij}, T_yx^{i,j+1}, T_yy^{i,j+1})
        Q^{ij} = (T_xx^{i,j+1}, T_xy^{i,j+1}, T_yx^{ij}, T_yy^{ij})
        The four operators behind each vector anti-commute pairwise.

        Region B must hold at least two qubits; if it holds one and region A
        more, the regions are swapped.

        Returns:
        (P, Q) numpy arrays of shape (N_A, N_B, 4)
        """
        partition, frames = MonogamyUtils._oriented(partition, frames)
        tensors = MonogamyUtils._pair_tensors(state, partition, frames, cache)
        shifted = np.roll(tensors, -1, axis=1)
        p = np.concatenate([tensors[:, :, 0, :], shifted[:, :, 1, :]], axis=2)
        q = np.concatenate([shifted[:, :, 0, :], tensors[:, :, 1, :]], axis=2)
        return p, q

    @staticmethod
    def pq_bound(state, partition, frames, cache=None):
        """L of the effective state, assembled from the P and Q vectors

        L = (|sum P|^2 + |sum Q|^2) / (2 N_A^2 N_B^2). Each P and Q has norm at
        most one, so L <= 1. The result is checked against the direct
        correlation-tensor route.

        Arguments:
        state - DensityMatrix or PureState
        partition - Partition with 2 regions, one of them >= 2 qubits
        frames - two MeasurementFrame objects (region order)
        cache - optional ReducedStateCache

        Returns:
        float
        """
        cache = cache if cache is not None else ReducedStateCache(state)
        p, q = MonogamyUtils.pq_vectors(state, partition, frames, cache)
        size_a, size_b = p.shape[:2]
        value = (np.sum(np.sum(p, axis=(0, 1)) ** 2) + np.sum(np.sum(q, axis=(0, 1)) ** 2)) \
            / (2 * size_a ** 2 * size_b ** 2)

        effective = StateUtils.effective_state(state, partition, cache=cache)
        direct = CriteriaUtils.zb_value(CriteriaUtils.correlation_tensor(effective, frames))
        if abs(value - direct) > CRITERION_TOL:
            raise InternalConsistencyError(
                "P/Q value {:.15g} differs from the tensor value {:.15g}".format(value, direct))
        logging.debug("largest P/Q squared norm {:.6g}".format(
            max(np.max(np.sum(p ** 2, axis=2)), np.max(np.sum(q ** 2, axis=2)))))
        return float(value)

    @staticmethod
    def family_bound(state, partition, frames, family, cache=None):
        """L of a K-region effective state, grouped into anti-commuting vectors

        Every shifted copy of the family picks, for each label tuple, one qubit
        tuple; together the copies use every (label tuple, qubit tuple) pair
        once. The correlation tensor of the effective state is therefore the
        mean of the copies' expectation vectors, and L = |mean|^2 is at most
        the largest squared norm of a single copy.

        Arguments:
        state - DensityMatrix or PureState
        partition - Partition with family.k regions, each at least as large
                    as the family's region
        frames - one MeasurementFrame per region
        family - OperatorFamily holding each label tuple once
        cache - optional ReducedStateCache

        Returns:
        FamilyBound(value, zb_value, max_squared_norm, copies)
        """
        if partition.region_count != family.k:
            raise DimensionMismatchError("{}-region family on a {}-region partition".format(
                family.k, partition.region_count))
        for j, (size, needed) in enumerate(zip(partition.region_sizes, family.region_sizes)):
            if size < needed:
                raise RegionTooSmallError("region {} has {} qubits, the family needs {}".format(
                    j + 1, size, needed))
        cache = cache if cache is not None else ReducedStateCache(state)
        stacks = [PauliUtils.axis_observables(f) for f in frames]

        tensors = {}
        for qubits in itertools.product(*partition.regions):
            tensors[qubits] = StateUtils.local_expectations(
                cache.reduced_matrix(qubits), stacks)

        vectors = []
        for _, copy in TreeUtils.vector_families(family, partition.region_sizes):
            components = []
            for sequence in copy.sequences:
                qubits = tuple(partition.regions[r - 1][sequence.qubit(r) - 1]
                               for r in range(1, family.k + 1))
                labels = tuple(sequence.pauli(r) - 1 for r in range(1, family.k + 1))
                components.append(tensors[qubits][labels])
            vectors.append(components)
        vectors = np.array(vectors)

        value = float(np.sum(np.mean(vectors, axis=0) ** 2))
        effective = StateUtils.effective_state(state, partition, cache=cache)
        direct = CriteriaUtils.zb_value(CriteriaUtils.correlation_tensor(effective, frames))
        if len(family) == 2 ** family.k and abs(value - direct) > CRITERION_TOL:
            raise InternalConsistencyError(
                "grouped value {:.15g} differs from the tensor value {:.15g}".format(
                    value, direct))
        return FamilyBound(value, direct, float(np.max(np.sum(vectors ** 2, axis=1))),
                           len(vectors))

    @staticmethod
    def singlet_monogamy_cap(size_a, size_b):
        """Largest Werner visibility an effective state of an N_A | N_B split can reach

        Returns:
        VisibilityCap
        """
        return VisibilityCap((size_a, size_b))

    @staticmethod
    def werner_classify(visibility, size_a, size_b):
        """Place a Werner visibility against the 5/12 and 2/3 thresholds

        The projective threshold is taken as exactly 2/3 (the numerical
        estimate 0.66 sits just below it).

        Arguments:
        visibility - V in [-1/3, 1]
        size_a, size_b - region sizes, for the singlet-monogamy cap

        Returns:
        WernerClassification; exceeds_cap marks visibilities no underlying
        state of that split can produce
        """
        visibility = float(visibility)
        if visibility < -1.0 / 3.0 - THRESHOLD_SLACK or visibility > 1.0 + THRESHOLD_SLACK:
            raise InvalidStateError("visibility {} outside [-1/3, 1]".format(visibility))
        if visibility <= float(POVM_THRESHOLD) + THRESHOLD_SLACK:
            category = WernerCategory.NO_POVM_VIOLATION
        elif visibility <= float(PROJECTIVE_THRESHOLD) + THRESHOLD_SLACK:
            category = WernerCategory.NO_PROJECTIVE_VIOLATION
        else:
            category = WernerCategory.UNCONSTRAINED
        cap = MonogamyUtils.singlet_monogamy_cap(size_a, size_b)
        return WernerClassification(category, visibility, cap,
                                    visibility > cap.value + THRESHOLD_SLACK)

    @staticmethod
    def max_effective_visibility(state, partition, cache=None):
        """Werner visibility of the effective two-qubit state"""
        if partition.region_count != 2:
            raise PartitionError("expected 2 regions, got {}".format(partition.region_count))
        effective = StateUtils.effective_state(state, partition, cache=cache)
        return StateUtils.twirl_werner(effective).visibility

    @staticmethod
    def maximize_effective_visibility(size_a, size_b):
        """Largest effective visibility over all states of N_A + N_B qubits

        The mean singlet fidelity is linear in the state, so its maximum is the
        top eigenvalue of the averaged singlet projector
        (1 / N_A N_B) sum_ij (1 - sigma_i . sigma_j) / 4, reached by the
        matching eigenvector.

        Returns:
        (visibility, PureState, Partition) with region A = first N_A qubits
        """
        partition = Partition.from_sizes((size_a, size_b))
        qubit_count = size_a + size_b
        pairs = [(i, j, 1.0) for i in partition.regions[0] for j in partition.regions[1]]
        exchange = StateUtils.heisenberg_hamiltonian(qubit_count, pairs)
        energies, vectors = np.linalg.eigh(exchange)
        fidelity = (len(pairs) - energies[0]) / (4 * len(pairs))
        state = PureState.normalized(vectors[:, 0])
        return (4 * fidelity - 1) / 3, state, partition
