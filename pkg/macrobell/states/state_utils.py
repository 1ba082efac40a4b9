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
from functools import reduce

import numpy as np
from scipy.stats import unitary_group

from ..utils import DENSE_QUBIT_LIMIT, PURE_QUBIT_LIMIT, HERMITIAN_TOL, TRACE_TOL, PSD_TOL, \
    UNIT_NORM_TOL, DimensionMismatchError, InvalidStateError, PartitionError, StateSizeError

# Regions larger than this are symmetrized by sampling permutations
EXACT_SYMMETRIZE_LIMIT = 5
# Seed of the sampled fallback when no generator is given
SYMMETRIZE_SEED = 0

_SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
_SINGLET.flags.writeable = False


def _qubit_count(dimension, what):
    count = int(dimension).bit_length() - 1
    if dimension < 2 or 2 ** count != dimension:
        raise DimensionMismatchError(
            "{} dimension {} is not a power of two".format(what, dimension))
    return count


class DensityMatrix:
    """Dense N-qubit density matrix

    Qubit 0 is the most significant position of the computational basis index.
    The matrix is checked for Hermiticity, unit trace and positivity on
    construction and then frozen.

    Fields:
    matrix - read-only complex numpy array of shape (2^N, 2^N)
    qubit_count - N
    """

    def __init__(self, matrix):
        matrix = np.array(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatchError(
                "density matrix must be square, got shape {}".format(matrix.shape))
        qubit_count = _qubit_count(matrix.shape[0], "density matrix")
        if qubit_count > DENSE_QUBIT_LIMIT:
            raise StateSizeError("{} qubits exceed the dense limit of {}".format(
                qubit_count, DENSE_QUBIT_LIMIT))

        asymmetry = np.max(np.abs(matrix - matrix.conj().T))
        if asymmetry > HERMITIAN_TOL:
            raise InvalidStateError("matrix is not Hermitian (deviation {:.3g})".format(asymmetry))
        trace = np.trace(matrix).real
        if abs(trace - 1.0) > TRACE_TOL:
            raise InvalidStateError("trace must be 1, got {:.15g}".format(trace))
        # symmetrize before the eigenvalue test so rounding noise does not leak in
        matrix = (matrix + matrix.conj().T) / 2
        smallest = np.linalg.eigvalsh(matrix)[0]
        if smallest < -PSD_TOL:
            raise InvalidStateError(
                "matrix is not positive semi-definite (eigenvalue {:.3g})".format(smallest))

        matrix.flags.writeable = False
        self.matrix = matrix
        self.qubit_count = qubit_count

    @property
    def dimension(self):
        return self.matrix.shape[0]

    @staticmethod
    def from_pure(state):
        return DensityMatrix(np.outer(state.amplitudes, state.amplitudes.conj()))

    def tensor(self, other):
        return DensityMatrix(np.kron(self.matrix, other.matrix))

    def __repr__(self):
        return "DensityMatrix(qubits={})".format(self.qubit_count)


class PureState:
    """Normalized state vector of N qubits

    Fields:
    amplitudes - read-only complex numpy array of length 2^N
    qubit_count - N
    """

    def __init__(self, amplitudes):
        amplitudes = np.array(amplitudes, dtype=complex).reshape(-1)
        qubit_count = _qubit_count(amplitudes.shape[0], "state vector")
        if qubit_count > PURE_QUBIT_LIMIT:
            raise StateSizeError("{} qubits exceed the pure-state limit of {}".format(
                qubit_count, PURE_QUBIT_LIMIT))
        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            raise InvalidStateError("state vector must have unit norm, got {:.15g}".format(norm))
        amplitudes.flags.writeable = False
        self.amplitudes = amplitudes
        self.qubit_count = qubit_count

    @staticmethod
    def normalized(vector):
        vector = np.asarray(vector, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise InvalidStateError("cannot normalize a zero vector")
        return PureState(vector / norm)

    def density_matrix(self):
        return DensityMatrix.from_pure(self)

    def __repr__(self):
        return "PureState(qubits={})".format(self.qubit_count)


class Partition:
    """Ordered list of disjoint, non-empty qubit regions

    Qubits not named by any region are ignored by the partition-driven
    operations (they are traced out).

    Fields:
    regions - tuple of tuples of qubit indices, each sorted ascending
    region_count - K
    """

    def __init__(self, regions, qubit_count=None):
        """Create a Partition

        Arguments:
        regions - iterable of iterables of non-negative qubit indices
        qubit_count - optional register size to validate against
        """
        normalized = []
        seen = set()
        for position, region in enumerate(regions):
            region = tuple(sorted(int(q) for q in region))
            if len(region) == 0:
                raise PartitionError("region {} is empty".format(position))
            if len(set(region)) != len(region):
                raise PartitionError("region {} repeats a qubit".format(position))
            if region[0] < 0:
                raise PartitionError("region {} has a negative qubit index".format(position))
            overlap = seen.intersection(region)
            if overlap:
                raise PartitionError("qubits {} appear in more than one region".format(
                    sorted(overlap)))
            seen.update(region)
            normalized.append(region)
        if len(normalized) == 0:
            raise PartitionError("a partition needs at least one region")
        self.regions = tuple(normalized)
        self.region_count = len(normalized)
        if qubit_count is not None:
            self.validate_for(qubit_count)

    @staticmethod
    def from_sizes(sizes):
        """Consecutive regions of the given sizes starting at qubit 0"""
        regions = []
        start = 0
        for size in sizes:
            regions.append(range(start, start + size))
            start += size
        return Partition(regions)

    @staticmethod
    def bipartitions(qubit_count, min_size=2):
        """All two-region partitions covering every qubit, each listed once

        Region A always holds qubit 0, so A|B and B|A are not both produced.

        Arguments:
        qubit_count - register size N
        min_size - smallest allowed region size. Default: 2

        Returns:
        A generator of Partition objects
        """
        rest = range(1, qubit_count)
        for size_a in range(max(min_size, 1), qubit_count - min_size + 1):
            for others in itertools.combinations(rest, size_a - 1):
                region_a = (0,) + others
                region_b = tuple(q for q in range(qubit_count) if q not in region_a)
                yield Partition([region_a, region_b])

    @property
    def region_sizes(self):
        return tuple(len(region) for region in self.regions)

    @property
    def qubits(self):
        return tuple(sorted(q for region in self.regions for q in region))

    def validate_for(self, qubit_count):
        if max(self.qubits) >= qubit_count:
            raise PartitionError("partition refers to qubit {} of a {}-qubit state".format(
                max(self.qubits), qubit_count))

    def swapped(self):
        """Same partition with the regions in reverse order"""
        return Partition(self.regions[::-1])

    def to_document(self):
        return [list(region) for region in self.regions]

    def __eq__(self, other):
        return isinstance(other, Partition) and self.regions == other.regions

    def __hash__(self):
        return hash(self.regions)

    def __repr__(self):
        return "Partition({})".format(" | ".join(
            ",".join(str(q) for q in region) for region in self.regions))


class WernerState:
    """V |psi-><psi-| + (1 - V) 1/4 with -1/3 <= V <= 1"""

    def __init__(self, visibility):
        visibility = float(visibility)
        if visibility < -1.0 / 3.0 - TRACE_TOL or visibility > 1.0 + TRACE_TOL:
            raise InvalidStateError("visibility {} outside [-1/3, 1]".format(visibility))
        self.visibility = min(1.0, max(-1.0 / 3.0, visibility))

    def matrix(self):
        singlet = np.outer(_SINGLET, _SINGLET.conj())
        return DensityMatrix(self.visibility * singlet + (1 - self.visibility) * np.eye(4) / 4)

    def __repr__(self):
        return "WernerState(V={:.6g})".format(self.visibility)


class ReducedStateCache:
    """Memoises reduced matrices of a single state

    Sweeps over many partitions of one state ask for the same few-qubit
    reductions again and again.
    """

    def __init__(self, state):
        self.state = state
        self._reduced = {}

    def reduced_matrix(self, qubits):
        key = tuple(qubits)
        if key not in self._reduced:
            self._reduced[key] = StateUtils.reduced_matrix(self.state, key)
        return self._reduced[key]

    def __len__(self):
        return len(self._reduced)


class StateUtils:
    """Dense state operations: reductions, effective states, symmetrization and fixtures"""

    @staticmethod
    def as_density(state):
        if isinstance(state, DensityMatrix):
            return state
        if isinstance(state, PureState):
            return state.density_matrix()
        raise InvalidStateError("expected a DensityMatrix or PureState, got {}".format(
            type(state).__name__))

    @staticmethod
    def _check_qubits(qubits, qubit_count):
        qubits = [int(q) for q in qubits]
        if len(qubits) == 0:
            raise PartitionError("at least one qubit must be kept")
        if len(set(qubits)) != len(qubits):
            raise PartitionError("qubit list {} repeats an index".format(qubits))
        if min(qubits) < 0 or max(qubits) >= qubit_count:
            raise PartitionError("qubits {} out of range for {} qubits".format(
                qubits, qubit_count))
        return qubits

    @staticmethod
    def reduced_matrix(state, qubits):
        """Reduced density matrix on the given qubits, in the given order

        Arguments:
        state - DensityMatrix or PureState
        qubits - sequence of distinct qubit indices; the first one becomes the
                 most significant qubit of the result

        Returns:
        Complex numpy array of shape (2^k, 2^k)
        """
        n = state.qubit_count
        keep = StateUtils._check_qubits(qubits, n)
        rest = [q for q in range(n) if q not in keep]
        dk = 2 ** len(keep)
        dr = 2 ** len(rest)

        if isinstance(state, PureState):
            psi = state.amplitudes.reshape([2] * n).transpose(keep + rest).reshape(dk, dr)
            return psi @ psi.conj().T

        rho = StateUtils.as_density(state).matrix.reshape([2] * (2 * n))
        order = keep + rest + [n + q for q in keep] + [n + q for q in rest]
        rho = rho.transpose(order).reshape(dk, dr, dk, dr)
        return np.trace(rho, axis1=1, axis2=3)

    @staticmethod
    def partial_trace(state, keep):
        """Trace out every qubit not in keep

        Arguments:
        state - DensityMatrix or PureState
        keep - non-empty collection of qubit indices

        Returns:
        DensityMatrix on len(keep) qubits, qubits in ascending order
        """
        keep = StateUtils._check_qubits(keep, state.qubit_count)
        return DensityMatrix(StateUtils.reduced_matrix(state, sorted(keep)))

    @staticmethod
    def region_sites(region, block_size=1):
        """Ordered qubit tuples standing for one site of a region"""
        if block_size == 1:
            return [(q,) for q in region]
        if block_size < 1 or block_size > len(region):
            raise PartitionError("block size {} does not fit a region of {} qubits".format(
                block_size, len(region)))
        return list(itertools.permutations(region, block_size))

    @staticmethod
    def effective_state(state, partition, block_size=1, cache=None):
        """Average of the cross-region reduced states

        For every way of choosing one site per region, the reduced state of the
        chosen qubits is taken (region order preserved) and all of them are
        averaged with equal weight. With block_size M > 1 a site is an ordered
        M-tuple of distinct qubits of the region.

        Arguments:
        state - DensityMatrix or PureState
        partition - Partition of the state's qubits
        block_size - qubits per site. Default: 1
        cache - optional ReducedStateCache of the same state

        Returns:
        DensityMatrix on K * block_size qubits
        """
        partition.validate_for(state.qubit_count)
        if cache is not None and cache.state is not state:
            raise DimensionMismatchError("cache belongs to a different state")
        reduce_fn = cache.reduced_matrix if cache is not None \
            else (lambda qubits: StateUtils.reduced_matrix(state, qubits))

        sites = [StateUtils.region_sites(region, block_size) for region in partition.regions]
        dimension = 2 ** (partition.region_count * block_size)
        total = np.zeros((dimension, dimension), dtype=complex)
        count = 0
        for choice in itertools.product(*sites):
            total += reduce_fn([q for site in choice for q in site])
            count += 1
        return DensityMatrix(total / count)

    @staticmethod
    def _permute_qubits(tensor, qubit_count, mapping):
        """Conjugate a [2]*2N tensor by the qubit permutation q -> mapping[q]"""
        axes = [0] * qubit_count
        for source, target in enumerate(mapping):
            axes[target] = source
        return tensor.transpose(axes + [qubit_count + a for a in axes])

    @staticmethod
    def permutation_symmetrize(state, partition, rng=None, samples=2000):
        """Average a state over all permutations of qubits within each region

        Permutations in different regions commute, so the average over the
        product group is taken one region at a time. Regions up to
        EXACT_SYMMETRIZE_LIMIT qubits are enumerated exactly; larger regions
        are averaged over `samples` uniformly drawn permutations.

        Arguments:
        state - DensityMatrix or PureState
        partition - Partition of the state's qubits
        rng - numpy.random.Generator for the sampled fallback. Default: a generator
              seeded with SYMMETRIZE_SEED, so repeated calls agree
        samples - permutations drawn per large region. Default: 2000

        Returns:
        DensityMatrix invariant under within-region permutations
        """
        rho = StateUtils.as_density(state)
        partition.validate_for(rho.qubit_count)
        n = rho.qubit_count
        tensor = rho.matrix.reshape([2] * (2 * n))

        for region in partition.regions:
            if len(region) == 1:
                continue
            if len(region) <= EXACT_SYMMETRIZE_LIMIT:
                orderings = list(itertools.permutations(region))
            else:
                if rng is None:
                    rng = np.random.default_rng(SYMMETRIZE_SEED)
                logging.warning("sampling {} permutations for a region of {} qubits".format(
                    samples, len(region)))
                orderings = [tuple(rng.permutation(region)) for _ in range(samples)]
            logging.debug("symmetrizing region {} over {} permutations".format(
                region, len(orderings)))

            averaged = np.zeros_like(tensor)
            for ordering in orderings:
                mapping = list(range(n))
                for source, target in zip(region, ordering):
                    mapping[source] = target
                averaged += StateUtils._permute_qubits(tensor, n, mapping)
            tensor = averaged / len(orderings)

        return DensityMatrix(tensor.reshape(2 ** n, 2 ** n))

    @staticmethod
    def chain_couplings(qubit_count, coupling=1.0, periodic=False):
        """Nearest-neighbour edges (i, i + 1, J) of a spin chain"""
        edges = [(i, i + 1, coupling) for i in range(qubit_count - 1)]
        if periodic and qubit_count > 2:
            edges.append((qubit_count - 1, 0, coupling))
        return edges

    @staticmethod
    def heisenberg_hamiltonian(qubit_count, couplings):
        """H = sum_e J_e (XX + YY + ZZ) on the edges, as a dense real matrix

        Uses XX + YY + ZZ = 2 SWAP - 1, so every term is a basis permutation.
        """
        if qubit_count > DENSE_QUBIT_LIMIT:
            raise StateSizeError("{} qubits exceed the dense limit of {}".format(
                qubit_count, DENSE_QUBIT_LIMIT))
        dimension = 2 ** qubit_count
        index = np.arange(dimension)
        hamiltonian = np.zeros((dimension, dimension))
        for i, j, weight in couplings:
            i, j = int(i), int(j)
            if i == j or not (0 <= i < qubit_count and 0 <= j < qubit_count):
                raise PartitionError("invalid coupling edge ({}, {})".format(i, j))
            if not np.isfinite(weight):
                raise InvalidStateError("coupling on edge ({}, {}) is not finite".format(i, j))
            shift_i = qubit_count - 1 - i
            shift_j = qubit_count - 1 - j
            differ = ((index >> shift_i) ^ (index >> shift_j)) & 1
            swapped = index ^ (differ << shift_i) ^ (differ << shift_j)
            hamiltonian[swapped, index] += 2 * weight
            hamiltonian[index, index] -= weight
        return hamiltonian

    @staticmethod
    def heisenberg_thermal(qubit_count, beta, couplings):
        """Gibbs state exp(-beta H) / Z of an isotropic Heisenberg model

        Arguments:
        qubit_count - N, at most DENSE_QUBIT_LIMIT
        beta - inverse temperature, non-negative
        couplings - list of (i, j, J) edges

        Returns:
        DensityMatrix, invariant under collective rotations U x ... x U
        """
        if beta < 0 or not np.isfinite(beta):
            raise InvalidStateError("inverse temperature must be finite and >= 0")
        hamiltonian = StateUtils.heisenberg_hamiltonian(qubit_count, couplings)
        energies, vectors = np.linalg.eigh(hamiltonian)
        weights = np.exp(-beta * (energies - energies[0]))
        weights /= weights.sum()
        return DensityMatrix((vectors * weights) @ vectors.conj().T)

    @staticmethod
    def twirl_werner(state):
        """Werner visibility of a two-qubit state

        Twirling keeps exactly the singlet fidelity F, so V = (4F - 1) / 3.

        Arguments:
        state - two-qubit DensityMatrix (or PureState)

        Returns:
        WernerState
        """
        if state.qubit_count != 2:
            raise DimensionMismatchError("twirl needs a 2-qubit state, got {} qubits".format(
                state.qubit_count))
        rho = StateUtils.as_density(state).matrix
        fidelity = np.vdot(_SINGLET, rho @ _SINGLET).real
        return WernerState((4 * fidelity - 1) / 3)

    @staticmethod
    def twirl(state):
        """The rotationally invariant part of a two-qubit state"""
        return StateUtils.twirl_werner(state).matrix()

    @staticmethod
    def singlet_vector():
        return _SINGLET

    @staticmethod
    def random_unitary(rng, dimension=2):
        """Haar-random unitary

        Arguments:
        rng - numpy.random.Generator
        dimension - matrix size. Default: 2
        """
        return unitary_group.rvs(dimension, random_state=rng)

    @staticmethod
    def collective_rotation(state, unitary):
        """U x ... x U applied to every qubit of the state

        Returns:
        DensityMatrix
        """
        rho = StateUtils.as_density(state)
        full = reduce(np.kron, [unitary] * rho.qubit_count)
        return DensityMatrix(full @ rho.matrix @ full.conj().T)

    @staticmethod
    def named_state(name, qubit_count, rng=None):
        """Fixture states

        Known names: singlet, ghz, w, product, max_mixed, singlet_cover,
        random_pure, random_mixed. singlet_cover pairs qubit i with i + N/2.

        Arguments:
        name - state name
        qubit_count - N
        rng - numpy.random.Generator, required for the random states

        Returns:
        PureState or DensityMatrix
        """
        n = int(qubit_count)
        if n < 1:
            raise StateSizeError("a state needs at least one qubit")
        mixed = name in ('max_mixed', 'random_mixed')
        limit = DENSE_QUBIT_LIMIT if mixed else PURE_QUBIT_LIMIT
        if n > limit:
            raise StateSizeError("{} qubits exceed the limit of {} for '{}'".format(
                n, limit, name))
        dimension = 2 ** n

        if name == 'singlet':
            if n != 2:
                raise StateSizeError("the singlet is a 2-qubit state")
            return PureState(_SINGLET)
        if name == 'ghz':
            amplitudes = np.zeros(dimension, dtype=complex)
            amplitudes[0] = amplitudes[-1] = 1 / np.sqrt(2)
            return PureState(amplitudes)
        if name == 'w':
            amplitudes = np.zeros(dimension, dtype=complex)
            amplitudes[[2 ** q for q in range(n)]] = 1 / np.sqrt(n)
            return PureState(amplitudes)
        if name == 'product':
            amplitudes = np.zeros(dimension, dtype=complex)
            amplitudes[0] = 1
            return PureState(amplitudes)
        if name == 'singlet_cover':
            if n % 2:
                raise StateSizeError("singlet_cover needs an even qubit count")
            half = n // 2
            psi = reduce(np.kron, [_SINGLET] * half).reshape([2] * n)
            # factor k holds axes (2k, 2k+1); they become qubits (k, k + half)
            order = [2 * k for k in range(half)] + [2 * k + 1 for k in range(half)]
            return PureState(psi.transpose(order).reshape(-1))
        if name == 'max_mixed':
            return DensityMatrix(np.eye(dimension) / dimension)
        if name in ('random_pure', 'random_mixed'):
            if rng is None:
                raise InvalidStateError("'{}' needs an rng".format(name))
            if name == 'random_pure':
                return PureState.normalized(rng.normal(size=dimension)
                                            + 1j * rng.normal(size=dimension))
            ginibre = rng.normal(size=(dimension, dimension)) \
                + 1j * rng.normal(size=(dimension, dimension))
            rho = ginibre @ ginibre.conj().T
            return DensityMatrix(rho / np.trace(rho).real)
        raise InvalidStateError("unknown state name '{}'".format(name))

    @staticmethod
    def random_state(qubit_count, rng, pure_fraction=0.5):
        """Random pure or mixed state, pure with probability pure_fraction"""
        name = 'random_pure' if rng.random() < pure_fraction else 'random_mixed'
        return StateUtils.named_state(name, qubit_count, rng)

    @staticmethod
    def local_expectations(matrix, operator_stacks, local_dim=2):
        """Expectations of every product of local operators

        The matrix is read as K sites of dimension local_dim. Site m gets a
        stack of operators of shape (n_m, local_dim, local_dim) and the result
        holds Tr((O_0[o_0] x ... x O_{K-1}[o_{K-1}]) rho) at index (o_0, ...).

        Arguments:
        matrix - numpy array (or DensityMatrix) of shape (d^K, d^K)
        operator_stacks - list of K operator stacks
        local_dim - site dimension d. Default: 2

        Returns:
        Real numpy array of shape (n_0, ..., n_{K-1})
        """
        if isinstance(matrix, DensityMatrix):
            matrix = matrix.matrix
        sites = len(operator_stacks)
        if matrix.shape != (local_dim ** sites, local_dim ** sites):
            raise DimensionMismatchError(
                "matrix of shape {} does not hold {} sites of dimension {}".format(
                    matrix.shape, sites, local_dim))
        operands = [matrix.reshape([local_dim] * (2 * sites)),
                    list(range(sites)) + list(range(sites, 2 * sites))]
        for m, stack in enumerate(operator_stacks):
            stack = np.asarray(stack)
            if stack.ndim != 3 or stack.shape[1:] != (local_dim, local_dim):
                raise DimensionMismatchError(
                    "operator stack {} has shape {}".format(m, stack.shape))
            # Tr(O rho) = sum O[r, c] rho[c, r]
            operands += [stack, [2 * sites + m, sites + m, m]]
        output = list(range(2 * sites, 3 * sites))
        return np.einsum(*operands, output, optimize=True).real

    @staticmethod
    def expectation(state, qubits, local_ops):
        """Expectation of a product of single-qubit operators, on the full state

        Each operator is applied to its qubit of the whole register, without
        forming reduced states.

        Arguments:
        state - DensityMatrix or PureState
        qubits - qubit indices
        local_ops - one 2x2 operator per qubit

        Returns:
        Real expectation value
        """
        n = state.qubit_count
        qubits = StateUtils._check_qubits(qubits, n)
        if len(local_ops) != len(qubits):
            raise DimensionMismatchError("one operator per qubit is required")

        if isinstance(state, PureState):
            psi = state.amplitudes.reshape([2] * n)
            phi = psi
            for q, op in zip(qubits, local_ops):
                phi = np.moveaxis(np.tensordot(op, phi, axes=([1], [q])), 0, q)
            return float(np.vdot(psi, phi).real)

        rho = StateUtils.as_density(state).matrix.reshape([2] * (2 * n))
        for q, op in zip(qubits, local_ops):
            rho = np.moveaxis(np.tensordot(op, rho, axes=([1], [q])), 0, q)
        dimension = 2 ** n
        return float(np.trace(rho.reshape(dimension, dimension)).real)
