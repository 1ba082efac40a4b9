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
from typing import Optional

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix, hstack, identity, vstack

from ..criteria import CriteriaUtils
from ..pauli import Direction, PauliUtils
from ..states import StateUtils
from ..utils import POVM_TOL, PROBABILITY_TOL, DimensionMismatchError, DomainError, \
    ScenarioError, ScenarioTooLargeError, SettingsBudgetError

# Largest number of joint deterministic strategies handed to the LP
MAX_STRATEGIES = 10 ** 6
# Negative weight tolerated in a local model
WEIGHT_TOL = 1e-10

# CHSH optimizer defaults
GRID_POINTS = 20
REFINE_STARTS = 5
REFINE_ROUNDS = 200


@dataclass(frozen=True)
class MembershipVerdict:
    feasible: bool
    model: Optional['LHVModel']
    residual: float
    strategy_count: int


@dataclass(frozen=True)
class ChshResult:
    value: float
    directions: tuple
    analytic_bound: float


class BellScenario:
    """Measurement settings of a K-region Bell experiment

    Region X has S_X settings; every setting of the region has the same
    number O_X of outcomes, each a POVM element on 2^block_size dimensions.

    Fields:
    elements - list of K read-only arrays of shape (S_X, O_X, d, d)
    block_size - qubits measured together as one site
    outcome_values - list of K arrays of outcome values used by correlators
    """

    def __init__(self, measurements, block_size=1, outcome_values=None):
        """Create a BellScenario

        Arguments:
        measurements - per region, a list of settings; a setting is a list of
                       POVM elements (d x d matrices) that sum to the identity
        block_size - qubits per site. Default: 1
        outcome_values - per region, the value of each outcome. Default: +1, -1, ...
        """
        self.block_size = int(block_size)
        if self.block_size < 1:
            raise ScenarioError("block size must be positive")
        dimension = 2 ** self.block_size
        if len(measurements) == 0:
            raise ScenarioError("a scenario needs at least one region")

        self.elements = []
        for x, settings in enumerate(measurements):
            if len(settings) == 0:
                raise ScenarioError("region {} has no settings".format(x))
            counts = {len(setting) for setting in settings}
            if len(counts) != 1:
                raise ScenarioError("settings of region {} differ in outcome count".format(x))
            stack = np.array(settings, dtype=complex)
            if stack.shape[2:] != (dimension, dimension):
                raise DimensionMismatchError(
                    "region {} elements have shape {}, expected {}x{}".format(
                        x, stack.shape[2:], dimension, dimension))
            for i, setting in enumerate(stack):
                BellScenario._check_povm(setting, "region {} setting {}".format(x, i))
            stack.flags.writeable = False
            self.elements.append(stack)

        if outcome_values is None:
            outcome_values = [1.0 - 2.0 * np.arange(stack.shape[1]) for stack in self.elements]
        self.outcome_values = [np.asarray(v, dtype=float) for v in outcome_values]

    @staticmethod
    def _check_povm(setting, where):
        dimension = setting.shape[-1]
        for j, element in enumerate(setting):
            if np.max(np.abs(element - element.conj().T)) > POVM_TOL:
                raise ScenarioError("{} element {} is not Hermitian".format(where, j))
            if np.linalg.eigvalsh(element)[0] < -POVM_TOL:
                raise ScenarioError("{} element {} is not positive".format(where, j))
        if np.max(np.abs(setting.sum(axis=0) - np.eye(dimension))) > POVM_TOL:
            raise ScenarioError("{} elements do not sum to the identity".format(where))

    @staticmethod
    def projective(directions):
        """Qubit scenario with two-outcome spin measurements

        Arguments:
        directions - per region, a list of Direction objects; outcome 0 is
                     spin up (+1) along the direction

        Returns:
        BellScenario
        """
        identity_2 = np.eye(2)
        measurements = []
        for region in directions:
            settings = []
            for direction in region:
                observable = PauliUtils.direction_observable(direction)
                settings.append([(identity_2 + observable) / 2, (identity_2 - observable) / 2])
            measurements.append(settings)
        return BellScenario(measurements)

    @staticmethod
    def random_projective(settings_per_region, rng):
        return BellScenario.projective([[Direction.random(rng) for _ in range(count)]
                                        for count in settings_per_region])

    @staticmethod
    def random_basis(settings_per_region, rng, block_size=1):
        """Each setting measures in a Haar-random basis of a 2^block_size site"""
        dimension = 2 ** block_size
        measurements = []
        for count in settings_per_region:
            settings = []
            for _ in range(count):
                basis = StateUtils.random_unitary(rng, dimension)
                settings.append([np.outer(basis[:, j], basis[:, j].conj())
                                 for j in range(dimension)])
            measurements.append(settings)
        return BellScenario(measurements, block_size=block_size)

    @property
    def region_count(self):
        return len(self.elements)

    @property
    def local_dim(self):
        return 2 ** self.block_size

    @property
    def settings_per_region(self):
        return tuple(stack.shape[0] for stack in self.elements)

    @property
    def outcome_counts(self):
        return tuple(stack.shape[1] for stack in self.elements)

    @property
    def distribution_shape(self):
        return self.settings_per_region + self.outcome_counts

    @property
    def strategy_shape(self):
        """Axes of the strategy weight tensor: one per (region, setting), sized O_X"""
        return tuple(o for s, o in zip(self.settings_per_region, self.outcome_counts)
                     for _ in range(s))

    @property
    def strategy_count(self):
        count = 1
        for size in self.strategy_shape:
            count *= size
        return count

    def __repr__(self):
        return "BellScenario(settings={}, outcomes={}, block_size={})".format(
            self.settings_per_region, self.outcome_counts, self.block_size)


class JointDistribution:
    """p(j_1..j_K | i_1..i_K) stored as an array of shape (S_1..S_K, O_1..O_K)"""

    def __init__(self, probabilities):
        probabilities = np.array(probabilities, dtype=float)
        if probabilities.ndim % 2 or probabilities.ndim == 0:
            raise DimensionMismatchError("expected settings axes followed by outcome axes")
        region_count = probabilities.ndim // 2
        if probabilities.size and np.min(probabilities) < -WEIGHT_TOL:
            raise ScenarioError("negative probability {:.3g}".format(np.min(probabilities)))
        totals = probabilities.sum(axis=tuple(range(region_count, 2 * region_count)))
        if np.max(np.abs(totals - 1)) > PROBABILITY_TOL:
            raise ScenarioError("probabilities of a setting tuple do not sum to 1")
        probabilities.flags.writeable = False
        self.probabilities = probabilities
        self.region_count = region_count
        signalling = self.signalling()
        if signalling > PROBABILITY_TOL:
            raise ScenarioError("distribution signals (deviation {:.3g})".format(signalling))

    def signalling(self):
        """Largest change of any region group's marginal under another region's setting"""
        worst = 0.0
        k = self.region_count
        for x in range(k):
            marginal = self.probabilities.sum(axis=k + x, keepdims=True)
            reference = np.take(marginal, [0], axis=x)
            worst = max(worst, float(np.max(np.abs(marginal - reference))))
        return worst

    def correlator(self, outcome_values):
        """E(i_1..i_K) = sum_j prod_X v_X(j_X) p(j | i)"""
        k = self.region_count
        result = self.probabilities
        for x in range(k):
            values = np.asarray(outcome_values[x], dtype=float)
            result = np.tensordot(result, values, axes=([k], [0]))
        return result

    def max_deviation(self, other):
        other = other.probabilities if isinstance(other, JointDistribution) else other
        return float(np.max(np.abs(self.probabilities - other)))


class LHVModel:
    """Weights of joint deterministic strategies

    weights has one axis per (region, setting) pair, region-major; the index
    along an axis is the outcome that strategy reports for that setting.
    """

    def __init__(self, weights, settings_per_region):
        weights = np.array(weights, dtype=float)
        self.settings_per_region = tuple(int(s) for s in settings_per_region)
        if weights.ndim != sum(self.settings_per_region):
            raise DimensionMismatchError("weight tensor has {} axes, expected {}".format(
                weights.ndim, sum(self.settings_per_region)))
        if weights.size and np.min(weights) < -WEIGHT_TOL:
            raise ScenarioError("negative strategy weight {:.3g}".format(np.min(weights)))
        if abs(weights.sum() - 1) > PROBABILITY_TOL:
            raise ScenarioError("strategy weights sum to {:.15g}".format(weights.sum()))
        weights.flags.writeable = False
        self.weights = weights

    def axis(self, region, setting):
        return sum(self.settings_per_region[:region]) + setting

    def strategies(self, threshold=0.0):
        """Yields (outcome vectors per region, weight) for weights above threshold"""
        for index in zip(*np.nonzero(self.weights > threshold)):
            vectors = []
            start = 0
            for count in self.settings_per_region:
                vectors.append(tuple(int(v) for v in index[start:start + count]))
                start += count
            yield tuple(vectors), float(self.weights[index])

    def to_document(self):
        return {
            'settings_per_region': list(self.settings_per_region),
            'strategies': [{'outcomes': [list(v) for v in vectors], 'weight': weight}
                           for vectors, weight in self.strategies()],
        }


class BellUtils:
    """Bell-scenario distributions, the deterministic-strategy local model and CHSH tools"""

    @staticmethod
    def quantum_distribution(state, scenario):
        """p(j | i) = Tr(rho (E^1_{i_1 j_1} x ... x E^K_{i_K j_K}))

        Arguments:
        state - DensityMatrix on K * block_size qubits
        scenario - BellScenario

        Returns:
        JointDistribution
        """
        rho = StateUtils.as_density(state)
        k = scenario.region_count
        if rho.qubit_count != k * scenario.block_size:
            raise DimensionMismatchError("{}-qubit state for {} sites of {} qubits".format(
                rho.qubit_count, k, scenario.block_size))
        stacks = [stack.reshape((-1,) + stack.shape[2:]) for stack in scenario.elements]
        values = StateUtils.local_expectations(rho.matrix, stacks, scenario.local_dim)
        shape = [n for pair in zip(scenario.settings_per_region, scenario.outcome_counts)
                 for n in pair]
        order = list(range(0, 2 * k, 2)) + list(range(1, 2 * k, 2))
        return JointDistribution(values.reshape(shape).transpose(order))

    @staticmethod
    def settings_budget(region_size, block_size):
        """Largest settings count, floor(N_X / M), the strategy construction supports"""
        region_size, block_size = int(region_size), int(block_size)
        if block_size < 1:
            raise DomainError("block size must be at least 1, got {}".format(block_size))
        if block_size > region_size:
            raise SettingsBudgetError("block of {} qubits does not fit a region of {}".format(
                block_size, region_size))
        return region_size // block_size

    @staticmethod
    def strategy_distribution(state, partition, scenario):
        """Local model read off a permutation-symmetric state

        Site i of region X (qubits i*M .. i*M + M - 1 of the region) is measured
        with setting i; the outcomes of all sites form the strategy vector m_X.
        The weight of a strategy tuple is the probability of that outcome
        pattern. Regions with fewer settings than sites leave the spare sites
        unmeasured, which is what repeating a setting and ignoring its extra
        outcomes gives.

        Arguments:
        state - DensityMatrix, symmetrized within the regions
        partition - Partition with one region per scenario region
        scenario - BellScenario

        Returns:
        LHVModel
        """
        if partition.region_count != scenario.region_count:
            raise DimensionMismatchError("{} regions for a {}-region scenario".format(
                partition.region_count, scenario.region_count))
        partition.validate_for(state.qubit_count)
        m = scenario.block_size
        qubits = []
        stacks = []
        for x, (region, settings) in enumerate(zip(partition.regions,
                                                   scenario.settings_per_region)):
            budget = BellUtils.settings_budget(len(region), m)
            if settings > budget:
                raise SettingsBudgetError(
                    "region {} has {} sites of {} qubits but {} settings".format(
                        x, budget, m, settings))
            for i in range(settings):
                qubits.extend(region[i * m:(i + 1) * m])
                stacks.append(scenario.elements[x][i])

        logging.debug("strategy weights over {} measured qubits, {} strategies".format(
            len(qubits), scenario.strategy_count))
        reduced = StateUtils.reduced_matrix(state, qubits)
        weights = StateUtils.local_expectations(reduced, stacks, scenario.local_dim)
        return LHVModel(weights, scenario.settings_per_region)

    @staticmethod
    def reconstruct_distribution(model, scenario):
        """p(j | i) = sum over strategies of weight * prod_X [m_X(i_X) = j_X]

        Returns:
        JointDistribution
        """
        if model.settings_per_region != scenario.settings_per_region:
            raise DimensionMismatchError("model and scenario settings differ")
        k = scenario.region_count
        probabilities = np.zeros(scenario.distribution_shape)
        axes = list(range(model.weights.ndim))
        for settings in itertools.product(*[range(s) for s in scenario.settings_per_region]):
            kept = [model.axis(x, i) for x, i in enumerate(settings)]
            probabilities[settings] = np.einsum(model.weights, axes, kept)
        logging.debug("reconstructed {} setting tuples over {} regions".format(
            int(np.prod(scenario.settings_per_region)), k))
        return JointDistribution(probabilities)

    @staticmethod
    def _strategy_matrix(scenario):
        """Sparse 0/1 matrix: rows are distribution entries, columns strategies"""
        count = scenario.strategy_count
        outcomes = np.array(np.unravel_index(np.arange(count), scenario.strategy_shape)).T
        offsets = np.concatenate([[0], np.cumsum(scenario.settings_per_region)[:-1]])
        rows = []
        columns = []
        for settings in itertools.product(*[range(s) for s in scenario.settings_per_region]):
            reported = [outcomes[:, offsets[x] + i] for x, i in enumerate(settings)]
            index = [np.full(count, i) for i in settings] + reported
            rows.append(np.ravel_multi_index(index, scenario.distribution_shape))
            columns.append(np.arange(count))
        rows = np.concatenate(rows)
        columns = np.concatenate(columns)
        size = int(np.prod(scenario.distribution_shape))
        return coo_matrix((np.ones(len(rows)), (rows, columns)), shape=(size, count))

    @staticmethod
    def lhv_membership(distribution, scenario, hint=None):
        """Is the distribution a mixture of deterministic strategies?

        Solves a phase-one linear program with HiGHS: minimize the total
        slack s+ + s- subject to D w + s+ - s- = p, sum w = 1 and w, s >= 0.
        The distribution is local when the optimal slack vanishes.

        Arguments:
        distribution - JointDistribution
        scenario - BellScenario it was measured in
        hint - optional LHVModel; returned as the certificate when it already
               reproduces the distribution

        Returns:
        MembershipVerdict(feasible, model, residual, strategy_count)
        """
        if distribution.probabilities.shape != scenario.distribution_shape:
            raise DimensionMismatchError("distribution shape {} does not fit {}".format(
                distribution.probabilities.shape, scenario))
        count = scenario.strategy_count
        if count > MAX_STRATEGIES:
            raise ScenarioTooLargeError("{} strategies exceed the limit of {}".format(
                count, MAX_STRATEGIES))

        if hint is not None:
            residual = BellUtils.reconstruct_distribution(hint, scenario) \
                .max_deviation(distribution)
            if residual <= PROBABILITY_TOL:
                return MembershipVerdict(True, hint, residual, count)
            logging.debug("hint misses the distribution by {:.3g}".format(residual))

        matrix = BellUtils._strategy_matrix(scenario)
        rows = matrix.shape[0]
        slack = identity(rows, format='coo')
        a_eq = vstack([hstack([matrix, slack, -slack]),
                       hstack([coo_matrix(np.ones((1, count))),
                               coo_matrix((1, 2 * rows))])]).tocsr()
        b_eq = np.concatenate([distribution.probabilities.reshape(-1), [1.0]])
        cost = np.concatenate([np.zeros(count), np.ones(2 * rows)])

        logging.debug("membership LP: {} strategies, {} constraints".format(count, rows + 1))
        result = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method='highs')
        if result.status != 0:
            raise ScenarioError("membership LP failed: {}".format(result.message))

        residual = float(result.fun)
        if residual > PROBABILITY_TOL:
            return MembershipVerdict(False, None, residual, count)
        weights = np.clip(result.x[:count], 0, None)
        weights /= weights.sum()
        model = LHVModel(weights.reshape(scenario.strategy_shape), scenario.settings_per_region)
        return MembershipVerdict(True, model, residual, count)

    @staticmethod
    def correlation_matrix(state):
        """3x3 matrix C_ab = Tr(sigma_a x sigma_b rho) of a two-qubit state"""
        rho = StateUtils.as_density(state)
        if rho.qubit_count != 2:
            raise DimensionMismatchError("expected a 2-qubit state, got {} qubits".format(
                rho.qubit_count))
        return CriteriaUtils.pauli_correlations(rho)

    @staticmethod
    def horodecki_bound(state):
        """Largest CHSH value, 2 sqrt(s1^2 + s2^2) from the two top singular values"""
        singular = np.linalg.svd(BellUtils.correlation_matrix(state), compute_uv=False)
        return float(2 * np.sqrt(singular[0] ** 2 + singular[1] ** 2))

    @staticmethod
    def sphere_grid(points):
        """Deterministic, nearly uniform directions (Fibonacci lattice)"""
        index = np.arange(points) + 0.5
        z = 1 - 2 * index / points
        phi = np.pi * (1 + 5 ** 0.5) * index
        r = np.sqrt(1 - z ** 2)
        return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)

    @staticmethod
    def _unit(vector, fallback):
        norm = np.linalg.norm(vector)
        return vector / norm if norm > 1e-15 else fallback

    @staticmethod
    def chsh_optimize(state, seed=0, grid_points=GRID_POINTS, starts=REFINE_STARTS,
                      rounds=REFINE_ROUNDS):
        """Maximize E(a0,b0) + E(a0,b1) + E(a1,b0) - E(a1,b1) over spin directions

        For fixed a0, a1 the best b's point along C^T (a0 + a1) and
        C^T (a0 - a1). All pairs of a grid (plus seeded random directions)
        are scored that way, and the best few are refined by alternating
        between the two sides.

        Arguments:
        state - two-qubit DensityMatrix or PureState
        seed - seed of the extra random starting directions. Default: 0
        grid_points - directions in the starting grid. Default: 20
        starts - number of best grid pairs refined. Default: 5
        rounds - alternating refinement rounds. Default: 200

        Returns:
        ChshResult(value, (a0, a1, b0, b1) as Direction objects, analytic_bound)
        """
        corr = BellUtils.correlation_matrix(state)
        rng = np.random.default_rng(seed)
        extra = rng.normal(size=(grid_points, 3))
        extra /= np.linalg.norm(extra, axis=1, keepdims=True)
        grid = np.concatenate([BellUtils.sphere_grid(grid_points), extra])

        projected = grid @ corr
        plus = np.linalg.norm(projected[:, None, :] + projected[None, :, :], axis=2)
        minus = np.linalg.norm(projected[:, None, :] - projected[None, :, :], axis=2)
        scores = (plus + minus).reshape(-1)
        best = np.argsort(-scores, kind='stable')[:starts]

        fallback = np.array([0.0, 0.0, 1.0])
        best_value = -np.inf
        best_directions = None
        for flat in best:
            a0, a1 = grid[flat // len(grid)], grid[flat % len(grid)]
            b0 = BellUtils._unit(corr.T @ (a0 + a1), fallback)
            b1 = BellUtils._unit(corr.T @ (a0 - a1), fallback)
            for _ in range(rounds):
                a0 = BellUtils._unit(corr @ (b0 + b1), a0)
                a1 = BellUtils._unit(corr @ (b0 - b1), a1)
                b0 = BellUtils._unit(corr.T @ (a0 + a1), b0)
                b1 = BellUtils._unit(corr.T @ (a0 - a1), b1)
            value = a0 @ corr @ b0 + a0 @ corr @ b1 + a1 @ corr @ b0 - a1 @ corr @ b1
            if value > best_value:
                best_value, best_directions = value, (a0, a1, b0, b1)

        bound = BellUtils.horodecki_bound(state)
        if best_value < bound - 1e-6:
            logging.warning("CHSH optimizer stopped at {:.9f}, analytic maximum {:.9f}".format(
                best_value, bound))
        directions = tuple(Direction.normalized(v) for v in best_directions)
        return ChshResult(float(best_value), directions, bound)

    @staticmethod
    def chsh_value(distribution):
        """CHSH combination of a two-setting, two-outcome, two-region distribution"""
        if distribution.probabilities.shape != (2, 2, 2, 2):
            raise DimensionMismatchError("CHSH needs 2 settings and 2 outcomes per region")
        signs = np.array([1.0, -1.0])
        corr = distribution.correlator([signs, signs])
        return float(corr[0, 0] + corr[0, 1] + corr[1, 0] - corr[1, 1])

    @staticmethod
    def chsh_singlet_scenario():
        """Singlet-optimal CHSH settings: a = (z, x), b = ((-1,0,-1), (1,0,-1)) / sqrt 2

        Returns:
        BellScenario whose singlet distribution reaches CHSH value 2 sqrt 2
        """
        s = 1 / np.sqrt(2)
        return BellScenario.projective([
            [Direction((0.0, 0.0, 1.0)), Direction((1.0, 0.0, 0.0))],
            [Direction.normalized((-s, 0.0, -s)), Direction.normalized((s, 0.0, -s))],
        ])
