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
import pandas as pd

from ..pauli import MeasurementFrame, PauliUtils
from ..states import StateUtils
from ..utils import CRITERION_TOL, FrameCountError, InternalConsistencyError, \
    MissingCorrelationError, PartitionError, DimensionMismatchError, DomainError, \
    InvalidStateError

AXIS_NAMES = ('x', 'y')

_PAULI_STACK = np.stack([PauliUtils.pauli_matrix(label) for label in 'XYZ'])


class CorrelationTensor:
    """Correlations of local x/y spin projections of a K-qubit state

    Fields:
    values - read-only real numpy array of shape (2,) * K; index 0 is the
             frame's x axis and 1 its y axis
    frames - tuple of K MeasurementFrame objects
    """

    def __init__(self, values, frames):
        values = np.array(values, dtype=float)
        frames = tuple(frames)
        if values.shape != (2,) * len(frames):
            raise FrameCountError("tensor of shape {} does not match {} frames".format(
                values.shape, len(frames)))
        if values.size and np.max(np.abs(values)) > 1 + CRITERION_TOL:
            raise InvalidStateError("correlation entries must lie in [-1, 1]")
        values.flags.writeable = False
        self.values = values
        self.frames = frames

    @property
    def region_count(self):
        return len(self.frames)

    def entry(self, axes):
        """Value at an axis label such as "xy" """
        return float(self.values[tuple(AXIS_NAMES.index(a) for a in axes)])

    def to_document(self):
        """JSON-ready record, entries in lexicographic index order"""
        return {
            'values': [float(v) for v in self.values.reshape(-1)],
            'frames': [frame.to_document() for frame in self.frames],
        }

    def to_frame(self):
        """The tensor as a pandas DataFrame with one row per entry"""
        labels = ["".join(p) for p in itertools.product(AXIS_NAMES, repeat=self.region_count)]
        return pd.DataFrame({'axes': labels, 'value': self.values.reshape(-1)})

    def __repr__(self):
        return "CorrelationTensor(K={}, L={:.6g})".format(
            self.region_count, float(np.sum(self.values ** 2)))


class MagnetizationCorrelation:
    """Correlation of collective magnetizations, in units of spin-product counts"""

    def __init__(self, value, region_sizes):
        self.region_sizes = tuple(int(n) for n in region_sizes)
        bound = float(np.prod(self.region_sizes))
        if abs(value) > bound * (1 + CRITERION_TOL):
            raise InternalConsistencyError(
                "magnetization correlation {} exceeds the spin-pair count {}".format(value, bound))
        self.value = float(value)

    def __float__(self):
        return self.value

    def __repr__(self):
        return "MagnetizationCorrelation({:.6g}, sizes={})".format(self.value, self.region_sizes)


class BellCoefficients:
    """Weights alpha of a Bell expression, keyed by setting tuples"""

    def __init__(self, weights):
        self.weights = {}
        for key, weight in dict(weights).items():
            weight = float(weight)
            if not np.isfinite(weight):
                raise DomainError("coefficient for {} is not finite".format(key))
            self.weights[tuple(key) if isinstance(key, (list, tuple)) else key] = weight

    @staticmethod
    def chsh():
        """E00 + E01 + E10 - E11"""
        return BellCoefficients({(0, 0): 1.0, (0, 1): 1.0, (1, 0): 1.0, (1, 1): -1.0})

    @property
    def support(self):
        return [key for key, weight in self.weights.items() if weight != 0.0]

    def __repr__(self):
        return "BellCoefficients({})".format(self.weights)


class CriteriaUtils:
    """Correlation tensors and the sum-of-squares LHV criterion

    The criterion L = sum T^2 <= 1 is sufficient for a local hidden variable
    model of the two-setting correlations; L > 1 is inconclusive on its own.
    """

    @staticmethod
    def _frames(frames, region_count):
        frames = [f if isinstance(f, MeasurementFrame) else PauliUtils.frame_from_settings(*f)
                  for f in frames]
        if len(frames) != region_count:
            raise FrameCountError("{} frames given for {} regions".format(
                len(frames), region_count))
        return frames

    @staticmethod
    def correlation_tensor(state, frames):
        """Correlation tensor of a K-qubit state in the given local frames

        Arguments:
        state - DensityMatrix (or PureState) on K qubits
        frames - K MeasurementFrame objects, or K (a1, a2) setting pairs

        Returns:
        CorrelationTensor
        """
        rho = StateUtils.as_density(state)
        frames = CriteriaUtils._frames(frames, rho.qubit_count)
        values = StateUtils.local_expectations(
            rho.matrix, [PauliUtils.axis_observables(f) for f in frames])
        return CorrelationTensor(values, frames)

    @staticmethod
    def pauli_correlations(state):
        """All 3^K correlations Tr(sigma_i x ... x sigma_j rho), i, j in (x, y, z)"""
        rho = StateUtils.as_density(state)
        return StateUtils.local_expectations(rho.matrix, [_PAULI_STACK] * rho.qubit_count)

    @staticmethod
    def correlation_from_pauli(pauli_corr, frames):
        """Project a 3^K Pauli correlation array onto local x/y frames"""
        region_count = pauli_corr.ndim
        frames = CriteriaUtils._frames(frames, region_count)
        values = pauli_corr
        for m, frame in enumerate(frames):
            values = np.moveaxis(np.tensordot(frame.axis_matrix(), values, axes=([1], [m])), 0, m)
        return CorrelationTensor(values, frames)

    @staticmethod
    def zb_values(pauli_corr, frames_batch):
        """L for many frame choices at once

        Arguments:
        pauli_corr - array of shape (3,) * K from pauli_correlations
        frames_batch - list of F frame tuples, each holding K MeasurementFrame

        Returns:
        numpy array of F values
        """
        region_count = pauli_corr.ndim
        if len(frames_batch) == 0:
            return np.zeros(0)
        axes = np.array([[f.axis_matrix() for f in CriteriaUtils._frames(frames, region_count)]
                         for frames in frames_batch])
        batch = 2 * region_count
        operands = [pauli_corr, list(range(region_count))]
        for m in range(region_count):
            operands += [axes[:, m], [batch, region_count + m, m]]
        tensors = np.einsum(*operands, [batch] + list(range(region_count, 2 * region_count)),
                            optimize=True)
        return np.sum(tensors.reshape(len(frames_batch), -1) ** 2, axis=1)

    @staticmethod
    def zb_value(tensor):
        """L = sum of squared correlation tensor entries

        Arguments:
        tensor - CorrelationTensor or numpy array

        Returns:
        float
        """
        values = tensor.values if isinstance(tensor, CorrelationTensor) else np.asarray(tensor)
        return float(np.sum(values ** 2))

    @staticmethod
    def zb_admits_lhv(tensor):
        """True when L <= 1 (within CRITERION_TOL); a local model then exists.
        False does not prove the absence of one.
        """
        return CriteriaUtils.zb_value(tensor) <= 1.0 + CRITERION_TOL

    @staticmethod
    def magnetization_correlations(state, partition, directions, cache=None):
        """<M_1 x ... x M_K> for collective magnetizations M_k = sum_i n_k . sigma_i

        Evaluated twice: as a sum over one-spin-per-region products measured on
        the whole register, and as prod(N_k) times the correlation of the
        effective state. The routes must agree within CRITERION_TOL.

        Arguments:
        state - DensityMatrix or PureState
        partition - Partition with K regions
        directions - K Direction objects (or unit 3-vectors)
        cache - optional ReducedStateCache for the effective state

        Returns:
        MagnetizationCorrelation
        """
        if len(directions) != partition.region_count:
            raise DimensionMismatchError("{} directions given for {} regions".format(
                len(directions), partition.region_count))
        observables = [PauliUtils.direction_observable(d) for d in directions]

        pairwise = 0.0
        for qubits in itertools.product(*partition.regions):
            pairwise += StateUtils.expectation(state, qubits, observables)

        effective = StateUtils.effective_state(state, partition, cache=cache)
        count = reduce(lambda a, b: a * b, partition.region_sizes)
        averaged = count * float(StateUtils.local_expectations(
            effective.matrix, [obs[np.newaxis] for obs in observables]).reshape(-1)[0])

        if abs(pairwise - averaged) > CRITERION_TOL * max(1.0, count):
            raise InternalConsistencyError(
                "pairwise sum {:.15g} and effective-state value {:.15g} disagree".format(
                    pairwise, averaged))
        logging.debug("magnetization correlation {:.12g} over {} spin tuples".format(
            averaged, count))
        return MagnetizationCorrelation(averaged, partition.region_sizes)

    @staticmethod
    def magnetization_correlation(state, partition, a, b, cache=None):
        """<M_a M_b> for a two-region partition, see magnetization_correlations"""
        if partition.region_count != 2:
            raise PartitionError("expected 2 regions, got {}".format(partition.region_count))
        return CriteriaUtils.magnetization_correlations(state, partition, [a, b], cache=cache)

    @staticmethod
    def macroscopic_bell_parameter(coefficients, correlations):
        """<B> = sum alpha(a, b) E_ab

        Arguments:
        coefficients - BellCoefficients
        correlations - dict from setting tuple to MagnetizationCorrelation (or float)

        Returns:
        float
        """
        total = 0.0
        for key in coefficients.support:
            if key not in correlations:
                raise MissingCorrelationError(
                    "no correlation supplied for settings {}".format(key))
            total += coefficients.weights[key] * float(correlations[key])
        return total
