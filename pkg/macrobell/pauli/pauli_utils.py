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

from enum import Enum

import numpy as np

from ..utils import DegenerateSettingsError, DimensionMismatchError, DomainError, \
    InvalidDirectionError, ORTHOGONALITY_TOL, UNIT_NORM_TOL

# Largest string PauliString.to_matrix will expand
MATRIX_QUBIT_LIMIT = 10


class PauliLabel(Enum):
    """Single-qubit Pauli label. Values are the (x, z) bits of the symplectic form."""
    I = (0, 0)
    X = (1, 0)
    Y = (1, 1)
    Z = (0, 1)

    @property
    def x_bit(self):
        return self.value[0]

    @property
    def z_bit(self):
        return self.value[1]

    @staticmethod
    def from_bits(x_bit, z_bit):
        return _LABEL_BY_BITS[(int(x_bit), int(z_bit))]

    @staticmethod
    def from_pauli_index(index):
        """Map the tree convention 1 -> X, 2 -> Y"""
        if index == 1:
            return PauliLabel.X
        if index == 2:
            return PauliLabel.Y
        raise DomainError("pauli index must be 1 or 2, got {}".format(index))


_LABEL_BY_BITS = {label.value: label for label in PauliLabel}

_MATRICES = {
    PauliLabel.I: np.array([[1, 0], [0, 1]], dtype=complex),
    PauliLabel.X: np.array([[0, 1], [1, 0]], dtype=complex),
    PauliLabel.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    PauliLabel.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}

for _m in _MATRICES.values():
    _m.flags.writeable = False


class PauliString:
    """Tensor product of Pauli labels, one per qubit.

    Stored as two bit-vectors (x and z). The object stands for the Hermitian
    involution obtained from the labels; no phase is kept.

    Fields:
    x_bits - numpy bool array, True where the label is X or Y
    z_bits - numpy bool array, True where the label is Y or Z
    qubit_count - number of qubits
    """

    def __init__(self, labels):
        """Create a PauliString

        Arguments:
        labels - sequence of PauliLabel (or 'I', 'X', 'Y', 'Z' characters)
        """
        labels = [lb if isinstance(lb, PauliLabel) else PauliLabel[lb] for lb in labels]
        if len(labels) == 0:
            raise DimensionMismatchError("a Pauli string needs at least one qubit")
        self.x_bits = np.array([lb.x_bit for lb in labels], dtype=bool)
        self.z_bits = np.array([lb.z_bit for lb in labels], dtype=bool)
        self.x_bits.flags.writeable = False
        self.z_bits.flags.writeable = False
        self.qubit_count = len(labels)

    @staticmethod
    def from_label(text):
        """Parse a string such as "XIY" """
        return PauliString(list(text.strip().upper()))

    @staticmethod
    def from_bits(x_bits, z_bits):
        return PauliString([PauliLabel.from_bits(x, z) for x, z in zip(x_bits, z_bits)])

    @property
    def labels(self):
        return tuple(PauliLabel.from_bits(x, z) for x, z in zip(self.x_bits, self.z_bits))

    def support(self):
        """Indices of qubits carrying a non-identity label"""
        return tuple(int(i) for i in np.flatnonzero(self.x_bits | self.z_bits))

    def to_matrix(self):
        """Dense 2^N x 2^N matrix, qubit 0 most significant"""
        if self.qubit_count > MATRIX_QUBIT_LIMIT:
            raise DimensionMismatchError(
                "refusing to expand a {}-qubit Pauli string".format(self.qubit_count))
        result = np.array([[1]], dtype=complex)
        for label in self.labels:
            result = np.kron(result, _MATRICES[label])
        return result

    def __len__(self):
        return self.qubit_count

    def __eq__(self, other):
        return isinstance(other, PauliString) \
            and np.array_equal(self.x_bits, other.x_bits) \
            and np.array_equal(self.z_bits, other.z_bits)

    def __hash__(self):
        return hash((self.x_bits.tobytes(), self.z_bits.tobytes()))

    def __str__(self):
        return "".join(label.name for label in self.labels)

    def __repr__(self):
        return "PauliString('{}')".format(self)


class Direction:
    """A unit 3-vector, the a in a.sigma

    Fields:
    components - read-only numpy array of three floats
    """

    def __init__(self, components):
        components = np.array(components, dtype=float).reshape(-1)
        if components.shape != (3,):
            raise InvalidDirectionError(
                "a direction has 3 components, got {}".format(components.shape[0]))
        norm = np.linalg.norm(components)
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            raise InvalidDirectionError(
                "direction must have unit length, |a| = {:.15g}".format(norm))
        components.flags.writeable = False
        self.components = components

    @staticmethod
    def normalized(vector):
        """Direction along an arbitrary non-zero vector"""
        vector = np.asarray(vector, dtype=float)
        norm = np.linalg.norm(vector)
        if norm < UNIT_NORM_TOL:
            raise InvalidDirectionError("cannot normalize a zero vector")
        return Direction(vector / norm)

    @staticmethod
    def from_angles(theta, phi):
        """Direction from polar angle theta and azimuth phi (radians)"""
        return Direction.normalized([np.sin(theta) * np.cos(phi),
                                     np.sin(theta) * np.sin(phi),
                                     np.cos(theta)])

    @staticmethod
    def random(rng):
        """Uniformly distributed direction

        Arguments:
        rng - numpy.random.Generator
        """
        while True:
            v = rng.normal(size=3)
            if np.linalg.norm(v) > 1e-6:
                return Direction.normalized(v)

    def __iter__(self):
        return iter(self.components)

    def __eq__(self, other):
        return isinstance(other, Direction) and np.array_equal(self.components, other.components)

    def __hash__(self):
        return hash(self.components.tobytes())

    def __repr__(self):
        return "Direction({})".format(list(self.components))


class MeasurementFrame:
    """Orthogonal pair of local axes (x, y) used by the correlation tensor"""

    def __init__(self, x_axis, y_axis):
        x_axis = x_axis if isinstance(x_axis, Direction) else Direction(x_axis)
        y_axis = y_axis if isinstance(y_axis, Direction) else Direction(y_axis)
        overlap = float(np.dot(x_axis.components, y_axis.components))
        if abs(overlap) > ORTHOGONALITY_TOL:
            raise InvalidDirectionError(
                "frame axes must be orthogonal, x.y = {:.3g}".format(overlap))
        self.x_axis = x_axis
        self.y_axis = y_axis

    @staticmethod
    def standard():
        return MeasurementFrame((1.0, 0.0, 0.0), (0.0, 1.0, 0.0))

    @staticmethod
    def random(rng):
        """Frame derived from two random setting directions"""
        while True:
            try:
                return PauliUtils.frame_from_settings(Direction.random(rng),
                                                      Direction.random(rng))
            except DegenerateSettingsError:
                continue

    def axis(self, pauli_index):
        """Axis for pauli index 1 (x) or 2 (y)"""
        if pauli_index == 1:
            return self.x_axis
        if pauli_index == 2:
            return self.y_axis
        raise DomainError("pauli index must be 1 or 2, got {}".format(pauli_index))

    def axis_matrix(self):
        """2x3 array, rows are the x and y axes"""
        return np.vstack([self.x_axis.components, self.y_axis.components])

    def to_document(self):
        return {'x': [float(v) for v in self.x_axis], 'y': [float(v) for v in self.y_axis]}

    def __repr__(self):
        return "MeasurementFrame(x={}, y={})".format(list(self.x_axis), list(self.y_axis))


class PauliUtils:
    """Pauli algebra helpers

    Anti-commutation is decided on the symplectic bit-vectors, so no 2^N
    matrices are ever formed for it.
    """

    @staticmethod
    def pauli_matrix(label):
        """2x2 matrix of a Pauli label

        Arguments:
        label - PauliLabel or one of 'I', 'X', 'Y', 'Z'

        Returns:
        A read-only complex numpy array
        """
        if not isinstance(label, PauliLabel):
            label = PauliLabel[label]
        return _MATRICES[label]

    @staticmethod
    def direction_observable(direction):
        """The observable a.sigma for a unit vector a

        Arguments:
        direction - Direction, or anything with three components (must be unit length)

        Returns:
        2x2 Hermitian matrix with eigenvalues +1 and -1
        """
        if not isinstance(direction, Direction):
            direction = Direction(direction)
        ax, ay, az = direction.components
        return ax * _MATRICES[PauliLabel.X] + ay * _MATRICES[PauliLabel.Y] \
            + az * _MATRICES[PauliLabel.Z]

    @staticmethod
    def axis_observables(frame):
        """Stack of the x.sigma and y.sigma observables of a frame, shape (2, 2, 2)"""
        return np.stack([PauliUtils.direction_observable(frame.x_axis),
                         PauliUtils.direction_observable(frame.y_axis)])

    @staticmethod
    def anticommutes(p, q):
        """Do two Pauli strings anti-commute?

        Counts the qubits where both labels are non-identity and differ;
        the strings anti-commute when that count is odd.

        Arguments:
        p - PauliString
        q - PauliString of the same length

        Returns:
        True when PQ = -QP
        """
        if p.qubit_count != q.qubit_count:
            raise DimensionMismatchError(
                "Pauli strings of different lengths: {} and {}".format(
                    p.qubit_count, q.qubit_count))
        clashes = np.count_nonzero((p.x_bits & q.z_bits) ^ (p.z_bits & q.x_bits))
        return clashes % 2 == 1

    @staticmethod
    def anticommutation_matrix(strings, others=None):
        """Pairwise anti-commutation of equally long Pauli strings

        Arguments:
        strings - list of PauliString
        others - optional second list; compared against strings when given

        Returns:
        Boolean numpy array of shape (len(strings), len(others or strings)),
        True where the pair anti-commutes
        """
        others = strings if others is None else others
        if len(strings) == 0 or len(others) == 0:
            return np.zeros((len(strings), len(others)), dtype=bool)
        length = strings[0].qubit_count
        if any(s.qubit_count != length for s in list(strings) + list(others)):
            raise DimensionMismatchError("Pauli strings of different lengths")
        x = np.array([s.x_bits for s in strings], dtype=np.int64)
        z = np.array([s.z_bits for s in strings], dtype=np.int64)
        x_other = np.array([s.x_bits for s in others], dtype=np.int64)
        z_other = np.array([s.z_bits for s in others], dtype=np.int64)
        return ((x @ z_other.T + z @ x_other.T) % 2) == 1

    @staticmethod
    def frame_from_settings(a1, a2):
        """Frame with x along a1 + a2 and y along a1 - a2

        Arguments:
        a1 - first setting Direction
        a2 - second setting Direction

        Returns:
        MeasurementFrame with both axes normalized
        """
        a1 = a1 if isinstance(a1, Direction) else Direction(a1)
        a2 = a2 if isinstance(a2, Direction) else Direction(a2)
        total = a1.components + a2.components
        difference = a1.components - a2.components
        if np.linalg.norm(total) < UNIT_NORM_TOL or np.linalg.norm(difference) < UNIT_NORM_TOL:
            raise DegenerateSettingsError("settings must not be parallel or anti-parallel")
        x_axis = Direction.normalized(total)
        y_axis = Direction.normalized(difference)
        # (a1 + a2).(a1 - a2) = |a1|^2 - |a2|^2, zero up to rounding; remove the residue
        y_vec = y_axis.components - np.dot(y_axis.components, x_axis.components) * x_axis.components
        return MeasurementFrame(x_axis, Direction.normalized(y_vec))
