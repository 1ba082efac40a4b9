import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from macrobell.pauli import Direction, MeasurementFrame, PauliLabel, PauliString, PauliUtils
from macrobell.utils import DegenerateSettingsError, DimensionMismatchError, DomainError, \
    InvalidDirectionError

pauli_text = st.text(alphabet="IXYZ", min_size=1, max_size=6)


class TestPauliString:
    def test_bits(self):
        p = PauliString.from_label("IXYZ")
        assert list(p.x_bits) == [False, True, True, False]
        assert list(p.z_bits) == [False, False, True, True]
        assert str(p) == "IXYZ"

    def test_support(self):
        assert PauliString.from_label("IXIZ").support() == (1, 3)

    def test_from_bits(self):
        p = PauliString.from_label("XYZ")
        assert PauliString.from_bits(p.x_bits, p.z_bits) == p

    def test_empty(self):
        with pytest.raises(DimensionMismatchError):
            PauliString([])

    def test_pauli_index(self):
        assert PauliLabel.from_pauli_index(1) == PauliLabel.X
        assert PauliLabel.from_pauli_index(2) == PauliLabel.Y
        with pytest.raises(DomainError):
            PauliLabel.from_pauli_index(3)


class TestAnticommutes:
    def test_single_qubit(self):
        x, y, z = (PauliString.from_label(c) for c in "XYZ")
        assert PauliUtils.anticommutes(x, y)
        assert PauliUtils.anticommutes(y, z)
        assert not PauliUtils.anticommutes(x, x)

    def test_two_clashes_commute(self):
        assert not PauliUtils.anticommutes(PauliString.from_label("XX"),
                                           PauliString.from_label("YY"))

    def test_three_clashes_anticommute(self):
        assert PauliUtils.anticommutes(PauliString.from_label("XXX"),
                                       PauliString.from_label("YYY"))

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            PauliUtils.anticommutes(PauliString.from_label("X"), PauliString.from_label("XY"))

    @settings(max_examples=200)
    @given(st.integers(1, 5).flatmap(
        lambda n: st.tuples(st.text(alphabet="IXYZ", min_size=n, max_size=n),
                            st.text(alphabet="IXYZ", min_size=n, max_size=n))))
    def test_matches_matrices(self, pair):
        p, q = (PauliString.from_label(t) for t in pair)
        a, b = p.to_matrix(), q.to_matrix()
        assert PauliUtils.anticommutes(p, q) == np.allclose(a @ b, -b @ a)

    @given(pauli_text)
    def test_matrix_is_involution(self, text):
        m = PauliString.from_label(text).to_matrix()
        assert np.allclose(m @ m, np.eye(m.shape[0]))

    def test_matrix_shape_limit(self):
        with pytest.raises(DimensionMismatchError):
            PauliString.from_label("X" * 11).to_matrix()

    def test_matrix(self):
        strings = [PauliString.from_label(t) for t in ("XI", "YI", "ZX")]
        matrix = PauliUtils.anticommutation_matrix(strings)
        assert matrix.tolist() == [[False, True, True],
                                   [True, False, True],
                                   [True, True, False]]


class TestDirection:
    def test_not_unit(self):
        with pytest.raises(InvalidDirectionError):
            Direction((1.0, 1.0, 0.0))

    def test_wrong_size(self):
        with pytest.raises(InvalidDirectionError):
            Direction((1.0, 0.0))

    def test_zero_vector(self):
        with pytest.raises(InvalidDirectionError):
            Direction.normalized((0.0, 0.0, 0.0))

    def test_from_angles(self):
        d = Direction.from_angles(np.pi / 2, 0.0)
        assert np.allclose(d.components, [1.0, 0.0, 0.0])

    def test_observable_z(self):
        assert np.allclose(PauliUtils.direction_observable((0.0, 0.0, 1.0)),
                           [[1, 0], [0, -1]])

    @given(st.floats(0, np.pi), st.floats(0, 2 * np.pi))
    def test_observable_spectrum(self, theta, phi):
        m = PauliUtils.direction_observable(Direction.from_angles(theta, phi))
        assert np.allclose(m, m.conj().T)
        assert np.allclose(np.linalg.eigvalsh(m), [-1.0, 1.0])


class TestMeasurementFrame:
    def test_standard_axes(self):
        frame = MeasurementFrame.standard()
        assert np.allclose(frame.axis(1).components, [1, 0, 0])
        assert np.allclose(frame.axis(2).components, [0, 1, 0])
        assert frame.axis_matrix().shape == (2, 3)

    def test_not_orthogonal(self):
        with pytest.raises(InvalidDirectionError):
            MeasurementFrame((1.0, 0.0, 0.0), (np.sqrt(0.5), np.sqrt(0.5), 0.0))

    def test_from_settings(self):
        s = np.sqrt(0.5)
        frame = PauliUtils.frame_from_settings((s, s, 0.0), (s, -s, 0.0))
        assert np.allclose(frame.x_axis.components, [1, 0, 0])
        assert np.allclose(frame.y_axis.components, [0, 1, 0])

    def test_parallel_settings(self):
        with pytest.raises(DegenerateSettingsError):
            PauliUtils.frame_from_settings((0.0, 0.0, 1.0), (0.0, 0.0, 1.0))
        with pytest.raises(DegenerateSettingsError):
            PauliUtils.frame_from_settings((0.0, 0.0, 1.0), (0.0, 0.0, -1.0))

    def test_random_orthonormal(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            m = MeasurementFrame.random(rng).axis_matrix()
            assert np.allclose(m @ m.T, np.eye(2))

    def test_axis_observables(self):
        stack = PauliUtils.axis_observables(MeasurementFrame.standard())
        assert stack.shape == (2, 2, 2)
        assert np.allclose(stack[1], PauliUtils.pauli_matrix('Y'))
