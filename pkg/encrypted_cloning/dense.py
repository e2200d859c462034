import json
from dataclasses import dataclass

import numpy as np

from encrypted_cloning.config import BLOCH_TOL, CLI_BLOCH_TOL, DENSITY_TOL, EIGEN_TOL
from encrypted_cloning.exceptions import LabelError


def _frozen(matrix):
    matrix = np.array(matrix, dtype=complex)
    matrix.setflags(write=False)
    return matrix


PAULI_MATRICES = (
    _frozen([[1, 0], [0, 1]]),
    _frozen([[0, 1], [1, 0]]),
    _frozen([[0, -1j], [1j, 0]]),
    _frozen([[1, 0], [0, -1]]),
)

NAMED_STATES = {
    "0": (0.0, 0.0, 1.0),
    "1": (0.0, 0.0, -1.0),
    "plus": (1.0, 0.0, 0.0),
    "plus-i": (0.0, 1.0, 0.0),
}


def _check_labels(labels, width):
    labels = tuple(str(label) for label in labels)
    if len(labels) != width:
        raise LabelError(f"expected {width} qubit labels, got {len(labels)}")
    if len(set(labels)) != len(labels):
        raise LabelError(f"duplicate qubit labels in {labels}")
    return labels


def _num_qubits(dim):
    width = int(dim).bit_length() - 1
    if dim < 1 or 1 << width != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return width


@dataclass(frozen=True)
class BlochVector:
    """Expectations (x, y, z) of X, Y, Z on a single qubit.

    Examples:
        >>> BlochVector(0.0, 1.0, 0.0).components
        (1.0, 0.0, 1.0, 0.0)
        >>> BlochVector.parse("plus-i")
        BlochVector(x=0.0, y=1.0, z=0.0)
    """

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def components(self):
        """Bloch coefficients (b_0, b_1, b_2, b_3) = (1, x, y, z)."""
        return (1.0, self.x, self.y, self.z)

    def as_tuple(self):
        return (self.x, self.y, self.z)

    @property
    def norm(self):
        return float(np.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2))

    def is_unit(self, tol=BLOCH_TOL):
        return abs(self.norm - 1.0) <= tol

    def normalized(self):
        norm = self.norm
        if norm == 0.0:
            raise ValueError("cannot normalize the zero Bloch vector")
        return BlochVector(self.x / norm, self.y / norm, self.z / norm)

    @classmethod
    def random(cls, rng):
        """Draws a vector uniformly on the unit sphere from a numpy Generator."""
        while True:
            vector = rng.standard_normal(3)
            norm = float(np.linalg.norm(vector))
            if norm > 1e-8:
                return cls(*(vector / norm))

    @classmethod
    def parse(cls, text, tol=CLI_BLOCH_TOL):
        """Parses ``"x,y,z"`` or one of the named states ``0, 1, plus, plus-i``.

        A triple within ``tol`` of unit length is renormalized; anything else
        raises ``ValueError`` naming the input.
        """
        token = text.strip().lower()
        if token in NAMED_STATES:
            return cls(*NAMED_STATES[token])
        parts = token.split(",")
        if len(parts) != 3:
            raise ValueError(f"invalid input state '{text}': expected x,y,z or a named state")
        try:
            vector = cls(*(float(part) for part in parts))
        except ValueError:
            raise ValueError(f"invalid input state '{text}': components must be numbers") from None
        if not vector.is_unit(tol):
            raise ValueError(f"invalid input state '{text}': Bloch vector is not unit length")
        return vector.normalized()


@dataclass(frozen=True, eq=False)
class StateVector:
    """A normalized pure state on an ordered list of qubit labels."""

    amplitudes: np.ndarray
    labels: tuple

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(-1)
        labels = _check_labels(self.labels, _num_qubits(amplitudes.shape[0]))
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > DENSITY_TOL:
            raise ValueError(f"state vector has norm {norm!r}, expected 1")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)
        object.__setattr__(self, "labels", labels)

    @property
    def num_qubits(self):
        return len(self.labels)

    def tensor(self, other):
        collision = set(self.labels) & set(other.labels)
        if collision:
            label = sorted(collision)[0]
            raise LabelError(f"qubit label '{label}' appears on both factors", token=label)
        return StateVector(np.kron(self.amplitudes, other.amplitudes), self.labels + other.labels)

    def density(self):
        return DenseOperator(np.outer(self.amplitudes, self.amplitudes.conj()), self.labels)

    def expectation(self, operator):
        return complex(np.vdot(self.amplitudes, operator @ self.amplitudes))


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """A 2^m x 2^m complex matrix on an ordered list of qubit labels.

    Description:
        Row and column indices follow the Kronecker convention: the first
        label is the most significant bit. With ``density=True`` the matrix
        is validated as a density matrix on construction.

    Args:
        entries (array-like): square complex matrix.
        labels (sequence[str]): ordered qubit labels.
        density (bool, optional): validate Hermiticity, unit trace and
            positivity. Defaults to False.
    """

    entries: np.ndarray
    labels: tuple
    density: bool = False

    # keep numpy scalars from broadcasting over an operator
    __array_ufunc__ = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"operator must be a square matrix, got shape {entries.shape}")
        labels = _check_labels(self.labels, _num_qubits(entries.shape[0]))
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "labels", labels)
        if self.density:
            self.check_density()

    @property
    def num_qubits(self):
        return len(self.labels)

    @property
    def dim(self):
        return self.entries.shape[0]

    def trace(self):
        return complex(np.trace(self.entries))

    def purity(self):
        return float(np.real(np.trace(self.entries @ self.entries)))

    def is_hermitian(self, tol=DENSITY_TOL):
        return float(np.max(np.abs(self.entries - self.entries.conj().T), initial=0.0)) <= tol

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.entries)

    def check_density(self, tol=DENSITY_TOL, eigen_tol=EIGEN_TOL):
        if not self.is_hermitian(tol):
            raise ValueError("density matrix is not Hermitian")
        trace = self.trace()
        if abs(trace - 1.0) > tol:
            raise ValueError(f"density matrix has trace {trace}, expected 1")
        smallest = float(self.eigenvalues()[0])
        if smallest < eigen_tol:
            raise ValueError(f"density matrix has negative eigenvalue {smallest}")
        return self

    def max_abs(self):
        return float(np.max(np.abs(self.entries), initial=0.0))

    def allclose(self, other, tol=DENSITY_TOL):
        return self.labels == other.labels and (self - other).max_abs() <= tol

    def _check_same_labels(self, other):
        if self.labels != other.labels:
            raise LabelError(
                f"operators act on different qubit labels: {self.labels} vs {other.labels}",
            )

    def __add__(self, other):
        if not isinstance(other, DenseOperator):
            return NotImplemented
        self._check_same_labels(other)
        return DenseOperator(self.entries + other.entries, self.labels)

    def __sub__(self, other):
        if not isinstance(other, DenseOperator):
            return NotImplemented
        self._check_same_labels(other)
        return DenseOperator(self.entries - other.entries, self.labels)

    def __neg__(self):
        return DenseOperator(-self.entries, self.labels)

    def __mul__(self, scalar):
        if isinstance(scalar, DenseOperator):
            return NotImplemented
        return DenseOperator(self.entries * complex(scalar), self.labels)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, DenseOperator):
            return NotImplemented
        self._check_same_labels(other)
        return DenseOperator(self.entries @ other.entries, self.labels)

    def adjoint(self):
        return DenseOperator(self.entries.conj().T, self.labels)

    def reorder(self, labels):
        """Returns the same operator with its tensor factors permuted to ``labels``."""
        labels = tuple(labels)
        if sorted(labels) != sorted(self.labels):
            raise LabelError(f"cannot reorder {self.labels} into {labels}")
        width = self.num_qubits
        order = [self.labels.index(label) for label in labels]
        tensor = self.entries.reshape((2,) * (2 * width))
        tensor = tensor.transpose(order + [width + index for index in order])
        return DenseOperator(tensor.reshape(self.dim, self.dim), labels)

    def to_json(self):
        return json.dumps(
            {
                "labels": list(self.labels),
                "entries": [[[value.real, value.imag] for value in row] for row in self.entries.tolist()],
            },
        )


def tensor(a, b):
    """Kronecker product with concatenated labels.

    Examples:
        >>> zero = DenseOperator([[1, 0], [0, 0]], ("q0",))
        >>> one = DenseOperator([[0, 0], [0, 1]], ("q1",))
        >>> tensor(zero, one).entries.diagonal().real.tolist()
        [0.0, 1.0, 0.0, 0.0]
    """
    collision = set(a.labels) & set(b.labels)
    if collision:
        label = sorted(collision)[0]
        raise LabelError(f"qubit label '{label}' appears on both factors", token=label)
    return DenseOperator(np.kron(a.entries, b.entries), a.labels + b.labels)


def _keep_labels(keep):
    # a SubsetSpec carries its canonical output order in ``labels``
    if hasattr(keep, "labels"):
        return tuple(keep.labels)
    return tuple(keep)


def partial_trace(rho, keep):
    """Traces out every qubit of ``rho`` not in ``keep``.

    Description:
        ``keep`` is a SubsetSpec (output in its canonical order: A, signals
        ascending, noises ascending) or an explicit label sequence (output in
        that order). Keeping nothing returns the 1x1 operator holding the
        trace.
    """
    keep = _keep_labels(keep)
    position = {label: index for index, label in enumerate(rho.labels)}
    for label in keep:
        if label not in position:
            raise LabelError(f"qubit label '{label}' is not carried by the operator", token=label)
    if len(set(keep)) != len(keep):
        raise LabelError(f"duplicate qubit labels in {keep}")
    width = rho.num_qubits
    keep_index = [position[label] for label in keep]
    traced = [index for index in range(width) if rho.labels[index] not in set(keep)]
    order = keep_index + traced + [width + index for index in keep_index] + [width + index for index in traced]
    kept_dim, traced_dim = 2 ** len(keep_index), 2 ** len(traced)
    tensor_form = rho.entries.reshape((2,) * (2 * width)).transpose(order)
    tensor_form = tensor_form.reshape(kept_dim, traced_dim, kept_dim, traced_dim)
    return DenseOperator(np.trace(tensor_form, axis1=1, axis2=3), keep)


def partial_trace_pure(state, keep):
    """Reduced density matrix of a pure state, without forming |psi><psi|.

    Examples:
        >>> bell = StateVector([2 ** -0.5, 0, 0, 2 ** -0.5], ("S1", "N1"))
        >>> partial_trace_pure(bell, ["N1"]).entries.real.round(12).tolist()
        [[0.5, 0.0], [0.0, 0.5]]
    """
    keep = _keep_labels(keep)
    position = {label: index for index, label in enumerate(state.labels)}
    for label in keep:
        if label not in position:
            raise LabelError(f"qubit label '{label}' is not carried by the state", token=label)
    if len(set(keep)) != len(keep):
        raise LabelError(f"duplicate qubit labels in {keep}")
    keep_index = [position[label] for label in keep]
    traced = [index for index, label in enumerate(state.labels) if label not in set(keep)]
    matrix = state.amplitudes.reshape((2,) * state.num_qubits).transpose(keep_index + traced)
    matrix = matrix.reshape(2 ** len(keep_index), -1)
    return DenseOperator(matrix @ matrix.conj().T, keep)


def apply_on(state, operator):
    """Applies ``operator`` to the qubits of ``state`` carrying its labels."""
    position = {label: index for index, label in enumerate(state.labels)}
    for label in operator.labels:
        if label not in position:
            raise LabelError(f"qubit label '{label}' is not carried by the state", token=label)
    targets = [position[label] for label in operator.labels]
    count = len(targets)
    amplitudes = state.amplitudes.reshape((2,) * state.num_qubits)
    gate = operator.entries.reshape((2,) * (2 * count))
    result = np.tensordot(gate, amplitudes, axes=(list(range(count, 2 * count)), targets))
    result = np.moveaxis(result, list(range(count)), targets)
    return StateVector(result.reshape(-1), state.labels)


def bloch_to_state(b, label="A"):
    """Builds the single-qubit pure state with the given Bloch vector.

    Description:
        The global phase is fixed by a real non-negative amplitude on |0>;
        when that amplitude vanishes the state is |1>.

    Examples:
        >>> bloch_to_state(BlochVector(0, 0, 1)).amplitudes.tolist()
        [(1+0j), 0j]
        >>> bloch_to_state(BlochVector(0, 0, -1)).amplitudes.tolist()
        [0j, (1+0j)]
    """
    if not b.is_unit():
        raise ValueError(f"Bloch vector {b.as_tuple()} is not a unit vector")
    if 1.0 + b.z <= DENSITY_TOL:
        return StateVector([0.0, 1.0], (label,))
    zero = np.sqrt((1.0 + b.z) / 2.0)
    one = complex(b.x, b.y) / np.sqrt(2.0 * (1.0 + b.z))
    amplitudes = np.array([zero, one], dtype=complex)
    return StateVector(amplitudes / np.linalg.norm(amplitudes), (label,))


def bloch_vector(state):
    """Measures (x, y, z) = (<X>, <Y>, <Z>) on a single-qubit state."""
    if state.num_qubits != 1:
        raise ValueError(f"expected a single-qubit state, got {state.num_qubits} qubits")
    x, y, z = (state.expectation(matrix).real for matrix in PAULI_MATRICES[1:])
    return BlochVector(x, y, z)
