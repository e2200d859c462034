import itertools
import json
import re
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache, reduce
from types import MappingProxyType

import numpy as np

from encrypted_cloning.config import PRUNE_TOL, check_dense_limit
from encrypted_cloning.dense import DenseOperator
from encrypted_cloning.exceptions import LabelError

_UNIT_VALUES = (1 + 0j, 1j, -1 + 0j, -1j)
_PHASE_PREFIXES = ("", "i", "-", "-i")
_LETTER_CHARS = "IXYZ"
_LETTER_SET = frozenset(_LETTER_CHARS)
# (x bit, z bit) -> letter, indexed as 2 * x + z
_LETTER_BYTES = np.frombuffer(b"IZXY", dtype=np.uint8)
_IDENTITY_BYTE = ord("I")
_STRING_PATTERN = re.compile(r"^(\+i|\+|-i|-|i)?([IXYZ]*)$")


class PauliLetter(IntEnum):
    """One of the four single-qubit Pauli operators, indexed as sigma_0..sigma_3."""

    I = 0  # noqa: E741
    X = 1
    Y = 2
    Z = 3

    @classmethod
    def parse(cls, char):
        try:
            return cls[char.upper()]
        except (KeyError, AttributeError):
            raise ValueError(f"unknown Pauli letter '{char}'") from None


@dataclass(frozen=True)
class Phase4:
    """An exact unit phase i**exponent, with the exponent kept in 0..3.

    Examples:
        >>> (Phase4(1) * Phase4(1)).exponent
        2
        >>> str(Phase4(3))
        '-i'
        >>> Phase4(5) == Phase4(1)
        True
    """

    exponent: int = 0

    def __post_init__(self):
        object.__setattr__(self, "exponent", int(self.exponent) % 4)

    def __mul__(self, other):
        if isinstance(other, Phase4):
            return Phase4(self.exponent + other.exponent)
        return NotImplemented

    def __neg__(self):
        return Phase4(self.exponent + 2)

    def __pow__(self, power):
        return Phase4(self.exponent * int(power))

    def conjugate(self):
        return Phase4(-self.exponent)

    def inverse(self):
        # unit modulus: the inverse is the conjugate
        return self.conjugate()

    def to_complex(self):
        return _UNIT_VALUES[self.exponent]

    def __complex__(self):
        return self.to_complex()

    def __str__(self):
        return _PHASE_PREFIXES[self.exponent]

    @classmethod
    def from_complex(cls, value, tol=PRUNE_TOL):
        for exponent, unit in enumerate(_UNIT_VALUES):
            if abs(complex(value) - unit) <= tol:
                return cls(exponent)
        raise ValueError(f"{value} is not one of the unit phases 1, i, -1, -i")


ONE = Phase4(0)


def pauli_product(a, b):
    """Computes the phase and letter with sigma_a sigma_b = phase * sigma_c.

    Examples:
        >>> phase, letter = pauli_product(PauliLetter.X, PauliLetter.Y)
        >>> str(phase), letter.name
        ('i', 'Z')
        >>> phase, letter = pauli_product(PauliLetter.Y, PauliLetter.X)
        >>> str(phase), letter.name
        ('-i', 'Z')
    """
    a, b = PauliLetter(a), PauliLetter(b)
    if a == PauliLetter.I:
        return ONE, b
    if b == PauliLetter.I:
        return ONE, a
    if a == b:
        return ONE, PauliLetter.I
    # XY = iZ, YZ = iX, ZX = iY; reversed order picks up -i
    phase = Phase4(1) if (b - a) % 3 == 1 else Phase4(3)
    return phase, PauliLetter(6 - a - b)


@lru_cache(maxsize=None)
def _char_product(a, b):
    phase, letter = pauli_product(PauliLetter[a], PauliLetter[b])
    return phase.exponent, letter.name


def multiply_keys(a, b):
    """Multiplies two letter strings, returning (Phase4, letters)."""
    exponent = 0
    letters = []
    for char_a, char_b in zip(a, b):
        step, char = _char_product(char_a, char_b)
        exponent += step
        letters.append(char)
    return Phase4(exponent), "".join(letters)


def default_labels(count):
    return tuple(f"q{index}" for index in range(count))


def _check_unique(labels):
    seen = set()
    for label in labels:
        if label in seen:
            raise LabelError(f"duplicate qubit label '{label}'", token=label)
        seen.add(label)


def _normalize_key(key):
    if isinstance(key, str):
        key = key.upper()
    else:
        key = "".join(PauliLetter(letter).name for letter in key)
    if not set(key) <= _LETTER_SET:
        raise ValueError(f"invalid Pauli string '{key}'")
    return key


@dataclass(frozen=True)
class PauliString:
    """A unit phase times one Pauli letter per qubit of an ordered label list.

    Examples:
        >>> a = PauliString.parse("XX")
        >>> b = PauliString.parse("YY")
        >>> str(a * b)
        '-ZZ'
        >>> str(PauliString.parse("-iXYZI"))
        '-iXYZI'
    """

    phase: Phase4
    letters: tuple
    labels: tuple

    def __post_init__(self):
        letters = tuple(PauliLetter(letter) for letter in self.letters)
        labels = tuple(str(label) for label in self.labels)
        if len(letters) != len(labels):
            raise LabelError(
                f"Pauli string has {len(letters)} letters but {len(labels)} labels",
            )
        _check_unique(labels)
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def parse(cls, text, labels=None):
        match = _STRING_PATTERN.match(text.strip())
        if match is None:
            raise ValueError(f"invalid Pauli string '{text}'")
        prefix = (match.group(1) or "").lstrip("+").lower()
        phase = Phase4(_PHASE_PREFIXES.index(prefix))
        body = match.group(2)
        if labels is None:
            labels = default_labels(len(body))
        return cls(phase, tuple(PauliLetter[char] for char in body), tuple(labels))

    @classmethod
    def identity(cls, labels):
        return cls(ONE, (PauliLetter.I,) * len(labels), tuple(labels))

    @property
    def key(self):
        return "".join(letter.name for letter in self.letters)

    def adjoint(self):
        return PauliString(self.phase.conjugate(), self.letters, self.labels)

    def __mul__(self, other):
        if isinstance(other, PauliString):
            return string_multiply(self, other)
        return NotImplemented

    def __str__(self):
        return f"{self.phase}{self.key}"

    def to_sum(self):
        return PauliSum(self.labels, {self.key: self.phase.to_complex()})


def string_multiply(a, b):
    """Multiplies two Pauli strings letterwise, accumulating the phase exactly."""
    if a.labels != b.labels:
        raise LabelError(
            f"Pauli strings act on different qubit labels: {a.labels} vs {b.labels}",
        )
    phase, key = multiply_keys(a.key, b.key)
    return PauliString(
        a.phase * b.phase * phase,
        tuple(PauliLetter[char] for char in key),
        a.labels,
    )


class PauliSum:
    """A complex-weighted sum of Pauli strings on an ordered list of qubit labels.

    Description:
        Terms are stored as a map from a letter string such as ``"XIZ"`` to
        its complex coefficient; string phases are folded into the
        coefficient. Coefficients with magnitude at or below the pruning
        tolerance are dropped on construction. Instances are immutable.

    Args:
        labels (sequence[str]): ordered qubit labels, one per letter.
        terms (mapping, optional): letter string (or letter sequence) to
            coefficient.
        tol (float, optional): pruning tolerance. Defaults to 1e-12.

    Examples:
        >>> bell = PauliSum(("S1", "N1"), {"II": 0.25, "XX": 0.25, "YY": -0.25, "ZZ": 0.25})
        >>> len(bell)
        4
        >>> bell.trace()
        (1+0j)
        >>> bell.restrict(["S1"]).coefficient("I")
        (0.5+0j)
    """

    __slots__ = ("_labels", "_terms", "_arrays_cache")
    # keep numpy scalars from broadcasting over a PauliSum
    __array_ufunc__ = None

    def __init__(self, labels, terms=None, tol=PRUNE_TOL):
        labels = tuple(str(label) for label in labels)
        _check_unique(labels)
        cleaned = {}
        for key, coefficient in (terms or {}).items():
            key = _normalize_key(key)
            if len(key) != len(labels):
                raise LabelError(
                    f"Pauli string '{key}' does not match {len(labels)} labels",
                )
            coefficient = complex(coefficient)
            if abs(coefficient) > tol:
                cleaned[key] = cleaned.get(key, 0j) + coefficient
        self._labels = labels
        self._terms = {key: value for key, value in cleaned.items() if abs(value) > tol}
        self._arrays_cache = None

    @classmethod
    def _from_clean(cls, labels, terms, tol=PRUNE_TOL):
        instance = cls.__new__(cls)
        instance._labels = tuple(labels)
        instance._terms = {key: value for key, value in terms.items() if abs(value) > tol}
        instance._arrays_cache = None
        return instance

    @classmethod
    def identity(cls, labels, coefficient=1.0):
        labels = tuple(labels)
        return cls(labels, {"I" * len(labels): coefficient})

    @classmethod
    def from_strings(cls, strings, coefficients=None):
        strings = list(strings)
        if not strings:
            raise ValueError("at least one Pauli string is required")
        if coefficients is None:
            coefficients = [1.0] * len(strings)
        labels = strings[0].labels
        terms = {}
        for string, coefficient in zip(strings, coefficients):
            if string.labels != labels:
                raise LabelError("Pauli strings act on different qubit labels")
            terms[string.key] = terms.get(string.key, 0j) + coefficient * string.phase.to_complex()
        return cls(labels, terms)

    @property
    def labels(self):
        return self._labels

    @property
    def num_qubits(self):
        return len(self._labels)

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __repr__(self):
        return f"PauliSum(labels={self._labels!r}, terms={dict(sorted(self._terms.items()))!r})"

    def coefficient(self, key):
        return self._terms.get(_normalize_key(key), 0j)

    def _check_same_labels(self, other):
        if self._labels != other.labels:
            raise LabelError(
                f"Pauli sums act on different qubit labels: {self._labels} vs {other.labels}",
            )

    def __add__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        self._check_same_labels(other)
        terms = dict(self._terms)
        for key, value in other.items():
            terms[key] = terms.get(key, 0j) + value
        return PauliSum._from_clean(self._labels, terms)

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, PauliSum):
            return NotImplemented
        scalar = complex(scalar)
        return PauliSum._from_clean(
            self._labels,
            {key: value * scalar for key, value in self._terms.items()},
        )

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / complex(scalar))

    def __matmul__(self, other):
        """Operator product, computed with exact string products."""
        if not isinstance(other, PauliSum):
            return NotImplemented
        self._check_same_labels(other)
        terms = {}
        for key_a, value_a in self._terms.items():
            for key_b, value_b in other.items():
                phase, key = multiply_keys(key_a, key_b)
                terms[key] = terms.get(key, 0j) + value_a * value_b * phase.to_complex()
        return PauliSum._from_clean(self._labels, terms)

    def tensor(self, other):
        collision = set(self._labels) & set(other.labels)
        if collision:
            label = sorted(collision)[0]
            raise LabelError(f"qubit label '{label}' appears on both factors", token=label)
        terms = {
            key_a + key_b: value_a * value_b
            for key_a, value_a in self._terms.items()
            for key_b, value_b in other.items()
        }
        return PauliSum._from_clean(self._labels + other.labels, terms)

    def tensor_power(self, count, labels):
        """Tensors ``count`` copies of this sum onto the given ordered labels."""
        labels = tuple(labels)
        if len(labels) != count * self.num_qubits:
            raise LabelError(
                f"tensor power needs {count * self.num_qubits} labels, got {len(labels)}",
            )
        _check_unique(labels)
        terms = {}
        for combo in itertools.product(self._terms.items(), repeat=count):
            value = 1 + 0j
            for _, factor in combo:
                value *= factor
            key = "".join(key for key, _ in combo)
            terms[key] = terms.get(key, 0j) + value
        return PauliSum._from_clean(labels, terms)

    def relabel(self, labels):
        labels = tuple(labels)
        if len(labels) != self.num_qubits:
            raise LabelError(f"expected {self.num_qubits} labels, got {len(labels)}")
        _check_unique(labels)
        return PauliSum._from_clean(labels, dict(self._terms))

    def _arrays(self):
        if self._arrays_cache is None:
            keys = list(self._terms)
            width = self.num_qubits
            if keys and width:
                letters = np.frombuffer("".join(keys).encode("ascii"), dtype=np.uint8)
                letters = letters.reshape(len(keys), width)
            else:
                letters = np.zeros((len(keys), width), dtype=np.uint8)
            coefficients = np.array([self._terms[key] for key in keys], dtype=complex)
            self._arrays_cache = (keys, letters, coefficients)
        return self._arrays_cache

    def restrict(self, keep):
        """Partial trace onto ``keep`` (in the given order).

        Strings acting non-trivially on a traced label vanish; the rest are
        scaled by 2 per traced qubit.
        """
        _, letters, coefficients = self._arrays()
        keep, selected, new_keys, scale = _restriction(self._labels, letters, keep)
        return PauliSum._from_clean(keep, dict(zip(new_keys, (coefficients[selected] * scale).tolist())))

    def trace(self):
        return self._terms.get("I" * self.num_qubits, 0j) * 2 ** self.num_qubits

    def is_hermitian(self, tol=PRUNE_TOL):
        return all(abs(value.imag) <= tol for value in self._terms.values())

    def max_abs(self):
        if not self._terms:
            return 0.0
        return max(abs(value) for value in self._terms.values())

    def allclose(self, other, tol=PRUNE_TOL):
        return self._labels == other.labels and (self - other).max_abs() <= tol

    def to_dense(self, dense_limit=None):
        return sum_to_dense(self, dense_limit=dense_limit)

    def to_records(self):
        return [
            {"string": key, "re": value.real, "im": value.imag}
            for key, value in sorted(self._terms.items())
        ]

    def to_json(self):
        return json.dumps(self.to_records())

    @classmethod
    def from_json(cls, text, labels=None):
        records = json.loads(text)
        if labels is None:
            width = len(records[0]["string"]) if records else 0
            labels = default_labels(width)
        return cls(labels, {record["string"]: complex(record["re"], record["im"]) for record in records})

    def format_terms(self, precision=6):
        if not self._terms:
            return "0"
        parts = []
        for key, value in sorted(self._terms.items()):
            if abs(value.imag) <= PRUNE_TOL:
                parts.append(f"{value.real:+.{precision}g} {key or '1'}")
            else:
                parts.append(f"({value:.{precision}g}) {key or '1'}")
        return " ".join(parts)


def _restriction(labels, letters, keep):
    # a SubsetSpec carries its canonical output order in ``labels``
    keep = tuple(keep.labels) if hasattr(keep, "labels") else tuple(keep)
    position = {label: index for index, label in enumerate(labels)}
    for label in keep:
        if label not in position:
            raise LabelError(f"cannot keep unknown qubit label '{label}'", token=label)
    _check_unique(keep)
    keep_set = set(keep)
    traced = [index for index, label in enumerate(labels) if label not in keep_set]
    keep_index = [position[label] for label in keep]
    if traced:
        selected = (letters[:, traced] == _IDENTITY_BYTE).all(axis=1)
    else:
        selected = np.ones(letters.shape[0], dtype=bool)
    width = len(keep)
    count = int(selected.sum())
    if width and count:
        raw = letters[selected][:, keep_index].tobytes().decode("ascii")
        new_keys = [raw[row * width:(row + 1) * width] for row in range(count)]
    else:
        new_keys = [""] * count
    return keep, selected, new_keys, float(2 ** len(traced))


class PauliStack:
    """Several PauliSums on one label list sharing a single term index.

    Restricting the stack selects the surviving strings once for every
    member, which is what a sweep over many subsets needs.

    Examples:
        >>> plus = PauliSum(("A", "B"), {"II": 0.25, "XI": 0.25})
        >>> minus = PauliSum(("A", "B"), {"II": 0.25, "XI": -0.25, "ZZ": 0.25})
        >>> [s.coefficient("X") for s in PauliStack([plus, minus]).restrict(["A"])]
        [(0.5+0j), (-0.5+0j)]
    """

    def __init__(self, sums):
        sums = list(sums)
        if not sums:
            raise ValueError("a PauliStack needs at least one PauliSum")
        labels = sums[0].labels
        for s in sums:
            if s.labels != labels:
                raise LabelError(f"Pauli sums act on different qubit labels: {labels} vs {s.labels}")
        keys = sorted(set().union(*(s.terms.keys() for s in sums)))
        width = len(labels)
        if keys and width:
            letters = np.frombuffer("".join(keys).encode("ascii"), dtype=np.uint8).reshape(len(keys), width)
        else:
            letters = np.zeros((len(keys), width), dtype=np.uint8)
        self.labels = labels
        self._letters = letters
        self._coefficients = np.array(
            [[s.terms.get(key, 0j) for key in keys] for s in sums],
            dtype=complex,
        ).reshape(len(sums), len(keys))

    def __len__(self):
        return self._coefficients.shape[0]

    def restrict(self, keep):
        """Partial trace of every member onto ``keep``, in member order."""
        keep, selected, new_keys, scale = _restriction(self.labels, self._letters, keep)
        block = self._coefficients[:, selected] * scale
        return [PauliSum._from_clean(keep, dict(zip(new_keys, row.tolist()))) for row in block]


@lru_cache(maxsize=None)
def _parity_table(num_qubits):
    indices = np.arange(1 << num_qubits)
    parity = np.zeros(1 << num_qubits, dtype=np.int64)
    for bit in range(num_qubits):
        parity ^= (indices >> bit) & 1
    parity.setflags(write=False)
    return parity


@lru_cache(maxsize=None)
def _sign_matrix(num_qubits):
    matrix = reduce(np.kron, [np.array([[1.0, 1.0], [1.0, -1.0]])] * num_qubits, np.ones((1, 1)))
    matrix.setflags(write=False)
    return matrix


def _masks(key):
    width = len(key)
    x_mask = z_mask = y_count = 0
    for position, char in enumerate(key):
        bit = 1 << (width - 1 - position)
        if char in "XY":
            x_mask |= bit
        if char in "ZY":
            z_mask |= bit
        if char == "Y":
            y_count += 1
    return x_mask, z_mask, y_count


def sum_to_dense(s, dense_limit=None):
    """Expands a PauliSum into its 2^m x 2^m matrix (first label most significant).

    Examples:
        >>> sum_to_dense(PauliSum(("q0",), {"I": 0.5})).entries.tolist()
        [[(0.5+0j), 0j], [0j, (0.5+0j)]]
    """
    width = s.num_qubits
    check_dense_limit(width, dense_limit)
    dim = 1 << width
    matrix = np.zeros((dim, dim), dtype=complex)
    rows = np.arange(dim)
    parity = _parity_table(width)
    for key, coefficient in s.items():
        x_mask, z_mask, y_count = _masks(key)
        columns = rows ^ x_mask
        signs = 1 - 2 * parity[columns & z_mask]
        matrix[rows, columns] += coefficient * _UNIT_VALUES[y_count % 4] * signs
    return DenseOperator(matrix, s.labels)


def dense_to_sum(d, tol=PRUNE_TOL):
    """Decomposes a square operator as sum_P c_P P with c_P = Tr(P d) / 2^m."""
    entries = np.asarray(d.entries, dtype=complex)
    dim = entries.shape[0]
    width = dim.bit_length() - 1
    if entries.ndim != 2 or entries.shape != (dim, dim) or dim != 1 << width:
        raise ValueError(
            f"operator dimension {entries.shape} is not a square power of two",
        )
    indices = np.arange(dim)
    # shifted[x, c] = d[c, c ^ x]; the Walsh sign transform then yields Tr(P d)
    shifted = entries[indices[None, :], indices[None, :] ^ indices[:, None]]
    traces = shifted @ _sign_matrix(width)
    y_counts = _popcount_table(width)[indices[:, None] & indices[None, :]]
    coefficients = traces * np.array(_UNIT_VALUES)[y_counts % 4] / dim
    xs, zs = np.nonzero(np.abs(coefficients) > tol)
    shifts = np.arange(width - 1, -1, -1)
    codes = ((xs[:, None] >> shifts) & 1) * 2 + ((zs[:, None] >> shifts) & 1)
    raw = _LETTER_BYTES[codes].astype(np.uint8).tobytes().decode("ascii")
    keys = [raw[row * width:(row + 1) * width] for row in range(len(xs))]
    return PauliSum._from_clean(
        d.labels,
        dict(zip(keys, coefficients[xs, zs].tolist())),
        tol=tol,
    )


@lru_cache(maxsize=None)
def _popcount_table(num_qubits):
    indices = np.arange(1 << num_qubits)
    counts = np.zeros(1 << num_qubits, dtype=np.int64)
    for bit in range(num_qubits):
        counts += (indices >> bit) & 1
    counts.setflags(write=False)
    return counts
