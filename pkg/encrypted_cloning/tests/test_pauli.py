import itertools
from functools import reduce
from types import SimpleNamespace

import numpy as np
import pytest

from encrypted_cloning.dense import PAULI_MATRICES
from encrypted_cloning.encoding import bell_operator
from encrypted_cloning.exceptions import DenseLimitError, LabelError
from encrypted_cloning.pauli import (
    PauliLetter,
    PauliStack,
    PauliString,
    PauliSum,
    Phase4,
    dense_to_sum,
    multiply_keys,
    pauli_product,
    sum_to_dense,
)


def kron_key(key):
    return reduce(np.kron, [PAULI_MATRICES[PauliLetter[char]] for char in key], np.ones((1, 1)))


def test_product_table_matches_matrices():
    for a, b in itertools.product(range(4), repeat=2):
        phase, letter = pauli_product(a, b)
        np.testing.assert_allclose(
            PAULI_MATRICES[a] @ PAULI_MATRICES[b],
            phase.to_complex() * PAULI_MATRICES[letter],
        )


def test_multiply_keys():
    phase, key = multiply_keys("XYZ", "YZX")
    assert key == "ZXY"
    assert phase == Phase4(3)


class TestPhase4:
    def test_from_complex(self):
        assert Phase4.from_complex(-1j) == Phase4(3)
        assert Phase4.from_complex(-1) == Phase4(2)
        with pytest.raises(ValueError, match="is not one of the unit phases"):
            Phase4.from_complex(0.5)

    def test_arithmetic(self):
        assert Phase4(1) ** 3 == Phase4(3)
        assert -Phase4(1) == Phase4(3)
        assert Phase4(1).inverse() * Phase4(1) == Phase4(0)
        assert complex(Phase4(2)) == -1


class TestPauliString:
    def test_parse_and_str(self):
        for text in ("XYZ", "iXX", "-ZI", "-iY"):
            assert str(PauliString.parse(text)) == text
        assert str(PauliString.parse("+XX")) == "XX"
        assert PauliString.parse("XZ", labels=("A", "S1")).labels == ("A", "S1")

    def test_parse_errors(self):
        with pytest.raises(ValueError, match="invalid Pauli string 'XQ'"):
            PauliString.parse("XQ")
        with pytest.raises(ValueError, match="unknown Pauli letter 'q'"):
            PauliLetter.parse("q")
        with pytest.raises(LabelError, match="2 letters but 1 labels"):
            PauliString.parse("XX", labels=("A",))

    def test_multiply(self):
        a = PauliString.parse("XZ")
        b = PauliString.parse("iYY")
        product = a * b
        # XY = iZ and ZY = -iX
        assert str(product) == "iZX"
        assert str(product.adjoint()) == "-iZX"

    def test_label_mismatch(self):
        a = PauliString.parse("X", labels=("A",))
        b = PauliString.parse("X", labels=("S1",))
        with pytest.raises(LabelError, match="different qubit labels"):
            a * b


class TestPauliSum:
    def test_construction(self):
        s = PauliSum(("a", "b"), {"xx": 0.5, "XX": 0.5, "ZZ": 1e-14})
        assert len(s) == 1
        assert s.coefficient("XX") == 1
        assert s.coefficient("YY") == 0
        assert s.num_qubits == 2

    def test_bad_key_length(self):
        with pytest.raises(LabelError, match="does not match 2 labels"):
            PauliSum(("a", "b"), {"X": 1.0})

    def test_duplicate_labels(self):
        with pytest.raises(LabelError, match="duplicate qubit label 'a'"):
            PauliSum(("a", "a"), {"XX": 1.0})

    def test_algebra(self):
        x = PauliSum(("q",), {"X": 1.0})
        y = PauliSum(("q",), {"Y": 1.0})
        assert (x @ y).coefficient("Z") == 1j
        assert (y @ x).coefficient("Z") == -1j
        assert len(x - x) == 0
        assert (2 * x + y).coefficient("X") == 2
        assert (x / 4).coefficient("X") == 0.25
        with pytest.raises(LabelError):
            x + PauliSum(("r",), {"X": 1.0})

    def test_from_strings(self):
        strings = [PauliString.parse("iXX"), PauliString.parse("-iXX"), PauliString.parse("ZZ")]
        s = PauliSum.from_strings(strings, [1.0, 1.0, 0.5])
        assert dict(s.terms) == {"ZZ": 0.5}

    def test_tensor(self):
        left = PauliSum(("A",), {"I": 0.5, "Z": 0.5})
        right = PauliSum(("S1",), {"X": 2.0})
        product = left.tensor(right)
        assert product.labels == ("A", "S1")
        assert dict(product.terms) == {"IX": 1.0, "ZX": 1.0}
        with pytest.raises(LabelError) as error:
            left.tensor(left)
        assert error.value.token == "A"

    def test_tensor_power(self):
        bell = bell_operator(0, 0)
        labels = ("S1", "N1", "S2", "N2")
        power = bell.tensor_power(2, labels)
        assert power.labels == labels
        assert len(power) == 16
        assert power.coefficient("XXYY") == pytest.approx(-1 / 16)
        with pytest.raises(LabelError, match="needs 4 labels"):
            bell.tensor_power(2, labels[:3])

    def test_restrict(self):
        s = PauliSum(("A", "B", "C"), {"III": 0.125, "XIZ": 0.125, "XYI": 0.125})
        reduced = s.restrict(["C", "A"])
        assert reduced.labels == ("C", "A")
        assert dict(reduced.terms) == {"II": 0.25, "ZX": 0.25}
        with pytest.raises(LabelError) as error:
            s.restrict(["D"])
        assert error.value.token == "D"
        empty = s.restrict([])
        assert empty.labels == ()
        assert dict(empty.terms) == {"": 1.0}

    def test_trace_and_hermitian(self):
        s = PauliSum(("a", "b"), {"II": 0.25, "XY": 0.1j})
        assert s.trace() == 1
        assert not s.is_hermitian()
        assert s.max_abs() == 0.25

    def test_dense_matches_kron(self):
        rng = np.random.default_rng(11)
        keys = ["".join(letters) for letters in itertools.product("IXYZ", repeat=3)]
        chosen = rng.choice(len(keys), size=12, replace=False)
        terms = {keys[index]: complex(*rng.standard_normal(2)) for index in chosen}
        s = PauliSum(("q0", "q1", "q2"), terms)
        expected = sum(value * kron_key(key) for key, value in terms.items())
        np.testing.assert_allclose(sum_to_dense(s).entries, expected, atol=1e-12)
        assert dense_to_sum(sum_to_dense(s)).allclose(s)

    def test_dense_limit(self):
        s = PauliSum.identity(("a", "b", "c", "d"), 1 / 16)
        with pytest.raises(DenseLimitError, match="exceeds the limit of 3 qubits"):
            sum_to_dense(s, dense_limit=3)

    def test_dense_to_sum_rejects_bad_shape(self):
        operator = SimpleNamespace(entries=np.eye(3), labels=("a",))
        with pytest.raises(ValueError, match="not a square power of two"):
            dense_to_sum(operator)

    def test_json(self):
        s = PauliSum(("A", "S1"), {"XY": 0.5 - 0.25j, "II": 0.25})
        assert s.to_records() == [
            {"string": "II", "re": 0.25, "im": 0.0},
            {"string": "XY", "re": 0.5, "im": -0.25},
        ]
        assert PauliSum.from_json(s.to_json(), labels=("A", "S1")).allclose(s)

    def test_format_terms(self):
        s = PauliSum(("a",), {"X": 0.5, "Z": -0.25})
        assert s.format_terms() == "+0.5 X -0.25 Z"
        assert PauliSum(("a",)).format_terms() == "0"


def test_bell_operators_match_outer_products():
    phi = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
    vectors = [np.kron(PAULI_MATRICES[mu], np.eye(2)) @ phi for mu in range(4)]
    for mu, nu in itertools.product(range(4), repeat=2):
        np.testing.assert_allclose(
            sum_to_dense(bell_operator(mu, nu)).entries,
            np.outer(vectors[mu], vectors[nu].conj()),
            atol=1e-15,
        )


def test_bell_projector_is_idempotent():
    bell = bell_operator(0, 0)
    assert (bell @ bell).allclose(bell)
    assert bell.trace() == pytest.approx(1.0)


class TestPauliStack:
    def test_matches_individual_restrictions(self):
        labels = ("A", "S1", "N1")
        rng = np.random.default_rng(5)
        sums = [
            PauliSum(labels, {"III": 0.125, "XZI": rng.standard_normal(), "IYY": rng.standard_normal()})
            for _ in range(3)
        ]
        stack = PauliStack(sums)
        assert len(stack) == 3
        for keep in (["A"], ["S1", "N1"], ["N1", "A"], []):
            for stacked, single in zip(stack.restrict(keep), sums):
                assert stacked.allclose(single.restrict(keep))

    def test_errors(self):
        with pytest.raises(ValueError, match="at least one PauliSum"):
            PauliStack([])
        with pytest.raises(LabelError, match="different qubit labels"):
            PauliStack([PauliSum(("A",), {"I": 0.5}), PauliSum(("B",), {"I": 0.5})])
