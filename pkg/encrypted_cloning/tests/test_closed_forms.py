import numpy as np
import pytest

from encrypted_cloning import CLOSED_FORMS
from encrypted_cloning.closed_forms import (
    WORKED_EXAMPLES,
    GammaReducedState,
    ParityCaseReducedState,
    StorageSpanReducedState,
    WorkedExampleReducedState,
    reduced_storage_span_form,
    reduced_withA_case_form,
    reduced_withA_via_gamma,
    with_a_labels,
    worked_example,
)
from encrypted_cloning.dense import BlochVector
from encrypted_cloning.oracle import reduce_encoded
from encrypted_cloning.pauli import PauliSum, sum_to_dense
from encrypted_cloning.subsets import SubsetSpec
from encrypted_cloning.tests.test_utils import ClosedFormT


def real_terms(state):
    assert state.is_hermitian()
    return {key: value.real for key, value in state.items()}


class TestGammaReducedState(ClosedFormT):
    closed_form = GammaReducedState
    max_checked_n = 4


class TestParityCaseReducedState(ClosedFormT):
    closed_form = ParityCaseReducedState
    max_checked_n = 4


class TestWorkedExampleReducedState(ClosedFormT):
    closed_form = WorkedExampleReducedState

    def test_not_beyond_three_pairs(self):
        subset = SubsetSpec.parse("A,S1,N2,N3,N4", n=4)
        assert not self.closed_form().applies_to(subset)


class TestStorageSpanReducedState(ClosedFormT):
    closed_form = StorageSpanReducedState
    max_checked_n = 4


def test_registry_holds_every_form():
    assert set(CLOSED_FORMS) == {
        GammaReducedState,
        ParityCaseReducedState,
        WorkedExampleReducedState,
        StorageSpanReducedState,
    }


def test_n1_q0_terms():
    b = BlochVector(0.6, 0.0, 0.8)
    rho = reduced_withA_via_gamma(1, 0, b)
    assert rho.labels == ("A", "N1")
    assert real_terms(rho) == pytest.approx({"II": 0.25, "YY": -0.25})
    b = BlochVector(0.0, 1.0, 0.0)
    rho = reduced_withA_via_gamma(1, 0, b)
    assert real_terms(rho) == pytest.approx({"II": 0.25, "ZX": 0.25, "YY": -0.25, "XZ": -0.25})


def test_n2_q1_terms():
    b = BlochVector(0.48, 0.6, 0.64)
    rho = reduced_withA_via_gamma(2, 1, b)
    expected = {"III": 1, "ZXX": 0.6, "XYY": -0.64, "YZZ": 0.48}
    assert real_terms(rho) == pytest.approx({key: value / 8 for key, value in expected.items()})


def test_n3_q3_terms():
    b = BlochVector(0.0, 0.6, 0.8)
    rho = reduced_withA_case_form(3, 3, b)
    expected = {"IIII": 1, "YXXX": -0.8, "IYYY": -0.6}
    assert real_terms(rho) == pytest.approx({key: value / 16 for key, value in expected.items()})


def test_n2_q0_terms():
    b = BlochVector(0.6, 0.0, -0.8)
    rho = reduced_withA_case_form(2, 0, b)
    expected = {"III": 1, "YXX": 0.8, "ZYY": -0.6}
    assert real_terms(rho) == pytest.approx({key: value / 8 for key, value in expected.items()})


def test_n3_even_q_has_positive_input_free_term():
    for q in (0, 2):
        rho = reduced_withA_case_form(3, q, BlochVector(0, 0, 1))
        assert rho.coefficient("YYYY") == pytest.approx(1 / 16)
        numeric = reduce_encoded(3, BlochVector(0, 0, 1), SubsetSpec.parse(",".join(with_a_labels(3, q)), n=3))
        np.testing.assert_allclose(sum_to_dense(rho).entries, numeric.entries, atol=1e-12)


def test_flipped_sign_is_not_a_state():
    b = BlochVector(0, 1, 0)
    rho = worked_example(3, 0, b)
    flipped = rho - PauliSum(rho.labels, {"YYYY": 2 / 16})
    assert min(sum_to_dense(rho).eigenvalues()) > -1e-12
    assert min(sum_to_dense(flipped).eigenvalues()) < -1e-3


def test_routes_agree(random_inputs):
    for n in range(1, 7):
        for q in range(n + 1):
            for b in random_inputs:
                via_gamma = reduced_withA_via_gamma(n, q, b)
                case_form = reduced_withA_case_form(n, q, b)
                assert (via_gamma - case_form).max_abs() <= 1e-12


def test_worked_examples_match_case_forms(random_inputs):
    assert len(WORKED_EXAMPLES) == 9
    for n, q in WORKED_EXAMPLES:
        for b in random_inputs:
            assert (worked_example(n, q, b) - reduced_withA_case_form(n, q, b)).max_abs() <= 1e-12


def test_worked_examples_match_dense_oracle(random_inputs):
    for n, q in WORKED_EXAMPLES:
        subset = SubsetSpec.parse(",".join(with_a_labels(n, q)), n=n)
        for b in random_inputs:
            numeric = reduce_encoded(n, b, subset, path="dense")
            np.testing.assert_allclose(sum_to_dense(worked_example(n, q, b)).entries, numeric.entries, atol=1e-12)


def test_y_confinement_odd_n_even_q():
    for n in (1, 3, 5):
        for q in range(0, n + 1, 2):
            zero = reduced_withA_case_form(n, q, BlochVector(1, 0, 0))
            other = reduced_withA_case_form(n, q, BlochVector(0, 0, 1))
            # x and z leave no trace: only the y coefficient moves the state
            assert (zero - other).max_abs() <= 1e-15


def test_storage_span_form():
    rho = reduced_storage_span_form(2, 1, BlochVector(0, 1, 0))
    assert real_terms(rho) == pytest.approx({"II": 0.25})
    rho = reduced_storage_span_form(3, 3, BlochVector(0, 1, 0))
    assert real_terms(rho) == pytest.approx({"III": 0.125, "YYY": -0.125})
    rho = reduced_storage_span_form(1, 1, BlochVector(0, -0.6, 0.8))
    assert real_terms(rho) == pytest.approx({"I": 0.5, "Y": -0.3})
    assert rho.labels == ("S1",)


def test_invalid_signal_count():
    with pytest.raises(ValueError, match="signal count q must be an integer in 0..2, got 3"):
        reduced_withA_case_form(2, 3, BlochVector(0, 0, 1))
    with pytest.raises(ValueError, match="no tabulated state"):
        worked_example(4, 0, BlochVector(0, 0, 1))
