import numpy as np
import pytest

from encrypted_cloning.classifier import CU, FI, PI, classify
from encrypted_cloning.closed_forms import ClosedForm
from encrypted_cloning.dense import BlochVector
from encrypted_cloning.exceptions import AffinityError, DenseLimitError
from encrypted_cloning.oracle import (
    RESULT_COLUMNS,
    ChannelDecomposition,
    EncodedBatch,
    channel_decompose,
    choose_path,
    decompose_states,
    leakage_reasons,
    observed_class,
    reduce_encoded,
    reduce_encoded_pauli,
    verify_all,
)
from encrypted_cloning.pauli import PauliSum, sum_to_dense
from encrypted_cloning.subsets import SubsetSpec, enumerate_subsets


class MaximallyMixedState(ClosedForm):
    """Computes the maximally mixed state, which no informative set has."""

    name = "maximally_mixed_state"
    family = "with_a"

    def get_function(self):
        def maximally_mixed_state(subset, b):
            return PauliSum.identity(subset.labels, 1 / 2 ** subset.size)

        return maximally_mixed_state


@pytest.fixture(scope="module")
def report_n3():
    return verify_all(3, samples=4)


def single_qubit(x, y, z):
    return PauliSum(("A",), {"I": 0.5, "X": x / 2, "Y": y / 2, "Z": z / 2})


class TestChoosePath:
    def test_auto(self):
        assert choose_path(4, dense_limit=9) == "dense"
        assert choose_path(5, dense_limit=9) == "pauli"
        assert choose_path(1, path="pauli") == "pauli"

    def test_errors(self):
        with pytest.raises(DenseLimitError):
            choose_path(5, path="dense", dense_limit=9)
        with pytest.raises(ValueError, match="path must be one of auto, dense, pauli, got 'sparse'"):
            choose_path(1, path="sparse")


class TestDecomposition:
    def test_affine_probes(self):
        probes = [single_qubit(0, 0, 1), single_qubit(0, 0, -1), single_qubit(1, 0, 0), single_qubit(0, 1, 0)]
        check = BlochVector(0.6, 0.0, 0.8)
        decomposition = decompose_states(probes, single_qubit(0.6, 0.0, 0.8), check)
        assert decomposition.residual == pytest.approx(0.0, abs=1e-15)
        assert decomposition.norms == (0.5, 0.5, 0.5)
        assert decomposition.active_channels() == ("x", "y", "z")
        assert observed_class(decomposition) is FI
        assert decomposition.evaluate(BlochVector(0, 1, 0)).allclose(single_qubit(0, 1, 0))

    def test_not_affine(self):
        probes = [single_qubit(0, 0, 1), single_qubit(0, 0, -1), single_qubit(1, 0, 0), single_qubit(0, 1, 0)]
        with pytest.raises(AffinityError, match="misses the check input"):
            decompose_states(probes, single_qubit(0, 0, 0), BlochVector(0, 0, 1))

    def test_observed_class(self):
        half = PauliSum.identity(("A",), 0.5)
        zero = PauliSum(("A",))
        y_only = PauliSum(("A",), {"Y": 0.5})
        assert observed_class(ChannelDecomposition((half, zero, zero, zero))) is CU
        assert observed_class(ChannelDecomposition((half, zero, y_only, zero))) is PI
        assert observed_class(ChannelDecomposition((half, y_only, y_only, y_only))) is FI

    def test_leakage_reasons(self):
        half = PauliSum.identity(("A",), 0.5)
        zero = PauliSum(("A",))
        y_only = PauliSum(("A",), {"Y": 0.25})
        faint = PauliSum(("A",), {"Y": 1e-6})
        assert leakage_reasons(1, ChannelDecomposition((half, zero, y_only, zero)), PI) == []
        assert leakage_reasons(1, ChannelDecomposition((half, zero, zero, zero)), CU) == []
        reasons = leakage_reasons(1, ChannelDecomposition((half, zero, faint, zero)), PI)
        assert reasons == ["partially informative y norm 1.000e-06 below 2.500e-01"]
        reasons = leakage_reasons(1, ChannelDecomposition((half, y_only, y_only, zero)), PI)
        assert reasons == ["partially informative leakage through 'xy'"]
        reasons = leakage_reasons(2, ChannelDecomposition((half, zero, zero, zero)), PI)
        assert reasons == [
            "partially informative leakage through ''",
            "partially informative y norm 0.000e+00 below 1.250e-01",
        ]



def test_channel_decompose_examples():
    assert channel_decompose(3, SubsetSpec.parse("A,N1,N2,N3", n=3)).active_channels() == ("y",)
    assert channel_decompose(2, SubsetSpec.parse("A,S1,N2", n=2)).active_channels() == ("x", "y", "z")
    assert channel_decompose(2, SubsetSpec.parse("S1,N2", n=2)).active_channels() == ()
    assert channel_decompose(1, SubsetSpec.parse("S1", n=1)).active_channels() == ("y",)


def test_channels_agree_with_classifier_n2():
    for include_a in (False, True):
        for subset in enumerate_subsets(2, include_a=include_a):
            decomposition = channel_decompose(2, subset)
            assert observed_class(decomposition) is classify(subset).predicted


def test_reduce_paths_agree():
    rng = np.random.default_rng(8)
    b = BlochVector.random(rng)
    for text in ("A", "A,S1,N2", "S1,N1", "S2,N1,N2", "A,S1,N1,S2,N2"):
        subset = SubsetSpec.parse(text, n=2)
        dense = reduce_encoded(2, b, subset, path="dense")
        pauli = reduce_encoded(2, b, subset, path="pauli")
        assert dense.labels == pauli.labels == subset.labels
        assert (dense - pauli).max_abs() < 1e-12
        assert (sum_to_dense(reduce_encoded_pauli(2, b, subset)) - dense).max_abs() < 1e-12


def test_reduce_checks_pair_count():
    with pytest.raises(ValueError, match="has n=1, expected n=2"):
        reduce_encoded(2, BlochVector(0, 0, 1), SubsetSpec.parse("S1", n=1))


def test_encoded_batch():
    inputs = [BlochVector(0, 0, 1), BlochVector(1, 0, 0)]
    subset = SubsetSpec.parse("A,N1", n=1)
    dense = EncodedBatch(1, inputs, path="dense")
    pauli = EncodedBatch(1, inputs, path="pauli")
    assert len(dense) == len(pauli) == 2
    for from_dense, from_pauli in zip(dense.reduce(subset), pauli.reduce(subset)):
        assert (from_dense - sum_to_dense(from_pauli)).max_abs() < 1e-12


class TestVerifyAll:
    def test_passes(self, report_n3):
        assert report_n3.passed
        assert report_n3.subset_count == 2 * (4 + 16 + 64)
        assert report_n3.max_error < 1e-10
        meta = report_n3.meta
        assert meta["mismatches"] == 0
        assert meta["duration_ms"] is None
        assert [info["path"] for info in meta["per_n"]] == ["dense", "dense", "dense"]
        assert all(info["unitarity"] < 1e-12 for info in meta["per_n"])
        assert all(info["path_agreement"] < 1e-12 for info in meta["per_n"])

    def test_rows(self, report_n3):
        frame = report_n3.to_frame()
        assert list(frame.columns) == RESULT_COLUMNS
        assert (frame["predicted"] == frame["observed"]).all()
        partial = frame[frame["predicted"] == PI.value]
        assert (partial["channels"] == "y").all()
        assert (partial["norm_y"] >= 2.0 ** -(partial["n"] + 1) - 1e-10).all()
        assert len(partial) > 0
        one_per_pair = frame[frame["max_err"].notna()]
        assert set(one_per_pair["family"]) == {"storage", "with_a"}
        with_a = frame[frame["family"] == "with_a"]
        assert (with_a["spectrum_err"] < 1e-10).all()

    def test_deterministic(self):
        first = verify_all(2, samples=3, seed=5)
        second = verify_all(2, samples=3, seed=5)
        assert first.rows == second.rows
        assert first.meta == second.meta

    def test_pauli_path_agrees(self):
        dense = verify_all(2, samples=2, path="dense")
        pauli = verify_all(2, samples=2, path="pauli")
        assert pauli.passed
        for row_dense, row_pauli in zip(dense.rows, pauli.rows):
            assert row_dense["observed"] == row_pauli["observed"]
            assert row_dense["channels"] == row_pauli["channels"]
        assert all(info["unitarity"] is None for info in pauli.meta["per_n"])

    def test_timing(self):
        report = verify_all(1, samples=0, timing=True)
        assert report.meta["duration_ms"] >= 0
        assert report.max_error is None

    def test_broken_form_is_reported(self):
        report = verify_all(1, samples=2, forms=[MaximallyMixedState()])
        assert not report.passed
        assert {mismatch["subset"] for mismatch in report.mismatches} == {"A,S1", "A,N1"}
        assert all("closed form error" in mismatch["reason"] for mismatch in report.mismatches)

    def test_argument_errors(self):
        with pytest.raises(ValueError, match="samples must be a non-negative integer"):
            verify_all(1, samples=-1)
        with pytest.raises(DenseLimitError):
            verify_all(5, path="dense", dense_limit=9)

    @pytest.mark.slow
    def test_pauli_sweep_n5_n6(self):
        for n in (5, 6):
            report = verify_all(n, samples=2, dense_limit=9)
            assert report.passed
            assert report.meta["per_n"][-1]["path"] == "pauli"
