import itertools

import numpy as np
import pytest

from encrypted_cloning.dense import BlochVector, partial_trace
from encrypted_cloning.encoding import (
    AlphaCoefficients,
    alpha,
    build_bell_pair,
    build_encoded_branch_sum,
    build_encoded_unitary_path,
    check_pair_count,
    check_unitarity,
    encoded_channel_sums,
    encoding_unitary_sum,
    global_labels,
    register_labels,
)
from encrypted_cloning.exceptions import DenseLimitError
from encrypted_cloning.pauli import sum_to_dense


def test_alpha():
    for n in range(1, 9):
        assert alpha(n, 0).to_complex() == 1
        assert alpha(n, 1).to_complex() == 1j
        assert alpha(n, 3).to_complex() == 1j
        assert alpha(n, 2).to_complex() == pytest.approx(-(1j ** (n + 1)))


def test_alpha_errors():
    with pytest.raises(ValueError, match="mu must be one of 0, 1, 2, 3, got 4"):
        alpha(1, 4)
    with pytest.raises(ValueError, match="positive integer, got 0"):
        alpha(0, 1)
    with pytest.raises(ValueError, match="positive integer"):
        check_pair_count(True)


def test_product_matrix():
    for n in (1, 2, 3, 4):
        coefficients = AlphaCoefficients.for_n(n)
        table = coefficients.product_matrix()
        for mu, nu in itertools.product(range(4), repeat=2):
            expected = np.conj(alpha(n, mu).to_complex()) * alpha(n, nu).to_complex()
            assert table[mu][nu].to_complex() == pytest.approx(expected)


def test_labels():
    assert register_labels(2) == ("S1", "N1", "S2", "N2")
    assert global_labels(1) == ("A", "S1", "N1")


def test_unitary_terms_n1():
    unitary = encoding_unitary_sum(1)
    assert unitary.labels == ("A", "S1")
    assert dict(unitary.terms) == {"II": 0.5, "XX": -0.5j, "YY": 0.5, "ZZ": -0.5j}


def test_unitarity():
    for n in range(1, 5):
        assert check_unitarity(n) < 1e-12


def test_bell_pair():
    pair = build_bell_pair(("S2", "N2"))
    assert pair.labels == ("S2", "N2")
    np.testing.assert_allclose(np.abs(pair.amplitudes) ** 2, [0.5, 0, 0, 0.5])


class TestEncodedState:
    @pytest.fixture(scope="class")
    def inputs(self):
        rng = np.random.default_rng(17)
        return [BlochVector.random(rng) for _ in range(3)]

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_paths_agree(self, n, random_inputs):
        assert len(random_inputs) >= 20
        k0, k1, k2, k3 = (sum_to_dense(k) for k in encoded_channel_sums(n))
        first = random_inputs[0]
        direct = sum_to_dense(build_encoded_branch_sum(n, first))
        assert (direct - (k0 + k1 * first.x + k2 * first.y + k3 * first.z)).max_abs() < 1e-12
        for b in random_inputs:
            branch = k0 + k1 * b.x + k2 * b.y + k3 * b.z
            unitary = build_encoded_unitary_path(n, b).as_density
            assert (branch - unitary).max_abs() < 1e-12

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_pure_unit_trace(self, n, random_inputs):
        for b in random_inputs:
            state = build_encoded_unitary_path(n, b)
            assert state.as_density.labels == global_labels(n)
            assert state.as_density.purity() == pytest.approx(1.0, abs=1e-10)
            assert state.as_density.trace() == pytest.approx(1.0, abs=1e-12)
        assert state.as_pauli.trace() == pytest.approx(1.0)

    def test_noise_marginal_is_maximally_mixed(self, inputs):
        for n in (1, 2, 3):
            noises = [f"N{index}" for index in range(1, n + 1)]
            marginal = partial_trace(build_encoded_unitary_path(n, inputs[1]).as_density, noises)
            np.testing.assert_allclose(marginal.entries, np.eye(2 ** n) / 2 ** n, atol=1e-12)

    def test_channel_sums_are_affine(self, inputs):
        for n in (1, 2):
            k0, k1, k2, k3 = encoded_channel_sums(n)
            for b in inputs:
                combined = k0 + k1 * b.x + k2 * b.y + k3 * b.z
                assert combined.allclose(build_encoded_branch_sum(n, b))

    def test_dense_limit(self):
        with pytest.raises(DenseLimitError, match="11 qubits exceeds the limit of 9"):
            build_encoded_unitary_path(5, BlochVector(0, 0, 1), dense_limit=9)
        rho = build_encoded_branch_sum(5, BlochVector(0, 0, 1))
        assert rho.trace() == pytest.approx(1.0)
