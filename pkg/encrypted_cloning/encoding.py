import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from encrypted_cloning.config import check_dense_limit
from encrypted_cloning.dense import (
    BlochVector,
    DenseOperator,
    StateVector,
    apply_on,
    bloch_to_state,
)
from encrypted_cloning.pauli import Phase4, PauliSum, dense_to_sum, multiply_keys, sum_to_dense

_LETTERS = "IXYZ"


def check_pair_count(n):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"number of pairs n must be a positive integer, got {n}")
    return int(n)


def register_labels(n):
    """Canonical storage-register order: S1, N1, S2, N2, ..., Sn, Nn."""
    return tuple(label for index in range(1, n + 1) for label in (f"S{index}", f"N{index}"))


def global_labels(n):
    return ("A",) + register_labels(n)


def alpha(n, mu):
    """Returns alpha_mu for n clones as an exact phase.

    Examples:
        >>> alpha(1, 2).to_complex()
        (1+0j)
        >>> alpha(2, 2).to_complex()
        1j
        >>> alpha(5, 0).to_complex()
        (1+0j)
    """
    n = check_pair_count(n)
    if mu not in (0, 1, 2, 3):
        raise ValueError(f"Pauli index mu must be one of 0, 1, 2, 3, got {mu}")
    if mu == 0:
        return Phase4(0)
    if mu in (1, 3):
        return Phase4(1)
    # alpha_2 = -i^(n+1)
    return -(Phase4(1) ** (n + 1))


@dataclass(frozen=True)
class AlphaCoefficients:
    """The four encoding phases alpha_0..alpha_3 for a given number of clones."""

    n: int
    alpha: tuple

    @classmethod
    def for_n(cls, n):
        n = check_pair_count(n)
        return cls(n, tuple(alpha(n, mu) for mu in range(4)))

    def __getitem__(self, mu):
        return self.alpha[mu]

    def inverse(self, mu):
        return self.alpha[mu].conjugate()

    def product_matrix(self):
        """The 4x4 table alpha_mu^-1 alpha_nu, exactly."""
        return tuple(
            tuple(self.inverse(mu) * self.alpha[nu] for nu in range(4)) for mu in range(4)
        )


def build_bell_pair(labels=("S1", "N1")):
    """Returns (|00> + |11>) / sqrt(2) on a (signal, noise) label pair."""
    return StateVector(np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0), tuple(labels))


@lru_cache(maxsize=None)
def bell_operator(mu, nu):
    """Pauli form of |phi_mu><phi_nu| with |phi_mu> = (sigma_mu x I)|phi>.

    Examples:
        >>> sorted(bell_operator(0, 0).terms.items())
        [('II', (0.25+0j)), ('XX', (0.25+0j)), ('YY', (-0.25+0j)), ('ZZ', (0.25+0j))]
    """
    base = PauliSum(("S", "N"), {"II": 0.25, "XX": 0.25, "YY": -0.25, "ZZ": 0.25})
    left = PauliSum(("S", "N"), {_LETTERS[mu] + "I": 1.0})
    right = PauliSum(("S", "N"), {_LETTERS[nu] + "I": 1.0})
    return left @ base @ right


@lru_cache(maxsize=None)
def _register_branch(mu, nu, n):
    return bell_operator(mu, nu).tensor_power(n, register_labels(n))


def encoding_unitary_sum(n):
    """U_enc = 1/2 sum_mu alpha_mu^-1 sigma_mu^(A) x sigma_mu^(S_1) ... sigma_mu^(S_n)."""
    alphas = AlphaCoefficients.for_n(n)
    labels = ("A",) + tuple(f"S{index}" for index in range(1, n + 1))
    return PauliSum(
        labels,
        {_LETTERS[mu] * (n + 1): 0.5 * alphas.inverse(mu).to_complex() for mu in range(4)},
    )


def build_encoding_unitary(n, dense_limit=None):
    n = check_pair_count(n)
    check_dense_limit(n + 1, dense_limit)
    return sum_to_dense(encoding_unitary_sum(n), dense_limit=dense_limit)


def check_unitarity(n, dense_limit=None):
    """Returns max |(U U^dagger - I)_ij| for the n-clone encoding unitary."""
    unitary = build_encoding_unitary(n, dense_limit=dense_limit).entries
    deviation = unitary @ unitary.conj().T - np.eye(unitary.shape[0])
    return float(np.max(np.abs(deviation)))


@dataclass(frozen=True, eq=False)
class EncodedState:
    """The encoded pure state on A, S1, N1, ..., Sn, Nn for one input state."""

    n: int
    input: BlochVector
    as_vector: StateVector

    @cached_property
    def as_density(self):
        density = self.as_vector.density()
        return DenseOperator(density.entries, density.labels, density=True)

    @cached_property
    def as_pauli(self):
        return dense_to_sum(self.as_density)


def build_encoded_unitary_path(n, b, dense_limit=None):
    """Applies U_enc to |psi>_A and n Bell pairs; the noise qubits are untouched."""
    n = check_pair_count(n)
    check_dense_limit(2 * n + 1, dense_limit)
    state = bloch_to_state(b, "A")
    for index in range(1, n + 1):
        state = state.tensor(build_bell_pair((f"S{index}", f"N{index}")))
    state = apply_on(state, build_encoding_unitary(n, dense_limit=dense_limit))
    return EncodedState(n, b, state)


def _branch_sum(n, weights):
    alphas = AlphaCoefficients.for_n(n)
    terms = {}
    for mu, nu in itertools.product(range(4), repeat=2):
        branch_weight = 0.25 * (alphas.inverse(mu) * alphas[nu]).to_complex()
        # sigma_mu |psi><psi| sigma_nu = 1/2 sum_r b_r sigma_mu sigma_r sigma_nu
        input_part = {}
        for r, weight in enumerate(weights):
            if weight == 0:
                continue
            first, middle = multiply_keys(_LETTERS[mu], _LETTERS[r])
            second, key = multiply_keys(middle, _LETTERS[nu])
            value = 0.5 * weight * (first * second).to_complex()
            input_part[key] = input_part.get(key, 0j) + value
        register = _register_branch(mu, nu, n)
        for input_key, input_value in input_part.items():
            scale = branch_weight * input_value
            for register_key, register_value in register.items():
                key = input_key + register_key
                terms[key] = terms.get(key, 0j) + scale * register_value
    return PauliSum(global_labels(n), terms)


def build_encoded_branch_sum(n, b):
    """Builds rho_enc as a PauliSum from its sixteen (mu, nu) branches.

    Description:
        Each branch alpha_mu^-1 alpha_nu (sigma_mu |psi><psi| sigma_nu) x
        |phi_mu><phi_nu|^(x n) is expanded with exact Pauli products; no dense
        matrix is formed, so this path scales past the dense ceiling.

    Examples:
        >>> rho = build_encoded_branch_sum(1, BlochVector(0, 0, 1))
        >>> rho.labels
        ('A', 'S1', 'N1')
        >>> round(rho.trace().real, 12)
        1.0
    """
    n = check_pair_count(n)
    return _branch_sum(n, b.components)


def encoded_channel_sums(n):
    """Splits rho_enc into (K_0, K_1, K_2, K_3) with rho = K_0 + x K_1 + y K_2 + z K_3."""
    n = check_pair_count(n)
    return tuple(_branch_sum(n, tuple(1.0 if r == s else 0.0 for s in range(4))) for r in range(4))
