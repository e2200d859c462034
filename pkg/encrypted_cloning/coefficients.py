import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from encrypted_cloning.encoding import AlphaCoefficients, check_pair_count
from encrypted_cloning.pauli import Phase4, PauliLetter, PauliSum, multiply_keys, pauli_product

_LETTERS = "IXYZ"
_PHASE_TEXT = ("1", "i", "-1", "-i")
SECTORS = (1, 2, 3)


def _check_sector(j):
    if j not in SECTORS:
        raise ValueError(f"sector j must be one of 1, 2, 3, got {j}")


def check_signal_count(n, q):
    n = check_pair_count(n)
    if isinstance(q, bool) or int(q) != q or not 0 <= q <= n:
        raise ValueError(f"signal count q must be an integer in 0..{n}, got {q}")
    return n, int(q)


@dataclass(frozen=True)
class CoeffMatrix4:
    """A 4x4 matrix whose entries are exact unit phases or zero (``None``).

    Examples:
        >>> m = CoeffMatrix4.from_entries({(0, 1): Phase4(1), (1, 0): Phase4(3)})
        >>> m.nonzero_count
        2
        >>> str(m.hadamard(m)[0, 1])
        '-'
    """

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.rows)
        if len(rows) != 4 or any(len(row) != 4 for row in rows):
            raise ValueError("coefficient matrix must be 4x4")
        for row in rows:
            for entry in row:
                if entry is not None and not isinstance(entry, Phase4):
                    raise ValueError(f"entry {entry!r} is neither a Phase4 nor None")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_entries(cls, entries):
        """Builds a matrix from a ``{(mu, nu): Phase4}`` map; missing entries are zero."""
        return cls(tuple(tuple(entries.get((mu, nu)) for nu in range(4)) for mu in range(4)))

    @classmethod
    def ones(cls):
        return cls(tuple(tuple(Phase4(0) for _ in range(4)) for _ in range(4)))

    def __getitem__(self, index):
        mu, nu = index
        return self.rows[mu][nu]

    def items(self):
        """Nonzero entries as ((mu, nu), Phase4) in row-major order."""
        return [
            ((mu, nu), self.rows[mu][nu])
            for mu, nu in itertools.product(range(4), repeat=2)
            if self.rows[mu][nu] is not None
        ]

    @property
    def support(self):
        return frozenset(position for position, _ in self.items())

    @property
    def nonzero_count(self):
        return len(self.items())

    def hadamard(self, other):
        """Entry-wise product."""
        return CoeffMatrix4(
            tuple(
                tuple(
                    None if a is None or b is None else a * b
                    for a, b in zip(row_a, row_b)
                )
                for row_a, row_b in zip(self.rows, other.rows)
            ),
        )

    def hadamard_power(self, power):
        """Entry-wise power; the zeroth power is the all-ones matrix."""
        if power < 0:
            raise ValueError(f"Hadamard power must be non-negative, got {power}")
        result = CoeffMatrix4.ones()
        for _ in range(power):
            result = result.hadamard(self)
        return result

    def to_array(self):
        return np.array(
            [[0j if entry is None else entry.to_complex() for entry in row] for row in self.rows],
        )

    def to_records(self):
        return [[None if entry is None else _PHASE_TEXT[entry.exponent] for entry in row] for row in self.rows]

    def to_text(self):
        cells = [["0" if entry is None else _PHASE_TEXT[entry.exponent] for entry in row] for row in self.rows]
        return "\n".join(" ".join(f"{cell:>3}" for cell in row) for row in cells)


def _matrix(entries):
    return CoeffMatrix4.from_entries({position: Phase4(exponent) for position, exponent in entries.items()})


# The displayed matrices, with entries written as exponents of i.
_S_DISPLAYED = {
    1: {(0, 1): 0, (1, 0): 0, (2, 3): 1, (3, 2): 3},
    2: {(0, 2): 0, (1, 3): 3, (2, 0): 0, (3, 1): 1},
    3: {(0, 3): 0, (1, 2): 1, (2, 1): 3, (3, 0): 0},
}
_N_DISPLAYED = {
    1: {(0, 1): 0, (1, 0): 0, (2, 3): 3, (3, 2): 1},
    2: {(0, 2): 2, (1, 3): 3, (2, 0): 2, (3, 1): 1},
    3: {(0, 3): 0, (1, 2): 3, (2, 1): 1, (3, 0): 0},
}


def s_matrix(j):
    """Signal coefficient matrix: (S_j)_{mu nu} is the sigma_j coefficient of sigma_mu sigma_nu."""
    _check_sector(j)
    return _matrix(_S_DISPLAYED[j])


def n_matrix(j):
    """Noise coefficient matrix: the sigma_j coefficient of (sigma_nu sigma_mu)^T."""
    _check_sector(j)
    return _matrix(_N_DISPLAYED[j])


def c_matrix(n, j):
    """The n-dependent part of alpha_mu^-1 alpha_nu supported where S_j is.

    Examples:
        >>> c_matrix(2, 3)[2, 1].to_complex()
        (1+0j)
        >>> str(c_matrix(3, 3)[2, 1])
        '-i'
    """
    n = check_pair_count(n)
    _check_sector(j)
    entries = {
        # (0,1)=i  (1,0)=-i  (2,3)=-i^-n  (3,2)=i^(n+2)
        1: {(0, 1): 1, (1, 0): 3, (2, 3): 2 - n, (3, 2): n + 2},
        # (0,2)=-i^(n+1)  (1,3)=1  (2,0)=-i^-(n+1)  (3,1)=1
        2: {(0, 2): n + 3, (1, 3): 0, (2, 0): 1 - n, (3, 1): 0},
        # (0,3)=i  (1,2)=i^(n+2)  (2,1)=-i^-n  (3,0)=-i
        3: {(0, 3): 1, (1, 2): n + 2, (2, 1): 2 - n, (3, 0): 3},
    }[j]
    return _matrix(entries)


def derived_s_matrix(j):
    """S_j rebuilt from the single-qubit product table."""
    _check_sector(j)
    entries = {}
    for mu, nu in itertools.product(range(4), repeat=2):
        phase, letter = pauli_product(mu, nu)
        if letter == j:
            entries[(mu, nu)] = phase
    return CoeffMatrix4.from_entries(entries)


def derived_n_matrix(j):
    """N_j rebuilt from the product table; transposition flips the sign of Y only."""
    _check_sector(j)
    entries = {}
    for mu, nu in itertools.product(range(4), repeat=2):
        phase, letter = pauli_product(nu, mu)
        if letter == j:
            entries[(mu, nu)] = -phase if letter == PauliLetter.Y else phase
    return CoeffMatrix4.from_entries(entries)


def derived_c_matrix(n, j):
    """The alpha product table restricted to the support of S_j."""
    products = AlphaCoefficients.for_n(n).product_matrix()
    return CoeffMatrix4.from_entries({(mu, nu): products[mu][nu] for mu, nu in derived_s_matrix(j).support})


def l_matrix(n, q, j):
    """Computes L_j = C_j o S_j^(o q) o N_j^(o (n - q)) with o the entry-wise product."""
    n, q = check_signal_count(n, q)
    _check_sector(j)
    return c_matrix(n, j).hadamard(s_matrix(j).hadamard_power(q)).hadamard(
        n_matrix(j).hadamard_power(n - q),
    )


def l_matrix_displayed(n, q, j):
    """The closed L_j entries, one sign or power of i each."""
    n, q = check_signal_count(n, q)
    _check_sector(j)
    entries = {
        # (0,1)=i  (1,0)=-i  (2,3)=(3,2)=(-1)^(n-q+1)
        1: {(0, 1): 1, (1, 0): 3, (2, 3): 2 * (n - q + 1), (3, 2): 2 * (n - q + 1)},
        # (0,2)=-(-1)^(n-q) i^(n+1)  (1,3)=(-i)^n  (2,0)=-(-1)^(n-q) i^-(n+1)  (3,1)=i^n
        2: {
            (0, 2): 2 + 2 * (n - q) + n + 1,
            (1, 3): 3 * n,
            (2, 0): 2 + 2 * (n - q) - (n + 1),
            (3, 1): n,
        },
        # (0,3)=i  (3,0)=-i  (1,2)=(2,1)=(-1)^(q+1)
        3: {(0, 3): 1, (3, 0): 3, (1, 2): 2 * (q + 1), (2, 1): 2 * (q + 1)},
    }[j]
    return _matrix(entries)


@lru_cache(maxsize=None)
def gamma(n, q, j, r):
    """Computes Gamma_{j,r} = sum_{mu nu} (L_j)_{mu nu} sigma_mu sigma_r sigma_nu on qubit A.

    Examples:
        >>> dict(gamma(1, 0, 3, 2).terms)
        {'X': (-4+0j)}
        >>> len(gamma(1, 0, 3, 0))
        0
    """
    if r not in (0, 1, 2, 3):
        raise ValueError(f"Bloch index r must be one of 0, 1, 2, 3, got {r}")
    terms = {}
    for (mu, nu), phase in l_matrix(n, q, j).items():
        first, middle = multiply_keys(_LETTERS[mu], _LETTERS[r])
        second, letter = multiply_keys(middle, _LETTERS[nu])
        terms[letter] = terms.get(letter, 0j) + (phase * first * second).to_complex()
    return PauliSum(("A",), terms)


@dataclass(frozen=True)
class GammaEntry:
    """The single nonzero Gamma of one sector: coefficient * letter, attached to b_r."""

    j: int
    r: int
    letter: PauliLetter
    coefficient: complex

    def to_text(self):
        value = self.coefficient.real if self.coefficient.imag == 0 else self.coefficient
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        return f"Gamma[{self.j},{self.r}] = {value:+} {self.letter.name}"

    def to_dict(self):
        return {
            "j": self.j,
            "r": self.r,
            "letter": self.letter.name,
            "re": self.coefficient.real,
            "im": self.coefficient.imag,
        }


@dataclass(frozen=True)
class GammaTable:
    """For fixed (n, q), the one nonzero Gamma per sector j = 1, 2, 3."""

    n: int
    q: int
    entries: tuple

    def __getitem__(self, j):
        return self.entries[j - 1]

    def to_text(self):
        lines = [f"n={self.n} q={self.q}"]
        for j in SECTORS:
            lines.append(f"L_{j}:")
            lines.extend("  " + line for line in l_matrix(self.n, self.q, j).to_text().splitlines())
        lines.extend(entry.to_text() for entry in self.entries)
        return "\n".join(lines)

    def to_dict(self):
        return {
            "n": self.n,
            "q": self.q,
            "l_matrices": {str(j): l_matrix(self.n, self.q, j).to_records() for j in SECTORS},
            "gamma": [entry.to_dict() for entry in self.entries],
        }


@lru_cache(maxsize=None)
def gamma_table(n, q):
    """Collects the nonzero Gamma of each sector.

    Raises ``ArithmeticError`` if a sector does not have exactly one nonzero
    single-letter Gamma.

    Examples:
        >>> table = gamma_table(3, 1)
        >>> [(entry.r, entry.letter.name) for entry in table.entries]
        [(3, 'Y'), (2, 'I'), (1, 'Y')]
    """
    n, q = check_signal_count(n, q)
    entries = []
    for j in SECTORS:
        nonzero = [(r, gamma(n, q, j, r)) for r in range(4)]
        nonzero = [(r, operator) for r, operator in nonzero if len(operator)]
        if len(nonzero) != 1 or len(nonzero[0][1]) != 1:
            raise ArithmeticError(f"sector {j} for n={n}, q={q} has no unique single-letter Gamma")
        r, operator = nonzero[0]
        ((letter, coefficient),) = operator.items()
        entries.append(GammaEntry(j, r, PauliLetter[letter], coefficient))
    return GammaTable(n, q, tuple(entries))
