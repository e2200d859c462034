from encrypted_cloning.coefficients import SECTORS, check_signal_count, gamma
from encrypted_cloning.pauli import PauliSum

_LETTERS = "IXYZ"


def with_a_labels(n, q):
    """Labels of {A, S1..Sq, N(q+1)..Nn}, the canonical representative of its class."""
    return ("A",) + tuple(f"S{index}" for index in range(1, q + 1)) + tuple(
        f"N{index}" for index in range(q + 1, n + 1)
    )


def storage_labels(n, p):
    return tuple(f"S{index}" for index in range(1, p + 1)) + tuple(
        f"N{index}" for index in range(p + 1, n + 1)
    )


def _labels_or_default(labels, default):
    if labels is None:
        return default
    labels = tuple(labels)
    if len(labels) != len(default):
        raise ValueError(f"expected {len(default)} labels, got {len(labels)}")
    return labels


def _assemble(n, labels, terms, scale):
    """Builds I + sum(coefficient * a_letter (x) register_letter^n), times ``scale``."""
    summed = {"I" * len(labels): 1.0}
    for head, letter, coefficient in terms:
        key = head + letter * n
        summed[key] = summed.get(key, 0j) + coefficient
    return PauliSum(labels, {key: value * scale for key, value in summed.items()})


def reduced_withA_via_gamma(n, q, b, labels=None):
    """Computes the state of {A} u C, |C| = n, from the Gamma operators.

    Description:
        rho = I / 2^(n+1) + 2^-(n+3) sum_j (Gamma_j0 + x Gamma_j1 + y Gamma_j2
        + z Gamma_j3) (x) sigma_j^(x n), with every Gamma evaluated by exact
        Pauli products.

    Examples:
        >>> from encrypted_cloning.dense import BlochVector
        >>> rho = reduced_withA_via_gamma(1, 0, BlochVector(0, 1, 0))
        >>> sorted((key, value.real) for key, value in rho.items())
        [('II', 0.25), ('XZ', -0.25), ('YY', -0.25), ('ZX', 0.25)]
    """
    n, q = check_signal_count(n, q)
    labels = _labels_or_default(labels, with_a_labels(n, q))
    components = b.components
    terms = []
    for j in SECTORS:
        for r in range(4):
            for letter, coefficient in gamma(n, q, j, r).items():
                # Gamma carries the 4 of its tables; 2^-(n+3) = 2^-(n+1) / 4
                terms.append((letter, _LETTERS[j], coefficient * components[r] / 4.0))
    return _assemble(n, labels, terms, 1.0 / 2 ** (n + 1))


def reduced_withA_case_form(n, q, b, labels=None):
    """Computes the state of {A} u C, |C| = n, from the parity of (n, q).

    Examples:
        >>> from encrypted_cloning.dense import BlochVector
        >>> rho = reduced_withA_case_form(3, 2, BlochVector(0, 1, 0))
        >>> rho.coefficient("YYYY") * 16
        (1+0j)
    """
    n, q = check_signal_count(n, q)
    labels = _labels_or_default(labels, with_a_labels(n, q))
    x, y, z = b.as_tuple()
    if n % 2 == 0 and q % 2 == 0:
        sign = (-1) ** (n // 2)
        terms = [("Y", "X", -z), ("Z", "Y", sign * x), ("X", "Z", -y)]
    elif n % 2 == 0:
        sign = (-1) ** (n // 2)
        terms = [("Z", "X", y), ("X", "Y", sign * z), ("Y", "Z", x)]
    elif q % 2 == 1:
        sign = (-1) ** ((n - 1) // 2)
        terms = [("Y", "X", -z), ("I", "Y", sign * y), ("Y", "Z", x)]
    else:
        # the Y_A (x) Y^n term is input-independent
        sign = (-1) ** ((n + 1) // 2)
        terms = [("Z", "X", y), ("Y", "Y", float(sign)), ("X", "Z", -y)]
    return _assemble(n, labels, terms, 1.0 / 2 ** (n + 1))


def reduced_storage_span_form(n, p, b, labels=None):
    """Computes the state of a spanning storage set of size n with p signals.

    Examples:
        >>> from encrypted_cloning.dense import BlochVector
        >>> rho = reduced_storage_span_form(3, 3, BlochVector(0, 1, 0))
        >>> rho.coefficient("YYY") * 8
        (-1+0j)
        >>> len(reduced_storage_span_form(2, 1, BlochVector(0, 1, 0)))
        1
    """
    n, p = check_signal_count(n, p)
    default = storage_labels(n, p)
    labels = _labels_or_default(labels, default)
    terms = {"I" * n: 1.0}
    if n % 2 == 1 and p % 2 == 1:
        terms["Y" * n] = (-1) ** ((n - 1) // 2) * b.y
    return PauliSum(labels, {key: value / 2 ** n for key, value in terms.items()})


# (A letter, register letter, Bloch index r, sign): each term is sign * b_r * A (x) letter^n.
# n=3 with q even: the Y_A (x) Y^3 term has sign +1; with -1 the operator
# would have eigenvalues of both signs whenever y != 0.
WORKED_EXAMPLES = {
    (1, 0): (("Z", "X", 2, 1), ("Y", "Y", 0, -1), ("X", "Z", 2, -1)),
    (1, 1): (("Y", "X", 3, -1), ("I", "Y", 2, 1), ("Y", "Z", 1, 1)),
    (2, 0): (("Y", "X", 3, -1), ("Z", "Y", 1, -1), ("X", "Z", 2, -1)),
    (2, 1): (("Z", "X", 2, 1), ("X", "Y", 3, -1), ("Y", "Z", 1, 1)),
    (2, 2): (("Y", "X", 3, -1), ("Z", "Y", 1, -1), ("X", "Z", 2, -1)),
    (3, 0): (("Z", "X", 2, 1), ("Y", "Y", 0, 1), ("X", "Z", 2, -1)),
    (3, 1): (("Y", "X", 3, -1), ("I", "Y", 2, -1), ("Y", "Z", 1, 1)),
    (3, 2): (("Z", "X", 2, 1), ("Y", "Y", 0, 1), ("X", "Z", 2, -1)),
    (3, 3): (("Y", "X", 3, -1), ("I", "Y", 2, -1), ("Y", "Z", 1, 1)),
}


def worked_example(n, q, b, labels=None):
    """Looks up one of the nine tabulated states for n <= 3."""
    n, q = check_signal_count(n, q)
    if (n, q) not in WORKED_EXAMPLES:
        raise ValueError(f"no tabulated state for n={n}, q={q}; tabulated for n <= 3")
    labels = _labels_or_default(labels, with_a_labels(n, q))
    components = b.components
    terms = [(head, letter, sign * components[r]) for head, letter, r, sign in WORKED_EXAMPLES[(n, q)]]
    return _assemble(n, labels, terms, 1.0 / 2 ** (n + 1))


class ClosedForm:
    """Base class for analytic reduced states of one-qubit-per-pair subsets.

    A subclass sets ``name``, ``family`` (``"with_a"`` or ``"storage"``) and
    optionally ``max_n``, and returns from ``get_function`` a callable
    ``(subset, b) -> PauliSum`` on ``subset.labels``.
    """

    name = None
    family = None
    max_n = None

    def applies_to(self, subset):
        if self.family == "with_a" and not subset.includes_a:
            return False
        if self.family == "storage" and subset.includes_a:
            return False
        if self.max_n is not None and subset.n > self.max_n:
            return False
        return subset.one_per_pair

    def get_function(self):
        raise NotImplementedError

    def __call__(self, subset, b):
        if not self.applies_to(subset):
            raise ValueError(f"{self.name} does not apply to subset {subset.to_text()}")
        return self.get_function()(subset, b)


class GammaReducedState(ClosedForm):
    """Computes the state of {A} u C through the Gamma operator sum.

    Examples:
        >>> from encrypted_cloning.dense import BlochVector
        >>> from encrypted_cloning.subsets import SubsetSpec
        >>> state = GammaReducedState()(SubsetSpec.parse("A,N1", n=1), BlochVector(0, 0, 1))
        >>> state.labels
        ('A', 'N1')
    """

    name = "gamma_reduced_state"
    family = "with_a"

    def get_function(self):
        def gamma_reduced_state(subset, b):
            return reduced_withA_via_gamma(subset.n, subset.q, b, labels=subset.labels)

        return gamma_reduced_state


class ParityCaseReducedState(ClosedForm):
    """Computes the state of {A} u C from the four (n, q) parity cases."""

    name = "parity_case_reduced_state"
    family = "with_a"

    def get_function(self):
        def parity_case_reduced_state(subset, b):
            return reduced_withA_case_form(subset.n, subset.q, b, labels=subset.labels)

        return parity_case_reduced_state


class WorkedExampleReducedState(ClosedForm):
    """Extracts the tabulated state of {A} u C for n = 1, 2, 3."""

    name = "worked_example_reduced_state"
    family = "with_a"
    max_n = 3

    def get_function(self):
        def worked_example_reduced_state(subset, b):
            return worked_example(subset.n, subset.q, b, labels=subset.labels)

        return worked_example_reduced_state


class StorageSpanReducedState(ClosedForm):
    """Computes the state of a storage set holding one qubit of every pair.

    Description:
        Maximally mixed unless n and p are both odd, where a single
        (-1)^((n-1)/2) y Y^(x n) term survives.
    """

    name = "storage_span_reduced_state"
    family = "storage"

    def get_function(self):
        def storage_span_reduced_state(subset, b):
            return reduced_storage_span_form(subset.n, subset.p, b, labels=subset.labels)

        return storage_span_reduced_state
