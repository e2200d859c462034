import itertools
import re
from dataclasses import dataclass, field

from encrypted_cloning.exceptions import LabelError

_TOKEN_PATTERN = re.compile(r"^(?:(A)|([SN])([1-9][0-9]*))$")
EMPTY_TEXT = "{}"


@dataclass(frozen=True)
class SubsetSpec:
    """A set of qubits drawn from A, S1..Sn and N1..Nn.

    Description:
        ``signals`` and ``noises`` hold 1-based pair indices. For a storage
        set B the signal count is called p; for the register part C of a
        set {A} u C it is called q. Both are ``len(signals)``.

    Args:
        n (int): number of signal/noise pairs.
        includes_a (bool, optional): whether qubit A is in the set.
        signals (iterable[int], optional): indices of the signal qubits.
        noises (iterable[int], optional): indices of the noise qubits.

    Examples:
        >>> subset = SubsetSpec.parse("n2,A,s1", n=2)
        >>> subset.labels
        ('A', 'S1', 'N2')
        >>> subset.q, subset.size
        (1, 3)
    """

    n: int
    includes_a: bool = False
    signals: frozenset = field(default_factory=frozenset)
    noises: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError(f"number of pairs n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "includes_a", bool(self.includes_a))
        for name, prefix in (("signals", "S"), ("noises", "N")):
            indices = frozenset(int(index) for index in getattr(self, name))
            for index in sorted(indices):
                if not 1 <= index <= self.n:
                    token = f"{prefix}{index}"
                    raise LabelError(
                        f"qubit label '{token}' is out of range for n={self.n}",
                        token=token,
                    )
            object.__setattr__(self, name, indices)

    @classmethod
    def parse(cls, text, n):
        """Parses comma-separated labels such as ``A,S1,N2`` (case-insensitive).

        ``{}`` or an empty string is the empty set. Unknown, duplicate or
        out-of-range labels raise ``LabelError`` carrying the token.
        """
        stripped = text.strip()
        if stripped in ("", EMPTY_TEXT):
            return cls(n)
        includes_a = False
        signals, noises = set(), set()
        seen = set()
        for raw in stripped.split(","):
            token = raw.strip()
            match = _TOKEN_PATTERN.match(token.upper())
            if match is None:
                raise LabelError(f"unknown qubit label '{token}'", token=token)
            label = token.upper()
            if label in seen:
                raise LabelError(f"duplicate qubit label '{token}'", token=token)
            seen.add(label)
            if match.group(1):
                includes_a = True
                continue
            index = int(match.group(3))
            if index > n:
                raise LabelError(f"qubit label '{token}' exceeds n={n}", token=token)
            (signals if match.group(2) == "S" else noises).add(index)
        return cls(n, includes_a, frozenset(signals), frozenset(noises))

    @classmethod
    def register(cls, n):
        """The full storage register R_n."""
        pairs = frozenset(range(1, n + 1))
        return cls(n, False, pairs, pairs)

    @property
    def q(self):
        return len(self.signals)

    @property
    def p(self):
        return len(self.signals)

    @property
    def size(self):
        return len(self.signals) + len(self.noises) + int(self.includes_a)

    @property
    def labels(self):
        """Canonical output order: A, signals ascending, noises ascending."""
        head = ("A",) if self.includes_a else ()
        return (
            head
            + tuple(f"S{index}" for index in sorted(self.signals))
            + tuple(f"N{index}" for index in sorted(self.noises))
        )

    @property
    def one_per_pair(self):
        """True when every pair contributes exactly one qubit."""
        return not (self.signals & self.noises) and (self.signals | self.noises) == frozenset(
            range(1, self.n + 1),
        )

    def register_part(self):
        return SubsetSpec(self.n, False, self.signals, self.noises)

    def with_a(self):
        return SubsetSpec(self.n, True, self.signals, self.noises)

    def sort_key(self):
        # positions in the global order A, S1, N1, S2, N2, ...
        positions = sorted(
            ([0] if self.includes_a else [])
            + [2 * index - 1 for index in self.signals]
            + [2 * index for index in self.noises],
        )
        return (self.size, tuple(positions))

    def to_text(self):
        return ",".join(self.labels) or EMPTY_TEXT

    def __str__(self):
        return self.to_text()


def enumerate_subsets(n, include_a=False):
    """Every register subset (4^n of them), optionally joined with A.

    Ordered by size, then by position in the global qubit order.

    Examples:
        >>> [subset.to_text() for subset in enumerate_subsets(1)]
        ['{}', 'S1', 'N1', 'S1,N1']
        >>> [subset.to_text() for subset in enumerate_subsets(1, include_a=True)][:2]
        ['A', 'A,S1']
    """
    subsets = []
    # each pair is absent, signal only, noise only or complete
    for states in itertools.product(range(4), repeat=n):
        signals = frozenset(index + 1 for index, state in enumerate(states) if state & 1)
        noises = frozenset(index + 1 for index, state in enumerate(states) if state & 2)
        subsets.append(SubsetSpec(n, include_a, signals, noises))
    return sorted(subsets, key=SubsetSpec.sort_key)
