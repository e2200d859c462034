from dataclasses import dataclass, field
from enum import Enum

from encrypted_cloning.subsets import SubsetSpec


class InformativenessClass(str, Enum):
    FULLY_INFORMATIVE = "FullyInformative"
    PARTIALLY_INFORMATIVE = "PartiallyInformative"
    COMPLETELY_UNINFORMATIVE = "CompletelyUninformative"

    def __str__(self):
        return self.value


FI = InformativenessClass.FULLY_INFORMATIVE
PI = InformativenessClass.PARTIALLY_INFORMATIVE
CU = InformativenessClass.COMPLETELY_UNINFORMATIVE


def has_full_pair(s):
    """FULL-PAIR: some pair k has both S_k and N_k.

    Examples:
        >>> has_full_pair(SubsetSpec.parse("S1,N1", n=2))
        True
        >>> has_full_pair(SubsetSpec.parse("S1,N2", n=2))
        False
    """
    return bool(s.signals & s.noises)


def spans_all_pairs(s):
    """SPAN: every pair contributes at least one qubit."""
    return (s.signals | s.noises) == frozenset(range(1, s.n + 1))


def missing_pair(s):
    """MISSING-PAIR: some pair contributes no qubit."""
    return not spans_all_pairs(s)


def all_pairs_incomplete(s):
    """ALL-PAIRS-INCOMPLETE: no pair is complete."""
    return not has_full_pair(s)


def is_authorized(s):
    """A storage set is authorized when it satisfies SPAN and FULL-PAIR."""
    _check_register_only(s, "an authorized set")
    return spans_all_pairs(s) and has_full_pair(s)


def _check_register_only(s, role):
    if s.includes_a:
        raise ValueError(f"{role} must not contain A, got {s.to_text()}")


def _check_n(n, s):
    if s.n != n:
        raise ValueError(f"subset {s.to_text()} has n={s.n}, expected n={n}")


def _storage_path(n, b):
    if missing_pair(b):
        return CU, ("MISSING-PAIR",)
    if b.size > n:
        return FI, ("SPAN", "|B|>n", "FULL-PAIR")
    if n % 2 == 0:
        return CU, ("SPAN", "|B|=n", "n even")
    if b.p % 2 == 0:
        return CU, ("SPAN", "|B|=n", "n odd", "p even")
    return PI, ("SPAN", "|B|=n", "n odd", "p odd")


def _with_a_path(n, c):
    if has_full_pair(c):
        return FI, ("FULL-PAIR",)
    if c.size < n:
        return CU, ("ALL-PAIRS-INCOMPLETE", "|C|<n", "MISSING-PAIR")
    if n % 2 == 0:
        return FI, ("ALL-PAIRS-INCOMPLETE", "|C|=n", "n even")
    if c.q % 2 == 1:
        return FI, ("ALL-PAIRS-INCOMPLETE", "|C|=n", "n odd", "q odd")
    return PI, ("ALL-PAIRS-INCOMPLETE", "|C|=n", "n odd", "q even")


def classify_storage(n, b):
    """Determines the class of a storage-register set B.

    Examples:
        >>> str(classify_storage(3, SubsetSpec.parse("S1,S2,S3", n=3)))
        'PartiallyInformative'
        >>> str(classify_storage(3, SubsetSpec.parse("N1,N2,N3", n=3)))
        'CompletelyUninformative'
    """
    _check_register_only(b, "a storage set B")
    _check_n(n, b)
    return _storage_path(n, b)[0]


def classify_with_A(n, c):
    """Determines the class of H = {A} u C from the register part C."""
    _check_register_only(c, "the register part C")
    _check_n(n, c)
    return _with_a_path(n, c)[0]


@dataclass(frozen=True)
class ClassificationRecord:
    """A subset, its predicted class and the decision-tree branch that fired.

    ``active_channels`` and ``evidence`` are filled in by the oracle.
    """

    subset: SubsetSpec
    predicted: InformativenessClass
    rule_path: tuple
    active_channels: tuple = ()
    evidence: dict = field(default_factory=dict)

    @property
    def family(self):
        return "with_a" if self.subset.includes_a else "storage"

    def to_dict(self):
        return {
            "subset": self.subset.to_text(),
            "family": self.family,
            "predicted": self.predicted.value,
            "rule_path": list(self.rule_path),
        }


def classify(subset):
    """Classifies either family: sets containing A go through the {A} u C tree."""
    if subset.includes_a:
        predicted, path = _with_a_path(subset.n, subset.register_part())
    else:
        predicted, path = _storage_path(subset.n, subset)
    return ClassificationRecord(subset, predicted, path)


def complement_in_register(n, c):
    """Returns B = R_n minus C.

    Examples:
        >>> complement_in_register(2, SubsetSpec.parse("S1,N2", n=2)).to_text()
        'S2,N1'
    """
    _check_register_only(c, "the register part C")
    _check_n(n, c)
    register = SubsetSpec.register(n)
    return SubsetSpec(n, False, register.signals - c.signals, register.noises - c.noises)


def complementary_class(c):
    """Class of R_n minus C implied by the class of {A} u C for a pure global state."""
    return {FI: CU, CU: FI, PI: PI}[InformativenessClass(c)]
