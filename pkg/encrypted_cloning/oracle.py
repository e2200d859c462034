import logging
import time
from dataclasses import dataclass

import numpy as np
import pandas as pd

from encrypted_cloning.classifier import (
    CU,
    FI,
    PI,
    classify,
    complement_in_register,
)
from encrypted_cloning.config import (
    CHANNEL_TOL,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    check_dense_limit,
    get_dense_limit,
)
from encrypted_cloning.dense import BlochVector, DenseOperator, partial_trace, partial_trace_pure
from encrypted_cloning.encoding import (
    build_encoded_branch_sum,
    build_encoded_unitary_path,
    check_pair_count,
    check_unitarity,
)
from encrypted_cloning.exceptions import AffinityError
from encrypted_cloning.pauli import PauliStack, sum_to_dense
from encrypted_cloning.subsets import enumerate_subsets

logger = logging.getLogger(__name__)

PROBE_INPUTS = (
    BlochVector(0.0, 0.0, 1.0),
    BlochVector(0.0, 0.0, -1.0),
    BlochVector(1.0, 0.0, 0.0),
    BlochVector(0.0, 1.0, 0.0),
)
CHANNELS = ("x", "y", "z")
PATHS = ("auto", "dense", "pauli")
FAMILIES = ("storage", "with_a")
ASSUMPTION = "full informativeness is observed as all three Bloch channels active"
RESULT_COLUMNS = [
    "n",
    "family",
    "subset",
    "predicted",
    "observed",
    "channels",
    "norm_x",
    "norm_y",
    "norm_z",
    "max_err",
    "spectrum_err",
]


def choose_path(n, path="auto", dense_limit=None):
    """Resolves ``auto`` to ``dense`` when the 2n + 1 qubit state fits the dense ceiling."""
    if path not in PATHS:
        raise ValueError(f"path must be one of {', '.join(PATHS)}, got '{path}'")
    width = 2 * check_pair_count(n) + 1
    if path == "auto":
        return "dense" if width <= get_dense_limit(dense_limit) else "pauli"
    if path == "dense":
        check_dense_limit(width, dense_limit)
    return path


def _check_keep(n, keep):
    if keep.n != n:
        raise ValueError(f"subset {keep.to_text()} has n={keep.n}, expected n={n}")


class EncodedBatch:
    """Encoded states of several inputs, held on one representation path.

    Description:
        On the dense path the pure state vectors are kept and reduced as
        M M^dagger; on the Pauli path the branch sums share one term index
        so that every subset is selected once for the whole batch.

    Args:
        n (int): number of pairs.
        inputs (sequence[BlochVector]): input states, in order.
        path (str, optional): ``auto``, ``dense`` or ``pauli``.
        dense_limit (int, optional): dense ceiling override.
    """

    def __init__(self, n, inputs, path="auto", dense_limit=None):
        self.n = check_pair_count(n)
        self.inputs = tuple(inputs)
        self.path = choose_path(n, path, dense_limit)
        self.dense_limit = dense_limit
        if self.path == "dense":
            self.states = [
                build_encoded_unitary_path(n, b, dense_limit=dense_limit).as_vector for b in self.inputs
            ]
        else:
            self.states = PauliStack(build_encoded_branch_sum(n, b) for b in self.inputs)

    def __len__(self):
        return len(self.inputs)

    def reduce(self, keep):
        """Reduced states on ``keep`` (canonical order), one per input."""
        _check_keep(self.n, keep)
        if self.path == "dense":
            return [partial_trace_pure(state, keep) for state in self.states]
        return self.states.restrict(keep.labels)


def reduce_encoded(n, b, keep, path="auto", dense_limit=None):
    """Reduced density matrix of the encoded state on ``keep``.

    Description:
        The dense path traces the unitary-path state; the Pauli path keeps
        only strings that are the identity on every traced qubit, rescales
        them by 2 per traced qubit and expands the result.
    """
    _check_keep(n, keep)
    if choose_path(n, path, dense_limit) == "dense":
        return partial_trace(build_encoded_unitary_path(n, b, dense_limit=dense_limit).as_density, keep)
    return sum_to_dense(reduce_encoded_pauli(n, b, keep), dense_limit=dense_limit)


def reduce_encoded_pauli(n, b, keep):
    """Reduced state on ``keep`` as a PauliSum, from the branch-sum encoding."""
    _check_keep(n, keep)
    return build_encoded_branch_sum(n, b).restrict(keep.labels)


@dataclass(frozen=True, eq=False)
class ChannelDecomposition:
    """rho(b) = T0 + x T1 + y T2 + z T3 on one subset.

    The operators are DenseOperators or PauliSums depending on the path;
    ``norms`` holds the max-abs entry (or coefficient) of T1, T2 and T3.
    """

    operators: tuple
    residual: float = 0.0

    @property
    def T0(self):
        return self.operators[0]

    @property
    def T1(self):
        return self.operators[1]

    @property
    def T2(self):
        return self.operators[2]

    @property
    def T3(self):
        return self.operators[3]

    @property
    def norms(self):
        return tuple(float(operator.max_abs()) for operator in self.operators[1:])

    def active_channels(self, tol=CHANNEL_TOL):
        return tuple(name for name, norm in zip(CHANNELS, self.norms) if norm > tol)

    def evaluate(self, b):
        t0, t1, t2, t3 = self.operators
        return t0 + t1 * b.x + t2 * b.y + t3 * b.z


def decompose_states(probe_states, check_state, check_input, tol=CHANNEL_TOL):
    """Solves the affine channel model from the four probe reductions.

    ``probe_states`` are the reductions for +z, -z, +x and +y in that order;
    the fifth reduction ``check_state`` of ``check_input`` must be reproduced
    within ``tol`` or ``AffinityError`` is raised.
    """
    plus_z, minus_z, plus_x, plus_y = probe_states
    t0 = (plus_z + minus_z) * 0.5
    t3 = (plus_z - minus_z) * 0.5
    decomposition = ChannelDecomposition((t0, plus_x - t0, plus_y - t0, t3))
    residual = float((decomposition.evaluate(check_input) - check_state).max_abs())
    if residual > tol:
        raise AffinityError(f"channel model misses the check input by {residual:.3e}")
    return ChannelDecomposition(decomposition.operators, residual)


def channel_decompose(n, keep, path="auto", seed=DEFAULT_SEED, dense_limit=None, tol=CHANNEL_TOL):
    """Extracts T0..T3 for ``keep`` from the probe inputs plus a seeded random check input.

    Examples:
        >>> from encrypted_cloning.subsets import SubsetSpec
        >>> decomposition = channel_decompose(3, SubsetSpec.parse("A,N1,N2,N3", n=3))
        >>> decomposition.active_channels()
        ('y',)
    """
    _check_keep(n, keep)
    check_input = BlochVector.random(np.random.default_rng(seed))
    batch = EncodedBatch(n, PROBE_INPUTS + (check_input,), path=path, dense_limit=dense_limit)
    states = batch.reduce(keep)
    return decompose_states(states[:4], states[4], check_input, tol=tol)


def observed_class(d, tol=CHANNEL_TOL):
    """No active channel is CU, all three are FI, anything in between is PI."""
    active = d.active_channels(tol)
    if not active:
        return CU
    if len(active) == len(CHANNELS):
        return FI
    return PI


def leakage_reasons(n, d, predicted, tol=CHANNEL_TOL):
    """Lists how ``d`` breaks the partially informative pattern for n pairs.

    A partially informative subset leaks through the y channel alone, and
    its y norm is at least 2^-(n+1).
    """
    observed = observed_class(d, tol)
    if PI not in (observed, predicted):
        return []
    reasons = []
    channels = d.active_channels(tol)
    if channels != ("y",):
        reasons.append(f"partially informative leakage through '{''.join(channels)}'")
    floor = 2.0 ** -(n + 1)
    if d.norms[1] < floor - tol:
        reasons.append(f"partially informative y norm {d.norms[1]:.3e} below {floor:.3e}")
    return reasons


def _distance(analytic, numeric):
    if isinstance(numeric, DenseOperator):
        return (sum_to_dense(analytic, dense_limit=max(numeric.num_qubits, 1)) - numeric).max_abs()
    return (analytic - numeric).max_abs()


def _spectrum_gap(first, second):
    a = np.sort(first.eigenvalues())[::-1]
    b = np.sort(second.eigenvalues())[::-1]
    width = max(len(a), len(b))
    a = np.pad(a, (0, width - len(a)))
    b = np.pad(b, (0, width - len(b)))
    return float(np.max(np.abs(a - b)))


@dataclass(frozen=True, eq=False)
class VerificationReport:
    """Outcome of a classification and closed-form sweep.

    ``rows`` holds one dict per (n, subset) with the ``RESULT_COLUMNS`` keys;
    ``mismatches`` is empty exactly when the sweep passed.
    """

    meta: dict
    rows: tuple
    mismatches: tuple

    @property
    def passed(self):
        return not self.mismatches

    @property
    def subset_count(self):
        return len(self.rows)

    @property
    def max_error(self):
        errors = [row["max_err"] for row in self.rows if row["max_err"] is not None]
        return max(errors) if errors else None

    def to_frame(self):
        return pd.DataFrame(list(self.rows), columns=RESULT_COLUMNS)


def _verify_subset(n, subset, probes, check_input, sampled, sample_inputs, forms, tol):
    record = classify(subset)
    reduced = probes.reduce(subset)
    row = dict.fromkeys(RESULT_COLUMNS)
    row.update(n=n, family=record.family, subset=subset.to_text(), predicted=record.predicted.value)
    reasons = []
    try:
        decomposition = decompose_states(reduced[:4], reduced[4], check_input, tol=tol)
    except AffinityError as error:
        reasons.append(str(error))
        decomposition = None
    if decomposition is not None:
        observed = observed_class(decomposition, tol)
        channels = decomposition.active_channels(tol)
        row.update(observed=observed.value, channels="".join(channels))
        row.update(zip(("norm_x", "norm_y", "norm_z"), decomposition.norms))
        if observed is not record.predicted:
            reasons.append(f"observed {observed.value}")
        reasons.extend(leakage_reasons(n, decomposition, record.predicted, tol))
        logger.debug("n=%d %s norms=%s", n, subset.to_text(), decomposition.norms)

    applicable = [form for form in forms if form.applies_to(subset)]
    if applicable and sample_inputs:
        numeric = sampled.reduce(subset)
        row["max_err"] = max(
            float(_distance(form.get_function()(subset, b), state))
            for form in applicable
            for b, state in zip(sample_inputs, numeric)
        )
        if row["max_err"] > tol:
            reasons.append(f"closed form error {row['max_err']:.3e}")

    if subset.includes_a and probes.path == "dense":
        complement = complement_in_register(n, subset.register_part())
        rest = partial_trace_pure(probes.states[4], complement)
        row["spectrum_err"] = _spectrum_gap(reduced[4], rest)
        if row["spectrum_err"] > tol:
            reasons.append(f"complement spectrum differs by {row['spectrum_err']:.3e}")

    mismatch = None
    if reasons:
        mismatch = {
            "n": n,
            "family": row["family"],
            "subset": row["subset"],
            "predicted": row["predicted"],
            "observed": row["observed"],
            "norms": [row["norm_x"], row["norm_y"], row["norm_z"]],
            "reason": "; ".join(reasons),
        }
        logger.warning("mismatch n=%d %s: %s", n, row["subset"], mismatch["reason"])
    return row, mismatch


def _verify_n(n, tol, samples, seed, path, dense_limit, forms):
    chosen = choose_path(n, path, dense_limit)
    rng = np.random.default_rng([seed, n])
    check_input = BlochVector.random(rng)
    sample_inputs = tuple(BlochVector.random(rng) for _ in range(samples))
    logger.debug("n=%d seed=%d check input=%s", n, seed, check_input.as_tuple())
    probes = EncodedBatch(n, PROBE_INPUTS + (check_input,), path=chosen, dense_limit=dense_limit)
    sampled = EncodedBatch(n, sample_inputs, path=chosen, dense_limit=dense_limit) if samples else None

    info = {"n": n, "path": chosen, "subsets": 2 * 4 ** n, "unitarity": None, "path_agreement": None}
    if chosen == "dense":
        info["unitarity"] = check_unitarity(n, dense_limit=dense_limit)
        branch = sum_to_dense(build_encoded_branch_sum(n, check_input), dense_limit=dense_limit)
        unitary = build_encoded_unitary_path(n, check_input, dense_limit=dense_limit).as_density
        info["path_agreement"] = (branch - unitary).max_abs()
    logger.info("n=%d: sweeping %d subsets on the %s path", n, info["subsets"], chosen)

    rows, mismatches = [], []
    for family in FAMILIES:
        for subset in enumerate_subsets(n, include_a=family == "with_a"):
            row, mismatch = _verify_subset(
                n, subset, probes, check_input, sampled, sample_inputs, forms, tol,
            )
            rows.append(row)
            if mismatch is not None:
                mismatches.append(mismatch)
    for name in ("unitarity", "path_agreement"):
        if info[name] is not None and info[name] > tol:
            mismatches.append(
                {
                    "n": n,
                    "family": None,
                    "subset": None,
                    "predicted": None,
                    "observed": None,
                    "norms": None,
                    "reason": f"{name} deviation {info[name]:.3e}",
                },
            )
            logger.warning("n=%d: %s deviation %.3e", n, name, info[name])
    return rows, mismatches, info


def verify_all(
    n_max,
    tol=CHANNEL_TOL,
    samples=DEFAULT_SAMPLES,
    seed=DEFAULT_SEED,
    path="auto",
    dense_limit=None,
    timing=False,
    forms=None,
):
    """Checks the classifiers and every closed form against numerics for n = 1..n_max.

    Description:
        For each n, every storage set B and every set {A} u C is reduced at
        the four probe inputs plus a seeded check input. The observed class
        must equal the predicted one, partially informative sets must leak
        through y only, and each applicable closed form must match the
        numeric reduction within ``tol`` on ``samples`` seeded random inputs.
        Mismatches are collected, never raised.

    Args:
        n_max (int): largest number of pairs to sweep.
        tol (float, optional): channel and comparison tolerance.
        samples (int, optional): random inputs per n for closed forms.
        seed (int, optional): seed of the input generator.
        path (str, optional): ``auto``, ``dense`` or ``pauli``.
        dense_limit (int, optional): dense ceiling override.
        timing (bool, optional): record ``duration_ms`` in the meta block.
        forms (list, optional): closed-form instances; defaults to one of
            each registered class.
    """
    n_max = check_pair_count(n_max)
    if isinstance(samples, bool) or int(samples) != samples or samples < 0:
        raise ValueError(f"samples must be a non-negative integer, got {samples}")
    for n in range(1, n_max + 1):
        choose_path(n, path, dense_limit)
    if forms is None:
        from encrypted_cloning import CLOSED_FORMS

        forms = [form() for form in CLOSED_FORMS]
    start = time.perf_counter()
    rows, mismatches, per_n = [], [], []
    for n in range(1, n_max + 1):
        rows_n, mismatches_n, info = _verify_n(n, tol, int(samples), seed, path, dense_limit, forms)
        rows.extend(rows_n)
        mismatches.extend(mismatches_n)
        per_n.append(info)
    duration_ms = (time.perf_counter() - start) * 1000.0
    logger.info("swept %d subsets with %d mismatches in %.0f ms", len(rows), len(mismatches), duration_ms)
    errors = [row["max_err"] for row in rows if row["max_err"] is not None]
    meta = {
        "n_max": n_max,
        "tol": tol,
        "seed": seed,
        "samples": int(samples),
        "path": path,
        "duration_ms": duration_ms if timing else None,
        "assumption": ASSUMPTION,
        "subsets": len(rows),
        "mismatches": len(mismatches),
        "max_err": max(errors) if errors else None,
        "per_n": per_n,
    }
    return VerificationReport(meta, tuple(rows), tuple(mismatches))
