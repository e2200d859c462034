# flake8: noqa
from encrypted_cloning.version import __version__  # isort:skip

import inspect

from encrypted_cloning.classifier import (
    ClassificationRecord,
    InformativenessClass,
    all_pairs_incomplete,
    classify,
    classify_storage,
    classify_with_A,
    complement_in_register,
    complementary_class,
    has_full_pair,
    is_authorized,
    missing_pair,
    spans_all_pairs,
)
from encrypted_cloning.closed_forms import (
    ClosedForm,
    GammaReducedState,
    ParityCaseReducedState,
    StorageSpanReducedState,
    WorkedExampleReducedState,
    reduced_storage_span_form,
    reduced_withA_case_form,
    reduced_withA_via_gamma,
)
from encrypted_cloning.coefficients import (
    CoeffMatrix4,
    GammaTable,
    c_matrix,
    gamma,
    gamma_table,
    l_matrix,
    n_matrix,
    s_matrix,
)
from encrypted_cloning.dense import (
    BlochVector,
    DenseOperator,
    StateVector,
    bloch_to_state,
    partial_trace,
    tensor,
)
from encrypted_cloning.encoding import (
    AlphaCoefficients,
    EncodedState,
    alpha,
    build_bell_pair,
    build_encoded_branch_sum,
    build_encoded_unitary_path,
    build_encoding_unitary,
)
from encrypted_cloning.exceptions import AffinityError, DenseLimitError, LabelError
from encrypted_cloning.oracle import (
    ChannelDecomposition,
    VerificationReport,
    channel_decompose,
    observed_class,
    reduce_encoded,
    reduce_encoded_pauli,
    verify_all,
)
from encrypted_cloning.pauli import (
    PauliLetter,
    PauliString,
    PauliSum,
    Phase4,
    dense_to_sum,
    pauli_product,
    string_multiply,
    sum_to_dense,
)
from encrypted_cloning.subsets import SubsetSpec, enumerate_subsets

CLOSED_FORMS = [
    obj
    for obj in globals().values()
    if (inspect.isclass(obj) and obj is not ClosedForm and issubclass(obj, ClosedForm))
]
