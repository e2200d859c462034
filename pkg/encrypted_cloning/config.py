import os

from encrypted_cloning.exceptions import DenseLimitError

PRUNE_TOL = 1e-12
DENSITY_TOL = 1e-12
EIGEN_TOL = -1e-10
CHANNEL_TOL = 1e-10
BLOCH_TOL = 1e-10
CLI_BLOCH_TOL = 1e-6

DEFAULT_SEED = 42
DEFAULT_SAMPLES = 20

DEFAULT_DENSE_LIMIT = 9
DENSE_LIMIT_ENV = "QEC_DENSE_LIMIT"


def get_dense_limit(dense_limit=None):
    """Returns the dense-path qubit ceiling.

    An explicit ``dense_limit`` wins, then the ``QEC_DENSE_LIMIT``
    environment variable, then ``DEFAULT_DENSE_LIMIT``.

    Examples:
        >>> get_dense_limit(5)
        5
    """
    if dense_limit is not None:
        if int(dense_limit) < 1:
            raise ValueError(f"dense limit must be a positive integer, got {dense_limit}")
        return int(dense_limit)
    raw = os.environ.get(DENSE_LIMIT_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_DENSE_LIMIT
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(
            f"{DENSE_LIMIT_ENV} must be a positive integer, got '{raw}'",
        ) from None
    if value < 1:
        raise ValueError(f"{DENSE_LIMIT_ENV} must be a positive integer, got '{raw}'")
    return value


def check_dense_limit(num_qubits, dense_limit=None):
    limit = get_dense_limit(dense_limit)
    if num_qubits > limit:
        raise DenseLimitError(num_qubits, limit)
    return limit
