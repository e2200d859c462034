import pytest

from encrypted_cloning.config import (
    DEFAULT_DENSE_LIMIT,
    DENSE_LIMIT_ENV,
    check_dense_limit,
    get_dense_limit,
)
from encrypted_cloning.exceptions import DenseLimitError


def test_default(monkeypatch):
    monkeypatch.delenv(DENSE_LIMIT_ENV, raising=False)
    assert get_dense_limit() == DEFAULT_DENSE_LIMIT == 9


def test_environment_override(monkeypatch):
    monkeypatch.setenv(DENSE_LIMIT_ENV, "4")
    assert get_dense_limit() == 4
    assert get_dense_limit(6) == 6
    with pytest.raises(DenseLimitError) as error:
        check_dense_limit(5)
    assert error.value.limit == 4
    assert error.value.num_qubits == 5


def test_bad_values(monkeypatch):
    monkeypatch.setenv(DENSE_LIMIT_ENV, "lots")
    with pytest.raises(ValueError, match="QEC_DENSE_LIMIT must be a positive integer, got 'lots'"):
        get_dense_limit()
    monkeypatch.setenv(DENSE_LIMIT_ENV, "0")
    with pytest.raises(ValueError, match="QEC_DENSE_LIMIT must be a positive integer"):
        get_dense_limit()
    with pytest.raises(ValueError, match="dense limit must be a positive integer"):
        get_dense_limit(0)
