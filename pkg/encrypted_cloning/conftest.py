import numpy as np
import pytest

from encrypted_cloning.dense import BlochVector

collect_ignore = ["__main__.py"]


@pytest.fixture(scope="session")
def random_inputs():
    rng = np.random.default_rng(2024)
    return [BlochVector.random(rng) for _ in range(20)]


def pytest_addoption(parser):
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="If true, also run the n = 5, 6 Pauli-path sweeps",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running sweep, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
