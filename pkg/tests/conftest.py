"""Shared fixtures and the --runslow switch for large-sample simulations."""

import logging

import pytest

from f1_interval.core import ConfusionCounts


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run large-sample Monte Carlo checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: large-sample Monte Carlo check, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def example_counts():
    """Confusion matrix with tp=77, fp=44, fn=10, tn=702 (nu = 131)."""
    return ConfusionCounts(tp=77, fp=44, fn=10, tn=702)


@pytest.fixture(autouse=True)
def reset_root_handlers():
    """Drop the stderr handler ``main`` installs so it cannot outlive the captured stream."""
    yield
    root = logging.getLogger()
    for handler in root.handlers[:]:
        # pytest's own capture handlers are subclasses and stay attached
        if type(handler) is logging.StreamHandler:
            root.removeHandler(handler)
