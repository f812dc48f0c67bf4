"""
Shared fixtures for the test suite.

Bundled universes come from ScenarioLoader so every test sees the same parsed
files the CLI uses. ``--update-golden`` rewrites the committed golden files
instead of comparing against them.
"""

import pytest

from hourglass.images import Analysis
from hourglass.scenario_loader import ScenarioLoader
from tests.strategies import build_universe


def pytest_addoption(parser):
    parser.addoption(
        "--update-golden",
        action="store_true",
        default=False,
        help="rewrite data/golden files from the current output",
    )


@pytest.fixture
def update_golden(request):
    return request.config.getoption("--update-golden")


# === BUNDLED SCENARIOS ===

@pytest.fixture
def tcpip():
    return ScenarioLoader.get_scenario("tcpip").universe


@pytest.fixture
def unix_fork():
    return ScenarioLoader.get_scenario("unix_fork").universe


@pytest.fixture
def grid_auth():
    return ScenarioLoader.get_scenario("grid_auth").universe


@pytest.fixture
def tcpip_analysis(tcpip):
    return Analysis(tcpip)


# === SMALL HAND-BUILT UNIVERSES ===

@pytest.fixture
def chain_universe():
    """
    WEAK={a} strictly weaker than STRONG={a, b}; both reach APP.

    Both specs are sufficient for N={APP}; only WEAK is minimal.
    """
    return build_universe(
        atoms=["a", "b", "x"],
        specs={"WEAK": ["a"], "STRONG": ["a", "b"], "APP": ["x"]},
        programs={"P": [("a", "x")]},
        necessary=["APP"],
    )


@pytest.fixture
def disjoint_universe():
    """Two unrelated specs with disjoint images in both directions."""
    return build_universe(
        atoms=["a", "b", "x", "y", "l", "m"],
        specs={
            "LA": ["l"],
            "LB": ["m"],
            "A": ["a"],
            "B": ["b"],
            "XA": ["x"],
            "YB": ["y"],
        },
        programs={
            "PA": [("l", "a"), ("a", "x")],
            "PB": [("m", "b"), ("b", "y")],
        },
    )
