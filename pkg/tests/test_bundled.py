"""
Regression tests for the bundled case-study scenarios.

Golden tradeoff tables and reports must be reproduced byte for byte; run
``pytest --update-golden`` to rewrite them after an intended change.
"""

import pytest

from hourglass.claims import Claim, check_claims
from hourglass.images import Analysis, verify_hourglass
from hourglass.reports import build_report, to_json, tradeoff_csv
from hourglass.scenario_loader import ScenarioLoader, bundled_scenarios
from hourglass.sufficiency import minimally_sufficient, sufficient, tradeoff_table

GOLDEN = ["tcpip", "unix_fork", "grid_auth"]


# === LOADER ===

def test_loader_lists_every_bundled_file():
    assert ScenarioLoader.list_scenarios() == ["grid_auth", "logistical", "planetlab", "tcpip", "unix_fork"]


def test_get_scenario_accepts_suffix():
    assert ScenarioLoader.get_scenario("tcpip.hgl").name == "tcpip"
    assert ScenarioLoader.get_scenario("missing") is None


def test_claims_default_to_empty():
    assert ScenarioLoader.claims_for("planetlab") == []


def test_reload_reparses_files():
    before = ScenarioLoader.get_scenario("tcpip")
    reloaded = ScenarioLoader.reload_scenarios()
    assert list(reloaded) == ScenarioLoader.list_scenarios()
    assert reloaded["tcpip"] is not before
    assert reloaded["tcpip"].universe == before.universe
    assert ScenarioLoader.get_scenario("tcpip") is reloaded["tcpip"]


# === GOLDEN FILES ===

@pytest.mark.parametrize("name", GOLDEN)
def test_tradeoff_matches_golden(name, update_golden):
    u = ScenarioLoader.get_scenario(name).universe
    actual = tradeoff_csv(tradeoff_table(u))
    if update_golden:
        ScenarioLoader.golden_tradeoff_path(name).write_text(actual, encoding="utf-8")
    assert actual == ScenarioLoader.golden_tradeoff(name)


@pytest.mark.parametrize("name", GOLDEN)
def test_claims_hold(name):
    u = ScenarioLoader.get_scenario(name).universe
    claims = ScenarioLoader.claims_for(name)
    assert claims
    failed = [r.claim.describe() for r in check_claims(u, claims) if not r.holds]
    assert failed == []


@pytest.mark.parametrize("name, scenario", bundled_scenarios())
def test_every_bundled_scenario_satisfies_the_theorem(name, scenario):
    result = verify_hourglass(scenario.universe, lemmas=True)
    assert result.ok, name


@pytest.mark.parametrize("name", GOLDEN)
def test_report_matches_golden(name, update_golden):
    u = ScenarioLoader.get_scenario(name).universe
    actual = to_json(build_report(u))
    if update_golden:
        ScenarioLoader.golden_report_path(name).write_text(actual, encoding="utf-8")
    assert actual == ScenarioLoader.golden_report(name)


# === CASE STUDIES ===

def test_tcpip_regression(tcpip_analysis):
    a = tcpip_analysis
    u = a.universe
    assert a.weaker_than("IP_DATAGRAM", "IP_RELIABLE")
    assert set(a.pre_names("IP_DATAGRAM")) > set(a.pre_names("IP_RELIABLE"))
    assert u.necessary == ("RELIABLE_STREAM",)
    assert sufficient(u, "IP_DATAGRAM", analysis=a)
    assert sufficient(u, "IP_RELIABLE", analysis=a)


def test_unix_fork_regression(unix_fork):
    a = Analysis(unix_fork)
    assert a.strictly_weaker("UNIX_FACTORED", "MONOLITHIC_SPAWN")
    assert sufficient(unix_fork, "UNIX_FACTORED", analysis=a)
    assert minimally_sufficient(unix_fork, "UNIX_FACTORED", analysis=a)
    assert a.pre_names("UNIX_FACTORED") == ["HW_SUPERVISOR", "CONTAINER_HOST"]
    assert a.pre_names("MONOLITHIC_SPAWN") == ["HW_SUPERVISOR"]


def test_grid_auth_regression(grid_auth):
    a = Analysis(grid_auth)
    assert a.strictly_weaker("GRID_WEAK", "GRID_AUTH")
    assert a.pre_names("GRID_WEAK") == ["SITE_OPEN", "SITE_PKI"]
    assert a.pre_names("GRID_AUTH") == ["SITE_PKI"]
    assert "AUDITED_VO" in a.post_names("GRID_AUTH")
    assert "AUDITED_VO" not in a.post_names("GRID_WEAK")


def test_failing_claim_is_reported(tcpip):
    claim = Claim(kind="sufficient", args=["LINK_BASIC"])
    [result] = check_claims(tcpip, [claim])
    assert not result.actual
    assert not result.holds
    assert claim.describe() == "sufficient LINK_BASIC"


@pytest.mark.parametrize(
    "payload",
    [
        {"kind": "weaker", "args": ["A"]},
        {"kind": "generic", "args": ["A"]},
        {"kind": "unknown", "args": ["A"]},
    ],
)
def test_malformed_claims_rejected(payload):
    with pytest.raises(ValueError):
        Claim.model_validate(payload)
