"""
Tests for sufficiency, minimality, value metrics, genericness and the
tradeoff table.
"""

from itertools import permutations

import pytest
from hypothesis import HealthCheck, given, settings

from hourglass.errors import UnknownSpec, VocabularyTooLarge
from hourglass.images import Analysis
from hourglass.settings import AnalysisSettings
from hourglass.sufficiency import (
    CLOSURE_TOP,
    CandidateSpace,
    GenericnessQuery,
    ValueMetric,
    closure_candidates,
    generic,
    loss,
    minimal_sufficient_specs,
    minimality_evidence,
    minimally_sufficient,
    minimally_sufficient_bruteforce,
    sufficiency_evidence,
    sufficient,
    tradeoff_table,
    value_minimally_sufficient,
    value_of,
)
from tests.strategies import build_universe, universes

RANDOM = dict(deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])


# === SUFFICIENCY ===

def test_tcpip_waists_are_sufficient(tcpip):
    assert sufficient(tcpip, "IP_DATAGRAM")
    assert sufficient(tcpip, "IP_RELIABLE")
    assert not sufficient(tcpip, "LINK_BASIC")


def test_removing_the_transport_breaks_sufficiency(tcpip):
    assert not sufficient(tcpip.without_program("TCP"), "IP_DATAGRAM")


def test_empty_necessary_set_makes_everything_sufficient():
    u = build_universe(["a", "x"], {"A": ["a"], "X": ["x"], "TOP": []}, {"P": [("a", "x")]})
    assert all(sufficient(u, name) for name in u.spec_names)


def test_sufficiency_evidence(tcpip):
    evidence = sufficiency_evidence(tcpip, "LINK_ARQ")
    assert not evidence.sufficient
    assert evidence.covered == []
    assert evidence.missing == ["RELIABLE_STREAM"]
    assert evidence.value == 0.0

    evidence = sufficiency_evidence(tcpip, "IP_DATAGRAM")
    assert evidence.sufficient
    assert evidence.value == 2.0


# === MINIMAL SUFFICIENCY ===

def test_minimally_sufficient_chain(chain_universe):
    assert minimally_sufficient(chain_universe, "WEAK")
    assert not minimally_sufficient(chain_universe, "STRONG")
    assert not minimally_sufficient(chain_universe, "APP")
    assert minimal_sufficient_specs(chain_universe) == ["WEAK"]


def test_minimality_evidence_lists_sufficient_weakenings(chain_universe):
    evidence = minimality_evidence(chain_universe, "STRONG")
    assert evidence.sufficient
    assert not evidence.minimal
    assert evidence.sufficient_weakenings == ["WEAK"]


def test_closure_candidates_are_strict_atom_conjunctions():
    u = build_universe(["a", "b", "c"], {"S": ["a & b", "c"]})
    names = [c.name for c in closure_candidates(Analysis(u), "S")]
    assert names == [
        CLOSURE_TOP,
        "CLOSURE__a",
        "CLOSURE__b",
        "CLOSURE__c",
        "CLOSURE__a__b",
        "CLOSURE__a__c",
        "CLOSURE__b__c",
    ]


def test_closure_minimality(chain_universe, tcpip):
    assert minimally_sufficient(chain_universe, "WEAK", space=CandidateSpace.CLOSURE)
    assert minimally_sufficient(tcpip, "IP_DATAGRAM", space=CandidateSpace.CLOSURE)


def test_closure_search_finds_undeclared_weakening():
    # nothing declared sits between S and TOP, but {a} alone is sufficient
    u = build_universe(
        ["a", "b", "x"],
        {"S": ["a", "b"], "APP": ["x"]},
        {"P": [("a", "x")]},
        necessary=["APP"],
    )
    assert minimally_sufficient(u, "S")
    assert not minimally_sufficient(u, "S", space=CandidateSpace.CLOSURE)
    evidence = minimality_evidence(u, "S", space=CandidateSpace.CLOSURE)
    assert evidence.sufficient_weakenings == ["CLOSURE__a"]


def test_closure_enforces_vocabulary_cap(tcpip):
    capped = AnalysisSettings(max_closure_atoms=4)
    with pytest.raises(VocabularyTooLarge):
        minimally_sufficient(tcpip, "IP_DATAGRAM", capped, space=CandidateSpace.CLOSURE)


@given(universes(max_atoms=8, max_specs=20, max_programs=6, depth=3))
@settings(max_examples=100, **RANDOM)
def test_minimality_search_matches_bruteforce(u):
    analysis = Analysis(u)
    for spec in u.specs:
        assert minimally_sufficient(u, spec.name, analysis=analysis) == minimally_sufficient_bruteforce(
            u, spec.name, analysis=analysis
        )


@given(universes(max_atoms=5, max_specs=8, max_programs=4, depth=2))
@settings(max_examples=50, **RANDOM)
def test_closure_minimality_matches_bruteforce(u):
    analysis = Analysis(u)
    for spec in u.specs:
        fast = minimally_sufficient(u, spec.name, analysis=analysis, space=CandidateSpace.CLOSURE)
        slow = minimally_sufficient_bruteforce(u, spec.name, analysis=analysis, space=CandidateSpace.CLOSURE)
        assert fast == slow


# === VALUES ===

def test_value_of():
    u = build_universe(["a"], {"N1": ["a"], "N2": ["a"]}, values={"N1": 3.0})
    assert value_of(u, []) == 0.0
    assert value_of(u, ["N1"]) == 3.0
    assert value_of(u, ["N1", "N2"]) == 4.0


def test_value_of_unknown_spec():
    u = build_universe(["a"], {"N1": ["a"]})
    with pytest.raises(UnknownSpec):
        value_of(u, ["N9"])


def test_value_metric_counts_each_spec_once():
    metric = ValueMetric(weights={"A": 2.5}, default=0.5)
    assert metric.of(["A", "A", "B"]) == 3.0


@pytest.mark.parametrize("order", list(permutations(["A", "B", "C"])))
def test_value_is_exact_in_any_order(order):
    metric = ValueMetric(weights={"A": 0.1, "B": 0.2, "C": 0.3})
    assert metric.of(order) == 0.6


def test_loss(tcpip):
    assert loss(tcpip, "IP_DATAGRAM") == 0.0
    assert loss(tcpip, "LINK_BASIC") == 2.0


# === GENERICNESS ===

def test_reliable_waist_is_not_generic(tcpip):
    verdict = generic(tcpip, GenericnessQuery(subject="IP_RELIABLE", epsilon=0.5))
    assert verdict.sufficient
    assert not verdict.generic
    assert verdict.worst_weakening.spec == "IP_DATAGRAM"
    assert verdict.worst_weakening.loss == 0.0
    assert verdict.reading == "loss"


def test_generic_without_declared_weakenings(tcpip):
    verdict = generic(tcpip, GenericnessQuery(subject="IP_DATAGRAM", epsilon=0.5))
    assert verdict.generic
    assert verdict.worst_weakening is None
    assert verdict.candidates_checked == 0


def test_generic_over_closure(tcpip):
    query = GenericnessQuery(subject="IP_DATAGRAM", epsilon=0.5, candidate_space=CandidateSpace.CLOSURE)
    verdict = generic(tcpip, query)
    assert verdict.generic
    assert verdict.worst_weakening.spec == CLOSURE_TOP
    assert verdict.worst_weakening.loss == 2.0
    assert verdict.candidates_checked == 1


def test_generic_requires_sufficiency(tcpip):
    verdict = generic(tcpip, GenericnessQuery(subject="LINK_BASIC", epsilon=0.0))
    assert not verdict.sufficient
    assert not verdict.generic
    assert verdict.worst_weakening is None


def test_literal_reading(tcpip):
    query = GenericnessQuery(subject="IP_DATAGRAM", epsilon=0.5, candidate_space=CandidateSpace.CLOSURE)
    verdict = generic(tcpip, query, reading="literal")
    assert verdict.reading == "literal"
    assert not verdict.generic
    # no candidates at all: the literal reading is vacuously satisfied
    assert generic(tcpip, GenericnessQuery(subject="IP_DATAGRAM", epsilon=0.5), reading="literal").generic


def test_negative_epsilon_rejected():
    with pytest.raises(ValueError):
        GenericnessQuery(subject="S", epsilon=-0.1)


def test_closure_genericness_enforces_cap(tcpip):
    query = GenericnessQuery(subject="IP_DATAGRAM", epsilon=0.5, candidate_space=CandidateSpace.CLOSURE)
    with pytest.raises(VocabularyTooLarge):
        generic(tcpip, query, AnalysisSettings(max_closure_atoms=2))


@given(universes(max_atoms=8, max_specs=15, max_programs=6, depth=3))
@settings(max_examples=100, **RANDOM)
def test_zero_epsilon_genericness_is_sufficiency(u):
    analysis = Analysis(u)
    for spec in u.specs:
        verdict = generic(u, GenericnessQuery(subject=spec.name, epsilon=0.0), analysis=analysis)
        assert verdict.generic == sufficient(u, spec.name, analysis=analysis)
        assert loss(u, spec.name, analysis=analysis) >= 0.0
        if verdict.worst_weakening is not None:
            assert verdict.worst_weakening.loss >= 0.0


@given(universes(max_atoms=8, max_specs=15, max_programs=6, depth=3))
@settings(max_examples=100, **RANDOM)
def test_value_minimality_coincides_with_sufficiency(u):
    analysis = Analysis(u)
    for spec in u.specs:
        assert value_minimally_sufficient(u, spec.name, analysis=analysis) == sufficient(
            u, spec.name, analysis=analysis
        )


# === TRADEOFF TABLE ===

def test_tradeoff_table_tcpip(tcpip):
    rows = tradeoff_table(tcpip)
    assert [r.spec for r in rows] == [
        "DATAGRAM_SERVICE",
        "IP_DATAGRAM",
        "RELIABLE_STREAM",
        "IP_RELIABLE",
        "LINK_ARQ",
        "LINK_BASIC",
    ]
    waist = rows[1]
    assert (waist.pre_count, waist.post_count, waist.covered, waist.value) == (2, 2, 1, 2.0)
    assert waist.sufficient and waist.minimal


@given(universes(max_atoms=8, max_specs=15, max_programs=6, depth=3))
@settings(max_examples=100, **RANDOM)
def test_tradeoff_table_invariants(u):
    analysis = Analysis(u)
    rows = tradeoff_table(u, analysis=analysis)
    assert sorted(r.spec for r in rows) == sorted(u.spec_names)
    keys = [(-r.pre_count, r.spec) for r in rows]
    assert keys == sorted(keys)
    for row in rows:
        assert row.covered <= len(u.necessary)
        assert row.covered <= row.post_count
        assert row.sufficient == (row.covered == len(u.necessary))
        assert not row.minimal or row.sufficient
        assert row.minimal == minimally_sufficient(u, row.spec, analysis=analysis)
