"""
Tests for specifications and the weakness ordering.
"""

import pytest
from hypothesis import HealthCheck, given, settings

from hourglass.logic import EMPTY_THEORY, Theory, parse_formula
from hourglass.specs import (
    Specification,
    equivalence_classes,
    equivalent,
    strictly_weaker,
    vacuous,
    weaker_than,
)
from tests.strategies import universes

VOCAB = ["a", "b", "c"]


def spec(name, *formulas):
    return Specification(name=name, theory=Theory(parse_formula(f, VOCAB) for f in formulas))


def test_weaker_than():
    assert weaker_than(spec("S1", "a"), spec("S2", "a", "b"), VOCAB)
    assert not weaker_than(spec("S1", "a", "b"), spec("S2", "a"), VOCAB)
    assert weaker_than(spec("S1", "a"), spec("S2", "a"), VOCAB)


def test_strictly_weaker():
    assert strictly_weaker(spec("S1", "a"), spec("S2", "a", "b"), VOCAB)
    assert not strictly_weaker(spec("S1", "a"), spec("S2", "a"), VOCAB)
    assert not strictly_weaker(spec("S1", "a & b"), spec("S2", "a", "b"), VOCAB)


def test_equivalent():
    assert equivalent(spec("S1", "a & b"), spec("S2", "a", "b"), VOCAB)
    assert not equivalent(spec("S1", "a"), spec("S2", "a | b"), VOCAB)
    assert equivalent(spec("S1"), spec("S2", "true"), VOCAB)


def test_vacuous_is_weaker_than_everything():
    top = vacuous("TOP")
    assert top.theory == EMPTY_THEORY
    for other in [spec("A", "a"), spec("F", "false"), spec("X", "a -> b", "c")]:
        assert weaker_than(top, other, VOCAB)


def test_equivalence_classes_keep_declaration_order():
    specs = [spec("P", "a", "b"), spec("Q", "a"), spec("R", "b & a"), spec("S", "a | a")]
    assert equivalence_classes(specs, VOCAB) == [["P", "R"], ["Q", "S"]]


def test_invalid_spec_name_rejected():
    with pytest.raises(ValueError):
        Specification(name="not valid", theory=EMPTY_THEORY)


def test_annotations_serialize_with_rendered_theory():
    s = Specification(
        name="IP",
        theory=Theory([parse_formula("a -> b", VOCAB)]),
        annotations={"notes": "thin waist"},
    )
    assert s.model_dump() == {"name": "IP", "theory": ["a -> b"], "annotations": {"notes": "thin waist"}}


@given(universes(max_atoms=6, max_specs=10, max_programs=0, depth=3))
@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_weakness_is_a_preorder(u):
    names = u.spec_names
    weaker = {(x, y): weaker_than(u.spec(x), u.spec(y), u.vocab) for x in names for y in names}
    strict = {(x, y): weaker[x, y] and not weaker[y, x] for x in names for y in names}
    for x in names:
        assert weaker[x, x]
        assert not strict[x, x]
        assert strictly_weaker(u.spec(x), u.spec(x), u.vocab) is False
        for y in names:
            assert strictly_weaker(u.spec(x), u.spec(y), u.vocab) == strict[x, y]
            for z in names:
                if weaker[x, y] and weaker[y, z]:
                    assert weaker[x, z]
                if strict[x, y] and strict[y, z]:
                    assert strict[x, z]


@given(universes(max_atoms=6, max_specs=10, max_programs=0, depth=3))
@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_equivalence_classes_partition_and_are_antisymmetric(u):
    classes = equivalence_classes(u.specs, u.vocab)
    assert sorted(name for group in classes for name in group) == sorted(u.spec_names)
    reps = [u.spec(group[0]) for group in classes]
    for group in classes:
        for name in group:
            assert equivalent(u.spec(group[0]), u.spec(name), u.vocab)
    for r1 in reps:
        for r2 in reps:
            if r1 is not r2:
                assert not (weaker_than(r1, r2, u.vocab) and weaker_than(r2, r1, u.vocab))
