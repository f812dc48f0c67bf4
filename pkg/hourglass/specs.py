"""
Layer specifications and the weakness ordering among them.

A specification is a named theory. S1 is weaker than S2 when S2 ⊢ S1, i.e.
everything S1 promises is already promised by S2. Weakness is always
computed from entailment; there is no way to declare it.
"""

from typing import Dict, List, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, field_serializer

from hourglass.logic import (
    EMPTY_THEORY,
    EntailmentEngine,
    Theory,
    Vocabulary,
    get_engine,
)

SPEC_NAME_PATTERN = r"^[A-Za-z_][A-Za-z0-9_]*$"


class Specification(BaseModel):
    """
    A service specification: an API described by a finite theory.

    Annotations are free-form notes (e.g. "simplicity", "notes") that are
    carried into reports verbatim and never affect any verdict.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = Field(..., pattern=SPEC_NAME_PATTERN, description="Specification name")
    theory: Theory = Field(default=EMPTY_THEORY, description="Statements the layer guarantees")
    annotations: Dict[str, str] = Field(
        default_factory=dict,
        description="Free-form notes surfaced in reports",
    )

    @field_serializer("theory")
    def _render_theory(self, theory: Theory) -> List[str]:
        return theory.render()


def vacuous(name: str) -> Specification:
    """The empty-theory specification, weaker than every specification."""
    return Specification(name=name, theory=EMPTY_THEORY)


def weaker_than(
    s1: Specification,
    s2: Specification,
    vocab: Vocabulary,
    engine: Optional[EntailmentEngine] = None,
) -> bool:
    """
    True when s1 is weaker than s2 (s2 ⊢ s1).

    Example:
        weaker_than({a}, {a, b}) -> True
        weaker_than({a, b}, {a}) -> False
    """
    return (engine or get_engine()).theory_entails(s2.theory, s1.theory, vocab)


def strictly_weaker(
    s1: Specification,
    s2: Specification,
    vocab: Vocabulary,
    engine: Optional[EntailmentEngine] = None,
) -> bool:
    """s1 weaker than s2 and s2 not weaker than s1."""
    engine = engine or get_engine()
    return weaker_than(s1, s2, vocab, engine) and not weaker_than(s2, s1, vocab, engine)


def equivalent(
    s1: Specification,
    s2: Specification,
    vocab: Vocabulary,
    engine: Optional[EntailmentEngine] = None,
) -> bool:
    """Mutual weakness: the two theories entail each other."""
    engine = engine or get_engine()
    return weaker_than(s1, s2, vocab, engine) and weaker_than(s2, s1, vocab, engine)


def equivalence_classes(
    specs: Sequence[Specification],
    vocab: Vocabulary,
    engine: Optional[EntailmentEngine] = None,
) -> List[List[str]]:
    """
    Group mutually weaker specifications.

    Classes are listed by the declaration position of their first member and
    members keep declaration order.
    """
    engine = engine or get_engine()
    checker = engine.checker(vocab)
    classes: List[List[Specification]] = []
    for spec in specs:
        for group in classes:
            head = group[0]
            if checker.theory_entails(head.theory, spec.theory) and checker.theory_entails(
                spec.theory, head.theory
            ):
                group.append(spec)
                break
        else:
            classes.append([spec])
    return [[s.name for s in group] for group in classes]

