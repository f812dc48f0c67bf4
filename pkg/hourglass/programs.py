"""
Programs as specification transformers and the implements relation.

=== HOW A PROGRAM IS MODELED ===

A program is a list of guarded production rules ``when GUARD gives GIVES``.
Run on top of a correct instantiation of a lower specification S, a rule
contributes GIVES exactly when S ⊢ GUARD. ``apply(P, S)`` is the theory of
all contributed formulas, the strongest thing P guarantees atop S.

Nothing passes through: a formula of S reaches the layer above only if some
rule re-derives it. A program that wants to re-export a guarantee says so
with a rule ``when f gives f``.

=== THE IMPLEMENTS RELATION ===

    implements(lower, P, upper)  iff  apply(P, lower) ⊢ upper

Because apply only asks "does the lower layer entail the guard", a stronger
lower layer fires at least the same rules, and a weaker upper layer asks for
less. Both monotonicity lemmas follow without further bookkeeping.
"""

from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_serializer

from hourglass.logic import EntailmentEngine, Formula, Theory, Vocabulary, get_engine, render_formula
from hourglass.specs import SPEC_NAME_PATTERN, Specification


class ProductionRule(BaseModel):
    """``when guard gives gives``: if the layer below entails guard, guarantee gives."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    guard: Formula = Field(..., description="Condition on the layer below")
    gives: Formula = Field(..., description="Guarantee offered to the layer above")

    @field_serializer("guard", "gives")
    def _render(self, f: Formula) -> str:
        return render_formula(f)


class Program(BaseModel):
    """
    A named program in Π.

    A program with no rules is the explicit no-op: it fires nothing and
    implements only vacuous specifications.
    """

    model_config = ConfigDict(frozen=True)

    name: str = Field(..., pattern=SPEC_NAME_PATTERN, description="Program name")
    rules: Tuple[ProductionRule, ...] = Field(default=(), description="Production rules in declaration order")

    @property
    def is_noop(self) -> bool:
        return not self.rules


def apply(
    p: Program,
    s: Specification,
    vocab: Vocabulary,
    engine: Optional[EntailmentEngine] = None,
) -> Theory:
    """
    Theory that ``p`` guarantees when run atop any correct instantiation of ``s``.

    Example:
        p = {when a gives x; when a & b gives y}
        apply(p, {a})    -> {x}
        apply(p, {a, b}) -> {x, y}
    """
    engine = engine or get_engine()
    return Theory(r.gives for r in p.rules if engine.entails(s.theory, r.guard, vocab))


def implements(
    lower: Specification,
    p: Program,
    upper: Specification,
    vocab: Vocabulary,
    engine: Optional[EntailmentEngine] = None,
) -> bool:
    """lower <_P upper: running ``p`` atop ``lower`` yields a correct ``upper``."""
    engine = engine or get_engine()
    return engine.theory_entails(apply(p, lower, vocab, engine), upper.theory, vocab)


def implementing_programs(
    lower: Specification,
    upper: Specification,
    programs: Sequence[Program],
    vocab: Vocabulary,
    engine: Optional[EntailmentEngine] = None,
) -> List[str]:
    """Names of every program that implements ``upper`` atop ``lower``, in declaration order."""
    engine = engine or get_engine()
    return [p.name for p in programs if implements(lower, p, upper, vocab, engine)]
