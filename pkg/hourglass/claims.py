"""
Checkable claims about a scenario.

A claims file pins the qualitative statements a case study is meant to
demonstrate (e.g. "the weak IP spec has strictly more implementations than
the strong one, and both are sufficient") as assertions that are evaluated
against the parsed universe on every test run and by ``check``.

=== CLAIM KINDS ===

    weaker A B                 A is weaker than B
    strictly_weaker A B        A is strictly weaker than B
    equivalent A B             mutual weakness
    sufficient A               N ⊆ post(A)
    minimally_sufficient A     sufficient with no sufficient strict weakening
    pre_strict_superset A B    pre(A) ⊋ pre(B)
    post_subset A B            post(A) ⊆ post(B)
    generic A                  ε-genericness (``epsilon`` required)
"""

from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from hourglass.images import Analysis
from hourglass.settings import AnalysisSettings
from hourglass.sufficiency import (
    CandidateSpace,
    GenericnessQuery,
    generic,
    minimally_sufficient,
    sufficient,
)
from hourglass.universe import Universe

ClaimKind = Literal[
    "weaker",
    "strictly_weaker",
    "equivalent",
    "sufficient",
    "minimally_sufficient",
    "pre_strict_superset",
    "post_subset",
    "generic",
]

_ARITY = {
    "weaker": 2,
    "strictly_weaker": 2,
    "equivalent": 2,
    "sufficient": 1,
    "minimally_sufficient": 1,
    "pre_strict_superset": 2,
    "post_subset": 2,
    "generic": 1,
}


class Claim(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: ClaimKind = Field(..., description="Which predicate to evaluate")
    args: List[str] = Field(..., description="Spec names the predicate is applied to")
    expected: bool = Field(default=True, description="Verdict the scenario is meant to show")
    epsilon: Optional[float] = Field(default=None, ge=0, description="ε for 'generic' claims")
    closure: bool = Field(default=False, description="Use CLOSURE candidates for 'generic' claims")
    note: Optional[str] = Field(default=None, description="What the claim illustrates")

    @model_validator(mode="after")
    def _check_shape(self) -> "Claim":
        if len(self.args) != _ARITY[self.kind]:
            raise ValueError(f"'{self.kind}' takes {_ARITY[self.kind]} spec name(s), got {len(self.args)}")
        if self.kind == "generic" and self.epsilon is None:
            raise ValueError("'generic' claims need an epsilon")
        return self

    def describe(self) -> str:
        text = f"{self.kind} {' '.join(self.args)}"
        if self.epsilon is not None:
            text += f" (epsilon {self.epsilon:g}{', closure' if self.closure else ''})"
        return text if self.expected else f"not {text}"


class ClaimsFile(BaseModel):
    scenario: str
    claims: List[Claim] = Field(default_factory=list)


class ClaimResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    claim: Claim
    actual: bool
    holds: bool


def evaluate_claim(analysis: Analysis, claim: Claim) -> bool:
    u = analysis.universe
    args = claim.args
    if claim.kind == "weaker":
        return analysis.weaker_than(*args)
    if claim.kind == "strictly_weaker":
        return analysis.strictly_weaker(*args)
    if claim.kind == "equivalent":
        return analysis.equivalent(*args)
    if claim.kind == "sufficient":
        return sufficient(u, args[0], analysis=analysis)
    if claim.kind == "minimally_sufficient":
        return minimally_sufficient(u, args[0], analysis=analysis)
    if claim.kind == "pre_strict_superset":
        return set(analysis.pre_names(args[0])) > set(analysis.pre_names(args[1]))
    if claim.kind == "post_subset":
        return set(analysis.post_names(args[0])) <= set(analysis.post_names(args[1]))
    query = GenericnessQuery(
        subject=args[0],
        epsilon=claim.epsilon,
        candidate_space=CandidateSpace.CLOSURE if claim.closure else CandidateSpace.DECLARED,
    )
    return generic(u, query, analysis=analysis).generic


def check_claims(
    u: Universe,
    claims: List[Claim],
    settings: Optional[AnalysisSettings] = None,
    analysis: Optional[Analysis] = None,
) -> List[ClaimResult]:
    """Evaluate every claim; a claim holds when the verdict matches ``expected``."""
    analysis = analysis or Analysis(u, settings)
    results = []
    for claim in claims:
        actual = evaluate_claim(analysis, claim)
        results.append(ClaimResult(claim=claim, actual=actual, holds=actual == claim.expected))
    return results
