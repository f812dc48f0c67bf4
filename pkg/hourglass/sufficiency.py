"""
Sufficiency, minimal sufficiency, value metrics, genericness and the
deployment-scalability tradeoff table.

=== DEFINITIONS ===

    sufficient(S)              N ⊆ post(S)
    minimally_sufficient(S)    sufficient, and no strictly weaker S' is sufficient
    value_of(A)                Σ weight(a) for a in A (undeclared weights are 1.0)
    loss(S')                   v(N) − v(post(S') ∩ N)
    generic(S, ε)              sufficient, and every strictly weaker S' has loss(S') ≥ ε

=== READINGS ===

The value-relative definitions admit two readings, and every verdict records
the one in force:

    loss       every strict weakening loses at least ε of necessary value.
               This is the usable one and the default.
    literal    no strict weakening has v(post(S') ∩ N) − v(N) < ε. Under
               nonnegative weights that difference is never positive, so
               for ε > 0 any strict weakening breaks genericness.

``value_minimally_sufficient`` is the value-relative minimality predicate
taken as written (no strict weakening has v(post(S') ∩ N) > v(N)); with
nonnegative weights it coincides with ``sufficient``.

=== CANDIDATE SPACES ===

DECLARED   strict weakenings among the universe's declared specs.
CLOSURE    DECLARED plus every conjunction-of-atoms spec strictly weaker
           than the subject. A conjunction of atoms is weaker than S iff
           S entails each of its atoms, so only subsets of the atoms S
           entails are enumerated.

=== MINIMAL SUFFICIENCY SEARCH ===

Sufficiency is upward closed in the weakness order (post images only grow
as specs get stronger), so a sufficient spec is minimal iff none of the
classes directly below it in the Hasse diagram is sufficient. The
brute-force definition is kept alongside for differential testing.
"""

import logging
import math
from enum import Enum
from itertools import combinations
from typing import Dict, Iterable, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from hourglass.errors import VocabularyTooLarge
from hourglass.images import Analysis, SpecRef
from hourglass.logic import AtomRef, Theory
from hourglass.settings import AnalysisSettings
from hourglass.specs import Specification
from hourglass.universe import DEFAULT_WEIGHT, Universe

logger = logging.getLogger(__name__)

Reading = Literal["loss", "literal"]

CLOSURE_PREFIX = "CLOSURE__"
CLOSURE_TOP = CLOSURE_PREFIX + "TOP"


class CandidateSpace(str, Enum):
    DECLARED = "DECLARED"
    CLOSURE = "CLOSURE"


class ValueMetric(BaseModel):
    """Weighted-sum value of a set of specs."""

    model_config = ConfigDict(frozen=True)

    weights: Dict[str, float] = Field(default_factory=dict, description="Declared weights per spec")
    default: float = Field(default=DEFAULT_WEIGHT, ge=0, description="Weight of undeclared specs")

    @classmethod
    def from_universe(cls, u: Universe) -> "ValueMetric":
        return cls(weights=dict(u.values))

    def of(self, names: Iterable[str]) -> float:
        return math.fsum(self.weights.get(name, self.default) for name in dict.fromkeys(names))


class GenericnessQuery(BaseModel):
    model_config = ConfigDict(frozen=True)

    subject: str = Field(..., description="Spec whose genericness is asked")
    epsilon: float = Field(..., ge=0, description="Minimum value a strict weakening must lose")
    candidate_space: CandidateSpace = Field(
        default=CandidateSpace.DECLARED, description="Which strict weakenings are quantified over"
    )


class WeakeningLoss(BaseModel):
    model_config = ConfigDict(frozen=True)

    spec: str
    loss: float = Field(..., description="v(N) − v(post(spec) ∩ N)")


class GenericVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    subject: str
    epsilon: float
    reading: Reading
    candidate_space: CandidateSpace
    sufficient: bool
    generic: bool
    worst_weakening: Optional[WeakeningLoss] = Field(
        default=None, description="Strict weakening closest to breaking the verdict"
    )
    candidates_checked: int = 0


class TradeoffRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    spec: str
    pre_count: int = Field(..., description="|pre(spec)|: possible implementations")
    post_count: int = Field(..., description="|post(spec)|: possible applications")
    covered: int = Field(..., description="|post(spec) ∩ N|")
    value: float = Field(..., description="v(post(spec) ∩ N)")
    sufficient: bool
    minimal: bool


class SufficiencyEvidence(BaseModel):
    model_config = ConfigDict(frozen=True)

    subject: str
    sufficient: bool
    covered: List[str] = Field(default_factory=list, description="Necessary specs in post(subject)")
    missing: List[str] = Field(default_factory=list, description="Necessary specs outside post(subject)")
    value: float = Field(default=0.0, description="v(covered)")


class MinimalityEvidence(BaseModel):
    model_config = ConfigDict(frozen=True)

    subject: str
    candidate_space: CandidateSpace
    sufficient: bool
    minimal: bool
    sufficient_weakenings: List[str] = Field(
        default_factory=list, description="Strict weakenings that are sufficient as well"
    )


# === HELPERS ===

def _analysis(u: Universe, settings: Optional[AnalysisSettings], analysis: Optional[Analysis]) -> Analysis:
    if analysis is not None:
        return analysis
    return Analysis(u, settings)


def closure_candidates(analysis: Analysis, subject: SpecRef) -> List[Specification]:
    """
    Conjunction-of-atoms specs strictly weaker than ``subject``.

    Ordered by size, then by vocabulary order; the empty conjunction comes
    first and is named CLOSURE__TOP.
    """
    u = analysis.universe
    limit = analysis.settings.max_closure_atoms
    if len(u.vocab) > limit:
        raise VocabularyTooLarge(len(u.vocab), limit, "closure candidates")
    spec = analysis.resolve(subject)
    entailed = [
        name for name in u.vocab_names if analysis.checker.entails(spec.theory, AtomRef(name))
    ]
    found = []
    for size in range(len(entailed) + 1):
        for atoms in combinations(entailed, size):
            name = CLOSURE_PREFIX + "__".join(atoms) if atoms else CLOSURE_TOP
            candidate = Specification(name=name, theory=Theory(AtomRef(a) for a in atoms))
            if analysis.strictly_weaker(candidate, spec):
                found.append(candidate)
    logger.debug(
        "closure of %s: %d entailed atoms, %d strict weakenings",
        spec.name,
        len(entailed),
        len(found),
    )
    return found


def strict_weakenings(
    analysis: Analysis,
    subject: SpecRef,
    space: CandidateSpace = CandidateSpace.DECLARED,
) -> List[Specification]:
    spec = analysis.resolve(subject)
    found = [s for s in analysis.universe.specs if analysis.strictly_weaker(s, spec)]
    if space == CandidateSpace.CLOSURE:
        found += closure_candidates(analysis, spec)
    return found


# === OPERATIONS ===

def sufficient(
    u: Universe,
    s: SpecRef,
    settings: Optional[AnalysisSettings] = None,
    analysis: Optional[Analysis] = None,
) -> bool:
    """N ⊆ post(s)."""
    analysis = _analysis(u, settings, analysis)
    post = set(analysis.post_names(s))
    return all(name in post for name in u.necessary)


def minimally_sufficient(
    u: Universe,
    s: SpecRef,
    settings: Optional[AnalysisSettings] = None,
    analysis: Optional[Analysis] = None,
    space: CandidateSpace = CandidateSpace.DECLARED,
) -> bool:
    """
    Sufficient with no strictly weaker sufficient candidate.

    Declared specs are searched through the Hasse diagram; closure
    candidates (when requested) are checked one by one.
    """
    analysis = _analysis(u, settings, analysis)
    spec = analysis.resolve(s)
    if not sufficient(u, spec, analysis=analysis):
        return False
    declared = isinstance(s, str) or (u.has_spec(spec.name) and u.spec(spec.name) == spec)
    if declared:
        covers = analysis.lower_covers(spec.name)
    else:
        covers = [t.name for t in u.specs if analysis.strictly_weaker(t, spec)]
    if any(sufficient(u, c, analysis=analysis) for c in covers):
        return False
    if space == CandidateSpace.CLOSURE:
        return not any(sufficient(u, c, analysis=analysis) for c in closure_candidates(analysis, spec))
    return True


def minimally_sufficient_bruteforce(
    u: Universe,
    s: SpecRef,
    settings: Optional[AnalysisSettings] = None,
    analysis: Optional[Analysis] = None,
    space: CandidateSpace = CandidateSpace.DECLARED,
) -> bool:
    """minimally_sufficient by enumerating every strictly weaker candidate."""
    analysis = _analysis(u, settings, analysis)
    if not sufficient(u, s, analysis=analysis):
        return False
    return not any(
        sufficient(u, c, analysis=analysis) for c in strict_weakenings(analysis, s, space)
    )


def minimal_sufficient_specs(
    u: Universe,
    settings: Optional[AnalysisSettings] = None,
    analysis: Optional[Analysis] = None,
) -> List[str]:
    """
    Names of the declared specs that are minimally sufficient for N.

    Returns:
        Names in declaration order; empty when nothing is sufficient.

    Example:
        minimal_sufficient_specs(tcpip) -> ['IP_DATAGRAM']
    """
    analysis = _analysis(u, settings, analysis)
    return [s.name for s in u.specs if minimally_sufficient(u, s.name, analysis=analysis)]


def value_of(u: Universe, specs: Iterable[str]) -> float:
    """
    Weighted sum over ``specs``.

    Example:
        values {N1: 3.0}
        value_of(u, [])           -> 0.0
        value_of(u, [N1, N2])     -> 4.0
    """
    names = list(specs)
    for name in names:
        u.spec(name)
    return ValueMetric.from_universe(u).of(names)


def loss(
    u: Universe,
    s: SpecRef,
    settings: Optional[AnalysisSettings] = None,
    analysis: Optional[Analysis] = None,
) -> float:
    """v(N) − v(post(s) ∩ N)."""
    analysis = _analysis(u, settings, analysis)
    post = set(analysis.post_names(s))
    covered = [n for n in u.necessary if n in post]
    return value_of(u, u.necessary) - value_of(u, covered)


def value_minimally_sufficient(
    u: Universe,
    s: SpecRef,
    settings: Optional[AnalysisSettings] = None,
    analysis: Optional[Analysis] = None,
    space: CandidateSpace = CandidateSpace.DECLARED,
) -> bool:
    """Sufficient, and no strict weakening reaches more than v(N)."""
    analysis = _analysis(u, settings, analysis)
    if not sufficient(u, s, analysis=analysis):
        return False
    target = value_of(u, u.necessary)
    for candidate in strict_weakenings(analysis, s, space):
        post = set(analysis.post_names(candidate))
        if value_of(u, [n for n in u.necessary if n in post]) > target:
            return False
    return True


def generic(
    u: Universe,
    q: GenericnessQuery,
    settings: Optional[AnalysisSettings] = None,
    analysis: Optional[Analysis] = None,
    reading: Reading = "loss",
) -> GenericVerdict:
    """
    ε-genericness of ``q.subject`` with the weakening closest to breaking it.

    Example (tcpip, N = {RELIABLE_STREAM}):
        generic(IP_RELIABLE, ε=0.5) -> generic=False, worst IP_DATAGRAM (loss 0.0)
    """
    analysis = _analysis(u, settings, analysis)
    spec = analysis.resolve(q.subject)
    is_sufficient = sufficient(u, spec, analysis=analysis)

    def verdict(ok: bool, worst: Optional[WeakeningLoss] = None, checked: int = 0) -> GenericVerdict:
        return GenericVerdict(
            subject=spec.name,
            epsilon=q.epsilon,
            reading=reading,
            candidate_space=q.candidate_space,
            sufficient=is_sufficient,
            generic=ok,
            worst_weakening=worst,
            candidates_checked=checked,
        )

    if not is_sufficient:
        return verdict(False)

    candidates = strict_weakenings(analysis, spec, q.candidate_space)
    losses = [WeakeningLoss(spec=c.name, loss=loss(u, c, analysis=analysis)) for c in candidates]
    if not losses:
        return verdict(True)

    if reading == "loss":
        worst = min(losses, key=lambda w: w.loss)
        ok = worst.loss >= q.epsilon
    else:
        # literal: the difference v(post ∩ N) − v(N) is −loss
        worst = min(losses, key=lambda w: -w.loss)
        ok = -worst.loss >= q.epsilon
    return verdict(ok, worst, len(losses))


def tradeoff_table(
    u: Universe,
    settings: Optional[AnalysisSettings] = None,
    analysis: Optional[Analysis] = None,
) -> List[TradeoffRow]:
    """One row per declared spec, most implementations first, ties by name."""
    analysis = _analysis(u, settings, analysis)
    necessary = set(u.necessary)
    rows = []
    for spec in u.specs:
        post = analysis.post_names(spec)
        covered = [n for n in post if n in necessary]
        is_sufficient = len(covered) == len(necessary)
        rows.append(
            TradeoffRow(
                spec=spec.name,
                pre_count=len(analysis.pre_names(spec)),
                post_count=len(post),
                covered=len(covered),
                value=value_of(u, covered),
                sufficient=is_sufficient,
                minimal=is_sufficient and minimally_sufficient(u, spec.name, analysis=analysis),
            )
        )
    rows.sort(key=lambda r: (-r.pre_count, r.spec))
    return rows


def sufficiency_evidence(
    u: Universe,
    s: SpecRef,
    settings: Optional[AnalysisSettings] = None,
    analysis: Optional[Analysis] = None,
) -> SufficiencyEvidence:
    """Covered and missing necessary specs behind a sufficiency verdict."""
    analysis = _analysis(u, settings, analysis)
    spec = analysis.resolve(s)
    post = set(analysis.post_names(spec))
    covered = [n for n in u.necessary if n in post]
    missing = [n for n in u.necessary if n not in post]
    return SufficiencyEvidence(
        subject=spec.name,
        sufficient=not missing,
        covered=covered,
        missing=missing,
        value=value_of(u, covered),
    )


def minimality_evidence(
    u: Universe,
    s: SpecRef,
    settings: Optional[AnalysisSettings] = None,
    analysis: Optional[Analysis] = None,
    space: CandidateSpace = CandidateSpace.DECLARED,
) -> MinimalityEvidence:
    """Minimal-sufficiency verdict with every sufficient strict weakening."""
    analysis = _analysis(u, settings, analysis)
    spec = analysis.resolve(s)
    is_sufficient = sufficient(u, spec, analysis=analysis)
    weakenings = []
    if is_sufficient:
        weakenings = [
            c.name for c in strict_weakenings(analysis, spec, space) if sufficient(u, c, analysis=analysis)
        ]
    return MinimalityEvidence(
        subject=spec.name,
        candidate_space=space,
        sufficient=is_sufficient,
        minimal=minimally_sufficient(u, s, analysis=analysis, space=space),
        sufficient_weakenings=weakenings,
    )
