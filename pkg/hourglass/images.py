"""
Pre/post images, richness predicates, the weakness lattice and the
executable hourglass theorem.

=== IMAGES ===

    post(S) = { T | some P in Π with S <_P T }    possible applications
    pre(S)  = { T | some P in Π with T <_P S }    possible implementations

Images range over the universe's declared specifications. Each member keeps
one witness program (the first in declaration order); with
``full_witnesses`` every implementing program is listed.

=== THE HOURGLASS THEOREM ===

If S1 is weaker than S2 then post(S1) ⊆ post(S2) and pre(S1) ⊇ pre(S2).
``verify_hourglass`` checks both inclusions for every weaker pair of a
universe and returns the violations as data. Within this model the theorem
holds by construction, so any violation points at an engine defect.

=== ANALYSIS OBJECT ===

Analysis binds one universe to one entailment engine and caches apply
results and implements verdicts. The module-level functions build a fresh
Analysis per call; code that asks many questions about the same universe
should hold on to one.
"""

import logging
from enum import Enum
from typing import Dict, List, Literal, Optional, Tuple, Union

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, computed_field

from hourglass.logic import EntailmentEngine, Theory, get_engine
from hourglass.programs import Program
from hourglass.settings import DEFAULT_SETTINGS, AnalysisSettings
from hourglass.specs import Specification
from hourglass.universe import Universe

logger = logging.getLogger(__name__)

SpecRef = Union[str, Specification]


class ImageKind(str, Enum):
    PRE = "PRE"
    POST = "POST"


class ImageMember(BaseModel):
    model_config = ConfigDict(frozen=True)

    spec: str = Field(..., description="Member specification")
    witness: str = Field(..., description="First program (declaration order) realizing the relation")
    witnesses: Optional[List[str]] = Field(
        default=None, description="Every realizing program, when full witnesses are requested"
    )


class ImageSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    subject: str = Field(..., description="Specification whose image this is")
    kind: ImageKind = Field(..., description="PRE (implementations) or POST (applications)")
    members: List[ImageMember] = Field(default_factory=list, description="Members in declaration order")

    def spec_names(self) -> List[str]:
        return [m.spec for m in self.members]

    def __len__(self) -> int:
        return len(self.members)


class LatticeEdge(BaseModel):
    model_config = ConfigDict(frozen=True)

    weaker: str
    stronger: str
    strict: bool


class CheckedPair(BaseModel):
    model_config = ConfigDict(frozen=True)

    weaker: str
    stronger: str


class Violation(BaseModel):
    """One failed inclusion of the hourglass theorem."""

    model_config = ConfigDict(frozen=True)

    weaker: str
    stronger: str
    part: Literal["post", "pre"] = Field(
        ..., description="'post': post(weaker) ⊄ post(stronger); 'pre': pre(weaker) ⊉ pre(stronger)"
    )
    missing: List[str] = Field(..., description="Specs breaking the inclusion")


class LemmaViolation(BaseModel):
    """A (s1, s2, p, t) tuple breaking one of the two monotonicity lemmas."""

    model_config = ConfigDict(frozen=True)

    lemma: Literal["stronger-lower", "weaker-upper"] = Field(
        ...,
        description=(
            "'stronger-lower': s1 <_p t but not s2 <_p t; "
            "'weaker-upper': t <_p s2 but not t <_p s1"
        ),
    )
    weaker: str
    stronger: str
    program: str
    other: str


class HourglassVerification(BaseModel):
    model_config = ConfigDict(frozen=True)

    universe: str
    checked: List[CheckedPair] = Field(default_factory=list)
    violations: List[Violation] = Field(default_factory=list)
    lemma_tuples: Optional[int] = Field(
        default=None, description="Number of (s1, s2, p, t) tuples checked, when lemmas were requested"
    )
    lemma_violations: List[LemmaViolation] = Field(default_factory=list)

    @computed_field
    @property
    def ok(self) -> bool:
        return not self.violations and not self.lemma_violations


class LemmaCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    tuples: int = Field(..., description="(s1, s2, p, t) tuples with weaker_than(s1, s2)")
    violations: List[LemmaViolation] = Field(default_factory=list)


class Analysis:
    """
    All image-level questions about one universe, with caching.

    Args:
        universe: the frame of analysis
        settings: engine choice and witness reporting
        engine: explicit engine (overrides settings.engine)
    """

    def __init__(
        self,
        universe: Universe,
        settings: Optional[AnalysisSettings] = None,
        engine: Optional[EntailmentEngine] = None,
    ):
        self.universe = universe
        self.settings = settings or DEFAULT_SETTINGS
        self.engine = engine or get_engine(self.settings)
        self.checker = self.engine.checker(universe.vocab)
        self._applied: Dict[Tuple[str, Theory], Theory] = {}
        self._implementing: Dict[Tuple[Theory, Theory], List[str]] = {}
        self._classes: Optional[List[List[str]]] = None
        self._hasse: Optional[nx.DiGraph] = None

    # --- resolution ---

    def resolve(self, s: SpecRef) -> Specification:
        return self.universe.spec(s) if isinstance(s, str) else s

    # --- implements ---

    def apply(self, program: Program, theory: Theory) -> Theory:
        key = (program.name, theory)
        result = self._applied.get(key)
        if result is None:
            result = Theory(r.gives for r in program.rules if self.checker.entails(theory, r.guard))
            self._applied[key] = result
        return result

    def implementing_programs(self, lower: SpecRef, upper: SpecRef) -> List[str]:
        """Every program P with lower <_P upper, in declaration order."""
        lower_theory = self.resolve(lower).theory
        upper_theory = self.resolve(upper).theory
        key = (lower_theory, upper_theory)
        found = self._implementing.get(key)
        if found is None:
            found = [
                p.name
                for p in self.universe.programs
                if self.checker.theory_entails(self.apply(p, lower_theory), upper_theory)
            ]
            self._implementing[key] = found
        return found

    def implements(self, lower: SpecRef, program: Union[str, Program], upper: SpecRef) -> bool:
        if isinstance(program, str):
            program = self.universe.program(program)
        return self.checker.theory_entails(
            self.apply(program, self.resolve(lower).theory), self.resolve(upper).theory
        )

    # --- images ---

    def _member(self, spec: str, witnesses: List[str]) -> ImageMember:
        return ImageMember(
            spec=spec,
            witness=witnesses[0],
            witnesses=list(witnesses) if self.settings.full_witnesses else None,
        )

    def post_image(self, s: SpecRef) -> ImageSet:
        subject = self.resolve(s)
        members = []
        for target in self.universe.specs:
            witnesses = self.implementing_programs(subject, target)
            if witnesses:
                members.append(self._member(target.name, witnesses))
        return ImageSet(subject=subject.name, kind=ImageKind.POST, members=members)

    def pre_image(self, s: SpecRef) -> ImageSet:
        subject = self.resolve(s)
        members = []
        for source in self.universe.specs:
            witnesses = self.implementing_programs(source, subject)
            if witnesses:
                members.append(self._member(source.name, witnesses))
        return ImageSet(subject=subject.name, kind=ImageKind.PRE, members=members)

    def post_names(self, s: SpecRef) -> List[str]:
        subject = self.resolve(s)
        return [t.name for t in self.universe.specs if self.implementing_programs(subject, t)]

    def pre_names(self, s: SpecRef) -> List[str]:
        subject = self.resolve(s)
        return [t.name for t in self.universe.specs if self.implementing_programs(t, subject)]

    def more_application_rich(self, s1: SpecRef, s2: SpecRef) -> bool:
        return set(self.post_names(s1)) >= set(self.post_names(s2))

    def more_implementation_rich(self, s1: SpecRef, s2: SpecRef) -> bool:
        return set(self.pre_names(s1)) >= set(self.pre_names(s2))

    # --- weakness ---

    def weaker_than(self, s1: SpecRef, s2: SpecRef) -> bool:
        return self.checker.theory_entails(self.resolve(s2).theory, self.resolve(s1).theory)

    def strictly_weaker(self, s1: SpecRef, s2: SpecRef) -> bool:
        return self.weaker_than(s1, s2) and not self.weaker_than(s2, s1)

    def equivalent(self, s1: SpecRef, s2: SpecRef) -> bool:
        return self.weaker_than(s1, s2) and self.weaker_than(s2, s1)

    def weakness_lattice(self) -> List[LatticeEdge]:
        """Every ordered pair (weaker, stronger), reflexive pairs included."""
        edges = []
        for s1 in self.universe.specs:
            for s2 in self.universe.specs:
                if self.weaker_than(s1, s2):
                    edges.append(
                        LatticeEdge(
                            weaker=s1.name,
                            stronger=s2.name,
                            strict=not self.weaker_than(s2, s1),
                        )
                    )
        return edges

    def equivalence_classes(self) -> List[List[str]]:
        """Mutual-weakness classes, ordered by first declaration."""
        if self._classes is None:
            graph = nx.DiGraph()
            graph.add_nodes_from(self.universe.spec_names)
            for edge in self.weakness_lattice():
                if not edge.strict and edge.weaker != edge.stronger:
                    graph.add_edge(edge.weaker, edge.stronger)
            order = {name: i for i, name in enumerate(self.universe.spec_names)}
            classes = [
                sorted(component, key=order.__getitem__)
                for component in nx.strongly_connected_components(graph)
            ]
            self._classes = sorted(classes, key=lambda c: order[c[0]])
        return self._classes

    def class_of(self, name: str) -> List[str]:
        for group in self.equivalence_classes():
            if name in group:
                return group
        return [self.universe.spec(name).name]

    def hasse_diagram(self) -> nx.DiGraph:
        """
        Cover relation of the strict weakness order over equivalence classes.

        Nodes are class representatives (first declared member); an edge
        u -> v means u's class is strictly weaker than v's with nothing in
        between.
        """
        if self._hasse is None:
            classes = self.equivalence_classes()
            order = nx.DiGraph()
            order.add_nodes_from(group[0] for group in classes)
            for a in classes:
                for b in classes:
                    if a is not b and self.weaker_than(a[0], b[0]):
                        order.add_edge(a[0], b[0])
            self._hasse = nx.transitive_reduction(order)
            self._hasse.add_nodes_from(order.nodes)
        return self._hasse

    def hasse_edges(self) -> List[Tuple[str, str]]:
        position = {name: i for i, name in enumerate(self.universe.spec_names)}
        return sorted(
            self.hasse_diagram().edges,
            key=lambda edge: (position[edge[0]], position[edge[1]]),
        )

    def lower_covers(self, name: str) -> List[str]:
        """Representatives of the classes directly below ``name``'s class."""
        representative = self.class_of(name)[0]
        position = {n: i for i, n in enumerate(self.universe.spec_names)}
        return sorted(self.hasse_diagram().predecessors(representative), key=position.__getitem__)

    # --- theorem checking ---

    def verify_hourglass(self, lemmas: bool = False) -> HourglassVerification:
        """
        Check both hourglass inclusions for every pair with weaker_than(s1, s2).

        With ``lemmas`` also check the two monotonicity lemmas on every
        (s1, s2, p, t) tuple of the universe.
        """
        specs = self.universe.specs
        post = {s.name: set(self.post_names(s)) for s in specs}
        pre = {s.name: set(self.pre_names(s)) for s in specs}
        position = {name: i for i, name in enumerate(self.universe.spec_names)}

        checked: List[CheckedPair] = []
        violations: List[Violation] = []
        for s1 in specs:
            for s2 in specs:
                if not self.weaker_than(s1, s2):
                    continue
                checked.append(CheckedPair(weaker=s1.name, stronger=s2.name))
                extra = post[s1.name] - post[s2.name]
                if extra:
                    violations.append(
                        Violation(
                            weaker=s1.name,
                            stronger=s2.name,
                            part="post",
                            missing=sorted(extra, key=position.__getitem__),
                        )
                    )
                lost = pre[s2.name] - pre[s1.name]
                if lost:
                    violations.append(
                        Violation(
                            weaker=s1.name,
                            stronger=s2.name,
                            part="pre",
                            missing=sorted(lost, key=position.__getitem__),
                        )
                    )

        tuples = None
        lemma_violations: List[LemmaViolation] = []
        if lemmas:
            lemma_check = self.verify_lemmas(checked)
            tuples, lemma_violations = lemma_check.tuples, lemma_check.violations

        logger.debug(
            "universe %s: %d weaker pairs checked, %d violations",
            self.universe.name,
            len(checked),
            len(violations) + len(lemma_violations),
        )
        return HourglassVerification(
            universe=self.universe.name,
            checked=checked,
            violations=violations,
            lemma_tuples=tuples,
            lemma_violations=lemma_violations,
        )

    def verify_lemmas(self, pairs: Optional[List[CheckedPair]] = None) -> LemmaCheck:
        """
        Both monotonicity lemmas over every (s1, s2, p, t) with weaker_than(s1, s2):

            s1 <_p t  implies  s2 <_p t
            t <_p s2  implies  t <_p s1
        """
        if pairs is None:
            pairs = [
                CheckedPair(weaker=s1.name, stronger=s2.name)
                for s1 in self.universe.specs
                for s2 in self.universe.specs
                if self.weaker_than(s1, s2)
            ]
        specs = self.universe.specs
        programs = self.universe.programs
        as_lower = {
            s.name: {(p, t.name) for t in specs for p in self.implementing_programs(s, t)}
            for s in specs
        }
        as_upper = {
            s.name: {(p, t.name) for t in specs for p in self.implementing_programs(t, s)}
            for s in specs
        }
        found: List[LemmaViolation] = []
        for pair in pairs:
            for program, other in sorted(as_lower[pair.weaker] - as_lower[pair.stronger]):
                found.append(
                    LemmaViolation(
                        lemma="stronger-lower",
                        weaker=pair.weaker,
                        stronger=pair.stronger,
                        program=program,
                        other=other,
                    )
                )
            for program, other in sorted(as_upper[pair.stronger] - as_upper[pair.weaker]):
                found.append(
                    LemmaViolation(
                        lemma="weaker-upper",
                        weaker=pair.weaker,
                        stronger=pair.stronger,
                        program=program,
                        other=other,
                    )
                )
        return LemmaCheck(tuples=len(pairs) * len(programs) * len(specs), violations=found)


def post_image(u: Universe, s: str, settings: Optional[AnalysisSettings] = None) -> ImageSet:
    """post_Π(s): the declared specs some program implements atop ``s``."""
    return Analysis(u, settings).post_image(s)


def pre_image(u: Universe, s: str, settings: Optional[AnalysisSettings] = None) -> ImageSet:
    """pre_Π(s): the declared specs atop which some program implements ``s``."""
    return Analysis(u, settings).pre_image(s)


def more_application_rich(u: Universe, s1: str, s2: str, settings=None) -> bool:
    """
    post(s1) ⊇ post(s2): s1 admits every application s2 admits.

    Args:
        u: the universe whose programs and specs bound the images
        s1, s2: declared specification names
        settings: engine choice (truth tables by default)

    Returns:
        True when every application of s2 is also an application of s1.

    Example:
        more_application_rich(tcpip, "IP_RELIABLE", "IP_DATAGRAM") -> True
    """
    return Analysis(u, settings).more_application_rich(s1, s2)


def more_implementation_rich(u: Universe, s1: str, s2: str, settings=None) -> bool:
    """
    pre(s1) ⊇ pre(s2): s1 can be implemented atop everything s2 can.

    Example:
        more_implementation_rich(tcpip, "IP_DATAGRAM", "IP_RELIABLE") -> True
    """
    return Analysis(u, settings).more_implementation_rich(s1, s2)


def weakness_lattice(u: Universe, settings: Optional[AnalysisSettings] = None) -> List[LatticeEdge]:
    """
    Every (weaker, stronger) pair of declared specs.

    Returns:
        Edges in declaration order of the weaker spec, then the stronger one.
        Reflexive pairs are included with ``strict=False``; pairs of distinct
        equivalent specs appear in both directions, also non-strict.

    Example:
        weakness_lattice(u) with A = {a}, AB = {a, b}
        -> [A<=A (non-strict), A<=AB (strict), AB<=AB (non-strict)]
    """
    return Analysis(u, settings).weakness_lattice()


def verify_hourglass(
    u: Universe, settings: Optional[AnalysisSettings] = None, lemmas: bool = False
) -> HourglassVerification:
    """
    Check post(s1) ⊆ post(s2) and pre(s1) ⊇ pre(s2) for every weaker_than(s1, s2).

    Args:
        u: universe to check
        settings: engine choice and witness reporting
        lemmas: also check both monotonicity lemmas per (s1, s2, p, t)

    Returns:
        HourglassVerification listing every checked pair. Violations are
        reported as data and never raised.
    """
    return Analysis(u, settings).verify_hourglass(lemmas=lemmas)


def verify_lemmas(u: Universe, settings: Optional[AnalysisSettings] = None) -> LemmaCheck:
    return Analysis(u, settings).verify_lemmas()


def hasse_edges(u: Universe, settings: Optional[AnalysisSettings] = None) -> List[Tuple[str, str]]:
    """Cover edges between equivalence-class representatives."""
    return Analysis(u, settings).hasse_edges()
