"""
Report assembly and serialization (JSON, CSV, DOT, text).

=== FULL REPORT ===

    {
      "universe":     the parsed universe (theories rendered as text),
      "lattice":      weakness edges, equivalence classes, Hasse edges,
      "images":       pre and post image of every declared spec,
      "tradeoff":     tradeoff rows,
      "verification": hourglass theorem check
    }

Field names are stable; everything is listed in declaration order so equal
universes give byte-identical output.

=== DOT ===

lattice_dot     weakness lattice, weaker below stronger. Equivalence classes
                with more than one member are boxed; strict cover edges are
                solid, edges inside a class dashed.
hourglass_dot   one spec in the middle, its implementations fanned out below
                and its applications above; edges are labelled with the
                witness program.
"""

import csv
import io
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from hourglass.images import Analysis, HourglassVerification, ImageSet, LatticeEdge
from hourglass.settings import AnalysisSettings
from hourglass.sufficiency import (
    GenericVerdict,
    MinimalityEvidence,
    SufficiencyEvidence,
    TradeoffRow,
    tradeoff_table,
)
from hourglass.universe import Universe

TRADEOFF_HEADER = ["spec", "pre_count", "post_count", "covered", "value", "sufficient", "minimal"]


class HasseEdge(BaseModel):
    model_config = ConfigDict(frozen=True)

    weaker: str
    stronger: str


class LatticeReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    edges: List[LatticeEdge] = Field(default_factory=list, description="Every weaker_than pair")
    classes: List[List[str]] = Field(default_factory=list, description="Equivalence classes")
    hasse: List[HasseEdge] = Field(
        default_factory=list, description="Cover edges between class representatives"
    )


class AnalysisReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    universe: Universe
    lattice: LatticeReport
    images: List[ImageSet]
    tradeoff: List[TradeoffRow]
    verification: HourglassVerification


def lattice_report(analysis: Analysis) -> LatticeReport:
    return LatticeReport(
        edges=analysis.weakness_lattice(),
        classes=analysis.equivalence_classes(),
        hasse=[HasseEdge(weaker=a, stronger=b) for a, b in analysis.hasse_edges()],
    )


def build_report(
    u: Universe,
    settings: Optional[AnalysisSettings] = None,
    lemmas: bool = False,
    analysis: Optional[Analysis] = None,
) -> AnalysisReport:
    analysis = analysis or Analysis(u, settings)
    images = []
    for spec in u.specs:
        images.append(analysis.pre_image(spec.name))
        images.append(analysis.post_image(spec.name))
    return AnalysisReport(
        universe=u,
        lattice=lattice_report(analysis),
        images=images,
        tradeoff=tradeoff_table(u, analysis=analysis),
        verification=analysis.verify_hourglass(lemmas=lemmas),
    )


def to_json(model: BaseModel) -> str:
    return model.model_dump_json(indent=2, exclude_none=True) + "\n"


# === CSV ===

def _flag(value: bool) -> str:
    return "true" if value else "false"


def tradeoff_csv(rows: List[TradeoffRow]) -> str:
    """
    Tradeoff rows as CSV.

    Example:
        spec,pre_count,post_count,covered,value,sufficient,minimal
        IP_DATAGRAM,2,2,1,2.00,true,true
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TRADEOFF_HEADER)
    for row in rows:
        writer.writerow(
            [
                row.spec,
                row.pre_count,
                row.post_count,
                row.covered,
                f"{row.value:.2f}",
                _flag(row.sufficient),
                _flag(row.minimal),
            ]
        )
    return buffer.getvalue()


# === DOT ===

def _q(name: str) -> str:
    return '"' + name.replace('"', '\\"') + '"'


def lattice_dot(analysis: Analysis) -> str:
    lines = [f"digraph {_q(analysis.universe.name)} {{", "  rankdir=BT;", "  node [shape=ellipse];"]
    classes = analysis.equivalence_classes()
    for index, group in enumerate(classes):
        if len(group) == 1:
            lines.append(f"  {_q(group[0])};")
            continue
        lines.append(f"  subgraph cluster_{index} {{")
        lines.append("    style=rounded;")
        for name in group:
            lines.append(f"    {_q(name)};")
        for left, right in zip(group, group[1:]):
            lines.append(f"    {_q(left)} -> {_q(right)} [style=dashed, dir=both];")
        lines.append("  }")
    for weaker, stronger in analysis.hasse_edges():
        lines.append(f"  {_q(weaker)} -> {_q(stronger)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def hourglass_dot(analysis: Analysis, subject: str) -> str:
    pre = analysis.pre_image(subject)
    post = analysis.post_image(subject)
    lines = [f"digraph {_q('hourglass_' + subject)} {{", "  rankdir=BT;"]
    lines.append(f"  {_q(subject)} [shape=box, style=bold];")
    for member in pre.members:
        node = _q("pre:" + member.spec)
        lines.append(f"  {node} [label={_q(member.spec)}];")
        lines.append(f"  {node} -> {_q(subject)} [label={_q(member.witness)}];")
    for member in post.members:
        node = _q("post:" + member.spec)
        lines.append(f"  {node} [label={_q(member.spec)}];")
        lines.append(f"  {_q(subject)} -> {node} [label={_q(member.witness)}];")
    if pre.members:
        lines.append("  { rank=min; " + " ".join(_q("pre:" + m.spec) + ";" for m in pre.members) + " }")
    if post.members:
        lines.append("  { rank=max; " + " ".join(_q("post:" + m.spec) + ";" for m in post.members) + " }")
    lines.append("}")
    return "\n".join(lines) + "\n"


# === TEXT ===

def image_text(image: ImageSet) -> str:
    title = "implementations (pre)" if image.kind.value == "PRE" else "applications (post)"
    lines = [f"{title} of {image.subject}: {len(image.members)}"]
    for member in image.members:
        via = ", ".join(member.witnesses) if member.witnesses else member.witness
        lines.append(f"  {member.spec}  via {via}")
    return "\n".join(lines) + "\n"


def lattice_text(report: LatticeReport) -> str:
    lines = ["classes:"]
    lines += ["  " + " = ".join(group) for group in report.classes]
    lines.append("covers:")
    lines += [f"  {edge.weaker} < {edge.stronger}" for edge in report.hasse]
    return "\n".join(lines) + "\n"


def verification_text(result: HourglassVerification) -> str:
    lines = [f"{len(result.checked)} weaker pairs checked"]
    if result.lemma_tuples is not None:
        lines.append(f"{result.lemma_tuples} lemma tuples checked")
    lines.append(f"{len(result.violations) + len(result.lemma_violations)} violations")
    for v in result.violations:
        relation = "post ⊆" if v.part == "post" else "pre ⊇"
        lines.append(f"  {v.weaker} / {v.stronger}: {relation} fails on {', '.join(v.missing)}")
    for v in result.lemma_violations:
        lines.append(f"  {v.lemma}: {v.weaker} / {v.stronger} with {v.program} and {v.other}")
    return "\n".join(lines) + "\n"


def tradeoff_text(rows: List[TradeoffRow]) -> str:
    table = [TRADEOFF_HEADER] + [
        [
            r.spec,
            str(r.pre_count),
            str(r.post_count),
            str(r.covered),
            f"{r.value:.2f}",
            _flag(r.sufficient),
            _flag(r.minimal),
        ]
        for r in rows
    ]
    widths = [max(len(line[i]) for line in table) for i in range(len(TRADEOFF_HEADER))]
    out = []
    for line in table:
        cells = [line[0].ljust(widths[0])] + [cell.rjust(w) for cell, w in zip(line[1:], widths[1:])]
        out.append("  ".join(cells).rstrip())
    return "\n".join(out) + "\n"


def sufficiency_text(evidence: SufficiencyEvidence) -> str:
    lines = [_flag(evidence.sufficient)]
    lines.append("covered: " + (", ".join(evidence.covered) or "-"))
    lines.append("missing: " + (", ".join(evidence.missing) or "-"))
    return "\n".join(lines) + "\n"


def generic_text(verdict: GenericVerdict) -> str:
    lines = [_flag(verdict.generic)]
    lines.append(
        f"reading: {verdict.reading}, candidates: {verdict.candidate_space.value} "
        f"({verdict.candidates_checked} strict weakenings)"
    )
    if not verdict.sufficient:
        lines.append(f"{verdict.subject} is not sufficient")
    if verdict.worst_weakening is not None:
        worst = verdict.worst_weakening
        lines.append(f"worst weakening: {worst.spec} (loss {worst.loss:g}, epsilon {verdict.epsilon:g})")
    return "\n".join(lines) + "\n"


def minimality_text(evidence: MinimalityEvidence) -> str:
    lines = [_flag(evidence.minimal)]
    if not evidence.sufficient:
        lines.append(f"{evidence.subject} is not sufficient")
    elif evidence.sufficient_weakenings:
        lines.append("sufficient strict weakenings: " + ", ".join(evidence.sufficient_weakenings))
    else:
        lines.append(f"no strict weakening ({evidence.candidate_space.value}) is sufficient")
    return "\n".join(lines) + "\n"
