"""Hourglass model analysis: layered specifications, images, sufficiency and genericness."""

from hourglass.images import Analysis, post_image, pre_image, verify_hourglass, weakness_lattice
from hourglass.logic import entails, parse_formula, render_formula, theory_entails
from hourglass.scenario import load_scenario, parse_scenario, render_scenario
from hourglass.settings import AnalysisSettings
from hourglass.specs import Specification, equivalent, strictly_weaker, weaker_than
from hourglass.sufficiency import generic, minimally_sufficient, sufficient, tradeoff_table
from hourglass.universe import Universe

__all__ = [
    "Analysis",
    "AnalysisSettings",
    "Specification",
    "Universe",
    "entails",
    "equivalent",
    "generic",
    "load_scenario",
    "minimally_sufficient",
    "parse_formula",
    "parse_scenario",
    "post_image",
    "pre_image",
    "render_formula",
    "render_scenario",
    "strictly_weaker",
    "sufficient",
    "theory_entails",
    "tradeoff_table",
    "verify_hourglass",
    "weakness_lattice",
]
