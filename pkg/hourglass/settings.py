"""
Analysis settings.

A single pydantic model that every analysis entry point accepts. The CLI
builds one from its flags; library callers construct it directly or use the
defaults.

=== KNOBS ===

engine              Which entailment procedure answers ⊢ queries.
                    'truth-table' is the exhaustive oracle mode and enforces
                    max_oracle_atoms; 'dpll' is a complete refutation search
                    with no atom cap.
max_oracle_atoms    Vocabulary cap for oracle mode (scenario files larger
                    than this are rejected when the truth-table engine is on).
max_closure_atoms   Vocabulary cap for CLOSURE candidate spaces.
full_witnesses      Keep every witness program per image member instead of
                    the first one in declaration order.
"""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

EngineName = Literal["truth-table", "dpll"]


class AnalysisSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    engine: EngineName = Field(
        default="truth-table",
        description="Entailment procedure: exhaustive truth tables or DPLL refutation",
    )
    max_oracle_atoms: int = Field(
        default=24,
        ge=1,
        description="Largest vocabulary the truth-table engine accepts",
    )
    max_closure_atoms: int = Field(
        default=16,
        ge=0,
        description="Largest vocabulary for which CLOSURE candidates are enumerated",
    )
    full_witnesses: bool = Field(
        default=False,
        description="Report every witness program for image members",
    )


DEFAULT_SETTINGS = AnalysisSettings()
