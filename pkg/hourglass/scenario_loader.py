"""
Bundled scenario loader.

Case-study scenarios live as ``.hgl`` files under ``data/scenarios/`` and
their regression fixtures under ``data/golden/``:

    data/golden/<name>.tradeoff.csv     golden tradeoff table
    data/golden/<name>.claims.json      checkable claims for the case study
    data/golden/<name>.report.json      golden full report

=== CACHING ===

Scenarios are parsed once and kept in a class-level cache, so every command
and test works from the same parsed universes. ``reload_scenarios`` clears
the cache after the files are edited.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from hourglass.claims import Claim, ClaimsFile
from hourglass.errors import HourglassError
from hourglass.scenario import SCENARIO_SUFFIX, parse_scenario
from hourglass.universe import Universe

logger = logging.getLogger(__name__)


class ScenarioFile(BaseModel):
    """A scenario file together with its parsed universe."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(..., description="File stem, e.g. 'tcpip'")
    path: Path = Field(..., description="Location on disk")
    universe: Universe = Field(..., description="Parsed and validated universe")


class ScenarioLoader:
    """
    Loads the bundled scenarios from ``data/scenarios/``.

    Class variables hold the cache so every caller shares one set of parsed
    universes without re-reading the files.
    """

    _scenario_cache: Dict[str, ScenarioFile] = {}

    _scenarios_dir = Path(__file__).parent.parent / "data" / "scenarios"
    _golden_dir = Path(__file__).parent.parent / "data" / "golden"

    @classmethod
    def load_all_scenarios(cls) -> Dict[str, ScenarioFile]:
        """
        Parse every ``.hgl`` file of the scenarios directory.

        Returns:
            Dict keyed by scenario name in file-name order, e.g.
            {"grid_auth": ScenarioFile(...), "tcpip": ScenarioFile(...), ...}

        Raises:
            FileNotFoundError: the scenarios directory is missing
            HourglassError: a bundled file fails to parse
        """
        if cls._scenario_cache:
            return cls._scenario_cache

        if not cls._scenarios_dir.exists():
            raise FileNotFoundError(f"Scenarios directory not found: {cls._scenarios_dir}")

        scenarios = {}
        for path in sorted(cls._scenarios_dir.glob(f"*{SCENARIO_SUFFIX}")):
            text = path.read_text(encoding="utf-8")
            try:
                universe = parse_scenario(text, name=path.stem)
            except HourglassError as e:
                logger.error("bundled scenario %s is invalid: %s", path.name, e)
                raise
            scenarios[path.stem] = ScenarioFile(name=path.stem, path=path, universe=universe)

        logger.debug("loaded %d bundled scenarios", len(scenarios))
        cls._scenario_cache = scenarios
        return scenarios

    @classmethod
    def get_scenario(cls, name: str) -> Optional[ScenarioFile]:
        """
        A bundled scenario by name; the ``.hgl`` suffix is optional.

        Example:
            ScenarioLoader.get_scenario("tcpip.hgl").universe.spec_names
            -> ['LINK_BASIC', 'LINK_ARQ', 'IP_DATAGRAM', ...]
        """
        if name.endswith(SCENARIO_SUFFIX):
            name = name[: -len(SCENARIO_SUFFIX)]
        return cls.load_all_scenarios().get(name)

    @classmethod
    def list_scenarios(cls) -> List[str]:
        return list(cls.load_all_scenarios().keys())

    @classmethod
    def reload_scenarios(cls) -> Dict[str, ScenarioFile]:
        cls._scenario_cache = {}
        return cls.load_all_scenarios()

    @classmethod
    def golden_tradeoff_path(cls, name: str) -> Path:
        return cls._golden_dir / f"{name}.tradeoff.csv"

    @classmethod
    def golden_tradeoff(cls, name: str) -> Optional[str]:
        """Committed tradeoff CSV of a regression scenario, or None."""
        path = cls.golden_tradeoff_path(name)
        if not path.exists():
            return None
        return path.read_text(encoding="utf-8")

    @classmethod
    def golden_report_path(cls, name: str) -> Path:
        return cls._golden_dir / f"{name}.report.json"

    @classmethod
    def golden_report(cls, name: str) -> Optional[str]:
        """Committed JSON report of a regression scenario, or None."""
        path = cls.golden_report_path(name)
        if not path.exists():
            return None
        return path.read_text(encoding="utf-8")

    @classmethod
    def claims_for(cls, name: str) -> List[Claim]:
        """Claims shipped for a scenario; empty for scenarios without a claims file."""
        path = cls._golden_dir / f"{name}.claims.json"
        if not path.exists():
            return []
        with open(path, "r", encoding="utf-8") as f:
            return ClaimsFile.model_validate(json.load(f)).claims


def bundled_scenarios() -> List[Tuple[str, ScenarioFile]]:
    """(name, ScenarioFile) pairs for every bundled scenario."""
    return list(ScenarioLoader.load_all_scenarios().items())
