"""
Universe: the declared, finite frame every analysis runs in.

A universe bundles the atom vocabulary, the specifications under study (the
part of Σ we care about), the programs considered acceptable (Π), the
necessary applications (N) and the value weights (v). Images, sufficiency
and genericness are all computed relative to one universe.

=== VALIDATION ===

Construction checks every cross-reference:
- atom, specification and program names are unique (specs and programs
  share one namespace)
- theories and rules mention only vocabulary atoms
- necessary names and value keys name declared specifications
- weights are nonnegative
"""

from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from hourglass.errors import DuplicateName, InvalidUniverse, UnknownAtom, UnknownProgram, UnknownSpec
from hourglass.logic import Atom, atoms_of
from hourglass.programs import Program
from hourglass.specs import Specification

DEFAULT_WEIGHT = 1.0


class Universe(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str = Field(default="universe", description="Universe name (scenario file stem)")
    vocab: Tuple[Atom, ...] = Field(default=(), description="Atom vocabulary in declaration order")
    specs: Tuple[Specification, ...] = Field(default=(), description="Declared specifications")
    programs: Tuple[Program, ...] = Field(default=(), description="Admissible programs (Π)")
    necessary: Tuple[str, ...] = Field(default=(), description="Necessary applications (N)")
    values: Dict[str, float] = Field(
        default_factory=dict,
        description="Value weights per spec; undeclared specs weigh 1.0",
    )

    @model_validator(mode="after")
    def _check_references(self) -> "Universe":
        atoms = set()
        for atom in self.vocab:
            if atom.name in atoms:
                raise DuplicateName(atom.name, "atom")
            atoms.add(atom.name)

        layer_names = set()
        for item, kind in [(s, "specification") for s in self.specs] + [
            (p, "program") for p in self.programs
        ]:
            if item.name in layer_names:
                raise DuplicateName(item.name, kind)
            layer_names.add(item.name)

        for spec in self.specs:
            self._check_atoms(spec.theory.atoms(), atoms)
        for program in self.programs:
            for rule in program.rules:
                self._check_atoms(atoms_of(rule.guard) | atoms_of(rule.gives), atoms)

        spec_names = {s.name for s in self.specs}
        if len(set(self.necessary)) != len(self.necessary):
            raise InvalidUniverse("necessary set lists a specification twice")
        for name in self.necessary:
            if name not in spec_names:
                raise UnknownSpec(name)
        for name, weight in self.values.items():
            if name not in spec_names:
                raise UnknownSpec(name)
            if weight < 0:
                raise InvalidUniverse(f"value of '{name}' must be nonnegative, got {weight}", name=name)
        return self

    @staticmethod
    def _check_atoms(used, known):
        unknown = sorted(set(used) - known)
        if unknown:
            raise UnknownAtom(unknown[0])

    @property
    def vocab_names(self) -> Tuple[str, ...]:
        return tuple(a.name for a in self.vocab)

    @property
    def spec_names(self) -> List[str]:
        return [s.name for s in self.specs]

    @property
    def program_names(self) -> List[str]:
        return [p.name for p in self.programs]

    def has_spec(self, name: str) -> bool:
        return any(s.name == name for s in self.specs)

    def spec(self, name: str) -> Specification:
        for s in self.specs:
            if s.name == name:
                return s
        raise UnknownSpec(name)

    def program(self, name: str) -> Program:
        for p in self.programs:
            if p.name == name:
                return p
        raise UnknownProgram(name)

    def weight(self, name: str) -> float:
        return self.values.get(name, DEFAULT_WEIGHT)

    def without_program(self, name: str) -> "Universe":
        """Copy of this universe with one program removed from Π."""
        self.program(name)
        return self.model_copy(
            update={"programs": tuple(p for p in self.programs if p.name != name)}
        )

    def with_programs(self, programs: Tuple[Program, ...]) -> "Universe":
        return Universe(
            name=self.name,
            vocab=self.vocab,
            specs=self.specs,
            programs=self.programs + tuple(programs),
            necessary=self.necessary,
            values=self.values,
        )

