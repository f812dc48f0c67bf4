"""
Scenario DSL: parser, validator and canonical renderer.

=== GRAMMAR ===

    file      := stmt*
    stmt      := atom | spec | program | necessary | value | annotate
    atom      := "atom" IDENT STRING?
    spec      := "spec" IDENT "{" ( formula ( "," formula )* )? "}"
    program   := "program" IDENT "{" rule* "}"
    rule      := "when" formula "gives" formula ";"
    necessary := "necessary" "{" IDENT ( "," IDENT )* "}"
    value     := "value" IDENT "=" NUMBER
    annotate  := "annotate" IDENT IDENT "=" STRING

``spec S { }`` declares a vacuous spec and ``program P { }`` the no-op
program. ``#`` starts a comment that runs to the end of the line.

=== VALIDATION ===

Every name must be declared before it is used. A name used too early but
declared further down is a ForwardReference; a name declared nowhere is an
UnknownAtom / UnknownSpec. Redeclarations are errors, never overrides:

    second atom/spec/program with a taken name   DuplicateName
    second value for a spec                      DuplicateValue
    second annotation with the same key          DuplicateValue
    second necessary block                       DuplicateNecessary

Statement keywords and the literals true/false cannot be used as names.
All errors carry the line and column of the offending token.

=== RENDERING ===

``render_scenario`` writes atoms, specs, programs, the necessary block,
values and annotations, in that order and each in declaration order, so
``parse_scenario(render_scenario(u), name=u.name) == u``.
"""

import logging
from decimal import Decimal
from pathlib import Path
from typing import Dict, List, Optional, Set, Tuple, Union

from hourglass.errors import (
    DuplicateName,
    DuplicateNecessary,
    DuplicateValue,
    ForwardReference,
    ParseError,
    UnknownAtom,
    UnknownSpec,
    VocabularyTooLarge,
)
from hourglass.lexer import EOF, NAME, NUMBER, STRING, SYMBOL, Token, TokenStream, quote, tokenize
from hourglass.logic import RESERVED_WORDS, Atom, Formula, FormulaParser, Theory, is_atom_name, render_formula
from hourglass.programs import Program, ProductionRule
from hourglass.settings import DEFAULT_SETTINGS, AnalysisSettings
from hourglass.specs import Specification
from hourglass.universe import Universe

logger = logging.getLogger(__name__)

SCENARIO_SUFFIX = ".hgl"

KEYWORDS = frozenset({"atom", "spec", "program", "when", "gives", "necessary", "value", "annotate"})
_DECLARING = ("atom", "spec", "program")


class _ScenarioParser:
    def __init__(self, text: str, settings: AnalysisSettings):
        self.tokens = tokenize(text)
        self.stream = TokenStream(self.tokens)
        self.settings = settings
        self.declared_later = self._declarations(self.tokens)

        self.atoms: Dict[str, Atom] = {}
        self.spec_theories: Dict[str, Theory] = {}
        self.annotations: Dict[str, Dict[str, str]] = {}
        self.programs: Dict[str, Program] = {}
        self.necessary: Optional[List[str]] = None
        self.values: Dict[str, float] = {}

    @staticmethod
    def _declarations(tokens: List[Token]) -> Dict[str, Set[str]]:
        """Names each declaring keyword introduces anywhere in the file."""
        found: Dict[str, Set[str]] = {kind: set() for kind in _DECLARING}
        for keyword, name in zip(tokens, tokens[1:]):
            if keyword.kind == NAME and keyword.text in found and name.kind == NAME:
                found[keyword.text].add(name.text)
        return found

    # --- name resolution ---

    def _resolve_atom(self, token: Token):
        if token.text in self.atoms:
            return
        if token.text in self.declared_later["atom"]:
            raise ForwardReference(token.text, "atom", line=token.line, column=token.column)
        raise UnknownAtom(token.text, line=token.line, column=token.column)

    def _resolve_spec(self, token: Token) -> str:
        if token.text in self.spec_theories:
            return token.text
        if token.text in self.declared_later["spec"]:
            raise ForwardReference(token.text, "specification", line=token.line, column=token.column)
        raise UnknownSpec(token.text, line=token.line, column=token.column)

    def _new_name(self, kind: str) -> Token:
        token = self.stream.expect(NAME, what=f"{kind} name")
        if token.text in KEYWORDS or token.text in RESERVED_WORDS:
            raise ParseError(
                f"'{token.text}' is a reserved word and cannot name a {kind}",
                name=token.text,
                line=token.line,
                column=token.column,
            )
        return token

    def _formula(self) -> Formula:
        return FormulaParser(self.stream, self._resolve_atom).formula()

    # --- statements ---

    def parse(self) -> None:
        stream = self.stream
        handlers = {
            "atom": self._atom,
            "spec": self._spec,
            "program": self._program,
            "necessary": self._necessary,
            "value": self._value,
            "annotate": self._annotate,
        }
        while not stream.at(EOF):
            token = stream.token
            handler = handlers.get(token.text) if token.kind == NAME else None
            if handler is None:
                stream.fail("statement (atom, spec, program, necessary, value or annotate)")
            stream.advance()
            handler(token)

    def _atom(self, keyword: Token):
        token = self._new_name("atom")
        if not is_atom_name(token.text):
            raise ParseError(
                f"invalid atom name '{token.text}' (expected lowercase identifier)",
                name=token.text,
                line=token.line,
                column=token.column,
            )
        if token.text in self.atoms:
            raise DuplicateName(token.text, "atom", line=token.line, column=token.column)
        description = self.stream.accept(STRING)
        limit = self.settings.max_oracle_atoms
        if self.settings.engine == "truth-table" and len(self.atoms) >= limit:
            raise VocabularyTooLarge(len(self.atoms) + 1, limit, line=token.line, column=token.column)
        self.atoms[token.text] = Atom(
            name=token.text,
            description=description.value if description else None,
        )

    def _check_layer_name(self, token: Token, kind: str):
        if token.text in self.spec_theories or token.text in self.programs:
            raise DuplicateName(token.text, kind, line=token.line, column=token.column)

    def _spec(self, keyword: Token):
        token = self._new_name("specification")
        self._check_layer_name(token, "specification")
        stream = self.stream
        stream.expect(SYMBOL, "{")
        formulas = []
        if not stream.at(SYMBOL, "}"):
            formulas.append(self._formula())
            while stream.accept(SYMBOL, ","):
                formulas.append(self._formula())
        stream.expect(SYMBOL, "}", what="',' or '}'")
        self.spec_theories[token.text] = Theory(formulas)
        self.annotations[token.text] = {}

    def _program(self, keyword: Token):
        token = self._new_name("program")
        self._check_layer_name(token, "program")
        stream = self.stream
        stream.expect(SYMBOL, "{")
        rules = []
        while stream.accept(NAME, "when"):
            guard = self._formula()
            stream.expect(NAME, "gives")
            gives = self._formula()
            stream.expect(SYMBOL, ";")
            rules.append(ProductionRule(guard=guard, gives=gives))
        stream.expect(SYMBOL, "}", what="'when' or '}'")
        self.programs[token.text] = Program(name=token.text, rules=tuple(rules))

    def _necessary(self, keyword: Token):
        if self.necessary is not None:
            raise DuplicateNecessary(line=keyword.line, column=keyword.column)
        stream = self.stream
        stream.expect(SYMBOL, "{")
        names: List[str] = []
        while True:
            token = stream.expect(NAME, what="specification name")
            name = self._resolve_spec(token)
            if name in names:
                raise DuplicateName(name, "necessary entry", line=token.line, column=token.column)
            names.append(name)
            if not stream.accept(SYMBOL, ","):
                break
        stream.expect(SYMBOL, "}", what="',' or '}'")
        self.necessary = names

    def _value(self, keyword: Token):
        stream = self.stream
        token = stream.expect(NAME, what="specification name")
        name = self._resolve_spec(token)
        if name in self.values:
            raise DuplicateValue(name, line=token.line, column=token.column)
        stream.expect(SYMBOL, "=")
        number = stream.expect(NUMBER, what="nonnegative number")
        self.values[name] = float(number.text)

    def _annotate(self, keyword: Token):
        stream = self.stream
        token = stream.expect(NAME, what="specification name")
        name = self._resolve_spec(token)
        key = stream.expect(NAME, what="annotation key")
        if key.text in self.annotations[name]:
            raise DuplicateValue(
                name, f"annotation '{key.text}'", line=key.line, column=key.column
            )
        stream.expect(SYMBOL, "=")
        text = stream.expect(STRING, what="quoted string")
        self.annotations[name][key.text] = text.value

    # --- result ---

    def universe(self, name: str) -> Universe:
        specs = tuple(
            Specification(name=spec, theory=theory, annotations=self.annotations[spec])
            for spec, theory in self.spec_theories.items()
        )
        return Universe(
            name=name,
            vocab=tuple(self.atoms.values()),
            specs=specs,
            programs=tuple(self.programs.values()),
            necessary=tuple(self.necessary or ()),
            values=dict(self.values),
        )


def parse_scenario(
    text: str,
    name: str = "universe",
    settings: Optional[AnalysisSettings] = None,
) -> Universe:
    """
    Parse and validate scenario text.

    Args:
        text: scenario source
        name: universe name (the file stem for files on disk)
        settings: engine choice decides whether the oracle atom cap applies

    Raises:
        ParseError, UnknownAtom, UnknownSpec, DuplicateName, ForwardReference,
        DuplicateValue, DuplicateNecessary, VocabularyTooLarge

    Example:
        parse_scenario("atom a\\nspec S { a }")
        -> Universe with 1 atom, 1 spec, 0 programs
    """
    parser = _ScenarioParser(text, settings or DEFAULT_SETTINGS)
    parser.parse()
    universe = parser.universe(name)
    logger.debug(
        "parsed scenario %s: %d atoms, %d specs, %d programs",
        name,
        len(universe.vocab),
        len(universe.specs),
        len(universe.programs),
    )
    return universe


def load_scenario(path: Union[str, Path], settings: Optional[AnalysisSettings] = None) -> Universe:
    """Parse a ``.hgl`` file; the universe is named after the file stem."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        data = path.read_bytes()
        line_start = data.rfind(b"\n", 0, e.start) + 1
        raise ParseError(
            f"invalid UTF-8 byte 0x{data[e.start]:02x}",
            name=f"\\x{data[e.start]:02x}",
            line=data.count(b"\n", 0, e.start) + 1,
            column=len(data[line_start:e.start].decode("utf-8")) + 1,
        ) from e
    return parse_scenario(text, name=path.stem, settings=settings)


# === RENDERING ===

def format_number(value: float) -> str:
    """Positional decimal text that the NUMBER token reads back to ``value``."""
    return format(Decimal(repr(float(value))), "f")


def _render_spec(spec: Specification) -> str:
    if not spec.theory:
        return f"spec {spec.name} {{ }}"
    return f"spec {spec.name} {{ " + ", ".join(spec.theory.render()) + " }"


def _render_program(program: Program) -> List[str]:
    if program.is_noop:
        return [f"program {program.name} {{ }}"]
    lines = [f"program {program.name} {{"]
    for rule in program.rules:
        lines.append(f"  when {render_formula(rule.guard)} gives {render_formula(rule.gives)};")
    lines.append("}")
    return lines


def render_scenario(u: Universe) -> str:
    """Canonical scenario text for ``u``."""
    sections: List[List[str]] = [[f"# scenario: {u.name}"]]

    if u.vocab:
        sections.append(
            [
                f"atom {a.name} {quote(a.description)}" if a.description is not None else f"atom {a.name}"
                for a in u.vocab
            ]
        )
    if u.specs:
        sections.append([_render_spec(s) for s in u.specs])
    for program in u.programs:
        sections.append(_render_program(program))
    if u.necessary:
        sections.append(["necessary { " + ", ".join(u.necessary) + " }"])
    if u.values:
        sections.append([f"value {name} = {format_number(w)}" for name, w in u.values.items()])
    notes: List[Tuple[str, str, str]] = [
        (s.name, key, text) for s in u.specs for key, text in s.annotations.items()
    ]
    if notes:
        sections.append([f"annotate {name} {key} = {quote(text)}" for name, key, text in notes])

    return "\n\n".join("\n".join(lines) for lines in sections) + "\n"
