"""
Propositional logic core: formulas, theories, parsing, rendering, entailment.

This module is the ⊢ of the toolkit. Every analysis above it (weakness,
implements, images, sufficiency) is phrased in terms of ``entails`` and
``theory_entails``.

=== FORMULAS ===

A formula is a tree of frozen dataclasses:

    TrueConst | FalseConst | AtomRef(name) | Not(f) | And(f, g) | Or(f, g) | Implies(f, g)

Trees compare and hash structurally, so they can be used as dict keys and
theory members.

=== GRAMMAR ===

    formula := implic
    implic  := disj ( "->" implic )?          right-associative
    disj    := conj ( "|" conj )*             left-associative
    conj    := neg ( "&" neg )*               left-associative
    neg     := "!" neg | prim
    prim    := "true" | "false" | IDENT | "(" formula ")"

=== ENGINES ===

TruthTableEngine   Bit-parallel truth tables: each formula becomes an int
                   whose bit k is its value under assignment k. Exhaustive,
                   capped at ``max_atoms`` vocabulary atoms.
DpllEngine         Tseitin CNF of premises ∧ ¬conclusion, refuted by DPLL
                   with unit propagation. No vocabulary cap.

Both return the same verdicts; the property suite checks them against a
naive assignment-by-assignment oracle.
"""

import logging
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from hourglass.errors import UnknownAtom, VocabularyTooLarge
from hourglass.lexer import EOF, NAME, SYMBOL, TokenStream, tokenize

logger = logging.getLogger(__name__)

ATOM_PATTERN = r"^[a-z][a-z0-9_]*$"
_ATOM_RE = re.compile(ATOM_PATTERN)

RESERVED_WORDS = frozenset({"true", "false"})


# === ATOMS ===

class Atom(BaseModel):
    """A capability guarantee named in a vocabulary (e.g. 'delivers_datagram')."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(..., pattern=ATOM_PATTERN, description="Atom identifier")
    description: Optional[str] = Field(default=None, description="Human-readable meaning")

    @field_validator("name")
    @classmethod
    def _not_reserved(cls, value: str) -> str:
        if value in RESERVED_WORDS:
            raise ValueError(f"'{value}' is a reserved word")
        return value


def is_atom_name(text: str) -> bool:
    return bool(_ATOM_RE.match(text)) and text not in RESERVED_WORDS


Vocabulary = Iterable[Union[Atom, str]]


def vocab_names(vocab: Vocabulary) -> Tuple[str, ...]:
    """Atom names of ``vocab`` in iteration order, duplicates dropped."""
    names = (a.name if isinstance(a, Atom) else a for a in vocab)
    return tuple(dict.fromkeys(names))


# === FORMULA TREES ===

class Formula:
    """
    Base class of formula nodes.

    The hash is fixed at construction from the children's hashes. Neither
    hashing nor equality recurses.
    """

    __slots__ = ()

    def __post_init__(self):
        if isinstance(self, AtomRef):
            key = (self.name,)
        else:
            key = tuple(child._hash for child in _children(self))
        object.__setattr__(self, "_hash", hash((type(self).__name__,) + key))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        pairs = [(self, other)]
        while pairs:
            a, b = pairs.pop()
            if a is b:
                continue
            if type(a) is not type(b) or a._hash != b._hash:
                return False
            if isinstance(a, AtomRef):
                if a.name != b.name:
                    return False
                continue
            pairs.extend(zip(_children(a), _children(b)))
        return True

    def __str__(self) -> str:
        return render_formula(self)


@dataclass(frozen=True, eq=False, repr=False)
class TrueConst(Formula):
    def __repr__(self):
        return "TRUE"


@dataclass(frozen=True, eq=False, repr=False)
class FalseConst(Formula):
    def __repr__(self):
        return "FALSE"


@dataclass(frozen=True, eq=False)
class AtomRef(Formula):
    name: str


@dataclass(frozen=True, eq=False)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True, eq=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Implies(Formula):
    left: Formula
    right: Formula


_BINARY = (And, Or, Implies)


def _children(f: Formula) -> Tuple[Formula, ...]:
    if isinstance(f, Not):
        return (f.operand,)
    if isinstance(f, _BINARY):
        return (f.left, f.right)
    return ()


TRUE = TrueConst()
FALSE = FalseConst()


def _postorder(f: Formula, done: Optional[Dict[Formula, object]] = None) -> List[Formula]:
    """
    Distinct subformulas of ``f``, every child before its parent.

    Subformulas already in ``done`` are neither listed nor expanded.
    """
    order: List[Formula] = []
    seen = set()
    stack = [(f, False)]
    while stack:
        node, ready = stack.pop()
        if ready:
            order.append(node)
            continue
        if node in seen or (done is not None and node in done):
            continue
        seen.add(node)
        stack.append((node, True))
        stack.extend((child, False) for child in reversed(_children(node)))
    return order


def atoms_of(f: Formula) -> FrozenSet[str]:
    """Names of all atoms referenced by ``f``."""
    found = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, AtomRef):
            found.add(node.name)
        else:
            stack.extend(_children(node))
    return frozenset(found)


def evaluate(f: Formula, assignment: Dict[str, bool]) -> bool:
    """Classical truth value of ``f`` under ``assignment`` (missing atoms are false)."""
    values: Dict[Formula, bool] = {}
    for node in _postorder(f):
        if isinstance(node, TrueConst):
            value = True
        elif isinstance(node, FalseConst):
            value = False
        elif isinstance(node, AtomRef):
            value = assignment.get(node.name, False)
        elif isinstance(node, Not):
            value = not values[node.operand]
        elif isinstance(node, And):
            value = values[node.left] and values[node.right]
        elif isinstance(node, Or):
            value = values[node.left] or values[node.right]
        elif isinstance(node, Implies):
            value = (not values[node.left]) or values[node.right]
        else:
            raise TypeError(f"not a formula: {node!r}")
        values[node] = value
    return values[f]


# === THEORIES ===

class Theory:
    """
    Finite ordered set of formulas.

    Duplicates (by structural equality) are dropped on construction and
    declaration order is kept. The empty theory is the vacuous theory.
    Immutable and hashable; equality compares the ordered formula tuple.
    """

    __slots__ = ("formulas", "_hash")

    def __init__(self, formulas: Iterable[Formula] = ()):
        object.__setattr__(self, "formulas", tuple(dict.fromkeys(formulas)))
        object.__setattr__(self, "_hash", hash(self.formulas))

    def __setattr__(self, name, value):
        raise AttributeError("Theory is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Theory):
            return NotImplemented
        return self._hash == other._hash and self.formulas == other.formulas

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "Theory{" + ", ".join(self.render()) + "}"

    @classmethod
    def of(cls, *formulas: Formula) -> "Theory":
        return cls(formulas)

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.formulas)

    def __len__(self) -> int:
        return len(self.formulas)

    def __contains__(self, f: object) -> bool:
        return f in self.formulas

    def atoms(self) -> FrozenSet[str]:
        result: FrozenSet[str] = frozenset()
        for f in self.formulas:
            result |= atoms_of(f)
        return result

    def union(self, other: Iterable[Formula]) -> "Theory":
        return Theory(self.formulas + tuple(other))

    def render(self) -> List[str]:
        return [render_formula(f) for f in self.formulas]


EMPTY_THEORY = Theory()


# === PARSING ===

class FormulaParser:
    """
    Recursive-descent parser for the formula grammar.

    Works on a shared TokenStream so the scenario parser can embed formulas
    in larger statements; parsing stops at the first token that cannot
    continue the formula. ``resolve`` is called for every atom reference and
    may raise (e.g. UnknownAtom, ForwardReference).
    """

    def __init__(self, stream: TokenStream, resolve=None):
        self.stream = stream
        self.resolve = resolve

    def formula(self) -> Formula:
        return self.implication()

    def implication(self) -> Formula:
        operands = [self.disjunction()]
        while self.stream.accept(SYMBOL, "->"):
            operands.append(self.disjunction())
        result = operands.pop()
        while operands:
            result = Implies(operands.pop(), result)
        return result

    def disjunction(self) -> Formula:
        result = self.conjunction()
        while self.stream.accept(SYMBOL, "|"):
            result = Or(result, self.conjunction())
        return result

    def conjunction(self) -> Formula:
        result = self.negation()
        while self.stream.accept(SYMBOL, "&"):
            result = And(result, self.negation())
        return result

    def negation(self) -> Formula:
        depth = 0
        while self.stream.accept(SYMBOL, "!"):
            depth += 1
        result = self.primary()
        for _ in range(depth):
            result = Not(result)
        return result

    def primary(self) -> Formula:
        stream = self.stream
        if stream.accept(SYMBOL, "("):
            inner = self.formula()
            stream.expect(SYMBOL, ")")
            return inner
        token = stream.token
        if token.kind == NAME:
            if token.text == "true":
                stream.advance()
                return TRUE
            if token.text == "false":
                stream.advance()
                return FALSE
            if _ATOM_RE.match(token.text):
                stream.advance()
                if self.resolve is not None:
                    self.resolve(token)
                return AtomRef(token.text)
            stream.fail("atom name (lowercase identifier)")
        stream.fail("formula")


def parse_formula(text: str, vocab: Vocabulary) -> Formula:
    """
    Parse a formula expression against a vocabulary.

    Args:
        text: expression such as ``"a & b -> c"``
        vocab: atoms (or atom names) the expression may reference

    Returns:
        The unique parse tree.

    Raises:
        ParseError: malformed text (with line/column and expected token)
        UnknownAtom: an identifier not in ``vocab``

    Example:
        parse_formula("a -> b -> c", ["a", "b", "c"])
        -> Implies(AtomRef('a'), Implies(AtomRef('b'), AtomRef('c')))
    """
    known = set(vocab_names(vocab))

    def resolve(token):
        if token.text not in known:
            raise UnknownAtom(token.text, line=token.line, column=token.column)

    stream = TokenStream(tokenize(text))
    result = FormulaParser(stream, resolve).formula()
    stream.expect(EOF, what="end of input")
    return result


# === RENDERING ===

_IMPLIES, _OR, _AND, _NOT, _PRIMARY = 1, 2, 3, 4, 5


def _precedence(f: Formula) -> int:
    if isinstance(f, Implies):
        return _IMPLIES
    if isinstance(f, Or):
        return _OR
    if isinstance(f, And):
        return _AND
    if isinstance(f, Not):
        return _NOT
    return _PRIMARY


def render_formula(f: Formula) -> str:
    """
    Canonical, minimally parenthesized text of ``f``.

    ``&`` and ``|`` are left-associative and ``->`` right-associative, so a
    right-nested ``&`` and a left-nested ``->`` keep their parentheses.

    Example:
        render_formula(Not(Or(a, b))) -> "!(a | b)"
    """
    texts: Dict[Formula, str] = {}

    def wrap(child: Formula, parens: bool) -> str:
        return f"({texts[child]})" if parens else texts[child]

    for node in _postorder(f):
        if isinstance(node, TrueConst):
            text = "true"
        elif isinstance(node, FalseConst):
            text = "false"
        elif isinstance(node, AtomRef):
            text = node.name
        elif isinstance(node, Not):
            text = "!" + wrap(node.operand, _precedence(node.operand) < _NOT)
        elif isinstance(node, Implies):
            left = wrap(node.left, _precedence(node.left) <= _IMPLIES)
            right = wrap(node.right, _precedence(node.right) < _IMPLIES)
            text = f"{left} -> {right}"
        elif isinstance(node, (And, Or)):
            own = _precedence(node)
            op = "&" if isinstance(node, And) else "|"
            left = wrap(node.left, _precedence(node.left) < own)
            right = wrap(node.right, _precedence(node.right) <= own)
            text = f"{left} {op} {right}"
        else:
            raise TypeError(f"not a formula: {node!r}")
        texts[node] = text
    return texts[f]


# === ENTAILMENT ENGINES ===

def _check_references(names: Tuple[str, ...], formulas: Iterable[Formula]) -> None:
    known = set(names)
    referenced = set()
    for f in formulas:
        referenced |= atoms_of(f)
    unknown = sorted(referenced - known)
    if unknown:
        raise UnknownAtom(unknown[0])


class EntailmentEngine(ABC):
    """A sound and complete decision procedure for propositional ⊢."""

    name = "abstract"

    @abstractmethod
    def countermodel(
        self, premises: Theory, conclusion: Formula, vocab: Vocabulary
    ) -> Optional[Dict[str, bool]]:
        """
        An assignment satisfying every premise but not ``conclusion``.

        Returns None when the entailment holds. The assignment covers the
        atoms referenced by the query.
        """

    def entails(self, premises: Theory, conclusion: Formula, vocab: Vocabulary) -> bool:
        return self.countermodel(premises, conclusion, vocab) is None

    def theory_entails(self, premises: Theory, conclusions: Theory, vocab: Vocabulary) -> bool:
        return all(self.entails(premises, c, vocab) for c in conclusions)

    def checker(self, vocab: Vocabulary) -> "TheoryChecker":
        return TheoryChecker(self, vocab)


@lru_cache(maxsize=None)
def _atom_mask(index: int, width: int) -> int:
    """Truth table of the ``index``-th of ``width`` atoms: bit k is bit ``index`` of k."""
    size = 1 << width
    half = 1 << index
    mask = ((1 << half) - 1) << half
    period = half << 1
    while period < size:
        mask |= mask << period
        period <<= 1
    return mask


class _TruthTable:
    """Bit-parallel evaluator over a fixed, ordered atom list."""

    def __init__(self, names: Tuple[str, ...]):
        self.names = names
        self.width = len(names)
        self.full = (1 << (1 << self.width)) - 1
        self._index = {name: i for i, name in enumerate(names)}
        self._cache: Dict[Formula, int] = {}

    def mask(self, f: Formula) -> int:
        cache = self._cache
        for node in _postorder(f, cache):
            if isinstance(node, TrueConst):
                result = self.full
            elif isinstance(node, FalseConst):
                result = 0
            elif isinstance(node, AtomRef):
                result = _atom_mask(self._index[node.name], self.width)
            elif isinstance(node, Not):
                result = self.full ^ cache[node.operand]
            elif isinstance(node, And):
                result = cache[node.left] & cache[node.right]
            elif isinstance(node, Or):
                result = cache[node.left] | cache[node.right]
            elif isinstance(node, Implies):
                result = (self.full ^ cache[node.left]) | cache[node.right]
            else:
                raise TypeError(f"not a formula: {node!r}")
            cache[node] = result
        return cache[f]

    def theory_mask(self, theory: Theory) -> int:
        result = self.full
        for f in theory:
            result &= self.mask(f)
        return result

    def assignment(self, row: int) -> Dict[str, bool]:
        return {name: bool((row >> i) & 1) for i, name in enumerate(self.names)}


class TruthTableEngine(EntailmentEngine):
    """Exhaustive entailment over all assignments of the referenced atoms."""

    name = "truth-table"

    def __init__(self, max_atoms: int = 24):
        self.max_atoms = max_atoms

    def _table_for(self, premises: Theory, conclusion: Formula, vocab: Vocabulary) -> _TruthTable:
        names = vocab_names(vocab)
        if len(names) > self.max_atoms:
            raise VocabularyTooLarge(len(names), self.max_atoms)
        _check_references(names, list(premises) + [conclusion])
        referenced = premises.atoms() | atoms_of(conclusion)
        return _TruthTable(tuple(n for n in names if n in referenced))

    def countermodel(self, premises, conclusion, vocab):
        table = self._table_for(premises, conclusion, vocab)
        witnesses = table.theory_mask(premises) & (table.full ^ table.mask(conclusion))
        if not witnesses:
            return None
        row = (witnesses & -witnesses).bit_length() - 1
        return table.assignment(row)

    def entails(self, premises, conclusion, vocab):
        table = self._table_for(premises, conclusion, vocab)
        return table.theory_mask(premises) & (table.full ^ table.mask(conclusion)) == 0

    def checker(self, vocab):
        names = vocab_names(vocab)
        if len(names) > self.max_atoms:
            raise VocabularyTooLarge(len(names), self.max_atoms)
        if len(names) <= _COMPILED_TABLE_ATOMS:
            return _CompiledChecker(self, names)
        return TheoryChecker(self, names)


class _CnfBuilder:
    """Tseitin encoding: every compound subformula gets a defining variable."""

    def __init__(self):
        self.clauses: List[FrozenSet[int]] = []
        self.atom_vars: Dict[str, int] = {}
        self._next = 1
        self._literals: Dict[Formula, int] = {}

    def _fresh(self) -> int:
        var = self._next
        self._next += 1
        return var

    def _define(self, *clauses):
        for clause in clauses:
            self.clauses.append(frozenset(clause))

    def literal(self, f: Formula) -> int:
        literals = self._literals
        for node in _postorder(f, literals):
            if isinstance(node, AtomRef):
                var = self.atom_vars.get(node.name)
                if var is None:
                    var = self.atom_vars[node.name] = self._fresh()
                lit = var
            elif isinstance(node, Not):
                lit = -literals[node.operand]
            elif isinstance(node, TrueConst):
                lit = self._fresh()
                self._define([lit])
            elif isinstance(node, FalseConst):
                lit = self._fresh()
                self._define([-lit])
            elif isinstance(node, _BINARY):
                a = literals[node.left]
                b = literals[node.right]
                lit = self._fresh()
                if isinstance(node, And):
                    self._define([-lit, a], [-lit, b], [lit, -a, -b])
                elif isinstance(node, Or):
                    self._define([-lit, a, b], [lit, -a], [lit, -b])
                else:
                    self._define([-lit, -a, b], [lit, a], [lit, -b])
            else:
                raise TypeError(f"not a formula: {node!r}")
            literals[node] = lit
        return literals[f]

    def assert_true(self, f: Formula):
        self._define([self.literal(f)])

    def assert_false(self, f: Formula):
        self._define([-self.literal(f)])


def _simplify(clauses: List[FrozenSet[int]], lit: int) -> Optional[List[FrozenSet[int]]]:
    """Clauses after setting ``lit`` true; None on an empty clause."""
    result = []
    for clause in clauses:
        if lit in clause:
            continue
        if -lit in clause:
            clause = clause - {-lit}
            if not clause:
                return None
        result.append(clause)
    return result


def _propagate(clauses: List[FrozenSet[int]], assignment: Dict[int, bool]) -> Optional[List[FrozenSet[int]]]:
    """Unit propagation; extends ``assignment`` in place, None on conflict."""
    while True:
        unit = next((c for c in clauses if len(c) == 1), None)
        if unit is None:
            return clauses
        (lit,) = unit
        clauses = _simplify(clauses, lit)
        if clauses is None:
            return None
        assignment[abs(lit)] = lit > 0


def _dpll(clauses: List[FrozenSet[int]], assignment: Dict[int, bool]) -> Optional[Dict[int, bool]]:
    # depth-first over branches; the positive phase of the branch literal is tried first
    pending = [(clauses, dict(assignment))]
    while pending:
        clauses, assignment = pending.pop()
        clauses = _propagate(clauses, assignment)
        if clauses is None:
            continue
        if not clauses:
            return assignment
        counts: Dict[int, int] = {}
        for clause in clauses:
            for lit in clause:
                counts[lit] = counts.get(lit, 0) + 1
        branch = max(sorted(counts), key=lambda lit: counts[lit])
        for lit in (-branch, branch):
            reduced = _simplify(clauses, lit)
            if reduced is not None:
                pending.append((reduced, {**assignment, abs(lit): lit > 0}))
    return None


class DpllEngine(EntailmentEngine):
    """Entailment by refuting premises ∧ ¬conclusion with DPLL."""

    name = "dpll"

    def countermodel(self, premises, conclusion, vocab):
        names = vocab_names(vocab)
        _check_references(names, list(premises) + [conclusion])
        cnf = _CnfBuilder()
        for f in premises:
            cnf.assert_true(f)
        cnf.assert_false(conclusion)
        model = _dpll(cnf.clauses, {})
        if model is None:
            return None
        referenced = premises.atoms() | atoms_of(conclusion)
        return {
            name: model.get(cnf.atom_vars[name], False)
            for name in names
            if name in referenced
        }


# Vocabularies up to this size are compiled into one table per universe
# (2**16 bits per formula); larger ones are evaluated per query.
_COMPILED_TABLE_ATOMS = 16


class TheoryChecker:
    """
    Entailment context bound to one vocabulary.

    Caches verdicts per (premises, conclusion) so repeated analyses over one
    universe issue each query once.
    """

    def __init__(self, engine: EntailmentEngine, vocab: Vocabulary):
        self.engine = engine
        self.vocab = vocab_names(vocab)
        self._verdicts: Dict[Tuple[Theory, Formula], bool] = {}

    def entails(self, premises: Theory, conclusion: Formula) -> bool:
        key = (premises, conclusion)
        verdict = self._verdicts.get(key)
        if verdict is None:
            verdict = self._verdicts[key] = self.engine.entails(premises, conclusion, self.vocab)
        return verdict

    def theory_entails(self, premises: Theory, conclusions: Theory) -> bool:
        return all(self.entails(premises, c) for c in conclusions)

    def cache_size(self) -> int:
        return len(self._verdicts)


class _CompiledChecker(TheoryChecker):
    """Truth-table checker with one table over the whole vocabulary."""

    def __init__(self, engine: TruthTableEngine, names: Tuple[str, ...]):
        super().__init__(engine, names)
        self._table = _TruthTable(names)
        self._theories: Dict[Theory, int] = {}

    def _theory_mask(self, theory: Theory) -> int:
        mask = self._theories.get(theory)
        if mask is None:
            _check_references(self.vocab, theory)
            mask = self._theories[theory] = self._table.theory_mask(theory)
        return mask

    def entails(self, premises, conclusion):
        _check_references(self.vocab, [conclusion])
        table = self._table
        return self._theory_mask(premises) & (table.full ^ table.mask(conclusion)) == 0

    def theory_entails(self, premises, conclusions):
        table = self._table
        return self._theory_mask(premises) & (table.full ^ self._theory_mask(conclusions)) == 0

    def cache_size(self) -> int:
        return len(self._theories)


def get_engine(settings=None) -> EntailmentEngine:
    """Engine selected by ``settings`` (AnalysisSettings); truth tables by default."""
    if settings is None or settings.engine == "truth-table":
        limit = 24 if settings is None else settings.max_oracle_atoms
        logger.debug("entailment engine: truth-table (max %d atoms)", limit)
        return TruthTableEngine(max_atoms=limit)
    if settings.engine == "dpll":
        logger.debug("entailment engine: dpll")
        return DpllEngine()
    raise ValueError(f"unknown entailment engine: {settings.engine}")


def entails(
    premises: Theory,
    conclusion: Formula,
    vocab: Vocabulary,
    engine: Optional[EntailmentEngine] = None,
) -> bool:
    """
    premises ⊢ conclusion under classical propositional semantics.

    Examples:
        {a & b} ⊢ a        -> True
        {a} ⊢ a | b        -> True
        {a -> b} ⊢ b       -> False  (a=false, b=false)
    """
    return (engine or get_engine()).entails(premises, conclusion, vocab)


def theory_entails(
    premises: Theory,
    conclusions: Theory,
    vocab: Vocabulary,
    engine: Optional[EntailmentEngine] = None,
) -> bool:
    """premises ⊢ c for every c in ``conclusions`` (true when there are none)."""
    return (engine or get_engine()).theory_entails(premises, conclusions, vocab)
