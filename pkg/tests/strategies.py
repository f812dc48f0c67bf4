"""
Hypothesis strategies and small builders for universes and formulas.
"""

from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from hypothesis import strategies as st

from hourglass.logic import (
    FALSE,
    TRUE,
    And,
    Atom,
    AtomRef,
    Formula,
    Implies,
    Not,
    Or,
    Theory,
    atoms_of,
    evaluate,
    parse_formula,
)
from hourglass.programs import Program, ProductionRule
from hourglass.specs import Specification
from hourglass.universe import Universe

ATOM_POOL = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "m"]


def build_universe(
    atoms: Sequence[str],
    specs: Dict[str, List[str]],
    programs: Optional[Dict[str, List[Tuple[str, str]]]] = None,
    necessary: Sequence[str] = (),
    values: Optional[Dict[str, float]] = None,
    name: str = "universe",
) -> Universe:
    """Universe from formula text, e.g. specs={"S": ["a", "a -> b"]}."""
    return Universe(
        name=name,
        vocab=tuple(Atom(name=a, description=None) for a in atoms),
        specs=tuple(
            Specification(name=s, theory=Theory(parse_formula(f, atoms) for f in fs), annotations={})
            for s, fs in specs.items()
        ),
        programs=tuple(
            Program(
                name=p,
                rules=tuple(
                    ProductionRule(guard=parse_formula(g, atoms), gives=parse_formula(x, atoms))
                    for g, x in rules
                ),
            )
            for p, rules in (programs or {}).items()
        ),
        necessary=tuple(necessary),
        values=dict(values or {}),
    )


def oracle_entails(premises: Theory, conclusion: Formula) -> bool:
    """Assignment-by-assignment check over the atoms the query mentions."""
    names = sorted(premises.atoms() | atoms_of(conclusion))
    for bits in product([False, True], repeat=len(names)):
        assignment = dict(zip(names, bits))
        if all(evaluate(f, assignment) for f in premises) and not evaluate(conclusion, assignment):
            return False
    return True


# === FORMULAS ===

def formulas(atoms: Sequence[str], depth: int) -> st.SearchStrategy:
    """Formulas over ``atoms`` of depth at most ``depth``."""
    atom = st.sampled_from(list(atoms)).map(AtomRef)
    leaf = st.one_of(atom, atom, atom, st.sampled_from([TRUE, FALSE]))
    if depth == 0:
        return leaf
    sub = formulas(atoms, depth - 1)
    return st.one_of(
        leaf,
        sub.map(Not),
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Implies, sub, sub),
    )


def theories(atoms: Sequence[str], depth: int, max_size: int) -> st.SearchStrategy:
    return st.lists(formulas(atoms, depth), max_size=max_size).map(Theory)


@st.composite
def entailment_queries(draw, max_atoms: int = 12, depth: int = 3, max_premises: int = 4):
    n = draw(st.integers(min_value=1, max_value=max_atoms))
    atoms = ATOM_POOL[:n]
    premises = draw(theories(atoms, depth, max_premises))
    conclusion = draw(formulas(atoms, depth))
    return atoms, premises, conclusion


# === UNIVERSES ===

_TEXT = st.text(alphabet="abc xyz\"\\\n\r\t", max_size=12)


@st.composite
def universes(
    draw,
    max_atoms: int = 10,
    max_specs: int = 30,
    max_programs: int = 12,
    depth: int = 4,
    max_formulas: int = 3,
    max_rules: int = 3,
    annotated: bool = False,
):
    n = draw(st.integers(min_value=1, max_value=max_atoms))
    atoms = ATOM_POOL[:n]
    descriptions = [draw(st.none() | _TEXT) if annotated else None for _ in atoms]
    vocab = tuple(Atom(name=a, description=d) for a, d in zip(atoms, descriptions))

    spec_count = draw(st.integers(min_value=0, max_value=max_specs))
    specs = []
    for i in range(spec_count):
        notes = {}
        if annotated:
            notes = draw(st.dictionaries(st.sampled_from(["notes", "simplicity"]), _TEXT, max_size=2))
        specs.append(
            Specification(
                name=f"S{i}",
                theory=draw(theories(atoms, depth, max_formulas)),
                annotations=notes,
            )
        )

    program_count = draw(st.integers(min_value=0, max_value=max_programs))
    rule = st.builds(
        lambda g, x: ProductionRule(guard=g, gives=x),
        formulas(atoms, depth),
        formulas(atoms, depth),
    )
    programs = tuple(
        Program(name=f"P{i}", rules=tuple(draw(st.lists(rule, max_size=max_rules))))
        for i in range(program_count)
    )

    names = [s.name for s in specs]
    necessary: Tuple[str, ...] = ()
    values: Dict[str, float] = {}
    if names:
        necessary = tuple(draw(st.lists(st.sampled_from(names), unique=True, max_size=4)))
        weighted = draw(st.lists(st.sampled_from(names), unique=True, max_size=4))
        values = {name: draw(st.integers(min_value=0, max_value=20)) / 4 for name in weighted}

    return Universe(
        name="random",
        vocab=vocab,
        specs=tuple(specs),
        programs=programs,
        necessary=necessary,
        values=values,
    )
