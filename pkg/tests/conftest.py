"""Shared fixture loading and the randomized instance generator."""

import random
from pathlib import Path

import pytest

from causerepair.parsing import (
    constraint_set,
    parse_instance,
    single_query,
)
from causerepair.queries import Atom, ConjunctiveQuery, UnionQuery, Var
from causerepair.relational import ENDOGENOUS, EXOGENOUS, Fact, Instance

DATA = Path(__file__).parent / "data"


def data_path(name: str) -> Path:
    return DATA / name


def load_instance(name: str) -> Instance:
    return parse_instance(data_path(name).read_text())


def load_query(name: str) -> UnionQuery:
    return single_query(data_path(name).read_text())


def load_constraints(name: str):
    return constraint_set(data_path(name).read_text())


@pytest.fixture
def chain_instance() -> Instance:
    return load_instance("ex1.facts")


@pytest.fixture
def chain_query() -> UnionQuery:
    return load_query("ex1.dlq")


# ---------------------------------------------------------------------------
# Random instances and queries for the oracle-equivalence suites

_PREDS = (("P", 1), ("S", 1), ("R", 2), ("Q", 2))
_CONSTANTS = ("a", "b", "c", "d")
_VARS = ("X", "Y", "Z")


def random_instance(rng: random.Random, max_facts: int = 8) -> Instance:
    n = rng.randint(1, max_facts)
    facts = set()
    while len(facts) < n:
        pred, arity = rng.choice(_PREDS)
        args = tuple(rng.choice(_CONSTANTS) for _ in range(arity))
        tag = ENDOGENOUS if rng.random() < 0.7 else EXOGENOUS
        facts.add(Fact(pred, args, tag))
    # identity ignores tags, so rebuild through a dict to drop tag clashes
    by_atom = {}
    for f in facts:
        by_atom[(f.pred, f.args)] = f
    return Instance(frozenset(by_atom.values()))


def random_boolean_query(rng: random.Random) -> UnionQuery:
    disjuncts = []
    for _ in range(rng.randint(1, 2)):
        atoms = []
        for _ in range(rng.randint(1, 3)):
            pred, arity = rng.choice(_PREDS)
            terms = tuple(
                Var(rng.choice(_VARS)) if rng.random() < 0.65 else rng.choice(_CONSTANTS)
                for _ in range(arity)
            )
            atoms.append(Atom(pred, terms))
        variables = sorted({t.name for a in atoms for t in a.terms if isinstance(t, Var)})
        inequalities = ()
        if len(variables) >= 2 and rng.random() < 0.25:
            left, right = rng.sample(variables, 2)
            inequalities = ((Var(left), Var(right)),)
        disjuncts.append(ConjunctiveQuery(tuple(atoms), inequalities, ()))
    return UnionQuery(tuple(disjuncts))
