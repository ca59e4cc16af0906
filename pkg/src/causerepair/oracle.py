"""Brute-force reference implementations, for tests and cross-validation.

Everything here applies the definitions literally by scanning subsets.
The only machinery shared with the optimized modules is query evaluation;
no hitting-set code, no minimization tricks.  Each scan first tabulates
the query on every relevant subset (pure repeated evaluation, nothing
clever), then reads the definitions off the table.  Bounds guard against
accidental exponential blowups and are configuration, not constants.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .errors import BoundExceededError
from .queries import DenialConstraintSet, UnionQuery, eval_boolean, violation_view
from .relational import Fact, Instance, fact_key

DEFAULT_BOUND = 14


def _deletion_truth_table(d: Instance, q: UnionQuery, deletable) -> dict:
    """Truth of ``q`` on ``d`` minus every subset of ``deletable``."""
    table = {}
    for size in range(len(deletable) + 1):
        for combo in combinations(deletable, size):
            removed = frozenset(combo)
            table[removed] = eval_boolean(d.facts - removed, q)
    return table


def oracle_causes_and_responsibility(
    d: Instance, q: UnionQuery, bound: int = DEFAULT_BOUND
) -> dict[Fact, Fraction]:
    """Responsibility of every endogenous fact, by scanning contingency sets.

    For each fact the candidate contingency sets are scanned smallest
    first; the first set whose removal keeps the query true while the
    additional removal of the fact falsifies it settles the value.
    """
    endo = sorted(d.endogenous, key=fact_key)
    if len(endo) > bound:
        raise BoundExceededError(f"{len(endo)} endogenous facts exceed bound {bound}")
    truth = _deletion_truth_table(d, q, endo)
    out: dict[Fact, Fraction] = {}
    for t in endo:
        others = [f for f in endo if f != t]
        value = Fraction(0)
        for size in range(len(others) + 1):
            found = False
            for combo in combinations(others, size):
                gamma = frozenset(combo)
                if truth[gamma] and not truth[gamma | {t}]:
                    found = True
                    break
            if found:
                value = Fraction(1, size + 1)
                break
        out[t] = value
    return out


def oracle_repairs(
    d: Instance,
    sigma: DenialConstraintSet,
    semantics: str = "s",
    bound: int = DEFAULT_BOUND,
) -> tuple[frozenset[Fact], ...]:
    """Repairs by filtering all subsets for consistency and maximality.

    Semantics 's' keeps the maximal consistent subsets, 'c' the maximum-
    cardinality ones, and 'endo' the subsets preserving every exogenous
    fact that are maximal among those.
    """
    facts = sorted(d.facts, key=fact_key)
    if len(facts) > bound:
        raise BoundExceededError(f"{len(facts)} facts exceed bound {bound}")
    if sigma.constraints:
        violated = _deletion_truth_table(d, violation_view(sigma), facts)
    else:
        violated = {
            frozenset(c): False
            for size in range(len(facts) + 1)
            for c in combinations(facts, size)
        }
    required = d.exogenous if semantics == "endo" else frozenset()
    consistent: list[frozenset[Fact]] = []
    for removed, bad in violated.items():
        if bad:
            continue
        kept = d.facts - removed
        if required <= kept:
            consistent.append(kept)
    if semantics == "c":
        biggest = max(len(s) for s in consistent)
        chosen = [s for s in consistent if len(s) == biggest]
    else:
        chosen = [
            s
            for s in consistent
            if all(f in s or violated[d.facts - s - {f}] for f in facts)
        ]
    return tuple(sorted(chosen, key=lambda s: sorted(fact_key(f) for f in s)))


def oracle_hitting(
    h, bound: int = 20
) -> tuple[tuple[frozenset, ...], int | None, dict]:
    """Exhaustive transversal scan of a hitting framework.

    Returns the minimal hitting sets, the global minimum size (None when
    no hitting set exists), and for every universe element the smallest
    minimal hitting set containing it (None when there is none).
    """
    universe = sorted(h.universe, key=fact_key)
    if len(universe) > bound:
        raise BoundExceededError(f"universe of {len(universe)} exceeds bound {bound}")
    edges = list(h.edges)

    def hits(subset: frozenset) -> bool:
        return all(e & subset for e in edges)

    minimal: list[frozenset] = []
    for size in range(len(universe) + 1):
        for subset in combinations(universe, size):
            s = frozenset(subset)
            if hits(s) and all(not hits(s - {v}) for v in s):
                minimal.append(s)
    global_min = min((len(s) for s in minimal), default=None)
    per_element = {
        u: min((len(s) for s in minimal if u in s), default=None) for u in universe
    }
    ordered = tuple(sorted(minimal, key=lambda s: sorted(fact_key(f) for f in s)))
    return ordered, global_min, per_element
