"""Repairs for denial constraints, and the cause/repair bridges.

A repair keeps a maximal (subset semantics) or maximum-cardinality
(cardinality semantics) consistent portion of the instance; for denial
constraints both arise purely by deletion, so deletion sets are hitting
sets of the minimal violation witnesses and all enumeration goes through
the one hitting-set engine.

The bridges run in both directions: deletion sets of repairs avoiding a
fact recover that fact's causal status and responsibility, and repairs can
be reassembled from causes paired with their minimal contingency sets.
Consistent-answer checks use the cause-based criterion directly, with no
repair enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import causality
from .errors import SemanticError
from .hitting import (
    enumerate_minimal_hitting_sets,
    full_framework,
    minimum_hitting_set_containing,
)
from .queries import (
    DenialConstraintSet,
    UnionQuery,
    dc_of_query,
    is_consistent,
    violation_view,
)
from .relational import Fact, Instance, fact_key

SUBSET = "s"
CARDINALITY = "c"
GLOBAL_OPTIMAL = "go"
ENDOGENOUS_SEM = "endo"
NULL_SEM = "null"


@dataclass(frozen=True)
class Repair:
    kept: Instance
    removed: frozenset[Fact]
    semantics: str


def _sorted_repairs(repairs_set: Iterable[Repair]) -> tuple[Repair, ...]:
    return tuple(
        sorted(repairs_set, key=lambda r: sorted(fact_key(f) for f in r.removed))
    )


def _deletion_sets(d: Instance, sigma: DenialConstraintSet, cap):
    """Minimal deletion sets restoring consistency (∅ family if consistent)."""
    if is_consistent(d, sigma):
        return [frozenset()]
    fw = full_framework(d, violation_view(sigma))
    return list(enumerate_minimal_hitting_sets(fw, cap).sets)


def repairs(
    d: Instance,
    sigma: DenialConstraintSet,
    semantics: str = SUBSET,
    cap: int | None = None,
) -> tuple[Repair, ...]:
    """All repairs under subset ('s') or cardinality ('c') semantics."""
    if semantics not in (SUBSET, CARDINALITY):
        raise SemanticError(f"unknown repair semantics {semantics!r}")
    deletions = _deletion_sets(d, sigma, cap)
    if semantics == CARDINALITY:
        smallest = min(len(s) for s in deletions)
        deletions = [s for s in deletions if len(s) == smallest]
    return _sorted_repairs(
        Repair(d.without(s), s, semantics) for s in deletions
    )


def is_repair(
    d: Instance, sigma: DenialConstraintSet, candidate: Instance, semantics: str
) -> bool:
    """Repair checking without enumeration.

    Subset semantics is the polynomial check: the candidate is consistent
    and restoring any single deleted fact breaks consistency (violations
    are monotone, so single-fact checks suffice for maximality).
    Cardinality semantics additionally compares the deletion count with
    the global minimum from the branching solver.
    """
    if not candidate.facts <= d.facts:
        raise SemanticError("candidate repair is not a sub-instance")
    if not is_consistent(candidate, sigma):
        return False
    removed = d.facts - candidate.facts
    if semantics == SUBSET:
        return all(
            not is_consistent(Instance(candidate.facts | {f}), sigma) for f in removed
        )
    if semantics == CARDINALITY:
        if is_consistent(d, sigma):
            return not removed
        fw = full_framework(d, violation_view(sigma))
        best_size, _ = minimum_hitting_set_containing(fw)
        return len(removed) == best_size
    raise SemanticError(f"unknown repair semantics {semantics!r}")


def causes_via_repairs(
    d: Instance, q: UnionQuery, t: Fact, cap: int | None = None
) -> tuple[tuple[frozenset[Fact], ...], tuple[frozenset[Fact], ...]]:
    """Deletion-set families for repairs that drop ``t`` endogenously.

    Returns the subset-repair family and the cardinality-repair family.
    ``t`` is an actual cause iff the first is non-empty, a most
    responsible cause iff the second is, and its responsibility is the
    inverse of the smallest member of the first.
    """
    resolved = d.find(t.pred, t.args)
    if resolved is None:
        raise SemanticError(f"{t} is not in the instance")
    if not resolved.is_endogenous:
        raise SemanticError(f"{t} is exogenous; only endogenous facts can be causes")
    sigma = dc_of_query(q)
    deletions = _deletion_sets(d, sigma, cap)
    smallest = min(len(s) for s in deletions)
    endo = d.endogenous

    def keep(family):
        picked = [s for s in family if resolved in s and s <= endo]
        return tuple(
            sorted(picked, key=lambda s: (len(s), sorted(fact_key(f) for f in s)))
        )

    diff_s = keep(deletions)
    diff_c = keep([s for s in deletions if len(s) == smallest])
    return diff_s, diff_c


def repair_responsibility(diff_s: tuple[frozenset[Fact], ...]) -> Fraction:
    """Responsibility read off a subset-repair difference family."""
    if not diff_s:
        return Fraction(0)
    return Fraction(1, min(len(s) for s in diff_s))


def repairs_via_causes(
    d: Instance,
    sigma: DenialConstraintSet,
    semantics: str = SUBSET,
    cap: int | None = None,
) -> tuple[Repair, ...]:
    """Reassemble repairs from causes and their minimal contingency sets.

    Requires a fully endogenous instance.  Distinct cause/contingency
    pairs may collapse to one repair; the result is deduplicated and must
    coincide with ``repairs`` on the same inputs.
    """
    if d.exogenous:
        raise SemanticError("repairs-from-causes requires all facts endogenous")
    if semantics not in (SUBSET, CARDINALITY):
        raise SemanticError(f"unknown repair semantics {semantics!r}")
    if is_consistent(d, sigma):
        return (Repair(d, frozenset(), semantics),)
    view = violation_view(sigma)
    assembled: dict[frozenset[Fact], Repair] = {}
    if semantics == SUBSET:
        for t in causality.actual_causes(d, view):
            for gamma in causality.contingency_sets(d, view, t, cap):
                removed = gamma | {t}
                assembled[removed] = Repair(d.without(removed), removed, semantics)
    else:
        top, value = causality.most_responsible_causes(d, view)
        target = int(1 / value)
        for t in top:
            for gamma in causality.contingency_sets(d, view, t, cap):
                if len(gamma) + 1 == target:
                    removed = gamma | {t}
                    assembled[removed] = Repair(d.without(removed), removed, semantics)
    return _sorted_repairs(assembled.values())


def consistent_answer(
    d: Instance,
    sigma: DenialConstraintSet,
    ground_atoms: Iterable[Fact],
    semantics: str = SUBSET,
) -> bool:
    """Certainty of a conjunction of ground atoms across all repairs.

    Uses the cause-side criterion: under subset semantics an atom is in
    every repair iff it is not an actual cause for the violation view;
    under cardinality semantics, iff it is not a most responsible cause.
    """
    if d.exogenous:
        raise SemanticError("consistent answers assume all facts endogenous")
    atoms = list(ground_atoms)
    for a in atoms:
        if a.pred not in d.schema:
            raise SemanticError(f"predicate {a.pred} is not in the schema")
    view = violation_view(sigma)
    if semantics == SUBSET:
        excluded = causality.actual_causes(d, view)
    elif semantics == CARDINALITY:
        excluded, _ = causality.most_responsible_causes(d, view)
    else:
        raise SemanticError(f"unknown repair semantics {semantics!r}")
    for a in atoms:
        resolved = d.find(a.pred, a.args)
        if resolved is None or resolved in excluded:
            return False
    return True
