"""Actual causes, contingency sets, and responsibilities.

An endogenous fact ``t`` is an actual cause for a true boolean query when
some set of endogenous facts can be removed so that the query stays true
but removing ``t`` as well falsifies it.  The smallest such contingency
set fixes the responsibility ``1/(1+|gamma|)``; non-causes get 0.

Everything here runs through the hitting-set view: causes are the facts
on some edge of the endogenous support family, minimal contingency sets
are minimal hitting sets with ``t`` stripped out, and responsibility
questions become minimum-hitting-set questions, answered by the bounded
branching solver rather than by enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SemanticError
from .hitting import (
    endogenous_framework,
    enumerate_minimal_hitting_sets,
    minimum_hitting_set_containing,
)
from .queries import UnionQuery, eval_boolean
from .relational import Fact, Instance, fact_key

Responsibility = Fraction

ZERO = Fraction(0)


@dataclass(frozen=True)
class CauseReport:
    """Everything known about one fact's causal status for one query."""

    fact: Fact
    is_cause: bool
    responsibility: Fraction
    minimal_contingencies: tuple[frozenset[Fact], ...]


def _require_endogenous(d: Instance, t: Fact) -> Fact:
    resolved = d.find(t.pred, t.args)
    if resolved is None:
        raise SemanticError(f"{t} is not in the instance")
    if not resolved.is_endogenous:
        raise SemanticError(f"{t} is exogenous; only endogenous facts can be causes")
    return resolved


def actual_causes(d: Instance, q: UnionQuery) -> frozenset[Fact]:
    """All actual causes: the union of the endogenous support edges."""
    fw = endogenous_framework(d, q)
    return frozenset(f for edge in fw.edges for f in edge)


def contingency_sets(
    d: Instance, q: UnionQuery, t: Fact, cap: int | None = None
) -> tuple[frozenset[Fact], ...]:
    """All subset-minimal contingency sets for ``t``.

    These are exactly ``H - {t}`` for the minimal hitting sets ``H`` of the
    endogenous support family that contain ``t``; enumeration is capped.
    """
    t = _require_endogenous(d, t)
    fw = endogenous_framework(d, q)
    solution = enumerate_minimal_hitting_sets(fw, cap)
    picked = [s - {t} for s in solution.sets if t in s]
    return tuple(sorted(picked, key=lambda s: (len(s), sorted(fact_key(f) for f in s))))


def responsibility(d: Instance, q: UnionQuery, t: Fact) -> Fraction:
    """Exact responsibility of ``t``, without enumerating contingency sets."""
    t = _require_endogenous(d, t)
    found = minimum_hitting_set_containing(endogenous_framework(d, q), t)
    if found is None:
        return ZERO
    size, _ = found
    return Fraction(1, size)


def rdp_decide(d: Instance, q: UnionQuery, t: Fact, v: Fraction) -> bool:
    """Decide whether ``t``'s responsibility strictly exceeds ``v``.

    ``v`` must be 0 or 1/k.  For positive thresholds the decision runs in
    budgeted mode with ``k`` as the parameter, never computing the exact
    responsibility; facts that are absent or exogenous simply fail the
    membership test.
    """
    v = Fraction(v)
    if v < 0 or (v > 0 and v.numerator != 1):
        raise SemanticError(f"threshold must be 0 or 1/k, got {v}")
    if not eval_boolean(d, q):
        return False
    resolved = d.find(t.pred, t.args)
    if resolved is None or not resolved.is_endogenous:
        return False
    fw = endogenous_framework(d, q)
    if v == 0:
        return any(resolved in edge for edge in fw.edges)
    return minimum_hitting_set_containing(fw, resolved, budget=v.denominator)


def most_responsible_causes(
    d: Instance, q: UnionQuery
) -> tuple[frozenset[Fact], Fraction]:
    """The causes of maximal responsibility, with the shared value."""
    fw = endogenous_framework(d, q)
    causes = frozenset(f for edge in fw.edges for f in edge)
    if not causes:
        return frozenset(), ZERO
    best_size, _ = minimum_hitting_set_containing(fw)
    top = frozenset(
        t
        for t in causes
        if minimum_hitting_set_containing(fw, t)[0] == best_size
    )
    return top, Fraction(1, best_size)


def check_minimal_contingency(
    d: Instance, q: UnionQuery, t: Fact, gamma: frozenset[Fact]
) -> bool:
    """Decide membership of ``gamma`` among ``t``'s minimal contingency sets.

    No enumeration: this is the polynomial-time repair check in disguise.
    ``gamma`` is a minimal contingency set for ``t`` exactly when removing
    ``gamma`` and ``t`` yields a maximal consistent sub-instance, i.e. the
    query is false afterwards and putting any removed fact back revives it.
    """
    t = _require_endogenous(d, t)
    gamma = frozenset(_require_endogenous(d, g) for g in gamma)
    if t in gamma:
        raise SemanticError(f"{t} cannot belong to its own contingency set")
    removed = gamma | {t}
    if eval_boolean(d.without(removed), q):
        return False
    return all(
        eval_boolean(d.without(removed - {f}), q) for f in removed
    )


def explain(d: Instance, q: UnionQuery, t: Fact, cap: int | None = None) -> CauseReport:
    """Assemble the full per-fact verdict."""
    resolved = _require_endogenous(d, t)
    contingencies = contingency_sets(d, q, resolved, cap)
    rho = responsibility(d, q, resolved)
    return CauseReport(resolved, bool(contingencies), rho, contingencies)
