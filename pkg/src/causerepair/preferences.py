"""Prioritized, endogenous, and null-based repairs, with their causes.

Three refinements of plain deletion repairs live here:

* Global-optimal repairs: a priority relation on mutually conflicting
  facts rules out any subset repair that some other consistent
  sub-instance improves tuple-by-tuple.  Preferred causes invert a
  priority on jointly-contributing facts into a repair priority and read
  causes off the surviving repairs.

* Endogenous repairs delete endogenous facts only.  They are computed
  directly from the endogenous restrictions of the violation witnesses,
  and ``endogenous_encoding`` exposes the equivalent formulation through
  priorities: a guard fact is added to every constraint and exogenous
  facts get priority over conflicting endogenous ones, after which the
  global-optimal repairs are exactly the endogenous ones (plus the guard
  deletion itself).

* Null-based repairs replace attribute values by the non-joining null
  instead of deleting tuples.  A violation witness dies exactly when one
  of its constrained positions (a join variable, an inequality variable,
  or a constant match) is nulled, so minimal change sets are once more
  minimal hitting sets, over attribute positions instead of facts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import SemanticError
from .hitting import (
    HittingFramework,
    edge_family,
    enumerate_minimal_hitting_sets,
    minimal_sets,
    support_sets,
)
from .queries import (
    Atom,
    ConjunctiveQuery,
    DenialConstraint,
    DenialConstraintSet,
    UnionQuery,
    Var,
    dc_of_query,
    is_consistent,
    iter_matches,
    violation_view,
)
from .relational import ENDOGENOUS, NULL, Fact, Instance, fact_key
from .repairs import (
    ENDOGENOUS_SEM,
    GLOBAL_OPTIMAL,
    NULL_SEM,
    Repair,
    SUBSET,
    repairs,
)


@dataclass(frozen=True)
class PriorityRelation:
    """``t > t'`` pairs over mutually conflicting facts (used for repairs)."""

    pairs: frozenset[tuple[Fact, Fact]]

    def prefers(self, t: Fact, weaker: Fact) -> bool:
        return (t, weaker) in self.pairs


@dataclass(frozen=True)
class CausalPriorityRelation:
    """``t > t'`` pairs over jointly-contributing facts (used for causes)."""

    pairs: frozenset[tuple[Fact, Fact]]

    def inverted(self) -> PriorityRelation:
        return PriorityRelation(frozenset((b, a) for a, b in self.pairs))


@dataclass(frozen=True)
class AttrChange:
    """One attribute position nulled in a tuple, rendered ``R[id;pos]``."""

    pred: str
    fact_id: int
    position: int  # 1-based

    def __str__(self) -> str:
        return f"{self.pred}[{self.fact_id};{self.position}]"


def attr_key(c: AttrChange) -> tuple:
    return (c.pred, c.fact_id, c.position)


@dataclass(frozen=True)
class NullRepair:
    result: Instance
    diff: frozenset[AttrChange]


# ---------------------------------------------------------------------------
# Priority validation


def _resolve_pairs(d: Instance, pairs: Iterable[tuple[Fact, Fact]]):
    resolved = []
    for strong, weak in pairs:
        s = d.find(strong.pred, strong.args)
        w = d.find(weak.pred, weak.args)
        if s is None or w is None:
            missing = strong if s is None else weak
            raise SemanticError(f"priority mentions unknown fact {missing}")
        resolved.append((s, w))
    return resolved


def _check_acyclic(pairs) -> None:
    adjacency: dict[Fact, list[Fact]] = {}
    for a, b in pairs:
        adjacency.setdefault(a, []).append(b)
    state: dict[Fact, int] = {}

    def visit(node):
        state[node] = 1
        for nxt in adjacency.get(node, ()):
            mark = state.get(nxt)
            if mark == 1:
                raise SemanticError("priority relation contains a cycle")
            if mark is None:
                visit(nxt)
        state[node] = 2

    for node in adjacency:
        if node not in state:
            visit(node)


def _cooccurring(d: Instance, view: UnionQuery) -> set[frozenset[Fact]]:
    return {frozenset(e) for e in support_sets(d, view)}


def validate_priority(
    d: Instance, sigma: DenialConstraintSet, pairs: Iterable[tuple[Fact, Fact]]
) -> PriorityRelation:
    """Build a repair priority: acyclic, and every pair mutually conflicting."""
    resolved = _resolve_pairs(d, pairs)
    _check_acyclic(resolved)
    conflicts = _cooccurring(d, violation_view(sigma))
    for a, b in resolved:
        if a == b or not any(a in c and b in c for c in conflicts):
            raise SemanticError(f"{a} and {b} are not mutually conflicting")
    return PriorityRelation(frozenset(resolved))


def validate_causal_priority(
    d: Instance, q: UnionQuery, pairs: Iterable[tuple[Fact, Fact]]
) -> CausalPriorityRelation:
    """Build a causal priority: acyclic, every pair jointly contributing."""
    resolved = _resolve_pairs(d, pairs)
    _check_acyclic(resolved)
    together = _cooccurring(d, q)
    for a, b in resolved:
        if a == b or not any(a in c and b in c for c in together):
            raise SemanticError(f"{a} and {b} are not jointly contributing")
    return CausalPriorityRelation(frozenset(resolved))


# ---------------------------------------------------------------------------
# Global-optimal repairs and preferred causes


def _improves(candidate: Repair, over: Repair, priority: PriorityRelation) -> bool:
    """Global improvement: every tuple lost when moving to ``candidate`` is
    outweighed by some higher-priority tuple gained."""
    if candidate.removed == over.removed:
        return False
    lost = over.kept.facts - candidate.kept.facts
    gained = candidate.kept.facts - over.kept.facts
    return all(any(priority.prefers(g, t) for g in gained) for t in lost)


def global_optimal_repairs(
    d: Instance,
    sigma: DenialConstraintSet,
    priority: PriorityRelation,
    cap: int | None = None,
) -> tuple[Repair, ...]:
    """Subset repairs without a global improvement.

    Improvers are searched among the subset repairs themselves: a
    consistent improving sub-instance always extends to a subset repair
    that still improves, so nothing further needs scanning.
    """
    base = repairs(d, sigma, SUBSET, cap)
    out = [
        Repair(r.kept, r.removed, GLOBAL_OPTIMAL)
        for r in base
        if not any(_improves(other, r, priority) for other in base)
    ]
    return tuple(out)


def preferred_causes(
    d: Instance,
    q: UnionQuery,
    pc: CausalPriorityRelation,
    cap: int | None = None,
) -> tuple[tuple[Fact, Fraction], ...]:
    """Causes surviving the priority, with their restricted responsibilities.

    The causal priority is inverted into a repair priority (preferring a
    fact as a cause means preferring to delete it), global-optimal repairs
    are computed against the query's constraints, and a fact is a
    preferred cause when some such repair removes it within an endogenous
    deletion set.  Responsibilities minimize over those deletion sets only.
    """
    inverted = pc.inverted()
    go = global_optimal_repairs(d, dc_of_query(q), inverted, cap)
    endo = d.endogenous
    scores: dict[Fact, int] = {}
    for r in go:
        if not r.removed or not r.removed <= endo:
            continue
        for t in r.removed:
            size = len(r.removed)
            if t not in scores or size < scores[t]:
                scores[t] = size
    return tuple(
        (t, Fraction(1, scores[t])) for t in sorted(scores, key=fact_key)
    )


def check_preference_contingency(
    d: Instance,
    q: UnionQuery,
    pc: CausalPriorityRelation,
    t: Fact,
    gamma: frozenset[Fact],
    cap: int | None = None,
) -> bool:
    """Membership test for preference-restricted minimal contingency sets.

    Checked exhaustively against the global-optimal repairs; unlike the
    unrestricted variant there is no polynomial shortcut here.
    """
    resolved = d.find(t.pred, t.args)
    if resolved is None:
        raise SemanticError(f"{t} is not in the instance")
    gamma_resolved = set()
    for g in gamma:
        rg = d.find(g.pred, g.args)
        if rg is None:
            raise SemanticError(f"{g} is not in the instance")
        gamma_resolved.add(rg)
    target = frozenset(gamma_resolved) | {resolved}
    inverted = pc.inverted()
    go = global_optimal_repairs(d, dc_of_query(q), inverted, cap)
    endo = d.endogenous
    return any(
        r.removed == target and resolved in r.removed and r.removed <= endo
        for r in go
    )


# ---------------------------------------------------------------------------
# Endogenous repairs


def endogenous_repairs(
    d: Instance, sigma: DenialConstraintSet, cap: int | None = None
) -> tuple[Repair, ...]:
    """Maximal consistent sub-instances that keep every exogenous fact.

    Violation witnesses must each be hit inside the endogenous part; a
    witness made purely of exogenous facts means no endogenous repair
    exists, unlike plain subset repairs which always do.
    """
    if is_consistent(d, sigma):
        return (Repair(d, frozenset(), ENDOGENOUS_SEM),)
    full = support_sets(d, violation_view(sigma))
    restricted = [e & d.endogenous for e in full]
    if any(not e for e in restricted):
        return ()
    fw = HittingFramework(d.endogenous, edge_family(minimal_sets(restricted)))
    solution = enumerate_minimal_hitting_sets(fw, cap)
    return tuple(
        Repair(d.without(s), s, ENDOGENOUS_SEM) for s in solution.sets
    )


def endogenous_encoding(
    d: Instance, sigma: DenialConstraintSet
) -> tuple[Instance, DenialConstraintSet, PriorityRelation]:
    """Priority formulation of endogenous repairs.

    Adds an endogenous guard fact, conjoins it to every constraint, and
    prefers each exogenous fact over every conflicting endogenous one.
    The global-optimal repairs of the transformed problem are then the
    endogenous repairs (each still holding the guard) together with the
    guard-only deletion.
    """
    guard_pred = "guard"
    while guard_pred in d.schema:
        guard_pred += "_"
    guard = Fact(guard_pred, ("on",), ENDOGENOUS)
    extended = Instance(d.facts | {guard})
    guarded = DenialConstraintSet(
        tuple(
            DenialConstraint(
                ConjunctiveQuery(
                    (Atom(guard_pred, ("on",)),) + dc.body.atoms,
                    dc.body.inequalities,
                )
            )
            for dc in sigma
        )
    )
    conflicts = _cooccurring(extended, violation_view(guarded))
    pairs = set()
    for c in conflicts:
        for x in c:
            if x.is_endogenous:
                continue
            for e in c:
                if e.is_endogenous:
                    pairs.add((x, e))
    return extended, guarded, PriorityRelation(frozenset(pairs))


# ---------------------------------------------------------------------------
# Null-based repairs and causes


def _constrained_positions(cq: ConjunctiveQuery) -> list[set[int]]:
    """Per atom, the argument positions whose value the match depends on.

    A position matters when it holds a constant, a variable with more
    than one occurrence (a join), or a variable tested by an inequality;
    nulling any such position kills the match, nulling others does not.
    """
    counts: dict[str, int] = {}
    for atom in cq.atoms:
        for term in atom.terms:
            if isinstance(term, Var):
                counts[term.name] = counts.get(term.name, 0) + 1
    tested = {
        t.name for pair in cq.inequalities for t in pair if isinstance(t, Var)
    }
    out = []
    for atom in cq.atoms:
        positions = set()
        for i, term in enumerate(atom.terms):
            if not isinstance(term, Var):
                positions.add(i)
            elif counts[term.name] > 1 or term.name in tested:
                positions.add(i)
        out.append(positions)
    return out


def _kill_sets(d: Instance, sigma: DenialConstraintSet) -> list[frozenset[AttrChange]]:
    """For every violation witness, the positions whose nulling destroys it."""
    kill = []
    for dc in sigma:
        cq = dc.body
        constrained = _constrained_positions(cq)
        for used, _ in iter_matches(d.facts, cq):
            positions = set()
            for atom_index, f in enumerate(used):
                for i in constrained[atom_index]:
                    positions.add(AttrChange(f.pred, f.fact_id, i + 1))
            kill.append(frozenset(positions))
    return kill


def _apply_changes(d: Instance, changes: frozenset[AttrChange]) -> Instance:
    by_id: dict[int, set[int]] = {}
    for c in changes:
        by_id.setdefault(c.fact_id, set()).add(c.position - 1)
    updated = []
    for f in d.facts:
        hit = by_id.get(f.fact_id)
        if hit:
            args = tuple(NULL if i in hit else a for i, a in enumerate(f.args))
            updated.append(f.with_args(args))
        else:
            updated.append(f)
    return Instance(frozenset(updated))


def null_repairs(
    d: Instance, sigma: DenialConstraintSet, cap: int | None = None
) -> tuple[NullRepair, ...]:
    """Consistency restoration by nulling a subset-minimal set of positions.

    Facts are never deleted; every fact needs a tuple id so changes can be
    reported as ``R[id;pos]`` strings.  Some constraints (e.g. a single
    atom with no joins) cannot be repaired this way, in which case the
    family is empty.
    """
    for f in d.facts:
        if f.fact_id is None:
            raise SemanticError(f"{f} has no tuple id; null-based mode needs ids")
    if is_consistent(d, sigma):
        return (NullRepair(d, frozenset()),)
    kill = _kill_sets(d, sigma)
    if any(not k for k in kill):
        return ()
    universe = frozenset(p for k in kill for p in k)
    fw = HittingFramework(universe, edge_family(minimal_sets(kill), key=attr_key))
    solution = enumerate_minimal_hitting_sets(fw, cap, key=attr_key)
    return tuple(NullRepair(_apply_changes(d, s), s) for s in solution.sets)


def null_causes(
    d: Instance,
    q: UnionQuery,
    cap: int | None = None,
    dedupe_ids: bool = False,
) -> tuple[
    tuple[tuple[AttrChange, Fraction], ...], tuple[tuple[Fact, Fraction], ...]
]:
    """Attribute-level and tuple-level causes under null-based repairs.

    A position is a cause when some repair nulls it; a tuple is a cause
    when one of its positions is.  Responsibilities are inverses of the
    smallest change set involved.  With ``dedupe_ids`` the tuple-level
    minimum counts repeated ids in a change set once, which can only raise
    the responsibility; by default plain change-set size is used.
    """
    reps = null_repairs(d, dc_of_query(q), cap)
    attr_best: dict[AttrChange, int] = {}
    tuple_best: dict[int, int] = {}
    for r in reps:
        size = len(r.diff)
        ids = {c.fact_id for c in r.diff}
        tuple_size = len(ids) if dedupe_ids else size
        for c in r.diff:
            if c not in attr_best or size < attr_best[c]:
                attr_best[c] = size
            if c.fact_id not in tuple_best or tuple_size < tuple_best[c.fact_id]:
                tuple_best[c.fact_id] = tuple_size
    by_id = {f.fact_id: f for f in d.facts}
    attr = tuple(
        (c, Fraction(1, attr_best[c])) for c in sorted(attr_best, key=attr_key)
    )
    tuples = tuple(
        (by_id[i], Fraction(1, tuple_best[i]))
        for i in sorted(tuple_best)
    )
    return attr, tuples
