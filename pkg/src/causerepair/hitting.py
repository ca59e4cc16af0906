"""Minimal support sets and hitting-set solvers.

The central reduction: the family of subset-minimal sub-instances that
make a boolean query true doubles as a hypergraph whose vertices are the
endogenous facts.  Hitting sets of that hypergraph are exactly the
deletion sets that falsify the query, so minimal hitting sets encode
repairs, contingency sets, and diagnoses all at once.

Two solvers operate on the family:

* ``enumerate_minimal_hitting_sets`` computes the full transversal
  hypergraph by the classic multiply-and-minimize scheme (process one
  edge at a time, extend each partial solution, prune non-minimal sets).
  The family can be exponential, so enumeration is capped.

* ``minimum_hitting_set_containing`` answers minimum-cardinality
  questions without enumeration, by a bounded-depth branching search:
  pick an uncovered edge, branch on its at most ``d`` vertices.  With a
  budget ``k`` the tree has depth below ``k``, which makes the decision
  fixed-parameter tractable in ``k``; exact sizes come from a binary
  search over ``k``.

When an element ``t`` is forced, the relevant quantity is the minimum
size of an *irredundant* hitting set containing ``t`` (one in which some
edge is hit by ``t`` alone).  Plain "minimum hitting set containing t"
would overshoot on star-shaped families where every small hitting set
makes ``t`` redundant, and irredundance is what deletion semantics needs:
a deletion set whose every member matters.  The search realizes this by
choosing a witness edge for ``t``, forbidding that edge's other vertices,
and solving the remaining (t-free) edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import CapExceededError, SemanticError
from .queries import UnionQuery, witnesses
from .relational import Fact, Instance, fact_key

DEFAULT_CAP = 100_000


def minimal_sets(sets: Iterable[frozenset]) -> list[frozenset]:
    """Subset-minimal members of a family (its antichain)."""
    result: list[frozenset] = []
    for s in sorted(set(sets), key=len):
        if not any(r <= s for r in result):
            result.append(s)
    return result


def _canonical_family(sets: Iterable[frozenset], key: Callable) -> tuple[frozenset, ...]:
    return tuple(sorted(sets, key=lambda s: sorted(key(x) for x in s)))


@dataclass(frozen=True)
class EdgeFamily:
    """An antichain of fact sets; ``bound`` caps the edge size (the ``d``
    of the d-hitting-set problem, i.e. the widest disjunct that generated
    the family)."""

    edges: tuple[frozenset, ...]
    bound: int

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)


def edge_family(edges: Iterable[frozenset], bound: int | None = None, key=fact_key) -> EdgeFamily:
    edges = list(edges)
    ordered = _canonical_family(edges, key)
    for e in ordered:
        for other in ordered:
            if e < other:
                raise SemanticError("edge family is not an antichain")
    if bound is None:
        bound = max((len(e) for e in ordered), default=0)
    return EdgeFamily(ordered, bound)


@dataclass(frozen=True)
class HittingFramework:
    universe: frozenset
    edges: EdgeFamily


def framework(universe: Iterable, edges: EdgeFamily) -> HittingFramework:
    universe = frozenset(universe)
    for e in edges:
        if not e <= universe:
            raise SemanticError("an edge is not contained in the universe")
    return HittingFramework(universe, edges)


@dataclass(frozen=True)
class HittingSolution:
    sets: tuple[frozenset, ...]
    kind: str


# ---------------------------------------------------------------------------
# Support sets


def support_sets(d: Instance, q: UnionQuery) -> EdgeFamily:
    """All subset-minimal sub-instances satisfying some disjunct of ``q``."""
    if not q.is_boolean:
        raise SemanticError("support sets are defined for boolean queries")
    images: set[frozenset[Fact]] = set()
    for cq in q.disjuncts:
        images |= witnesses(d.facts, cq)
    bound = max(len(cq.atoms) for cq in q.disjuncts)
    return EdgeFamily(_canonical_family(minimal_sets(images), fact_key), bound)


def endogenous_support_sets(d: Instance, q: UnionQuery) -> EdgeFamily:
    """Endogenous restrictions of the support sets.

    If any support set is witnessed entirely by exogenous facts, the query
    cannot be falsified through endogenous deletions at all, so the family
    collapses to the empty one (no causes, no contingencies).
    """
    full = support_sets(d, q)
    restricted = {e & d.endogenous for e in full}
    if any(not e for e in restricted):
        return EdgeFamily((), full.bound)
    return EdgeFamily(
        _canonical_family(minimal_sets(restricted), fact_key), full.bound
    )


def endogenous_framework(d: Instance, q: UnionQuery) -> HittingFramework:
    return HittingFramework(d.endogenous, endogenous_support_sets(d, q))


def full_framework(d: Instance, q: UnionQuery) -> HittingFramework:
    """Framework over the whole instance; repairs ignore the partition."""
    return HittingFramework(d.facts, support_sets(d, q))


def exogenously_supported(d: Instance, q: UnionQuery) -> bool:
    """True when some support set contains no endogenous fact."""
    return any(not (e & d.endogenous) for e in support_sets(d, q))


# ---------------------------------------------------------------------------
# Enumeration of all minimal hitting sets


def enumerate_minimal_hitting_sets(
    h: HittingFramework, cap: int | None = None, key=fact_key
) -> HittingSolution:
    """All subset-minimal hitting sets, canonically ordered.

    Raises ``CapExceededError`` once the working family outgrows ``cap``;
    exponential families exist even for single fixed constraints.
    """
    cap = DEFAULT_CAP if cap is None else cap
    solutions: list[frozenset] = [frozenset()]
    for edge in h.edges:
        if not edge:
            return HittingSolution((), "all-s-minimal")
        extended: set[frozenset] = set()
        for s in solutions:
            if s & edge:
                extended.add(s)
            else:
                for v in sorted(edge, key=key):
                    extended.add(s | {v})
        solutions = minimal_sets(extended)
        if len(solutions) > cap:
            raise CapExceededError(cap)
    return HittingSolution(_canonical_family(solutions, key), "all-s-minimal")


# ---------------------------------------------------------------------------
# Bounded branching for minimum hitting sets


def _first_unhit(edges, acc):
    for e in edges:
        if not (e & acc):
            return e
    return None


def _branch(edges, limit, acc, key):
    """Deterministic DFS: extend ``acc`` by at most ``limit`` vertices to
    hit every edge; returns the completed set or None."""
    edge = _first_unhit(edges, acc)
    if edge is None:
        return acc
    if limit <= 0:
        return None
    for v in sorted(edge, key=key):
        found = _branch(edges, limit - 1, acc | {v}, key)
        if found is not None:
            return found
    return None


def _exact_minimum(edges, key):
    """(size, witness) of a minimum hitting set, via binary search on the
    budget; edges must all be non-empty."""
    if not edges:
        return 0, frozenset()
    lo, hi = 1, len(edges)  # one vertex per edge always suffices
    while lo < hi:
        mid = (lo + hi) // 2
        if _branch(edges, mid, frozenset(), key) is not None:
            hi = mid
        else:
            lo = mid + 1
    return lo, _branch(edges, lo, frozenset(), key)


def _shrunken_rest(edges, witness_edge, t):
    """Edges not containing ``t``, with the witness edge's other vertices
    removed (they are forbidden, so ``t`` stays irredundant).  Antichains
    guarantee no edge is swallowed whole."""
    blocked = witness_edge - {t}
    rest = []
    for e in edges:
        if t in e:
            continue
        shrunk = e - blocked
        if not shrunk:
            raise AssertionError("antichain violated: edge absorbed by witness")
        rest.append(shrunk)
    return minimal_sets(rest)


def minimum_hitting_set_containing(
    h: HittingFramework,
    t=None,
    budget: int | None = None,
    key=fact_key,
):
    """Minimum-cardinality hitting-set queries with an optional forced element.

    Without ``t``: the global minimum, as ``(size, witness)``.

    With ``t``: the minimum size of a hitting set in which ``t`` is
    irredundant (equivalently, of a subset-minimal hitting set containing
    ``t``); ``None`` if ``t`` lies on no edge.

    With ``budget``: decision mode, answering only whether the size in
    question is strictly below ``budget``; explores a search tree of
    branching factor at most the edge bound and depth below ``budget``.
    """
    edges = list(h.edges)
    if any(not e for e in edges):
        # an empty edge cannot be hit
        return False if budget is not None else None
    if t is None:
        if budget is not None:
            if budget <= 0:
                return False
            return _branch(edges, budget - 1, frozenset(), key) is not None
        return _exact_minimum(edges, key)
    if t not in h.universe:
        raise SemanticError(f"{t} is not in the hitting universe")
    t_edges = [e for e in edges if t in e]
    if not t_edges:
        return False if budget is not None else None
    t_edges.sort(key=lambda e: sorted(key(x) for x in e))
    if budget is not None:
        if budget <= 1:
            return False  # the set contains t already, so size >= 1
        return any(
            _branch(_shrunken_rest(edges, e, t), budget - 2, frozenset(), key)
            is not None
            for e in t_edges
        )
    best = None
    for e in t_edges:
        size, rest_witness = _exact_minimum(_shrunken_rest(edges, e, t), key)
        candidate = (size + 1, rest_witness | {t})
        if best is None or candidate[0] < best[0] or (
            candidate[0] == best[0]
            and sorted(key(x) for x in candidate[1]) < sorted(key(x) for x in best[1])
        ):
            best = candidate
    return best
