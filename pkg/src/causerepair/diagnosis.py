"""Consistency-based diagnosis of an unexpectedly true query.

The system description says the database behaves normally, i.e. the
negation of the query holds whenever no involved tuple is abnormal; the
observation is that the query is true.  Restoring consistency means
declaring a set of endogenous facts abnormal, and the minimal such sets
are exactly the minimal hitting sets of the conflict family, which here
coincides with the endogenous support sets of the query.

``render_theory`` materializes the first-order theory itself (predicate
completions, unique names, the abnormality-qualified constraint as a
disjunctive positive rule, the inclusion axioms tying abnormality to
endogenousness, the observation, and the no-abnormality defaults); all
reasoning, however, goes through the conflict-set identification.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import SemanticError
from .hitting import (
    EdgeFamily,
    HittingFramework,
    endogenous_support_sets,
    enumerate_minimal_hitting_sets,
    exogenously_supported,
)
from .queries import ConjunctiveQuery, UnionQuery, Var, eval_boolean
from .relational import Fact, Instance, fact_key, format_constant
from .repairs import CARDINALITY, SUBSET, Repair


@dataclass(frozen=True)
class DiagnosisProblem:
    instance: Instance
    query: UnionQuery
    conflicts: EdgeFamily
    # Set when some support set is purely exogenous: the observation then
    # stays derivable no matter which endogenous facts turn abnormal, so
    # no diagnosis exists even though the conflict family is empty.
    unexplainable: bool = False


@dataclass(frozen=True)
class Diagnosis:
    abnormal: frozenset[Fact]
    kind: str


def build_problem(d: Instance, q: UnionQuery) -> DiagnosisProblem:
    """Set up the diagnosis problem for the observation that ``q`` holds."""
    if not q.is_boolean:
        raise SemanticError("diagnosis problems are built from boolean queries")
    if not eval_boolean(d, q):
        raise SemanticError("the query is false: there is nothing to explain")
    return DiagnosisProblem(
        d,
        q,
        endogenous_support_sets(d, q),
        unexplainable=exogenously_supported(d, q),
    )


def diagnoses(
    m: DiagnosisProblem,
    kind: str = SUBSET,
    containing: Fact | None = None,
    cap: int | None = None,
) -> tuple[Diagnosis, ...]:
    """Minimal diagnoses, optionally restricted to those containing a fact.

    Kind 's' returns all subset-minimal diagnoses; kind 'c' the minimum-
    cardinality ones (within the restricted family when ``containing`` is
    given, matching the responsibility correspondence).
    """
    if kind not in (SUBSET, CARDINALITY):
        raise SemanticError(f"unknown diagnosis kind {kind!r}")
    if m.unexplainable:
        return ()
    target = None
    if containing is not None:
        target = m.instance.find(containing.pred, containing.args)
        if target is None or not target.is_endogenous:
            raise SemanticError(f"{containing} is not an endogenous fact")
    fw = HittingFramework(m.instance.endogenous, m.conflicts)
    family = list(enumerate_minimal_hitting_sets(fw, cap).sets)
    if target is not None:
        family = [s for s in family if target in s]
    if kind == CARDINALITY and family:
        smallest = min(len(s) for s in family)
        family = [s for s in family if len(s) == smallest]
    return tuple(Diagnosis(s, kind) for s in family)


def repairs_from_diagnoses(
    m: DiagnosisProblem, kind: str = SUBSET, cap: int | None = None
) -> tuple[Repair, ...]:
    """Each minimal diagnosis, removed from the instance, is a repair."""
    if m.instance.exogenous:
        raise SemanticError("repairs from diagnoses assume all facts endogenous")
    out = [
        Repair(m.instance.without(diag.abnormal), diag.abnormal, kind)
        for diag in diagnoses(m, kind, cap=cap)
    ]
    return tuple(sorted(out, key=lambda r: sorted(fact_key(f) for f in r.removed)))


# ---------------------------------------------------------------------------
# Theory rendering


def _fresh_vars(arity: int) -> list[str]:
    return [f"x{i}" for i in range(1, arity + 1)]


def _head(pred: str, variables: list[str]) -> str:
    return f"{pred}({','.join(variables)})" if variables else pred


def _completion(pred: str, arity: int, rows: list[tuple[str, ...]]) -> str:
    variables = _fresh_vars(arity)
    if rows:
        clauses = []
        for row in rows:
            eqs = [f"{v} = {format_constant(c)}" for v, c in zip(variables, row)]
            clauses.append("(" + " & ".join(eqs) + ")" if len(eqs) > 1 else eqs[0])
        body = " | ".join(clauses)
    else:
        body = "false"
    return f"forall {' '.join(variables)} ({_head(pred, variables)} <-> {body})"


def _term_text(t) -> str:
    return t.name if isinstance(t, Var) else format_constant(t)


def _disjunctive_rule(cq: ConjunctiveQuery) -> str:
    variables = sorted(cq.variables())
    body_parts = [
        f"{a.pred}({','.join(_term_text(t) for t in a.terms)})" for a in cq.atoms
    ]
    body_parts.extend(
        f"~({_term_text(l)} = {_term_text(r)})" for l, r in cq.inequalities
    )
    head_parts = [
        f"Ab_{a.pred}({','.join(_term_text(t) for t in a.terms)})" for a in cq.atoms
    ]
    quantifier = f"forall {' '.join(variables)} " if variables else ""
    return f"{quantifier}({' & '.join(body_parts)} -> {' | '.join(head_parts)})"


def _observation(q: UnionQuery) -> str:
    parts = []
    for cq in q.disjuncts:
        variables = sorted(cq.variables())
        conj = [
            f"{a.pred}({','.join(_term_text(t) for t in a.terms)})" for a in cq.atoms
        ]
        conj.extend(f"~({_term_text(l)} = {_term_text(r)})" for l, r in cq.inequalities)
        inner = " & ".join(conj)
        parts.append(
            f"exists {' '.join(variables)} ({inner})" if variables else f"({inner})"
        )
    return " | ".join(parts)


def render_theory(m: DiagnosisProblem) -> str:
    """The first-order theory of the problem, one sentence per line.

    Connectives are rendered in ASCII (``forall``, ``exists``, ``->``,
    ``<->``, ``&``, ``|``, ``~``, ``=``, and the constant ``false``), in a
    stable order: completions, unique names, the qualified constraints,
    the inclusion axioms, the observation, then the defaults.
    """
    d = m.instance
    schema = dict(d.schema)
    for cq in m.query.disjuncts:
        for a in cq.atoms:
            schema.setdefault(a.pred, len(a.terms))
    lines = []
    for pred in sorted(schema):
        arity = schema[pred]
        rows = sorted(f.args for f in d.facts if f.pred == pred)
        lines.append(_completion(pred, arity, rows))
        endo_rows = sorted(f.args for f in d.endogenous if f.pred == pred)
        lines.append(_completion(f"End_{pred}", arity, endo_rows))
    constants = sorted({c for f in d.facts for c in f.args})
    for a, b in combinations(constants, 2):
        lines.append(f"~({format_constant(a)} = {format_constant(b)})")
    for cq in m.query.disjuncts:
        lines.append(_disjunctive_rule(cq))
    for pred in sorted(schema):
        variables = _fresh_vars(schema[pred])
        quant = f"forall {' '.join(variables)} " if variables else ""
        lines.append(
            f"{quant}({_head(f'Ab_{pred}', variables)} -> {_head(f'End_{pred}', variables)})"
        )
        lines.append(
            f"{quant}({_head(f'End_{pred}', variables)} -> {_head(pred, variables)})"
        )
    lines.append(_observation(m.query))
    for pred in sorted(schema):
        variables = _fresh_vars(schema[pred])
        quant = f"forall {' '.join(variables)} " if variables else ""
        lines.append(f"{quant}({_head(f'Ab_{pred}', variables)} -> false)")
    return "\n".join(lines) + "\n"
