from fractions import Fraction

import pytest

from causerepair.causality import responsibility
from causerepair.diagnosis import (
    Diagnosis,
    DiagnosisProblem,
    build_problem,
    diagnoses,
    render_theory,
    repairs_from_diagnoses,
)
from causerepair.errors import SemanticError
from causerepair.hitting import EdgeFamily
from causerepair.parsing import parse_fact, parse_instance
from causerepair.queries import violation_view
from causerepair.relational import Instance
from causerepair.repairs import repairs

from conftest import load_constraints, load_instance, load_query


def _sets(diags):
    return {frozenset(str(f) for f in d.abnormal) for d in diags}


def test_build_problem_conflict_set():
    d = load_instance("ex1b.facts")
    m = build_problem(d, load_query("ex1.dlq"))
    assert [sorted(str(f) for f in e) for e in m.conflicts] == [["S(a3)", "S(a4)"]]
    assert not m.unexplainable


def test_build_problem_union_conflicts():
    d4 = load_instance("ex4.facts")
    m = build_problem(d4, violation_view(load_constraints("ex4.dlq")))
    assert [sorted(str(f) for f in e) for e in m.conflicts] == [
        ["P(a)", "Q(a,b)"],
        ["P(a)", "R(a,c)"],
    ]


def test_build_problem_requires_observation():
    with pytest.raises(SemanticError):
        build_problem(parse_instance("S(a9)."), load_query("ex1.dlq"))


def test_minimal_diagnoses_pair():
    d = load_instance("ex1b.facts")
    m = build_problem(d, load_query("ex1.dlq"))
    assert _sets(diagnoses(m, "s")) == {frozenset({"S(a3)"}), frozenset({"S(a4)"})}


def test_minimal_diagnoses_all_endogenous_variant():
    d = load_instance("ex12.facts")
    m = build_problem(d, load_query("ex1.dlq"))
    assert _sets(diagnoses(m, "s")) == {
        frozenset({"S(a3)"}),
        frozenset({"S(a4)"}),
        frozenset({"R(a4,a3)"}),
    }


def test_diagnoses_empty_conflicts_has_empty_diagnosis():
    problem = DiagnosisProblem(
        parse_instance("P(a)."), load_query("ex1.dlq"), EdgeFamily((), 0)
    )
    assert _sets(diagnoses(problem, "s")) == {frozenset()}


def test_unexplainable_observation_has_no_diagnosis():
    d = parse_instance("@exogenous\nS(a3). R(a3,a3).\n@endogenous\nS(a9).")
    q = load_query("ex1.dlq")
    m = build_problem(d, q)
    assert m.unexplainable
    assert diagnoses(m, "s") == ()


def test_diagnoses_containing_and_kinds(chain_instance, chain_query):
    m = build_problem(chain_instance, chain_query)
    t = chain_instance.find("R", ("a4", "a3"))
    containing = diagnoses(m, "s", containing=t)
    assert _sets(containing) == {frozenset({"R(a4,a3)", "R(a3,a3)"})}
    smallest = diagnoses(m, "c", containing=t)
    # the smallest diagnosis through t fixes the responsibility of t
    assert {len(d.abnormal) for d in smallest} == {2}
    assert responsibility(chain_instance, chain_query, t) == Fraction(1, 2)
    global_smallest = diagnoses(m, "c")
    assert _sets(global_smallest) == {frozenset({"S(a3)"})}


def test_diagnoses_containing_rejects_exogenous():
    d = load_instance("ex1b.facts")
    m = build_problem(d, load_query("ex1.dlq"))
    with pytest.raises(SemanticError):
        diagnoses(m, "s", containing=parse_fact("R(a4,a3)"))


def test_repairs_from_diagnoses_triple():
    d = load_instance("ex12.facts")
    m = build_problem(d, load_query("ex1.dlq"))
    reps = repairs_from_diagnoses(m, "s")
    assert {frozenset(str(f) for f in r.kept.facts) for r in reps} == {
        frozenset({"S(a3)", "R(a4,a3)"}),
        frozenset({"S(a4)", "R(a4,a3)"}),
        frozenset({"S(a3)", "S(a4)"}),
    }


def test_repairs_from_diagnoses_matches_repair_engine():
    for name, cname in (("ex12.facts", "ex2.dlq"), ("ex4.facts", "ex4.dlq")):
        d = load_instance(name)
        sigma = load_constraints(cname)
        m = build_problem(d, violation_view(sigma))
        for kind in ("s", "c"):
            via_diag = {r.kept.facts for r in repairs_from_diagnoses(m, kind)}
            direct = {r.kept.facts for r in repairs(d, sigma, kind)}
            assert via_diag == direct


def test_repairs_from_diagnoses_rejects_exogenous():
    d = load_instance("ex1b.facts")
    m = build_problem(d, load_query("ex1.dlq"))
    with pytest.raises(SemanticError):
        repairs_from_diagnoses(m, "s")


# ---------------------------------------------------------------------------
# Theory rendering


def test_rendered_theory_structure():
    d = load_instance("ex1b.facts")
    m = build_problem(d, load_query("ex1.dlq"))
    text = render_theory(m)
    lines = text.splitlines()
    assert "forall X Y (S(X) & R(X,Y) & S(Y) -> Ab_S(X) | Ab_R(X,Y) | Ab_S(Y))" in lines
    assert "forall x1 x2 (Ab_R(x1,x2) -> End_R(x1,x2))" in lines
    assert "forall x1 (End_S(x1) -> S(x1))" in lines
    assert "~(a3 = a4)" in lines
    assert "exists X Y (S(X) & R(X,Y) & S(Y))" in lines
    assert "forall x1 (Ab_S(x1) -> false)" in lines
    # exogenous-only predicate: empty endogenous completion
    assert "forall x1 x2 (End_R(x1,x2) <-> false)" in lines


def test_rendered_theory_one_ab_predicate_per_schema_predicate():
    d = load_instance("ex12.facts")
    m = build_problem(d, load_query("ex1.dlq"))
    lines = render_theory(m).splitlines()
    schema_preds = set(d.schema)
    ab_preds = set()
    for line in lines:
        for token in line.replace("(", " ").split():
            if token.startswith("Ab_"):
                ab_preds.add(token[3:])
    assert ab_preds == schema_preds
    # one default emptiness sentence per predicate
    defaults = [l for l in lines if "-> false)" in l and "Ab_" in l]
    assert len(defaults) == len(schema_preds)


def test_rendered_theory_empty_instance():
    problem = DiagnosisProblem(
        Instance(frozenset()), load_query("ex1.dlq"), EdgeFamily((), 3)
    )
    lines = render_theory(problem).splitlines()
    assert "forall x1 (S(x1) <-> false)" in lines
    assert "forall x1 x2 (R(x1,x2) <-> false)" in lines


def test_rendered_theory_is_deterministic():
    d = load_instance("ex12.facts")
    m = build_problem(d, load_query("ex1.dlq"))
    assert render_theory(m) == render_theory(m)
