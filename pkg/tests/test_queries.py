import random

import pytest

from causerepair.errors import ParseError, SemanticError
from causerepair.parsing import parse_instance, parse_program, single_query
from causerepair.queries import (
    Var,
    answer_dc,
    canonical_query,
    dc_of_query,
    eval_answers,
    eval_boolean,
    violation_view,
)
from causerepair.relational import Instance, fact

from conftest import load_constraints, load_instance, load_query, random_boolean_query, random_instance


def test_parse_boolean_query():
    q = load_query("ex1.dlq")
    assert q.is_boolean
    (cq,) = q.disjuncts
    assert len(cq.atoms) == 3
    assert [a.pred for a in cq.atoms] == ["S", "R", "S"]


def test_parse_constraint():
    sigma = load_constraints("cqa2.dlq")
    (dc,) = sigma.constraints
    assert [a.pred for a in dc.body.atoms] == ["P", "R"]


def test_parse_fd_style_constraint():
    _, sigma = parse_program(":- A(X1,X2,Y), A(X1,X3,Z), Y != Z.\n")
    (dc,) = sigma.constraints
    assert len(dc.body.inequalities) == 1
    assert len(dc.body.atoms) == 2


def test_parse_union_merges_heads():
    q = load_query("ex4v.dlq")
    assert len(q.disjuncts) == 2


def test_parse_open_query_head():
    queries, _ = parse_program("ans(X) :- P(X), R(X,Y).\n")
    assert queries["ans"].free_vars == ("X",)


def test_unsafe_rule_rejected():
    with pytest.raises(SemanticError):
        parse_program(":- P(X), Y != Z.\n")
    with pytest.raises(SemanticError):
        parse_program("ans(X) :- P(Y).\n")


def test_mixed_free_variable_lists_rejected():
    with pytest.raises(SemanticError):
        parse_program("ans(X) :- P(X).\nans(X,Y) :- Q(X,Y).\n")


def test_syntax_error_carries_location():
    with pytest.raises(ParseError) as err:
        parse_program("q :- S(X), , R(X,Y).\n")
    assert "line 1" in str(err.value)


def test_eval_boolean_examples():
    assert eval_boolean(load_instance("ex1.facts"), load_query("ex1.dlq"))
    assert not eval_boolean(Instance(frozenset()), load_query("ex1.dlq"))
    d4 = load_instance("ex4.facts")
    assert eval_boolean(d4, violation_view(load_constraints("ex4.dlq")))


def test_eval_answers_examples():
    queries, _ = parse_program("ans(X) :- P(X).\n")
    d4 = load_instance("ex4.facts")
    assert eval_answers(d4, queries["ans"]) == {("a",), ("e",)}
    assert eval_answers(Instance(frozenset()), queries["ans"]) == frozenset()
    queries, _ = parse_program("ans(X,Y,Z) :- R(X,Y), S(Y,Z).\n")
    d = parse_instance("R(a,b). S(b,c).")
    assert eval_answers(d, queries["ans"]) == {("a", "b", "c")}


def test_boolean_answers_are_empty_or_unit():
    q = load_query("ex1.dlq")
    assert eval_answers(load_instance("ex1.facts"), q) == {()}
    assert eval_answers(Instance(frozenset()), q) == frozenset()


def test_missing_predicate_is_empty_relation():
    q = single_query("q :- Missing(X).\n")
    assert not eval_boolean(load_instance("ex1.facts"), q)


def test_dc_of_query_examples():
    sigma = dc_of_query(load_query("ex1.dlq"))
    assert len(sigma) == 1
    assert [a.pred for a in sigma.constraints[0].body.atoms] == ["S", "R", "S"]
    sigma4 = dc_of_query(load_query("ex4v.dlq"))
    assert len(sigma4) == 2
    single = dc_of_query(single_query("q :- P(X).\n"))
    assert len(single) == 1


def test_dc_of_query_rejects_free_variables():
    queries, _ = parse_program("ans(X) :- P(X).\n")
    with pytest.raises(SemanticError):
        dc_of_query(queries["ans"])


def test_duality_roundtrip():
    q = load_query("ex1.dlq")
    back = violation_view(dc_of_query(q))
    assert canonical_query(back) == canonical_query(q)
    sigma = load_constraints("ex4.dlq")
    again = dc_of_query(violation_view(sigma))
    assert canonical_query(violation_view(again)) == canonical_query(violation_view(sigma))


def test_fd_violation_view_is_evaluable():
    _, sigma = parse_program(":- A(X1,X2,Y), A(X1,X3,Z), Y != Z.\n")
    view = violation_view(sigma)
    # two rows sharing the key but differing in the last attribute violate
    violating = parse_instance("A(k,u,v1). A(k,w,v2).")
    clean = parse_instance("A(k,u,v1). A(k2,w,v2).")
    assert eval_boolean(violating, view)
    assert not eval_boolean(clean, view)


def test_answer_dc_examples():
    queries, _ = parse_program("ans(X) :- R(X,Y), S(Y,Z).\n")
    sigma = answer_dc(queries["ans"], ("a",))
    (dc,) = sigma.constraints
    assert dc.body.atoms[0].terms[0] == "a"
    assert isinstance(dc.body.atoms[0].terms[1], Var)
    q = load_query("ex1.dlq")
    assert answer_dc(q, ()) == dc_of_query(q)
    with pytest.raises(SemanticError):
        answer_dc(queries["ans"], ("a", "b"))


def test_answer_dc_cause_of_open_answer():
    # the answer <e> to "which x has P(x)" is caused exactly by P(e)
    from causerepair.causality import actual_causes

    queries, _ = parse_program("ans(X) :- P(X).\n")
    d4 = load_instance("ex4.facts")
    sigma = answer_dc(queries["ans"], ("e",))
    causes = actual_causes(d4, violation_view(sigma))
    assert {str(f) for f in causes} == {"P(e)"}


def test_null_never_joins():
    q = load_query("ex1.dlq")
    d = parse_instance("S(null). R(null,a3). S(a3).")
    assert not eval_boolean(d, q)


def test_null_binds_single_occurrence():
    q = single_query("q :- S(X).\n")
    assert eval_boolean(parse_instance("S(null)."), q)


def test_null_fails_comparisons():
    q = single_query("q :- S(X), P(Y), X != Y.\n")
    assert not eval_boolean(parse_instance("S(null). P(null)."), q)
    assert not eval_boolean(parse_instance("S(null). P(a)."), q)
    assert eval_boolean(parse_instance("S(b). P(a)."), q)


def test_query_constant_null_matches_nothing():
    q = single_query("q :- S(null).\n")
    assert not eval_boolean(parse_instance("S(null)."), q)


def test_monotonicity_on_random_instances():
    rng = random.Random(20240811)
    for _ in range(60):
        d = random_instance(rng)
        q = random_boolean_query(rng)
        smaller = Instance(
            frozenset(f for f in d.facts if rng.random() < 0.6)
        )
        if eval_boolean(smaller, q):
            assert eval_boolean(d, q)


def test_duality_iff_violation_on_random_instances():
    rng = random.Random(7)
    for _ in range(40):
        d = random_instance(rng)
        q = random_boolean_query(rng)
        sigma = dc_of_query(q)
        assert eval_boolean(d, violation_view(sigma)) == eval_boolean(d, q)
