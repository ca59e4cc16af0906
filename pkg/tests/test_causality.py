from fractions import Fraction

import pytest

from causerepair.causality import (
    actual_causes,
    check_minimal_contingency,
    contingency_sets,
    explain,
    most_responsible_causes,
    rdp_decide,
    responsibility,
)
from causerepair.errors import SemanticError
from causerepair.parsing import parse_fact, parse_instance, parse_program
from causerepair.queries import violation_view
from causerepair.relational import Instance

from conftest import load_constraints, load_instance, load_query


def _gammas(sets):
    return [sorted(str(f) for f in g) for g in sets]


def test_actual_causes_chain_example(chain_instance, chain_query):
    causes = actual_causes(chain_instance, chain_query)
    assert {str(f) for f in causes} == {"S(a3)", "R(a4,a3)", "R(a3,a3)", "S(a4)"}


def test_counterfactual_pair_example():
    d = load_instance("ex1b.facts")
    q = load_query("ex1.dlq")
    causes = actual_causes(d, q)
    assert {str(f) for f in causes} == {"S(a3)", "S(a4)"}
    for name in ("S(a3)", "S(a4)"):
        assert responsibility(d, q, parse_fact(name)) == 1


def test_no_causes_when_query_false(chain_query):
    assert actual_causes(parse_instance("S(a9)."), chain_query) == frozenset()


def test_contingency_sets_union_example():
    d4 = load_instance("ex4.facts")
    view = violation_view(load_constraints("ex4.dlq"))
    assert _gammas(contingency_sets(d4, view, parse_fact("Q(a,b)"))) == [["R(a,c)"]]
    assert _gammas(contingency_sets(d4, view, parse_fact("P(a)"))) == [[]]
    assert _gammas(contingency_sets(d4, view, parse_fact("R(a,c)"))) == [["Q(a,b)"]]


def test_contingency_sets_scaling_instance():
    d = parse_instance(
        " ".join(f"R({i},0). R({i},1)." for i in (1, 2, 3)) + " S(0). S(1)."
    )
    _, sigma = parse_program(":- R(X,Y), R(X,Z), S(Y), S(Z), Y != Z.\n")
    view = violation_view(sigma)
    found = contingency_sets(d, view, parse_fact("R(1,0)"))
    assert len(found) == 4  # one element from each of {R(2,·)} and {R(3,·)}
    assert frozenset({parse_fact("R(2,0)"), parse_fact("R(3,0)")}) in {
        frozenset(g) for g in found
    }
    for gamma in found:
        assert len(gamma) == 2


def test_contingency_sets_require_endogenous_member():
    d6 = load_instance("ex6.facts")
    view = violation_view(load_constraints("ex4.dlq"))
    with pytest.raises(SemanticError):
        contingency_sets(d6, view, parse_fact("Q(a,b)"))  # exogenous
    with pytest.raises(SemanticError):
        contingency_sets(d6, view, parse_fact("P(zzz)"))  # absent


def test_responsibility_chain_example(chain_instance, chain_query):
    expected = {
        "S(a3)": Fraction(1),
        "R(a4,a3)": Fraction(1, 2),
        "R(a3,a3)": Fraction(1, 2),
        "S(a4)": Fraction(1, 2),
        "S(a2)": Fraction(0),
        "R(a2,a1)": Fraction(0),
    }
    for name, value in expected.items():
        assert responsibility(chain_instance, chain_query, parse_fact(name)) == value


def test_rdp_decide_thresholds(chain_instance, chain_query):
    t = parse_fact("R(a4,a3)")
    assert rdp_decide(chain_instance, chain_query, t, Fraction(1, 3)) is True
    assert rdp_decide(chain_instance, chain_query, t, Fraction(1, 2)) is False
    assert rdp_decide(chain_instance, chain_query, t, Fraction(0)) is True
    assert rdp_decide(chain_instance, chain_query, parse_fact("S(a2)"), Fraction(0)) is False


def test_rdp_decide_needs_true_query(chain_query):
    assert rdp_decide(parse_instance("S(a9)."), chain_query, parse_fact("S(a9)"), Fraction(0)) is False


def test_rdp_decide_rejects_bad_threshold(chain_instance, chain_query):
    with pytest.raises(SemanticError):
        rdp_decide(chain_instance, chain_query, parse_fact("S(a3)"), Fraction(2, 3))


def test_most_responsible_causes_examples():
    d4 = load_instance("ex4.facts")
    view = violation_view(load_constraints("ex4.dlq"))
    top, value = most_responsible_causes(d4, view)
    assert ({str(f) for f in top}, value) == ({"P(a)"}, Fraction(1))
    d8 = load_instance("ex8.facts")
    top8, value8 = most_responsible_causes(d8, load_query("ex8.dlq"))
    assert ({str(f) for f in top8}, value8) == ({"P(a)"}, Fraction(1))
    empty_top, zero = most_responsible_causes(parse_instance("P(z)."), load_query("ex8.dlq"))
    assert (empty_top, zero) == (frozenset(), Fraction(0))


def test_check_minimal_contingency_examples(chain_instance, chain_query):
    check = lambda t, gamma: check_minimal_contingency(
        chain_instance, chain_query, parse_fact(t), frozenset(map(parse_fact, gamma))
    )
    assert check("S(a3)", []) is True
    assert check("R(a4,a3)", ["R(a3,a3)"]) is True
    assert check("R(a4,a3)", ["R(a3,a3)", "S(a2)"]) is False  # not minimal
    assert check("R(a4,a3)", []) is False  # not yet a contingency
    assert check("S(a2)", ["R(a3,a3)"]) is False  # not a cause at all


def test_check_minimal_contingency_preconditions(chain_instance, chain_query):
    with pytest.raises(SemanticError):
        check_minimal_contingency(
            chain_instance,
            chain_query,
            parse_fact("S(a3)"),
            frozenset({parse_fact("S(a3)")}),
        )
    d13 = load_instance("ex13.facts")
    with pytest.raises(SemanticError):
        check_minimal_contingency(
            d13, chain_query, parse_fact("S(a2)"), frozenset()
        )  # exogenous


def test_contingencies_validate_via_membership_check(chain_instance, chain_query):
    for t in actual_causes(chain_instance, chain_query):
        for gamma in contingency_sets(chain_instance, chain_query, t):
            assert check_minimal_contingency(chain_instance, chain_query, t, gamma)


def test_cause_iff_positive_responsibility(chain_instance, chain_query):
    causes = actual_causes(chain_instance, chain_query)
    for t in chain_instance.endogenous:
        rho = responsibility(chain_instance, chain_query, t)
        assert (t in causes) == (rho > 0)
        assert rdp_decide(chain_instance, chain_query, t, Fraction(0)) == (rho > 0)


def test_consistency_criterion_all_endogenous(chain_instance, chain_query):
    # with no exogenous facts, causes exist exactly when the query holds
    assert actual_causes(chain_instance, chain_query)
    consistent = chain_instance.without(
        [f for f in chain_instance if str(f) in ("S(a3)",)]
    )
    assert actual_causes(consistent, chain_query) == frozenset()


def test_explain_bundles_everything(chain_instance, chain_query):
    report = explain(chain_instance, chain_query, parse_fact("R(a4,a3)"))
    assert report.is_cause
    assert report.responsibility == Fraction(1, 2)
    assert _gammas(report.minimal_contingencies) == [["R(a3,a3)"]]
