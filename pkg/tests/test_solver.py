import pytest

from grnhoare import (
    TRUE,
    FALSE,
    cross_check,
    describe_solution_set,
    enumerate_valuations,
    eval_assertion,
    parse_assertion,
    parse_program,
    solve_triple,
    validate_network,
)
from grnhoare.errors import SizeLimitExceeded, WhileNotSupportedForCrossCheck
from grnhoare.programs import HoareTriple

import reference

P1_CONSTRAINT = "K[b,{lambda,sigma}]=1 & K[c,{l}]=1 & K[b,{sigma}]=0"


def test_counts(ffl, ffl_pinned):
    assert sum(1 for _ in enumerate_valuations(ffl)) == 128
    assert sum(1 for _ in enumerate_valuations(ffl_pinned)) == 16
    assert list(enumerate_valuations(validate_network([("v", 1)]))) == [
        {validate_network([("v", 1)]).param("v"): 0},
        {validate_network([("v", 1)]).param("v"): 1},
    ]


def test_enumeration_is_lexicographic(fig1):
    vecs = [tuple(v.values()) for v in enumerate_valuations(fig1)]
    assert vecs == sorted(vecs)
    assert len(vecs) == 3 ** 4 * 2 ** 2


def test_cap(ffl):
    with pytest.raises(SizeLimitExceeded):
        list(enumerate_valuations(ffl, cap=100))


@pytest.mark.parametrize("mode", ["oracle", "wp"])
def test_p1_solution_set(ffl, triple, mode):
    t = triple("p1", ffl)
    rep = solve_triple(ffl, t, mode)
    constraint = parse_assertion(P1_CONSTRAINT, ffl)
    want = [v for v in enumerate_valuations(ffl) if eval_assertion(constraint, {}, v)]
    assert len(want) == 16
    assert rep.consistent == [tuple(v.values()) for v in want]
    assert rep.undetermined == []
    # independent check with the naive reference semantics
    naive = [v for v in enumerate_valuations(ffl)
             if reference.triple_ok(ffl, reference.raw_valuation(ffl, v), t.pre, t.program, t.post)]
    assert naive == want


@pytest.mark.parametrize("mode", ["oracle", "wp"])
def test_p2_empty(ffl, triple, mode):
    rep = solve_triple(ffl, triple("p2", ffl), mode)
    assert rep.consistent == []
    assert describe_solution_set(rep) == FALSE


def test_vacuous_precondition(ffl):
    t = HoareTriple(FALSE, parse_program("b+; b+"), parse_assertion("b=0"))
    rep = solve_triple(ffl, t, "oracle")
    assert len(rep.consistent) == rep.total == 128
    assert describe_solution_set(rep) == TRUE


def test_constraint_summary(ffl, triple):
    rep = solve_triple(ffl, triple("p1", ffl), "wp")
    got = describe_solution_set(rep)
    assert set(got.args) == set(parse_assertion(P1_CONSTRAINT, ffl).args)


def test_summary_with_residual_disjunction(fig1):
    t = HoareTriple(parse_assertion("a=0 & b=0"), parse_program("exists(a+, b+)"), parse_assertion("a=1 | b=1"))
    rep = solve_triple(fig1, t, "wp")
    summary = describe_solution_set(rep)
    again = [tuple(v.values()) for v in enumerate_valuations(fig1) if eval_assertion(summary, {}, v)]
    assert again == rep.consistent
    assert 0 < len(rep.consistent) < rep.total


def test_pinning_filters(ffl, ffl_pinned, triple):
    full = solve_triple(ffl, triple("p3", ffl), "oracle")
    pinned = solve_triple(ffl_pinned, triple("p3", ffl_pinned), "oracle")
    keep = [v for v in full.consistent if v[ffl.param_index[ffl.param("b", ["sigma"])]] == 0
            and v[ffl.param_index[ffl.param("c", ["l"])]] == 1
            and v[ffl.param_index[ffl.param("b", ["lambda", "sigma"])]] == 1]
    assert pinned.consistent == keep


def test_jobs_do_not_change_reports(ffl, triple):
    t = triple("p1", ffl)
    one = solve_triple(ffl, t, "oracle", jobs=1).to_json()
    two = solve_triple(ffl, t, "oracle", jobs=2).to_json()
    assert one == two


def test_json_fields(ffl, triple):
    import json

    doc = json.loads(solve_triple(ffl, triple("p1", ffl), "wp", network_id="feedforward").to_json())
    assert list(doc) == ["network", "triple", "mode", "total", "consistent", "undetermined",
                         "constraint", "elapsed_ms"]
    assert doc["network"] == "feedforward"
    assert doc["elapsed_ms"] is None
    assert doc["consistent"][0]["K[b,{lambda,sigma}]"] == 1


def test_cross_check_examples(ffl, fig1, triple):
    assert cross_check(ffl, triple("p1", ffl)) == []
    assert cross_check(fig1, triple("fig1_ex1", fig1)) == []
    assert cross_check(fig1, triple("fig1_ex3", fig1)) == []
    with pytest.raises(WhileNotSupportedForCrossCheck):
        cross_check(ffl, triple("p4", ffl))


def test_p4_wp_mode_refutes_with_trivial_invariant(ffl_pinned, triple):
    rep = solve_triple(ffl_pinned, triple("p4", ffl_pinned), "wp")
    assert rep.consistent == [] and rep.total == 16
