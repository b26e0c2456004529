import pytest

from grnhoare import (
    Fails,
    FuelExhausted,
    Holds,
    Infeasible,
    Sets,
    Undetermined,
    parse_assertion,
    parse_program,
    rel,
    triple_holds,
)
from grnhoare.errors import ResultTooLarge
from grnhoare.oracle import Executor
from grnhoare.programs import HoareTriple


def sets(*groups):
    return Sets(tuple(sorted(tuple(sorted(g)) for g in groups)))


def test_forall_at_origin(fig1, fig1_val):
    got = rel(fig1, fig1_val, parse_program("forall(a+, b+)"), (0, 0))
    assert got == sets({(1, 0), (0, 1)})


def test_example_three_has_three_sets(fig1, fig1_val):
    prog = parse_program("forall(a+, b+); exists(a+, b+); exists(eps, b+)")
    got = rel(fig1, fig1_val, prog, (0, 0))
    assert got == sets({(1, 1), (2, 0)}, {(1, 1)}, {(1, 1), (2, 1)})


def test_intermediate_sets(fig1, fig1_val):
    got = rel(fig1, fig1_val, parse_program("forall(a+, b+); exists(a+, b+)"), (0, 0))
    assert got == sets({(1, 1), (2, 0)}, {(1, 1)})


def test_eps_and_assign(fig1, fig1_val):
    assert rel(fig1, fig1_val, parse_program("eps"), (2, 1)) == sets({(2, 1)})
    # assignment needs no transition
    assert rel(fig1, fig1_val, parse_program("a:=0"), (1, 1)) == sets({(0, 1)})


def test_infeasible_steps(fig1, fig1_val):
    # (1,1) is stable: nothing moves
    assert rel(fig1, fig1_val, parse_program("a-"), (1, 1)) == Infeasible()
    assert rel(fig1, fig1_val, parse_program("assert(a=0)"), (1, 1)) == Infeasible()
    assert rel(fig1, fig1_val, parse_program("forall(a+, a-)"), (1, 0)) == Infeasible()
    assert rel(fig1, fig1_val, parse_program("exists(a-, a+)"), (1, 0)) == sets({(2, 0)})


def test_seq_drops_group_with_infeasible_member(fig1, fig1_val):
    # b+ works from (1,0) but not from (0,1), so the only group dies
    prog = parse_program("forall(a+, b+); b+")
    assert rel(fig1, fig1_val, prog, (0, 0)) == Infeasible()


def test_if_picks_branch(fig1, fig1_val):
    prog = parse_program("if a=0 then a+ else b+ end")
    assert rel(fig1, fig1_val, prog, (0, 0)) == sets({(1, 0)})
    assert rel(fig1, fig1_val, prog, (2, 0)) == sets({(2, 1)})


def test_while_terminates(fig1, fig1_val):
    prog = parse_program("while a<2 with true do a+ end")
    assert rel(fig1, fig1_val, prog, (0, 0)) == sets({(2, 0)})


def test_while_fuel(fig1, fig1_val):
    # second iteration reaches the stable state (1,1) where a+ is impossible
    assert rel(fig1, fig1_val, parse_program("while b=1 with true do a+ end"), (0, 1)) == Infeasible()
    # assignment loops forever
    spin = parse_program("while a>=0 with true do a:=0 end")
    assert rel(fig1, fig1_val, spin, (0, 0), fuel=5) == FuelExhausted()


def test_fuel_exhaustion_under_exists_is_undetermined_only_when_needed(fig1, fig1_val):
    spin = "while a>=0 with true do a:=0 end"
    ok = HoareTriple(parse_assertion("a=0 & b=0"), parse_program(f"exists({spin}, a+)"), parse_assertion("a=1"))
    assert triple_holds(fig1, fig1_val, ok, fuel=4) == Holds()
    unknown = HoareTriple(parse_assertion("a=0 & b=0"), parse_program(f"exists({spin}, a+)"), parse_assertion("a=2"))
    assert triple_holds(fig1, fig1_val, unknown, fuel=4) == Undetermined(((0, 0),))


def test_example_triples(fig1, fig1_val, triple):
    assert triple_holds(fig1, fig1_val, triple("fig1_ex1", fig1)) == Holds()
    assert triple_holds(fig1, fig1_val, triple("fig1_ex2", fig1)) == Fails((2, 0))
    assert triple_holds(fig1, fig1_val, triple("fig1_ex3", fig1)) == Holds()


def test_vacuous(fig1, fig1_val):
    t = HoareTriple(parse_assertion("false"), parse_program("a-; a-; a-"), parse_assertion("false"))
    assert triple_holds(fig1, fig1_val, t) == Holds()


def test_result_cap(fig1, fig1_val):
    prog = parse_program("forall(exists(a+, b+), exists(eps, a+), exists(eps, b+))")
    with pytest.raises(ResultTooLarge):
        rel(fig1, fig1_val, prog, (0, 0), max_sets=1)


def test_executor_reuse(fig1, fig1_val):
    ex = Executor(fig1, fig1_val)
    p = parse_program("a+; a+")
    assert ex.relation(p, (0, 0)) == sets({(2, 0)})
    assert ex.relation(p, (0, 1)) == Infeasible()
