"""Property tests over small random networks.

Networks come from the seeded generators; hypothesis drives the seeds.
Networks are pinned down to a few dozen valuations to keep each example
cheap; the acceptance campaign covers unpinned networks.
"""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from grnhoare import (
    FALSE,
    TRUE,
    check_validity,
    enumerate_states,
    eval_assertion,
    format_assertion,
    parse_assertion,
    parse_program,
    print_program,
    simplify,
    successors,
    validate_network,
    wp,
)
from grnhoare.assertions import Implies, compile_assertion, eval_term, substitute
from grnhoare.cli import render_dot
from grnhoare.oracle import Executor
from grnhoare.programs import EPS, Assert, Exists, Forall, HoareTriple, If, Seq, While
from grnhoare.random_models import RandomConfig, random_assertion, random_network, random_program, random_term
from grnhoare.solver import cross_check, describe_solution_set, enumerate_valuations, solve_triple
from grnhoare.wp import phi_minus, phi_omega, phi_plus
from grnhoare.network import subsets_binary_order

import reference

CFG = RandomConfig(valuation_budget=24)
seeds = st.integers(min_value=0, max_value=2**32 - 1)
PROPS = settings(max_examples=60, deadline=None)


def world(seed):
    rng = random.Random(seed)
    return rng, random_network(rng, CFG)


def some_valuations(rng, net, k=4):
    vals = list(enumerate_valuations(net))
    return rng.sample(vals, min(k, len(vals)))


# --- dynamics ---------------------------------------------------------------------


@PROPS
@given(seeds)
def test_phi_formulas_agree_with_successors(seed):
    rng, net = world(seed)
    for val in some_valuations(rng, net):
        for s in enumerate_states(net):
            nxt = successors(net, val, s)
            assert nxt
            levels = net.state_dict(s)
            for i, v in enumerate(net.var_names):
                up = s[:i] + (s[i] + 1,) + s[i + 1:]
                down = s[:i] + (s[i] - 1,) + s[i + 1:]
                assert eval_assertion(phi_plus(net, v), levels, val) == (up in nxt)
                assert eval_assertion(phi_minus(net, v), levels, val) == (down in nxt)


@PROPS
@given(seeds)
def test_exactly_one_resource_guard(seed):
    _, net = world(seed)
    for s in enumerate_states(net):
        levels = net.state_dict(s)
        for v in net.var_names:
            hits = [w for w in subsets_binary_order(net.predecessors[v])
                    if eval_assertion(phi_omega(net, v, w), levels, {})]
            assert len(hits) == 1


@PROPS
@given(seeds)
def test_boundary_facts(seed):
    rng, net = world(seed)
    for val in some_valuations(rng, net):
        for v in net.var_names:
            b = net.bounds[v]
            assert check_validity(net, Implies(phi_plus(net, v), parse_assertion(f"{v}<{b}")), val)
            assert check_validity(net, Implies(phi_minus(net, v), parse_assertion(f"{v}>0")), val)


@PROPS
@given(seeds)
def test_successors_match_reference(seed):
    rng, net = world(seed)
    for val in some_valuations(rng, net):
        raw = reference.raw_valuation(net, val)
        for s in enumerate_states(net):
            ours = {frozenset(net.state_dict(t).items()) for t in successors(net, val, s)}
            assert ours == reference.succ(net, raw, net.state_dict(s))


@PROPS
@given(seeds)
def test_dot_degrees(seed):
    rng, net = world(seed)
    val = some_valuations(rng, net, 1)[0]
    dot = render_dot(net, val)
    edges = [l for l in dot.splitlines() if "->" in l]
    nodes = [l for l in dot.splitlines() if l.startswith('  "(') and "->" not in l]
    assert len(nodes) == len(enumerate_states(net))
    for s in enumerate_states(net):
        unstable = sum(1 for t in successors(net, val, s) if t != s)
        out = sum(1 for e in edges if e.startswith(f'  "{net.format_state(s)}" ->'))
        assert out == (unstable or 1)


# --- assertions --------------------------------------------------------------------


@PROPS
@given(seeds)
def test_simplify_preserves_meaning(seed):
    rng, net = world(seed)
    a = random_assertion(rng, net, depth=3, params=True)
    s = simplify(net, a)
    fa, fs = compile_assertion(net, a), compile_assertion(net, s)
    for val in enumerate_valuations(net):
        kvec = net.valuation_vector(val)
        for st_ in enumerate_states(net):
            assert fa(st_, kvec) == fs(st_, kvec), (format_assertion(a), format_assertion(s))


@PROPS
@given(seeds)
def test_substitution_lemma(seed):
    rng, net = world(seed)
    a = random_assertion(rng, net, depth=2, params=True)
    v = rng.choice(net.var_names)
    t = random_term(rng, net, params=True)
    for val in some_valuations(rng, net, 2):
        for s in enumerate_states(net):
            levels = net.state_dict(s)
            moved = dict(levels, **{v: eval_term(t, levels, val)})
            assert eval_assertion(substitute(a, v, t), levels, val) == reference.holds(
                a, moved, reference.raw_valuation(net, val))


@PROPS
@given(seeds)
def test_modus_ponens(seed):
    rng, net = world(seed)
    a = random_assertion(rng, net, depth=1)
    b = random_assertion(rng, net, depth=2)
    for val in some_valuations(rng, net, 2):
        if check_validity(net, a, val) and check_validity(net, Implies(a, b), val):
            assert check_validity(net, b, val)


@PROPS
@given(seeds)
def test_assertion_roundtrip(seed):
    rng, net = world(seed)
    a = random_assertion(rng, net, depth=3, params=True)
    assert parse_assertion(format_assertion(a)) == a


# --- programs ---------------------------------------------------------------------


def canonical_program(p):
    """Structure parse_program produces: flattened sequences and same-kind quantifiers."""
    return parse_program(print_program(p))


@PROPS
@given(seeds)
def test_program_roundtrip(seed):
    rng, net = world(seed)
    p = canonical_program(random_program(rng, net, 4))
    assert parse_program(print_program(p)) == p
    assert print_program(parse_program(print_program(p))) == print_program(p)


@PROPS
@given(seeds)
def test_oracle_matches_reference(seed):
    rng, net = world(seed)
    p = random_program(rng, net, 4)
    for val in some_valuations(rng, net, 2):
        ex = Executor(net, val)
        raw = reference.raw_valuation(net, val)
        for s in enumerate_states(net):
            coll, exhausted = ex.run(p, s, 8)
            assert not exhausted
            assert all(coll_e for coll_e in coll)
            want = reference.related(net, raw, p, frozenset(net.state_dict(s).items()))
            got = {frozenset(frozenset(net.state_dict(x).items()) for x in e) for e in coll}
            assert got == want


@PROPS
@given(seeds)
def test_seq_associative_and_quantifiers_commute(seed):
    rng, net = world(seed)
    p1, p2, p3 = (random_program(rng, net, 2) for _ in range(3))
    val = some_valuations(rng, net, 1)[0]
    ex = Executor(net, val)
    for s in enumerate_states(net):
        left = ex.relation(Seq((p1, Seq((p2, p3)))), s)
        right = ex.relation(Seq((Seq((p1, p2)), p3)), s)
        assert left == right
        assert ex.relation(Forall((p1, p2)), s) == ex.relation(Forall((p2, p1)), s)
        assert ex.relation(Exists((p1, p2, p3)), s) == ex.relation(Exists((p3, p1, p2)), s)


def unroll(guard, body, n):
    """``n`` nested copies of ``if guard then body; ... else eps end``.

    The innermost copy has no outcome when the guard still holds, standing
    for "needs more iterations than unrolled".
    """
    inner = If(guard, Assert(FALSE), EPS)
    for _ in range(n):
        inner = If(guard, Seq((body, inner)), EPS)
    return inner


@PROPS
@given(seeds)
def test_while_equals_unrolling(seed):
    rng, net = world(seed)
    v = rng.choice(net.var_names)
    guard = parse_assertion(f"{v}<{net.bounds[v]}")
    body = random_program(rng, net, 2)
    loop = While(guard, TRUE, body)
    ex = Executor(net, some_valuations(rng, net, 1)[0])
    for s in enumerate_states(net):
        coll, exhausted = ex.run(loop, s, 5)
        if not exhausted:
            assert coll == ex.run(unroll(guard, body, 6), s, 0)[0]


@PROPS
@given(seeds)
def test_wp_is_weakest_on_loop_free_programs(seed):
    rng, net = world(seed)
    t = HoareTriple(random_assertion(rng, net, 2, params=True), random_program(rng, net, 4),
                    random_assertion(rng, net, 2, params=True))
    assert cross_check(net, t) == []


@PROPS
@given(seeds)
def test_simplify_each_step_equivalent(seed):
    rng, net = world(seed)
    p = random_program(rng, net, 3)
    q = random_assertion(rng, net, 2)
    a = wp(net, p, q).wp
    b = wp(net, p, q, simplify_each_step=True).wp
    fa, fb = compile_assertion(net, a), compile_assertion(net, b)
    for val in enumerate_valuations(net):
        kvec = net.valuation_vector(val)
        assert all(fa(s, kvec) == fb(s, kvec) for s in enumerate_states(net))


# --- solving ------------------------------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_summary_is_exact_and_pinning_filters(seed):
    rng, net = world(seed)
    t = HoareTriple(random_assertion(rng, net, 2), random_program(rng, net, 3), random_assertion(rng, net, 2))
    rep = solve_triple(net, t, "oracle")
    summary = describe_solution_set(rep)
    again = [net.valuation_vector(v) for v in enumerate_valuations(net) if eval_assertion(summary, {}, v)]
    assert again == rep.consistent
    free = [p for p in net.param_symbols if p not in net.fixed]
    if free:
        p = rng.choice(free)
        k = rng.randint(0, net.bounds[p.var])
        pinned = validate_network(net.variables, net.multiplexes, dict(net.targets), {**net.fixed, p: k})
        sub = solve_triple(pinned, t, "oracle")
        j = net.param_index[p]
        assert sub.consistent == [v for v in rep.consistent if v[j] == k]
