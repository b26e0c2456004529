"""Seeded generators of small networks, programs and assertions.

Used by the oracle/wp cross-check campaign and the property tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .assertions import FALSE, TRUE, Cmp, Const, Implies, Minus, Not, ParamRef, Plus, VarSym, conj, disj
from .network import MAnd, MNot, MOr, MuxAtom, Network, VarAtom, validate_network
from .programs import EPS, Assert, Assign, Dec, Exists, Forall, HoareTriple, If, Inc, seq

VAR_NAMES = "abc"


@dataclass
class RandomConfig:
    max_vars: int = 3
    max_bound: int = 2
    max_mux_per_var: int = 2
    program_depth: int = 4
    assertion_depth: int = 2
    # when set, pin parameters until at most this many valuations remain
    valuation_budget: int | None = None


def random_mformula(rng: random.Random, bounds: dict, earlier: list, depth: int = 2):
    r = rng.random()
    if depth <= 0 or r < 0.45:
        if earlier and rng.random() < 0.2:
            return MuxAtom(rng.choice(earlier))
        v = rng.choice(sorted(bounds))
        return VarAtom(v, rng.randint(1, bounds[v]))
    if r < 0.6:
        return MNot(random_mformula(rng, bounds, earlier, depth - 1))
    cls = MAnd if r < 0.8 else MOr
    return cls(random_mformula(rng, bounds, earlier, depth - 1),
               random_mformula(rng, bounds, earlier, depth - 1))


def random_network(rng: random.Random, cfg: RandomConfig = RandomConfig()) -> Network:
    n = rng.randint(1, cfg.max_vars)
    variables = [(VAR_NAMES[i], rng.randint(1, cfg.max_bound)) for i in range(n)]
    bounds = dict(variables)
    multiplexes, targets = [], []
    for v, _ in variables:
        ms = []
        for _ in range(rng.randint(0, cfg.max_mux_per_var)):
            name = f"m{len(multiplexes)}"
            earlier = [m for m, _ in multiplexes]
            multiplexes.append((name, random_mformula(rng, bounds, earlier)))
            ms.append(name)
        targets.append((v, ms))
    net = validate_network(variables, multiplexes, targets)
    if cfg.valuation_budget is None:
        return net
    return pin_until(rng, net, cfg.valuation_budget)


def pin_until(rng: random.Random, net: Network, budget: int) -> Network:
    """Pin random parameters to random values until few enough valuations remain."""
    fixed = dict(net.fixed)
    free = [p for p in net.param_symbols if p not in fixed]
    rng.shuffle(free)

    def count():
        n = 1
        for p in net.param_symbols:
            n *= 1 if p in fixed else net.bounds[p.var] + 1
        return n

    while free and count() > budget:
        p = free.pop()
        fixed[p] = rng.randint(0, net.bounds[p.var])
    if fixed == net.fixed:
        return net
    return validate_network(net.variables, net.multiplexes, dict(net.targets), fixed)


def random_term(rng: random.Random, net: Network, params: bool, depth: int = 1):
    r = rng.random()
    if depth <= 0 or r < 0.7:
        if params and rng.random() < 0.3:
            return ParamRef(rng.choice(net.param_symbols))
        if rng.random() < 0.25:
            return Const(rng.randint(0, 2))
        return VarSym(rng.choice(net.var_names))
    cls = Plus if r < 0.85 else Minus
    return cls(random_term(rng, net, params, depth - 1), random_term(rng, net, params, depth - 1))


def random_assertion(rng: random.Random, net: Network, depth: int = 2, params: bool = False):
    r = rng.random()
    if depth <= 0 or r < 0.4:
        if rng.random() < 0.05:
            return rng.choice((TRUE, FALSE))
        op = rng.choice(("=", "<", ">", "<=", ">="))
        v = VarSym(rng.choice(net.var_names))
        if rng.random() < 0.6:
            return Cmp(op, v, Const(rng.randint(0, net.bounds[v.name])))
        return Cmp(op, random_term(rng, net, params), random_term(rng, net, params))
    if r < 0.55:
        return Not(random_assertion(rng, net, depth - 1, params))
    if r < 0.9:
        build = conj if r < 0.75 else disj
        return build(random_assertion(rng, net, depth - 1, params),
                     random_assertion(rng, net, depth - 1, params))
    return Implies(random_assertion(rng, net, depth - 1, params),
                   random_assertion(rng, net, depth - 1, params))


def random_program(rng: random.Random, net: Network, depth: int = 4):
    """A loop-free program of nesting depth at most ``depth``."""
    r = rng.random()
    if depth <= 1 or r < 0.4:
        v = rng.choice(net.var_names)
        k = rng.random()
        if k < 0.4:
            return Inc(v)
        if k < 0.8:
            return Dec(v)
        if k < 0.88:
            return Assign(v, rng.randint(0, net.bounds[v]))
        if k < 0.96:
            return Assert(random_assertion(rng, net, 1))
        return EPS
    sub = lambda: random_program(rng, net, depth - 1)  # noqa: E731
    if r < 0.65:
        parts = [sub() for _ in range(rng.randint(2, 3))]
        parts = [p for p in parts if p is not EPS] or [EPS]
        return seq(*parts)
    if r < 0.75:
        return If(random_assertion(rng, net, 1), sub(), sub())
    cls = Forall if r < 0.87 else Exists
    return cls(tuple(sub() for _ in range(2)))


def random_triple(rng: random.Random, net: Network, cfg: RandomConfig = RandomConfig()) -> HoareTriple:
    return HoareTriple(
        random_assertion(rng, net, cfg.assertion_depth, params=True),
        random_program(rng, net, cfg.program_depth),
        random_assertion(rng, net, cfg.assertion_depth, params=True),
    )
