"""Reference semantics of path programs on the state graph.

``rel`` computes every set ``E`` with ``state ~p~> E`` for one valuation by
brute force over sets of states.  Loops are unrolled under a fuel budget
that bounds how many body iterations may be nested along one unrolling.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Union

from .assertions import compile_assertion
from .errors import ResultTooLarge
from .network import Network, State, Valuation, check_valuation, enumerate_states
from .programs import (
    Assert,
    Assign,
    Dec,
    Epsilon,
    Exists,
    Forall,
    HoareTriple,
    If,
    Inc,
    Program,
    Seq,
    While,
)

DEFAULT_FUEL = 256
DEFAULT_MAX_SETS = 10**6


def max_sets_default() -> int:
    env = os.environ.get("GRNHOARE_MAX_SETS")
    return int(env) if env else DEFAULT_MAX_SETS


@dataclass(frozen=True)
class Sets:
    """Feasible: the canonically ordered collection of result sets."""

    sets: tuple  # tuple of sorted tuples of states


@dataclass(frozen=True)
class Infeasible:
    pass


@dataclass(frozen=True)
class FuelExhausted:
    pass


RelationResult = Union[Sets, Infeasible, FuelExhausted]


@dataclass(frozen=True)
class Holds:
    pass


@dataclass(frozen=True)
class Fails:
    witness: State


@dataclass(frozen=True)
class Undetermined:
    states: tuple  # states whose verdict fuel could not settle


Verdict = Union[Holds, Fails, Undetermined]


def canonical(collection) -> tuple:
    return tuple(sorted(tuple(sorted(e)) for e in collection))


class Executor:
    """Evaluates programs for one network and one valuation.

    Results are memoised per (program node, state, fuel).  The internal
    ``run`` returns ``(collection, exhausted)``: every set in the collection
    is genuinely related to the state; ``exhausted`` records that fuel ran
    out somewhere, so more sets might exist.
    """

    def __init__(self, network: Network, valuation: Valuation, max_sets: int | None = None,
                 guards: dict | None = None):
        check_valuation(network, valuation)
        self.net = network
        self.kvec = network.valuation_vector(valuation)
        self.max_sets = max_sets if max_sets is not None else max_sets_default()
        self._memo: dict = {}
        # compiled guards depend only on the network; callers running many
        # valuations pass one dict to share them
        self._guards: dict = {} if guards is None else guards

    def holds(self, a, state: State) -> bool:
        f = self._guards.get(id(a))
        if f is None:
            f = self._guards[id(a)] = (compile_assertion(self.net, a), a)
        return f[0](state, self.kvec)

    def _check(self, collection):
        if len(collection) > self.max_sets:
            raise ResultTooLarge(f"more than {self.max_sets} result sets")

    def run(self, p: Program, state: State, fuel: int):
        handler = _LEAVES.get(type(p))
        if handler is not None:
            # leaves are cheaper to recompute than to look up
            return handler(self, p, state), False
        key = (id(p), state, fuel)
        hit = self._memo.get(key)
        if hit is not None and hit[2] is p:
            return hit[0], hit[1]
        handler = _COMPOUND.get(type(p))
        if handler is None:
            raise TypeError(f"not a program: {p!r}")
        out, exhausted = handler(self, p, state, fuel)
        self._memo[key] = (out, exhausted, p)
        return out, exhausted

    # leaves: (self, p, state) -> collection

    def _step(self, p, state, up):
        # v moves one step towards its focal level, so the step exists iff
        # the focal level lies on that side of the current level
        i = self.net.index[p.var]
        k = self.kvec[self.net.focal_slots(state)[i]]
        x = state[i]
        if (x < k) if up else (x > k):
            return frozenset((frozenset((state[:i] + (x + 1 if up else x - 1,) + state[i + 1:],)),))
        return _EMPTY

    def _inc(self, p, state):
        return self._step(p, state, True)

    def _dec(self, p, state):
        return self._step(p, state, False)

    def _assign(self, p, state):
        i = self.net.index[p.var]
        return frozenset((frozenset((state[:i] + (p.value,) + state[i + 1:],)),))

    def _assert(self, p, state):
        return frozenset((frozenset((state,)),)) if self.holds(p.cond, state) else _EMPTY

    def _eps(self, p, state):
        return frozenset((frozenset((state,)),))

    # compound nodes: (self, p, state, fuel) -> (collection, exhausted)

    def _forall(self, p, state, fuel):
        exhausted = False
        results = []
        for b in p.branches:
            coll, ex = self.run(b, state, fuel)
            exhausted |= ex
            results.append(coll)
        out = {frozenset().union(*choice) for choice in itertools.product(*results)}
        self._check(out)
        return frozenset(out), exhausted

    def _exists(self, p, state, fuel):
        exhausted = False
        out = set()
        for b in p.branches:
            coll, ex = self.run(b, state, fuel)
            exhausted |= ex
            out |= coll
        self._check(out)
        return frozenset(out), exhausted

    def _seq(self, p, state, fuel):
        return self._sequence(p.parts, state, fuel)

    def _if(self, p, state, fuel):
        branch = p.then if self.holds(p.cond, state) else p.orelse
        return self.run(branch, state, fuel)

    def _while(self, p, state, fuel):
        if not self.holds(p.cond, state):
            return frozenset((frozenset((state,)),)), False
        if fuel <= 0:
            return _EMPTY, True
        return self._sequence((p.body, p), state, fuel - 1)

    def _sequence(self, parts, state, fuel):
        current = {frozenset({state})}
        exhausted = False
        for part in parts:
            nxt = set()
            for group in current:
                if len(group) == 1:
                    (e,) = group
                    coll, ex = self.run(part, e, fuel)
                    exhausted |= ex
                    nxt |= coll
                    if len(nxt) > self.max_sets:
                        raise ResultTooLarge(f"more than {self.max_sets} result sets")
                    continue
                options = []
                for e in sorted(group):
                    coll, ex = self.run(part, e, fuel)
                    exhausted |= ex
                    if not coll:
                        options = None
                        break
                    options.append(coll)
                if options is None:
                    continue
                for choice in itertools.product(*options):
                    nxt.add(frozenset().union(*choice))
                    if len(nxt) > self.max_sets:
                        raise ResultTooLarge(f"more than {self.max_sets} result sets")
            current = nxt
            if not current:
                break
        return frozenset(current), exhausted

    def relation(self, p: Program, state: State, fuel: int = DEFAULT_FUEL) -> RelationResult:
        coll, exhausted = self.run(p, state, fuel)
        if exhausted:
            return FuelExhausted()
        if not coll:
            return Infeasible()
        return Sets(canonical(coll))

    def reaches(self, p: Program, state: State, post, fuel: int = DEFAULT_FUEL):
        """Whether some related set lies inside ``post``; None if fuel ran out first."""
        coll, exhausted = self.run(p, state, fuel)
        for e in coll:
            if all(self.holds(post, s) for s in e):
                return True
        return None if exhausted else False


_EMPTY: frozenset = frozenset()
_LEAVES = {Inc: Executor._inc, Dec: Executor._dec, Assign: Executor._assign,
           Assert: Executor._assert, Epsilon: Executor._eps}
_COMPOUND = {Forall: Executor._forall, Exists: Executor._exists, Seq: Executor._seq,
             If: Executor._if, While: Executor._while}


def rel(
    network: Network,
    valuation: Valuation,
    program: Program,
    state: State,
    fuel: int = DEFAULT_FUEL,
    max_sets: int | None = None,
) -> RelationResult:
    """All sets ``E`` with ``state ~program~> E``; any fuel shortfall gives FuelExhausted."""
    return Executor(network, valuation, max_sets).relation(program, state, fuel)


def triple_holds(
    network: Network,
    valuation: Valuation,
    triple: HoareTriple,
    fuel: int = DEFAULT_FUEL,
    max_sets: int | None = None,
    executor: Executor | None = None,
) -> Verdict:
    """Decide a Hoare triple for one valuation by running the program from each state.

    A failure at any state is conclusive and reported with the first such
    state.  Otherwise, states where fuel ran out before a good set was found
    make the verdict Undetermined.
    """
    ex = executor or Executor(network, valuation, max_sets)
    unsettled = []
    for s in enumerate_states(network):
        if not ex.holds(triple.pre, s):
            continue
        ok = ex.reaches(triple.program, s, triple.post, fuel)
        if ok is False:
            return Fails(s)
        if ok is None:
            unsettled.append(s)
    return Undetermined(tuple(unsettled)) if unsettled else Holds()
