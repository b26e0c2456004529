"""Discrete gene regulatory networks with multiplexes.

A network has bounded integer variables and multiplexes.  Each multiplex
carries a propositional formula over atoms ``v>=s`` and other multiplexes;
each variable is the target of an ordered set of multiplexes (its
predecessors).  The dynamics is driven by logical parameters ``K[v,w]``,
one per variable ``v`` and subset ``w`` of its predecessors.

States are tuples of levels in variable declaration order.  Valuations are
mappings from :class:`ParamSymbol` to integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Union

from .errors import (
    DuplicateName,
    IncompleteValuation,
    MultiplexCycle,
    ParamIndexNotSubsetOfPredecessors,
    ParamOutOfBounds,
    ThresholdOutOfRange,
    UnknownName,
    UnknownVariable,
)

State = tuple  # tuple[int, ...] aligned with Network.var_names


# --- multiplex formulas -----------------------------------------------------


@dataclass(frozen=True)
class VarAtom:
    var: str
    threshold: int

    def __str__(self):
        return f"{self.var}>={self.threshold}"


@dataclass(frozen=True)
class MuxAtom:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class MNot:
    arg: "MFormula"

    def __str__(self):
        return f"!{_mparen(self.arg)}"


@dataclass(frozen=True)
class MAnd:
    left: "MFormula"
    right: "MFormula"

    def __str__(self):
        return f"{_mparen(self.left)} & {_mparen(self.right)}"


@dataclass(frozen=True)
class MOr:
    left: "MFormula"
    right: "MFormula"

    def __str__(self):
        return f"{_mparen(self.left)} | {_mparen(self.right)}"


MFormula = Union[VarAtom, MuxAtom, MNot, MAnd, MOr]


def _mparen(f):
    return f"({f})" if isinstance(f, (MAnd, MOr)) else str(f)


def formula_atoms(f: MFormula) -> Iterator[Union[VarAtom, MuxAtom]]:
    if isinstance(f, (VarAtom, MuxAtom)):
        yield f
    elif isinstance(f, MNot):
        yield from formula_atoms(f.arg)
    else:
        yield from formula_atoms(f.left)
        yield from formula_atoms(f.right)


def eval_mformula(f: MFormula, levels: Mapping[str, int]) -> bool:
    """Evaluate a flat multiplex formula against a variable->level mapping."""
    if isinstance(f, VarAtom):
        return levels[f.var] >= f.threshold
    if isinstance(f, MNot):
        return not eval_mformula(f.arg, levels)
    if isinstance(f, MAnd):
        return eval_mformula(f.left, levels) and eval_mformula(f.right, levels)
    if isinstance(f, MOr):
        return eval_mformula(f.left, levels) or eval_mformula(f.right, levels)
    raise TypeError(f"multiplex atom {f} must be flattened before evaluation")


def _compile_mformula(f: MFormula, index: Mapping[str, int]) -> Callable[[State], bool]:
    if isinstance(f, VarAtom):
        i, s = index[f.var], f.threshold
        return lambda st: st[i] >= s
    if isinstance(f, MNot):
        g = _compile_mformula(f.arg, index)
        return lambda st: not g(st)
    if isinstance(f, (MAnd, MOr)):
        l = _compile_mformula(f.left, index)
        r = _compile_mformula(f.right, index)
        if isinstance(f, MAnd):
            return lambda st: l(st) and r(st)
        return lambda st: l(st) or r(st)
    raise TypeError(f"cannot compile unflattened atom {f}")


# --- parameters ---------------------------------------------------------------


class ParamSymbol(NamedTuple):
    """The logical parameter ``K[var, omega]``; omega is kept sorted."""

    var: str
    omega: tuple

    @classmethod
    def of(cls, var: str, omega: Iterable[str] = ()) -> "ParamSymbol":
        if isinstance(omega, str):
            raise TypeError("omega must be a collection of multiplex names, not a string")
        return cls(var, tuple(sorted(set(omega))))

    def __str__(self):
        return f"K[{self.var},{{{','.join(self.omega)}}}]"


Valuation = Mapping[ParamSymbol, int]


def subsets_binary_order(items: tuple) -> list[tuple]:
    """All subsets of ``items`` in binary-counter order (bit j <-> items[j])."""
    out = []
    for mask in range(1 << len(items)):
        out.append(tuple(x for j, x in enumerate(items) if mask >> j & 1))
    return out


# --- network ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Network:
    """A validated network.  Build it with :func:`validate_network`."""

    variables: tuple  # ((name, bound), ...)
    multiplexes: tuple  # ((name, MFormula), ...)
    targets: tuple  # ((var, (mux, ...) sorted), ...) for every variable
    fixed_params: tuple  # ((ParamSymbol, value), ...) in canonical order

    def __post_init__(self):
        put = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        put("var_names", tuple(v for v, _ in self.variables))
        put("bounds", dict(self.variables))
        put("index", {v: i for i, v in enumerate(self.var_names)})
        put("mux_names", tuple(m for m, _ in self.multiplexes))
        put("formulas", dict(self.multiplexes))
        put("predecessors", dict(self.targets))
        params = tuple(
            ParamSymbol(v, omega)
            for v in self.var_names
            for omega in subsets_binary_order(self.predecessors[v])
        )
        put("param_symbols", params)
        put("param_index", {p: i for i, p in enumerate(params)})
        put("fixed", dict(self.fixed_params))
        put("multiplex_inputs", {
            m: frozenset(a.var if isinstance(a, VarAtom) else a.name for a in formula_atoms(f))
            for m, f in self.multiplexes
        })
        flat = {}
        for m in self.mux_names:
            flat[m] = _flatten(self.formulas, m, flat)
        put("flat", flat)
        put("_mux_eval", {m: _compile_mformula(f, self.index) for m, f in flat.items()})

    def focal_slots(self, state: State) -> tuple:
        """Per variable, the index in ``param_symbols`` of its focal parameter at ``state``.

        Independent of the valuation, so it is computed once per state and cached.
        """
        table = self.__dict__.setdefault("_slots", {})
        hit = table.get(state)
        if hit is None:
            ev = self._mux_eval
            hit = table[state] = tuple(
                self.param_index[ParamSymbol(v, tuple(m for m in self.predecessors[v] if ev[m](state)))]
                for v in self.var_names
            )
        return hit

    def __reduce__(self):
        # derived fields hold closures; rebuild them on unpickling
        return (Network, (self.variables, self.multiplexes, self.targets, self.fixed_params))

    # states

    def state(self, levels: Mapping[str, int] | None = None, **kw) -> State:
        """Build a state tuple from a name->level mapping."""
        levels = dict(levels or {}, **kw)
        unknown = set(levels) - set(self.var_names)
        if unknown:
            raise UnknownVariable(f"unknown variable(s) {sorted(unknown)}")
        missing = [v for v in self.var_names if v not in levels]
        if missing:
            raise UnknownVariable(f"state does not assign {missing}")
        st = tuple(levels[v] for v in self.var_names)
        for v, x in zip(self.var_names, st):
            if not 0 <= x <= self.bounds[v]:
                raise ValueError(f"level {x} of {v} outside [0,{self.bounds[v]}]")
        return st

    def state_dict(self, state: State) -> dict[str, int]:
        return dict(zip(self.var_names, state))

    def format_state(self, state: State) -> str:
        return "(" + ",".join(str(x) for x in state) + ")"

    # parameters

    def param_domain(self, p: ParamSymbol) -> range:
        """Values ``p`` may take in the enumeration (pinned or full range)."""
        if p in self.fixed:
            return range(self.fixed[p], self.fixed[p] + 1)
        return range(self.bounds[p.var] + 1)

    def param(self, var: str, omega: Iterable[str] = ()) -> ParamSymbol:
        p = ParamSymbol.of(var, omega)
        if var not in self.bounds:
            raise UnknownVariable(f"unknown variable {var!r}")
        if p not in self.param_index:
            raise ParamIndexNotSubsetOfPredecessors(
                f"{p}: {{{','.join(p.omega)}}} is not a subset of the predecessors of {var}"
            )
        return p

    def valuation_vector(self, valuation: Valuation) -> tuple:
        return tuple(valuation[p] for p in self.param_symbols)

    def vector_valuation(self, vec: tuple) -> dict[ParamSymbol, int]:
        return dict(zip(self.param_symbols, vec))


def _flatten(formulas, m, memo):
    if m in memo:
        return memo[m]

    def sub(f):
        if isinstance(f, MuxAtom):
            return _flatten(formulas, f.name, memo)
        if isinstance(f, VarAtom):
            return f
        if isinstance(f, MNot):
            return MNot(sub(f.arg))
        return type(f)(sub(f.left), sub(f.right))

    memo[m] = sub(formulas[m])
    return memo[m]


def _find_mux_cycle(formulas: Mapping[str, MFormula]) -> list[str] | None:
    deps = {
        m: [a.name for a in formula_atoms(f) if isinstance(a, MuxAtom)]
        for m, f in formulas.items()
    }
    WHITE, GREY, BLACK = 0, 1, 2
    colour = dict.fromkeys(deps, WHITE)
    stack: list[str] = []

    def visit(m):
        colour[m] = GREY
        stack.append(m)
        for n in deps[m]:
            if colour[n] == GREY:
                return stack[stack.index(n):] + [n]
            if colour[n] == WHITE:
                cyc = visit(n)
                if cyc:
                    return cyc
        stack.pop()
        colour[m] = BLACK
        return None

    for m in deps:
        if colour[m] == WHITE:
            cyc = visit(m)
            if cyc:
                return cyc
    return None


def validate_network(
    variables: Iterable[tuple[str, int]],
    multiplexes: Iterable[tuple[str, MFormula]] = (),
    targets: Mapping[str, Iterable[str]] | Iterable[tuple[str, Iterable[str]]] = (),
    fixed_params: Mapping | Iterable = (),
) -> Network:
    """Check a raw network description and return a :class:`Network`.

    ``targets`` maps each variable to the multiplexes regulating it; several
    declarations for the same variable are merged.  ``fixed_params`` pins
    parameters, keyed by :class:`ParamSymbol` or ``(var, omega)`` pairs.
    """
    variables = [(str(v), b) for v, b in variables]
    multiplexes = list(multiplexes)
    seen: set[str] = set()
    for v, b in variables:
        if v in seen:
            raise DuplicateName(f"variable {v!r} declared twice")
        seen.add(v)
        if not isinstance(b, int) or b < 1:
            raise ThresholdOutOfRange(f"bound of {v!r} must be a positive integer, got {b!r}")
    bounds = dict(variables)
    for m, _ in multiplexes:
        if m in seen:
            raise DuplicateName(f"name {m!r} declared twice")
        seen.add(m)
    formulas = dict(multiplexes)

    for m, f in multiplexes:
        for a in formula_atoms(f):
            if isinstance(a, VarAtom):
                if a.var not in bounds:
                    raise UnknownName(f"multiplex {m!r} references unknown variable {a.var!r}")
                if not 1 <= a.threshold <= bounds[a.var]:
                    raise ThresholdOutOfRange(
                        f"multiplex {m!r}: threshold {a.threshold} of {a.var!r} outside [1,{bounds[a.var]}]"
                    )
            elif a.name not in formulas:
                raise UnknownName(f"multiplex {m!r} references unknown multiplex {a.name!r}")
    cycle = _find_mux_cycle(formulas)
    if cycle:
        raise MultiplexCycle("multiplex-only cycle: " + " -> ".join(cycle))

    preds: dict[str, set[str]] = {v: set() for v in bounds}
    items = targets.items() if isinstance(targets, Mapping) else targets
    for v, ms in items:
        if v not in bounds:
            raise UnknownName(f"target of unknown variable {v!r}")
        for m in ms:
            if m not in formulas:
                raise UnknownName(f"unknown multiplex {m!r} targeting {v!r}")
            preds[v].add(m)
    target_tuple = tuple((v, tuple(sorted(preds[v]))) for v, _ in variables)

    fixed: dict[ParamSymbol, int] = {}
    items = fixed_params.items() if isinstance(fixed_params, Mapping) else fixed_params
    for key, value in items:
        var, omega = key
        p = ParamSymbol.of(var, omega)
        if var not in bounds:
            raise UnknownName(f"parameter of unknown variable {var!r}")
        if not set(p.omega) <= preds[var]:
            raise ParamIndexNotSubsetOfPredecessors(
                f"{p}: {{{','.join(p.omega)}}} is not a subset of the predecessors of {var}"
            )
        if not 0 <= value <= bounds[var]:
            raise ParamOutOfBounds(f"{p} = {value} outside [0,{bounds[var]}]")
        if p in fixed and fixed[p] != value:
            raise ParamOutOfBounds(f"{p} pinned to both {fixed[p]} and {value}")
        fixed[p] = value

    net = Network(tuple(variables), tuple(multiplexes), target_tuple, ())
    ordered = tuple((p, fixed[p]) for p in net.param_symbols if p in fixed)
    return Network(tuple(variables), tuple(multiplexes), target_tuple, ordered)


def check_valuation(network: Network, valuation: Valuation) -> None:
    """Raise unless ``valuation`` is total, in bounds and agrees with the pins."""
    missing = [str(p) for p in network.param_symbols if p not in valuation]
    if missing:
        raise IncompleteValuation("valuation misses " + ", ".join(missing))
    extra = [str(p) for p in valuation if p not in network.param_index]
    if extra:
        raise ParamIndexNotSubsetOfPredecessors("valuation has unknown parameters " + ", ".join(extra))
    for p in network.param_symbols:
        k = valuation[p]
        if not 0 <= k <= network.bounds[p.var]:
            raise ParamOutOfBounds(f"{p} = {k} outside [0,{network.bounds[p.var]}]")
        if p in network.fixed and network.fixed[p] != k:
            raise ParamOutOfBounds(f"{p} = {k} conflicts with pinned value {network.fixed[p]}")


# --- dynamics -------------------------------------------------------------------


def flatten(network: Network, m: str) -> MFormula:
    """Formula of multiplex ``m`` with every multiplex atom expanded."""
    if m not in network.flat:
        raise UnknownName(f"unknown multiplex {m!r}")
    return network.flat[m]


def resources(network: Network, state: State, v: str) -> tuple:
    """Sorted tuple of the predecessors of ``v`` whose formulas hold at ``state``."""
    if v not in network.predecessors:
        raise UnknownVariable(f"unknown variable {v!r}")
    ev = network._mux_eval
    return tuple(m for m in network.predecessors[v] if ev[m](state))


def focal_level(network: Network, valuation: Valuation, state: State, v: str) -> int:
    return valuation[ParamSymbol(v, resources(network, state, v))]


def successors(network: Network, valuation: Valuation, state: State) -> tuple:
    """Successor states in the asynchronous state graph.

    A stable state has itself as sole successor; otherwise every variable not
    at its focal level moves one unit towards it.  Ordered by variable.
    """
    out = []
    syms = network.param_symbols
    for i, slot in enumerate(network.focal_slots(state)):
        k = valuation[syms[slot]]
        x = state[i]
        if x != k:
            out.append(state[:i] + (x + 1 if x < k else x - 1,) + state[i + 1:])
    return tuple(out) if out else (state,)


def is_stable(network: Network, valuation: Valuation, state: State) -> bool:
    return all(
        state[i] == focal_level(network, valuation, state, v)
        for i, v in enumerate(network.var_names)
    )


def enumerate_states(network: Network) -> list[State]:
    """All states, lexicographic in variable order."""
    return list(itertools.product(*(range(b + 1) for _, b in network.variables)))


def state_graph(network: Network, valuation: Valuation) -> dict[State, tuple]:
    """The whole asynchronous state graph as ``state -> successors``."""
    return {s: successors(network, valuation, s) for s in enumerate_states(network)}
