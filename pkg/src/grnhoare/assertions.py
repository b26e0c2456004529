"""Assertion language: terms over variables and parameters, and formulas.

Terms are built from natural constants, variable symbols, parameter symbols,
``+`` and ``-``; they are interpreted over the integers so intermediate
values may be negative.  Formulas combine comparison atoms with ``!``,
``&``, ``|`` and ``=>``.  ``true``/``false`` are admitted as normal forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Union

from .errors import SizeLimitExceeded, UnknownSymbol
from .network import Network, ParamSymbol, State, Valuation, enumerate_states

# --- terms ------------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class VarSym:
    name: str


@dataclass(frozen=True)
class ParamRef:
    sym: ParamSymbol


@dataclass(frozen=True)
class Plus:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Minus:
    left: "Term"
    right: "Term"


Term = Union[Const, VarSym, ParamRef, Plus, Minus]

# --- formulas ---------------------------------------------------------------------

CMP_OPS = ("=", "<", ">", "<=", ">=")


@dataclass(frozen=True)
class Cmp:
    op: str
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    arg: "Assertion"


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Implies:
    left: "Assertion"
    right: "Assertion"


@dataclass(frozen=True)
class BoolConst:
    value: bool


TRUE = BoolConst(True)
FALSE = BoolConst(False)

Assertion = Union[Cmp, Not, And, Or, Implies, BoolConst]


def conj(*parts: Assertion) -> Assertion:
    """n-ary conjunction with nested Ands and ``true`` removed."""
    out = []
    for p in parts:
        if isinstance(p, And):
            out.extend(p.args)
        elif p != TRUE:
            out.append(p)
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(*parts: Assertion) -> Assertion:
    out = []
    for p in parts:
        if isinstance(p, Or):
            out.extend(p.args)
        elif p != FALSE:
            out.append(p)
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(tuple(out))


def var(name: str) -> VarSym:
    return VarSym(name)


def atom(left, op: str, right) -> Cmp:
    """Comparison atom; ints and strings are lifted to constants and variables."""
    return Cmp(op, _lift(left), _lift(right))


def _lift(t):
    if isinstance(t, int):
        return Const(t)
    if isinstance(t, str):
        return VarSym(t)
    if isinstance(t, ParamSymbol):
        return ParamRef(t)
    return t


# --- printing ---------------------------------------------------------------------


def format_term(t: Term) -> str:
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, VarSym):
        return t.name
    if isinstance(t, ParamRef):
        return str(t.sym)
    op = "+" if isinstance(t, Plus) else "-"
    right = format_term(t.right)
    if isinstance(t.right, (Plus, Minus)):
        right = f"({right})"
    return f"{format_term(t.left)}{op}{right}"


_PREC = {Implies: 1, Or: 2, And: 3, Not: 4, Cmp: 5, BoolConst: 5}


def format_assertion(a: Assertion) -> str:
    """Concrete syntax; parsing the result gives back the same tree."""
    if isinstance(a, BoolConst):
        return "true" if a.value else "false"
    if isinstance(a, Cmp):
        return f"{format_term(a.left)}{a.op}{format_term(a.right)}"
    if isinstance(a, Not):
        inner = format_assertion(a.arg)
        return f"!{inner}" if isinstance(a.arg, (Not, BoolConst)) else f"!({inner})"
    if isinstance(a, And):
        return " & ".join(_wrap(x, lambda p: p <= 3) for x in a.args)
    if isinstance(a, Or):
        return " | ".join(_wrap(x, lambda p: p <= 2) for x in a.args)
    if isinstance(a, Implies):
        return f"{_wrap(a.left, lambda p: p <= 1)} => {format_assertion(a.right)}"
    raise TypeError(f"not an assertion: {a!r}")


def _wrap(a, needs):
    s = format_assertion(a)
    return f"({s})" if needs(_PREC[type(a)]) else s


# --- traversal ----------------------------------------------------------------------


def term_symbols(t: Term) -> Iterable[Union[VarSym, ParamRef]]:
    if isinstance(t, (VarSym, ParamRef)):
        yield t
    elif isinstance(t, (Plus, Minus)):
        yield from term_symbols(t.left)
        yield from term_symbols(t.right)


def symbols(a: Assertion) -> set:
    """Variable and parameter symbols occurring in ``a``."""
    out: set = set()

    def walk(x):
        if isinstance(x, Cmp):
            out.update(term_symbols(x.left))
            out.update(term_symbols(x.right))
        elif isinstance(x, Not):
            walk(x.arg)
        elif isinstance(x, (And, Or)):
            for y in x.args:
                walk(y)
        elif isinstance(x, Implies):
            walk(x.left)
            walk(x.right)

    walk(a)
    return out


def check_symbols(network: Network, a: Assertion) -> None:
    for s in symbols(a):
        if isinstance(s, VarSym) and s.name not in network.index:
            raise UnknownSymbol(f"unknown variable {s.name!r}")
        if isinstance(s, ParamRef) and s.sym not in network.param_index:
            raise UnknownSymbol(f"unknown parameter {s.sym}")


def substitute_term(t: Term, v: str, by: Term) -> Term:
    if isinstance(t, VarSym):
        return by if t.name == v else t
    if isinstance(t, (Plus, Minus)):
        return type(t)(substitute_term(t.left, v, by), substitute_term(t.right, v, by))
    return t


def substitute(a: Assertion, v: str, by: Term) -> Assertion:
    """``a[v <- by]``: replace every occurrence of variable ``v``."""
    if isinstance(a, Cmp):
        return Cmp(a.op, substitute_term(a.left, v, by), substitute_term(a.right, v, by))
    if isinstance(a, Not):
        return Not(substitute(a.arg, v, by))
    if isinstance(a, (And, Or)):
        return type(a)(tuple(substitute(x, v, by) for x in a.args))
    if isinstance(a, Implies):
        return Implies(substitute(a.left, v, by), substitute(a.right, v, by))
    return a


# --- evaluation ---------------------------------------------------------------------


def eval_term(t: Term, state: Mapping[str, int], valuation: Valuation) -> int:
    if isinstance(t, Const):
        return t.value
    if isinstance(t, VarSym):
        try:
            return state[t.name]
        except KeyError:
            raise UnknownSymbol(f"unknown variable {t.name!r}") from None
    if isinstance(t, ParamRef):
        try:
            return valuation[t.sym]
        except KeyError:
            raise UnknownSymbol(f"unknown parameter {t.sym}") from None
    if isinstance(t, Plus):
        return eval_term(t.left, state, valuation) + eval_term(t.right, state, valuation)
    return eval_term(t.left, state, valuation) - eval_term(t.right, state, valuation)


_CMP = {
    "=": lambda x, y: x == y,
    "<": lambda x, y: x < y,
    ">": lambda x, y: x > y,
    "<=": lambda x, y: x <= y,
    ">=": lambda x, y: x >= y,
}


def eval_assertion(a: Assertion, state: Mapping[str, int], valuation: Valuation) -> bool:
    """Truth value of ``a`` with variables read from ``state`` (a name->level map)."""
    if isinstance(a, BoolConst):
        return a.value
    if isinstance(a, Cmp):
        return _CMP[a.op](eval_term(a.left, state, valuation), eval_term(a.right, state, valuation))
    if isinstance(a, Not):
        return not eval_assertion(a.arg, state, valuation)
    if isinstance(a, And):
        return all(eval_assertion(x, state, valuation) for x in a.args)
    if isinstance(a, Or):
        return any(eval_assertion(x, state, valuation) for x in a.args)
    if isinstance(a, Implies):
        return not eval_assertion(a.left, state, valuation) or eval_assertion(a.right, state, valuation)
    raise TypeError(f"not an assertion: {a!r}")


def linearize(t: Term) -> tuple[int, dict]:
    """``t`` as ``(constant, {symbol: coefficient})``; every term is linear."""
    coeffs: dict = {}
    const = 0

    def go(x, sign):
        nonlocal const
        if isinstance(x, Const):
            const += sign * x.value
        elif isinstance(x, (VarSym, ParamRef)):
            coeffs[x] = coeffs.get(x, 0) + sign
        elif isinstance(x, Plus):
            go(x.left, sign)
            go(x.right, sign)
        else:
            go(x.left, sign)
            go(x.right, -sign)

    go(t, 1)
    return const, {s: c for s, c in coeffs.items() if c}


Compiled = Callable[[State, tuple], bool]


def compile_assertion(network: Network, a: Assertion) -> Compiled:
    """Fast evaluator taking a state tuple and a parameter vector.

    The parameter vector is aligned with ``network.param_symbols``.
    """
    check_symbols(network, a)
    return _compile(network, a)


# Deeper formulas go through closures; CPython's parser caps nesting depth.
MAX_SOURCE_DEPTH = 90

_PY_OPS = {"=": "==", "<": "<", ">": ">", "<=": "<=", ">=": ">="}


class _TooDeep(Exception):
    pass


def _source(network, a, depth=0) -> str:
    """Python expression over ``s`` (state) and ``k`` (parameter vector)."""
    if depth > MAX_SOURCE_DEPTH:
        raise _TooDeep
    if isinstance(a, BoolConst):
        return "True" if a.value else "False"
    if isinstance(a, Cmp):
        c, coeffs = linearize(Minus(a.left, a.right))
        parts = []
        for x, n in coeffs.items():
            ref = f"s[{network.index[x.name]}]" if isinstance(x, VarSym) else f"k[{network.param_index[x.sym]}]"
            parts.append(f"{n}*{ref}" if n != 1 else ref)
        lhs = " + ".join(parts) if parts else "0"
        return f"({lhs} {_PY_OPS[a.op]} {-c})"
    if isinstance(a, Not):
        return f"(not {_source(network, a.arg, depth + 1)})"
    if isinstance(a, (And, Or)):
        joiner = " and " if isinstance(a, And) else " or "
        return "(" + joiner.join(_source(network, x, depth + 1) for x in a.args) + ")"
    if isinstance(a, Implies):
        return f"(not {_source(network, a.left, depth + 1)} or {_source(network, a.right, depth + 1)})"
    raise TypeError(f"not an assertion: {a!r}")


def _compile(network, a):
    try:
        src = _source(network, a)
        return eval(compile(f"lambda s, k: {src}", "<assertion>", "eval"))  # noqa: S307
    except (_TooDeep, RecursionError, SyntaxError, MemoryError):
        return _compile_closures(network, a)


def _compile_closures(network, a):
    if isinstance(a, BoolConst):
        v = a.value
        return lambda s, k: v
    if isinstance(a, Cmp):
        c, coeffs = linearize(Minus(a.left, a.right))
        sv = tuple((network.index[x.name], n) for x, n in coeffs.items() if isinstance(x, VarSym))
        kv = tuple((network.param_index[x.sym], n) for x, n in coeffs.items() if isinstance(x, ParamRef))
        op = a.op

        def lin(s, k):
            total = c
            for i, n in sv:
                total += n * s[i]
            for j, n in kv:
                total += n * k[j]
            return total

        if op == "=":
            return lambda s, k: lin(s, k) == 0
        if op == "<":
            return lambda s, k: lin(s, k) < 0
        if op == ">":
            return lambda s, k: lin(s, k) > 0
        if op == "<=":
            return lambda s, k: lin(s, k) <= 0
        return lambda s, k: lin(s, k) >= 0
    if isinstance(a, Not):
        g = _compile_closures(network, a.arg)
        return lambda s, k: not g(s, k)
    if isinstance(a, And):
        gs = tuple(_compile_closures(network, x) for x in a.args)
        return lambda s, k: all(g(s, k) for g in gs)
    if isinstance(a, Or):
        gs = tuple(_compile_closures(network, x) for x in a.args)
        return lambda s, k: any(g(s, k) for g in gs)
    if isinstance(a, Implies):
        l, r = _compile_closures(network, a.left), _compile_closures(network, a.right)
        return lambda s, k: not l(s, k) or r(s, k)
    raise TypeError(f"not an assertion: {a!r}")


# --- finite-domain checks -------------------------------------------------------------

DEFAULT_SEARCH_CAP = 1 << 24


def check_validity(network: Network, a: Assertion, valuation: Valuation) -> bool:
    """True iff ``a`` holds at every state under ``valuation``."""
    return first_counterexample(network, a, valuation) is None


def first_counterexample(network: Network, a: Assertion, valuation: Valuation) -> State | None:
    f = compile_assertion(network, a)
    k = network.valuation_vector(valuation)
    for s in enumerate_states(network):
        if not f(s, k):
            return s
    return None


def _symbol_domains(network: Network, syms) -> list:
    out = []
    for x in sorted(syms, key=lambda x: _symbol_order(network, x)):
        if isinstance(x, VarSym):
            out.append((x, range(network.bounds[x.name] + 1)))
        else:
            out.append((x, network.param_domain(x.sym)))
    return out


def _symbol_order(network, x):
    if isinstance(x, VarSym):
        return (0, network.index[x.name])
    return (1, network.param_index[x.sym])


def find_model(network: Network, a: Assertion, cap: int = DEFAULT_SEARCH_CAP):
    """Some ``(state, valuation vector)`` satisfying ``a``, or None.

    Only the symbols occurring in ``a`` are enumerated; the others are set
    to the first value of their domain.  Parameters respect pinned values.
    """
    check_symbols(network, a)
    doms = _symbol_domains(network, symbols(a))
    size = 1
    for _, d in doms:
        size *= len(d)
    if size > cap:
        raise SizeLimitExceeded(f"satisfiability search over {size} assignments exceeds cap {cap}")
    f = _compile(network, a)
    state = [0] * len(network.var_names)
    kvec = [network.param_domain(p)[0] for p in network.param_symbols]
    slots = [
        (state, network.index[x.name]) if isinstance(x, VarSym) else (kvec, network.param_index[x.sym])
        for x, _ in doms
    ]
    for combo in itertools.product(*(d for _, d in doms)):
        for (buf, i), val in zip(slots, combo):
            buf[i] = val
        s, k = tuple(state), tuple(kvec)
        if f(s, k):
            return s, k
    return None


def check_satisfiability(network: Network, a: Assertion, cap: int = DEFAULT_SEARCH_CAP) -> bool:
    """True iff some state and some valuation within bounds satisfy ``a``."""
    return find_model(network, a, cap) is not None


def equivalent(network: Network, a: Assertion, b: Assertion, cap: int = DEFAULT_SEARCH_CAP) -> bool:
    """Exhaustive check that ``a`` and ``b`` agree on every bounded assignment."""
    diff = Or((And((a, Not(b))), And((b, Not(a)))))
    return find_model(network, diff, cap) is None
