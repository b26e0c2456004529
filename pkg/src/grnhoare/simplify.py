"""Best-effort simplification of assertions under the boundary axioms.

Every symbol ranges over ``0..b`` (``b`` the bound of its variable).  Atoms
are linear, so each one is normalised to ``sum(c*x) + d  (=|!=|>=)  0`` and
decided by interval reasoning where possible.  Atoms over a single symbol
become *facts* (the set of values the symbol may take); facts found in a
conjunction or in the guard of an implication narrow the domains used to
simplify the sibling formulas.

The result is equivalent to the input for every assignment within bounds.
Pinned parameter values are deliberately ignored.
"""

from __future__ import annotations

import itertools

from .assertions import (
    FALSE,
    TRUE,
    And,
    Assertion,
    BoolConst,
    Cmp,
    Const,
    Implies,
    Minus,
    Not,
    Or,
    ParamRef,
    Plus,
    VarSym,
    _compile,
    conj,
    disj,
    linearize,
    symbols,
)
from .network import Network

PROBE_DOMAIN_LIMIT = 4  # probe variables with at most this many values
DECIDE_LIMIT = 256  # decide sub-formulas by enumeration below this many assignments
MAX_ROUNDS = 8


def simplify(network: Network, a: Assertion) -> Assertion:
    return _Simplifier(network).run(a)


class _Simplifier:
    def __init__(self, network: Network):
        self.net = network
        self._bdom: dict = {}

    # domains and ordering

    def bdom(self, x) -> frozenset:
        d = self._bdom.get(x)
        if d is None:
            b = self.net.bounds[x.name if isinstance(x, VarSym) else x.sym.var]
            d = self._bdom[x] = frozenset(range(b + 1))
        return d

    def dom(self, x, env) -> frozenset:
        return env.get(x) or self.bdom(x)

    def order(self, x):
        if isinstance(x, VarSym):
            return (0, self.net.index[x.name])
        return (1, self.net.param_index[x.sym])

    # entry point

    def run(self, a: Assertion) -> Assertion:
        r = self.simp(a, {})
        r = self.probe(r)
        return self.decide_small(r)

    # atoms

    def atom(self, a: Cmp, env, negate=False) -> Assertion:
        d, coeffs = linearize(Minus(a.left, a.right))
        op = a.op
        if op == "=":
            kind = "eq"
        elif op == ">=":
            kind = "ge"
        elif op == ">":
            kind, d = "ge", d - 1
        elif op == "<=":
            kind, d, coeffs = "ge", -d, {x: -c for x, c in coeffs.items()}
        else:
            kind, d, coeffs = "ge", -d - 1, {x: -c for x, c in coeffs.items()}
        if negate:
            if kind == "eq":
                kind = "ne"
            else:
                d, coeffs = -d - 1, {x: -c for x, c in coeffs.items()}
        return self.lin_atom(kind, coeffs, d, env)

    @staticmethod
    def test(kind, value):
        if kind == "eq":
            return value == 0
        if kind == "ne":
            return value != 0
        return value >= 0

    def lin_atom(self, kind, coeffs, d, env) -> Assertion:
        # symbols pinned to one value by the context are folded into the constant
        rest = {}
        for x, c in coeffs.items():
            dm = self.dom(x, env)
            if len(dm) == 1:
                d += c * next(iter(dm))
            else:
                rest[x] = c
        if not rest:
            return TRUE if self.test(kind, d) else FALSE
        if len(rest) == 1:
            (x, c), = rest.items()
            dm = self.dom(x, env)
            allowed = frozenset(v for v in dm if self.test(kind, c * v + d))
            return self.fact_atom(x, allowed, env)
        lo = d + sum(min(c * v for v in self.dom(x, env)) for x, c in rest.items())
        hi = d + sum(max(c * v for v in self.dom(x, env)) for x, c in rest.items())
        if kind == "ge":
            if lo >= 0:
                return TRUE
            if hi < 0:
                return FALSE
        else:
            inside = lo <= 0 <= hi
            if kind == "eq" and not inside or kind == "ne" and lo == hi == 0:
                return FALSE
            if kind == "ne" and not inside or kind == "eq" and lo == hi == 0:
                return TRUE
        return self.build_linear(kind, rest, d)

    def fact_atom(self, x, allowed: frozenset, env) -> Assertion:
        dm = self.dom(x, env)
        allowed = allowed & dm
        if not allowed:
            return FALSE
        if allowed == dm:
            return TRUE
        return self.describe(x, allowed)

    def describe(self, x, values: frozenset) -> Assertion:
        full = self.bdom(x)
        lo, hi = min(values), max(values)
        contiguous = len(values) == hi - lo + 1
        if len(values) == 1:
            return Cmp("=", x, Const(lo))
        if contiguous and lo == 0:
            return Cmp("<=", x, Const(hi))
        if contiguous and hi == max(full):
            return Cmp(">=", x, Const(lo))
        missing = full - values
        if len(missing) == 1:
            return Not(Cmp("=", x, Const(next(iter(missing)))))
        if contiguous:
            return And((Cmp(">=", x, Const(lo)), Cmp("<=", x, Const(hi))))
        return Or(tuple(Cmp("=", x, Const(v)) for v in sorted(values)))

    def build_linear(self, kind, coeffs, d) -> Assertion:
        syms = sorted(coeffs, key=self.order)
        if kind in ("eq", "ne") and coeffs[syms[0]] < 0:
            coeffs, d = {x: -c for x, c in coeffs.items()}, -d
        pos = [(x, c) for x in syms if (c := coeffs[x]) > 0]
        neg = [(x, -c) for x in syms if (c := coeffs[x]) < 0]
        op = "=" if kind in ("eq", "ne") else ">="
        if kind == "ge" and d == -1 and neg:
            op, d = ">", 0
        left, right = self.side(pos, max(d, 0)), self.side(neg, max(-d, 0))
        # parameters read best on the left: K > b rather than b < K
        flip = any(isinstance(x, ParamRef) for x, _ in neg) and not any(
            isinstance(x, ParamRef) for x, _ in pos
        )
        if flip:
            op = {"=": "=", ">=": "<=", ">": "<"}[op]
            left, right = right, left
        out = Cmp(op, left, right)
        return Not(out) if kind == "ne" else out

    @staticmethod
    def side(items, const):
        term = None
        for x, c in items:
            for _ in range(c):
                term = x if term is None else Plus(term, x)
        if const:
            term = Const(const) if term is None else Plus(term, Const(const))
        return term if term is not None else Const(0)

    # facts

    def as_fact(self, a: Assertion):
        """``(symbol, allowed values)`` if ``a`` constrains a single symbol."""
        if isinstance(a, Not):
            f = self.as_fact(a.arg)
            return (f[0], self.bdom(f[0]) - f[1]) if f else None
        if isinstance(a, (And, Or)):
            fs = [self.as_fact(x) for x in a.args]
            if not all(fs) or len({f[0] for f in fs}) != 1:
                return None
            sets = [f[1] for f in fs]
            combined = frozenset.intersection(*sets) if isinstance(a, And) else frozenset.union(*sets)
            return fs[0][0], combined
        if not isinstance(a, Cmp):
            return None
        d, coeffs = linearize(Minus(a.left, a.right))
        if len(coeffs) != 1:
            return None
        (x, c), = coeffs.items()
        test = {
            "=": lambda v: v == 0, "<": lambda v: v < 0, ">": lambda v: v > 0,
            "<=": lambda v: v <= 0, ">=": lambda v: v >= 0,
        }[a.op]
        return x, frozenset(v for v in self.bdom(x) if test(c * v + d))

    def facts_of(self, parts):
        facts: dict = {}
        for p in parts:
            f = self.as_fact(p)
            if f:
                x, s = f
                facts[x] = facts[x] & s if x in facts else s
        return facts

    def narrow(self, env, facts):
        env2 = dict(env)
        for x, s in facts.items():
            env2[x] = self.dom(x, env) & s
        return env2

    # connectives

    def simp(self, a: Assertion, env) -> Assertion:
        if isinstance(a, BoolConst):
            return a
        if isinstance(a, Cmp):
            return self.atom(a, env)
        if isinstance(a, Not):
            return self.simp_not(a.arg, env)
        if isinstance(a, And):
            return self.simp_and(a.args, env)
        if isinstance(a, Or):
            return self.simp_or(a.args, env)
        if isinstance(a, Implies):
            return self.simp_implies(a.left, a.right, env)
        raise TypeError(f"not an assertion: {a!r}")

    def simp_not(self, a: Assertion, env) -> Assertion:
        if isinstance(a, BoolConst):
            return FALSE if a.value else TRUE
        if isinstance(a, Cmp):
            return self.atom(a, env, negate=True)
        if isinstance(a, Not):
            return self.simp(a.arg, env)
        if isinstance(a, And):
            return self.simp_or(tuple(Not(x) for x in a.args), env)
        if isinstance(a, Or):
            return self.simp_and(tuple(Not(x) for x in a.args), env)
        return self.simp_and((a.left, Not(a.right)), env)

    def simp_and(self, args, env) -> Assertion:
        parts = self.flat(And, [self.simp(x, env) for x in args])
        if parts is None:
            return FALSE
        known: dict = {}
        for _ in range(MAX_ROUNDS):
            facts = self.facts_of(parts)
            env2 = self.narrow(env, facts)
            if any(not s for s in env2.values()):
                return FALSE
            if facts == known:
                break
            known = facts
            others = [p for p in parts if not self.as_fact(p)]
            fact_parts = [p for p in parts if self.as_fact(p)]
            parts = self.flat(And, fact_parts + [self.simp(p, env2) for p in others])
            if parts is None:
                return FALSE
        facts = self.facts_of(parts)
        out = []
        for x in sorted(facts, key=self.order):
            f = self.fact_atom(x, facts[x], env)
            if f == FALSE:
                return FALSE
            if f != TRUE:
                out.extend(f.args if isinstance(f, And) else (f,))
        for p in parts:
            if not self.as_fact(p) and p not in out:
                out.append(p)
        if not out:
            return TRUE
        return out[0] if len(out) == 1 else And(tuple(out))

    def simp_or(self, args, env) -> Assertion:
        parts = self.flat(Or, [self.simp(x, env) for x in args])
        if parts is None:
            return TRUE
        facts: dict = {}
        for p in parts:
            f = self.as_fact(p)
            if f:
                facts[f[0]] = facts.get(f[0], frozenset()) | f[1]
        out = []
        for x in sorted(facts, key=self.order):
            f = self.fact_atom(x, facts[x], env)
            if f == TRUE:
                return TRUE
            if f != FALSE:
                out.append(f)
        others = [p for p in parts if not self.as_fact(p)]
        if facts and others:
            # A | B  ==  A | (!A & B)
            env2 = self.narrow(env, {x: self.bdom(x) - s for x, s in facts.items()})
            others = self.flat(Or, [self.simp(p, env2) for p in others])
            if others is None:
                return TRUE
            if any(self.as_fact(p) for p in others):
                return self.simp_or(tuple(out) + tuple(others), env)
        for p in others:
            if p not in out:
                out.append(p)
        if not out:
            return FALSE
        return out[0] if len(out) == 1 else Or(tuple(out))

    def simp_implies(self, left, right, env) -> Assertion:
        sl = self.simp(left, env)
        if sl == FALSE:
            return TRUE
        if sl == TRUE:
            return self.simp(right, env)
        parts = sl.args if isinstance(sl, And) else (sl,)
        env2 = self.narrow(env, self.facts_of(parts))
        sr = self.simp(right, env2)
        if sr == TRUE or sr == sl:
            return TRUE
        if sr == FALSE:
            return self.simp_not(sl, env)
        return Implies(sl, sr)

    @staticmethod
    def flat(kind, parts):
        """Flatten nested ``kind`` nodes; None when an absorbing constant shows up."""
        absorbing, neutral = (FALSE, TRUE) if kind is And else (TRUE, FALSE)
        out = []
        for p in parts:
            for q in p.args if isinstance(p, kind) else (p,):
                if q == absorbing:
                    return None
                if q != neutral and q not in out:
                    out.append(q)
        return out

    # global passes

    def probe(self, a: Assertion) -> Assertion:
        """Rule out values of state variables that make ``a`` false outright."""
        for _ in range(MAX_ROUNDS):
            if isinstance(a, BoolConst):
                return a
            changed = False
            facts = self.facts_of(a.args if isinstance(a, And) else (a,))
            for x in sorted((s for s in symbols(a) if isinstance(s, VarSym)), key=self.order):
                dm = facts.get(x, self.bdom(x))
                if len(dm) <= 1 or len(self.bdom(x)) > PROBE_DOMAIN_LIMIT:
                    continue
                allowed = frozenset(v for v in dm if self.simp(a, {x: frozenset((v,))}) != FALSE)
                if allowed != dm:
                    a = self.simp_and((self.describe(x, allowed) if allowed else FALSE, a), {})
                    changed = True
                    break
            if not changed:
                return a
        return a

    def decide_small(self, a: Assertion) -> Assertion:
        parts = a.args if isinstance(a, And) else (a,)
        decided = []
        for p in parts:
            v = self.constant_value(p)
            if v is False:
                return FALSE
            if v is None:
                decided.append(p)
        whole = decided[0] if len(decided) == 1 else And(tuple(decided)) if decided else TRUE
        v = self.constant_value(whole)
        if v is not None:
            return TRUE if v else FALSE
        pruned = self.prune(whole)
        return whole if pruned == whole else self.simp(pruned, {})

    def prune(self, a: Assertion) -> Assertion:
        """Replace constant sub-formulas over small symbol spaces by true/false."""
        if not isinstance(a, (And, Or, Implies, Not)):
            return a
        v = self.constant_value(a)
        if v is not None:
            return TRUE if v else FALSE
        if isinstance(a, Not):
            return Not(self.prune(a.arg))
        if isinstance(a, Implies):
            return Implies(self.prune(a.left), self.prune(a.right))
        build = conj if isinstance(a, And) else disj
        return build(*(self.prune(x) for x in a.args))

    def constant_value(self, a: Assertion):
        """True/False if ``a`` is constant over a small symbol space, else None."""
        if isinstance(a, BoolConst):
            return a.value
        syms = sorted(symbols(a), key=self.order)
        size = 1
        for x in syms:
            size *= len(self.bdom(x))
        if size > DECIDE_LIMIT:
            return None
        f = _compile(self.net, a)
        state = [0] * len(self.net.var_names)
        kvec = [0] * len(self.net.param_symbols)
        slots = [
            (state, self.net.index[x.name]) if isinstance(x, VarSym) else (kvec, self.net.param_index[x.sym])
            for x in syms
        ]
        seen = set()
        for combo in itertools.product(*(sorted(self.bdom(x)) for x in syms)):
            for (buf, i), v in zip(slots, combo):
                buf[i] = v
            seen.add(f(tuple(state), tuple(kvec)))
            if len(seen) > 1:
                return None
        return seen.pop()
