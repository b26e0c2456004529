"""Weakest preconditions of path programs.

The backward strategy: walk the program from its end, rewriting the
postcondition with one rule per construct.  Loops contribute their
invariant as precondition and two verification conditions each.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .assertions import (
    TRUE,
    Assertion,
    Cmp,
    Const,
    Implies,
    Minus,
    Not,
    ParamRef,
    Plus,
    VarSym,
    conj,
    disj,
    substitute,
)
from .errors import NotAPredecessorSubset, UnknownVariable
from .network import MAnd, MFormula, MNot, MOr, Network, ParamSymbol, VarAtom, subsets_binary_order
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
from .simplify import simplify


@dataclass(frozen=True)
class VerificationCondition:
    origin: tuple | None  # (line, column) of the while loop, when parsed
    formula: Assertion
    kind: str  # "invariant-preservation" or "loop-exit"


@dataclass(frozen=True)
class ProofOutcome:
    wp: Assertion
    vcs: tuple = ()
    simplified: bool = False


@dataclass(frozen=True)
class Derivation:
    outcome: ProofOutcome
    final_implication: Assertion
    triple: HoareTriple = field(compare=False, default=None)


# --- characteristic formulas ----------------------------------------------------------


def mformula_assertion(f: MFormula) -> Assertion:
    """A flat multiplex formula as an assertion (``v>=s`` atoms kept verbatim)."""
    if isinstance(f, VarAtom):
        return Cmp(">=", VarSym(f.var), Const(f.threshold))
    if isinstance(f, MNot):
        return Not(mformula_assertion(f.arg))
    if isinstance(f, MAnd):
        return conj(mformula_assertion(f.left), mformula_assertion(f.right))
    if isinstance(f, MOr):
        return disj(mformula_assertion(f.left), mformula_assertion(f.right))
    raise TypeError(f"multiplex formula not flat: {f!r}")


def phi_omega(network: Network, v: str, omega) -> Assertion:
    """Holds exactly at the states where ``omega`` is the resource set of ``v``."""
    if v not in network.predecessors:
        raise UnknownVariable(f"unknown variable {v!r}")
    preds = network.predecessors[v]
    omega = set(omega)
    if not omega <= set(preds):
        raise NotAPredecessorSubset(f"{sorted(omega)} is not a subset of the predecessors of {v}")
    inside = [mformula_assertion(network.flat[m]) for m in preds if m in omega]
    outside = [Not(mformula_assertion(network.flat[m])) for m in preds if m not in omega]
    parts = inside + outside
    if not parts:
        return TRUE
    return parts[0] if len(parts) == 1 else conj(*parts)


def _phi_direction(network: Network, v: str, op: str) -> Assertion:
    if v not in network.predecessors:
        raise UnknownVariable(f"unknown variable {v!r}")
    clauses = []
    for omega in subsets_binary_order(network.predecessors[v]):
        k = ParamRef(ParamSymbol(v, omega))
        clauses.append(Implies(phi_omega(network, v, omega), Cmp(op, k, VarSym(v))))
    return clauses[0] if len(clauses) == 1 else conj(*clauses)


def phi_plus(network: Network, v: str) -> Assertion:
    """``v`` can increase."""
    return _phi_direction(network, v, ">")


def phi_minus(network: Network, v: str) -> Assertion:
    """``v`` can decrease."""
    return _phi_direction(network, v, "<")


def phi_eq(network: Network, v: str) -> Assertion:
    """``v`` sits at its focal level."""
    return _phi_direction(network, v, "=")


# --- rules ------------------------------------------------------------------------------


def wp_step(network: Network, instr: Program, post: Assertion) -> Assertion:
    """Precondition of a single instruction (``v+``, ``v-``, ``v:=k``, ``assert``)."""
    if isinstance(instr, Inc):
        return conj(phi_plus(network, instr.var),
                    substitute(post, instr.var, Plus(VarSym(instr.var), Const(1))))
    if isinstance(instr, Dec):
        return conj(phi_minus(network, instr.var),
                    substitute(post, instr.var, Minus(VarSym(instr.var), Const(1))))
    if isinstance(instr, Assign):
        return substitute(post, instr.var, Const(instr.value))
    if isinstance(instr, Assert):
        return conj(instr.cond, post)
    raise TypeError(f"not a basic instruction: {instr!r}")


def wp(network: Network, program: Program, post: Assertion, simplify_each_step: bool = False) -> ProofOutcome:
    """Weakest precondition of ``program`` for ``post`` and the loop obligations.

    Verification conditions are listed in program order, inner loops before
    the loop enclosing them.
    """
    simp = (lambda a: simplify(network, a)) if simplify_each_step else (lambda a: a)

    def go(p, q):
        if isinstance(p, (Inc, Dec, Assign, Assert)):
            return simp(wp_step(network, p, q)), []
        if isinstance(p, Epsilon):
            return q, []
        if isinstance(p, Seq):
            vcs_rev = []
            for part in reversed(p.parts):
                q, vcs = go(part, q)
                vcs_rev.append(vcs)
            return q, [vc for vcs in reversed(vcs_rev) for vc in vcs]
        if isinstance(p, (Forall, Exists)):
            pres, vcs = [], []
            for b in p.branches:
                pre, bvcs = go(b, q)
                pres.append(pre)
                vcs.extend(bvcs)
            combined = conj(*pres) if isinstance(p, Forall) else disj(*pres)
            return simp(combined), vcs
        if isinstance(p, If):
            p1, vcs1 = go(p.then, q)
            p2, vcs2 = go(p.orelse, q)
            return simp(disj(conj(p.cond, p1), conj(Not(p.cond), p2))), vcs1 + vcs2
        if isinstance(p, While):
            body_pre, inner = go(p.body, p.invariant)
            keep = VerificationCondition(
                p.loc, simp(Implies(conj(p.cond, p.invariant), body_pre)), "invariant-preservation")
            leave = VerificationCondition(
                p.loc, simp(Implies(conj(Not(p.cond), p.invariant), q)), "loop-exit")
            return p.invariant, inner + [keep, leave]
        raise TypeError(f"not a program: {p!r}")

    pre, vcs = go(program, post)
    return ProofOutcome(pre, tuple(vcs), simplify_each_step)


def derive_triple(network: Network, triple: HoareTriple, simplify_each_step: bool = False) -> Derivation:
    """wp of the triple's program plus the residual obligation ``pre => wp``."""
    outcome = wp(network, triple.program, triple.post, simplify_each_step)
    return Derivation(outcome, Implies(triple.pre, outcome.wp), triple)
