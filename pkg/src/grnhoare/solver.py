"""Exhaustive parameter synthesis.

Every valuation of the free parameters is checked, either by running the
oracle (``mode="oracle"``) or by testing the weakest-precondition
obligations (``mode="wp"``).  Results keep the canonical enumeration order
whatever the number of worker processes.
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .assertions import (
    FALSE,
    TRUE,
    Assertion,
    Cmp,
    Const,
    ParamRef,
    compile_assertion,
    conj,
    disj,
    format_assertion,
)
from .errors import SizeLimitExceeded, WhileNotSupportedForCrossCheck
from .network import Network, State, enumerate_states
from .oracle import DEFAULT_FUEL, Executor, Fails, Holds, triple_holds
from .programs import HoareTriple, has_while, print_program
from .wp import derive_triple

DEFAULT_VALUATION_CAP = 1 << 24
MODES = ("oracle", "wp")

CONSISTENT, INCONSISTENT, UNDETERMINED = "consistent", "inconsistent", "undetermined"


def count_valuations(network: Network) -> int:
    n = 1
    for p in network.param_symbols:
        n *= len(network.param_domain(p))
    return n


def valuation_vectors(network: Network, cap: int = DEFAULT_VALUATION_CAP):
    """Parameter vectors in lexicographic order of ``network.param_symbols``."""
    total = count_valuations(network)
    if total > cap:
        raise SizeLimitExceeded(f"{total} valuations exceed the cap of {cap}")
    return itertools.product(*(network.param_domain(p) for p in network.param_symbols))


def enumerate_valuations(network: Network, cap: int = DEFAULT_VALUATION_CAP):
    """Every valuation respecting the bounds and the pinned parameters."""
    for vec in valuation_vectors(network, cap):
        yield network.vector_valuation(vec)


# --- per-valuation checks -------------------------------------------------------------


class _WpChecker:
    def __init__(self, network, derivation):
        self.states = enumerate_states(network)
        obligations = [derivation.final_implication] + [vc.formula for vc in derivation.outcome.vcs]
        self.checks = [compile_assertion(network, a) for a in obligations]

    def __call__(self, vec):
        for f in self.checks:
            for s in self.states:
                if not f(s, vec):
                    return INCONSISTENT
        return CONSISTENT


def _classify_oracle(network, triple, vec, fuel, guards):
    ex = Executor(network, network.vector_valuation(vec), guards=guards)
    verdict = triple_holds(network, None, triple, fuel, executor=ex)
    if isinstance(verdict, Holds):
        return CONSISTENT
    if isinstance(verdict, Fails):
        return INCONSISTENT
    return UNDETERMINED


def _classify_chunk(args):
    network, triple, mode, fuel, simplify, vecs = args
    if mode == "wp":
        check = _WpChecker(network, derive_triple(network, triple, simplify))
        return [check(v) for v in vecs]
    guards: dict = {}
    return [_classify_oracle(network, triple, v, fuel, guards) for v in vecs]


def classify_all(network, triple, mode, vecs, fuel=DEFAULT_FUEL, simplify=False, jobs=1):
    vecs = list(vecs)
    if jobs <= 1 or len(vecs) < 2:
        return _classify_chunk((network, triple, mode, fuel, simplify, vecs))
    size = -(-len(vecs) // (jobs * 4))
    chunks = [vecs[i:i + size] for i in range(0, len(vecs), size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = pool.map(_classify_chunk, [(network, triple, mode, fuel, simplify, c) for c in chunks])
        return [r for part in parts for r in part]


# --- reports ------------------------------------------------------------------------------


@dataclass
class SolveReport:
    network: Network
    triple: HoareTriple
    mode: str
    total: int
    consistent: list  # parameter vectors, canonical order
    undetermined: list = field(default_factory=list)
    elapsed_ms: float | None = None
    network_id: str = "network"

    def constraint(self) -> Assertion:
        return describe_solution_set(self)

    def to_dict(self, timing: bool = False) -> dict:
        names = [str(p) for p in self.network.param_symbols]
        as_obj = lambda vec: dict(zip(names, vec))  # noqa: E731
        return {
            "network": self.network_id,
            "triple": {
                "pre": format_assertion(self.triple.pre),
                "program": print_program(self.triple.program),
                "post": format_assertion(self.triple.post),
            },
            "mode": self.mode,
            "total": self.total,
            "consistent": [as_obj(v) for v in self.consistent],
            "undetermined": [as_obj(v) for v in self.undetermined],
            "constraint": format_assertion(self.constraint()),
            "elapsed_ms": round(self.elapsed_ms, 3) if timing and self.elapsed_ms is not None else None,
        }

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2) + "\n"


def solve_triple(
    network: Network,
    triple: HoareTriple,
    mode: str = "wp",
    fuel: int = DEFAULT_FUEL,
    jobs: int = 1,
    simplify: bool = False,
    cap: int = DEFAULT_VALUATION_CAP,
    network_id: str = "network",
) -> SolveReport:
    """Check every valuation and collect the consistent ones."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    start = time.perf_counter()
    vecs = list(valuation_vectors(network, cap))
    verdicts = classify_all(network, triple, mode, vecs, fuel, simplify, jobs)
    consistent = [v for v, r in zip(vecs, verdicts) if r == CONSISTENT]
    undetermined = [v for v, r in zip(vecs, verdicts) if r == UNDETERMINED]
    elapsed = (time.perf_counter() - start) * 1000
    return SolveReport(network, triple, mode, len(vecs), consistent, undetermined, elapsed, network_id)


# --- oracle versus wp -----------------------------------------------------------------


@dataclass(frozen=True)
class Disagreement:
    valuation: tuple  # parameter vector
    state: State
    oracle: bool
    wp: bool


def cross_check(
    network: Network,
    triple: HoareTriple,
    fuel: int = DEFAULT_FUEL,
    cap: int = DEFAULT_VALUATION_CAP,
) -> list[Disagreement]:
    """Compare oracle and weakest precondition at every state satisfying ``pre``.

    For each valuation and state, the oracle says whether some related set
    lies inside the postcondition; the weakest precondition must be true
    there exactly when it does.  An empty list is the expected outcome.
    """
    if has_while(triple.program):
        raise WhileNotSupportedForCrossCheck("cross_check only handles loop-free programs")
    outcome = derive_triple(network, triple).outcome
    wp_f = compile_assertion(network, outcome.wp)
    pre_f = compile_assertion(network, triple.pre)
    states = enumerate_states(network)
    out = []
    guards: dict = {}
    for vec in valuation_vectors(network, cap):
        ex = Executor(network, network.vector_valuation(vec), guards=guards)
        for s in states:
            if not pre_f(s, vec):
                continue
            by_oracle = ex.reaches(triple.program, s, triple.post, fuel)
            by_wp = wp_f(s, vec)
            if by_oracle != by_wp:
                out.append(Disagreement(vec, s, by_oracle, by_wp))
    return out


# --- summaries --------------------------------------------------------------------------


def describe_solution_set(report: SolveReport) -> Assertion:
    """An assertion over parameters satisfied by exactly the consistent valuations.

    Parameters that do not influence membership are dropped, the ones that
    are constant over the set become equalities, and whatever remains is
    listed row by row as a disjunction.
    """
    net = report.network
    rows = {tuple(v) for v in report.consistent}
    if not rows:
        return FALSE
    if len(rows) == report.total:
        return TRUE
    syms = net.param_symbols
    relevant = []
    for j, p in enumerate(syms):
        size = len(net.param_domain(p))
        if size == 1:
            continue
        projected = {v[:j] + v[j + 1:] for v in rows}
        if len(projected) * size != len(rows):
            relevant.append(j)
    table = sorted({tuple(v[j] for j in relevant) for v in rows})
    fixed, varying = [], []
    for col, j in enumerate(relevant):
        values = {r[col] for r in table}
        (fixed if len(values) == 1 else varying).append((col, j))
    eq = lambda j, value: Cmp("=", ParamRef(syms[j]), Const(value))  # noqa: E731
    parts = [eq(j, table[0][col]) for col, j in fixed]
    if varying:
        rows_out = sorted({tuple(r[col] for col, _ in varying) for r in table})
        parts.append(disj(*(conj(*(eq(j, r[i]) for i, (_, j) in enumerate(varying))) for r in rows_out)))
    return conj(*parts)
