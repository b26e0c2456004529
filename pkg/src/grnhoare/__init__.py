"""Hoare-style reasoning about discrete gene regulatory networks.

Networks with multiplexes, an assertion language over levels and kinetic
parameters, path programs, a weakest-precondition calculus, a brute-force
reference semantics, and exhaustive parameter synthesis.
"""

from .assertions import (
    FALSE,
    TRUE,
    check_satisfiability,
    check_validity,
    equivalent,
    eval_assertion,
    format_assertion,
    substitute,
)
from .errors import GrnError
from .network import (
    Network,
    ParamSymbol,
    check_valuation,
    enumerate_states,
    flatten,
    focal_level,
    is_stable,
    resources,
    state_graph,
    successors,
    validate_network,
)
from .oracle import FuelExhausted, Fails, Holds, Infeasible, Sets, Undetermined, rel, triple_holds
from .parser import (
    load_network,
    load_triple,
    load_valuation,
    parse_assertion,
    parse_network,
    parse_program,
    parse_triple,
    parse_valuation,
)
from .programs import HoareTriple, print_program
from .simplify import simplify
from .solver import SolveReport, cross_check, describe_solution_set, enumerate_valuations, solve_triple
from .wp import derive_triple, phi_eq, phi_minus, phi_omega, phi_plus, wp

__version__ = "0.1.0"
