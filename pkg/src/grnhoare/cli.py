"""Command-line front end: ``grnhoare validate|wp|check|solve|graph``.

Exit codes: 0 success or Holds, 1 Fails or invalid input model, 2 usage or
input errors, 3 Undetermined or a size cap was hit.  Every error is one
line on stderr of the form ``error[CODE]: message``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .assertions import check_satisfiability, compile_assertion, format_assertion
from .errors import GrnError, ResultTooLarge, SizeLimitExceeded
from .network import Network, enumerate_states, is_stable, state_graph
from .oracle import DEFAULT_FUEL, Fails, Holds, triple_holds
from .parser import load_network, load_triple, load_valuation, parse_assertion, parse_program
from .programs import HoareTriple
from .simplify import simplify
from .solver import DEFAULT_VALUATION_CAP, solve_triple
from .wp import derive_triple

EXIT_OK, EXIT_FAILS, EXIT_USAGE, EXIT_UNDETERMINED = 0, 1, 2, 3


class UsageError(GrnError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    network: str
    triple: str | None = None
    pre: str | None = None
    program: str | None = None
    post: str | None = None
    valuation: str | None = None
    mode: str = "oracle"
    fuel: int = DEFAULT_FUEL
    simplify: bool = False
    format: str = "text"
    jobs: int = 1
    timing: bool = False
    max_valuations: int = DEFAULT_VALUATION_CAP

    def validate(self):
        inline = (self.pre, self.program, self.post)
        if self.command in ("wp", "check", "solve"):
            if self.triple and any(x is not None for x in inline):
                raise UsageError("give either --triple or --pre/--program/--post, not both")
            if not self.triple and any(x is None for x in inline):
                raise UsageError("a triple is needed: --triple FILE or all of --pre, --program, --post")
        if self.command in ("check", "graph") and not self.valuation:
            raise UsageError(f"{self.command} needs --valuation")
        allowed = {
            "validate": ("text",), "wp": ("text", "json"), "check": ("text", "json"),
            "solve": ("text", "json"), "graph": ("dot", "text"),
        }[self.command]
        if self.format is None:
            self.format = allowed[0]
        if self.format not in allowed:
            raise UsageError(f"{self.command} supports --format {'|'.join(allowed)}")
        if self.fuel < 0:
            raise UsageError("--fuel must be non-negative")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="grnhoare", description="Hoare-style reasoning on discrete gene regulatory networks.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, triple=True, valuation=False):
        p.add_argument("--network", "-n", required=True, help="network file")
        if triple:
            p.add_argument("--triple", "-t", help="triple file (pre/program/post)")
            p.add_argument("--pre", help="inline precondition")
            p.add_argument("--program", help="inline path program")
            p.add_argument("--post", help="inline postcondition")
        p.add_argument("--valuation", "-k", required=valuation, help="parameter valuation file")
        p.add_argument("--format", "-f", default=None)

    p = sub.add_parser("validate", help="parse and check a network (and optionally a triple)")
    common(p, triple=True)
    p = sub.add_parser("wp", help="weakest precondition, verification conditions, final implication")
    common(p)
    p.add_argument("--simplify", action="store_true")
    p = sub.add_parser("check", help="decide a triple for one valuation")
    common(p, valuation=True)
    p.add_argument("--mode", choices=("oracle", "wp"), default="oracle")
    p.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    p = sub.add_parser("solve", help="all consistent valuations")
    common(p)
    p.add_argument("--mode", choices=("oracle", "wp"), default="wp")
    p.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    p.add_argument("--simplify", action="store_true")
    p.add_argument("--jobs", "-j", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="fill elapsed_ms (output is no longer reproducible)")
    p.add_argument("--max-valuations", type=int, default=DEFAULT_VALUATION_CAP)
    p = sub.add_parser("graph", help="export the asynchronous state graph")
    common(p, triple=False, valuation=True)
    return ap


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(ns).items() if v is not None or k == "format"})
    cfg.validate()
    return cfg


# --- loading ------------------------------------------------------------------------


def _read_network(cfg) -> Network:
    return load_network(cfg.network)


def _read_triple(cfg, net) -> HoareTriple:
    if cfg.triple:
        return load_triple(cfg.triple, net)
    return HoareTriple(parse_assertion(cfg.pre, net), parse_program(cfg.program, net),
                       parse_assertion(cfg.post, net))


def _read_valuation(cfg, net):
    from .network import check_valuation

    val = load_valuation(cfg.valuation, net)
    for p, k in net.fixed.items():
        val.setdefault(p, k)
    check_valuation(net, val)
    return val


# --- commands -----------------------------------------------------------------------


def cmd_validate(cfg, out) -> int:
    net = _read_network(cfg)
    n_params = len(net.param_symbols)
    out.write(
        f"ok: {len(net.var_names)} variables, {len(net.mux_names)} multiplexes, "
        f"{n_params} parameters ({len(net.fixed)} pinned)\n"
    )
    if cfg.triple or cfg.program is not None:
        _read_triple(cfg, net)
        out.write("ok: triple\n")
    if cfg.valuation:
        _read_valuation(cfg, net)
        out.write("ok: valuation\n")
    return EXIT_OK


def cmd_wp(cfg, out) -> int:
    net = _read_network(cfg)
    triple = _read_triple(cfg, net)
    d = derive_triple(net, triple, cfg.simplify)
    wp_f, final = d.outcome.wp, d.final_implication
    if cfg.simplify:
        wp_f, final = simplify(net, wp_f), simplify(net, final)
    sat = check_satisfiability(net, wp_f)
    vcs = [
        {"kind": vc.kind, "origin": list(vc.origin) if vc.origin else None,
         "formula": format_assertion(vc.formula)}
        for vc in d.outcome.vcs
    ]
    if cfg.format == "json":
        doc = {"wp": format_assertion(wp_f), "satisfiable": sat, "vcs": vcs,
               "final": format_assertion(final)}
        out.write(json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    out.write(f"wp: {format_assertion(wp_f)}\n")
    out.write(f"wp satisfiable: {'yes' if sat else 'no (unsatisfiable)'}\n")
    for i, vc in enumerate(vcs, 1):
        where = f" at {vc['origin'][0]}:{vc['origin'][1]}" if vc["origin"] else ""
        out.write(f"vc {i} ({vc['kind']}{where}): {vc['formula']}\n")
    out.write(f"final: {format_assertion(final)}\n")
    return EXIT_OK


def cmd_check(cfg, out) -> int:
    net = _read_network(cfg)
    triple = _read_triple(cfg, net)
    val = _read_valuation(cfg, net)
    if cfg.mode == "oracle":
        verdict = triple_holds(net, val, triple, cfg.fuel)
        if isinstance(verdict, Holds):
            res, code, states = "holds", EXIT_OK, []
        elif isinstance(verdict, Fails):
            res, code, states = "fails", EXIT_FAILS, [verdict.witness]
        else:
            res, code, states = "undetermined", EXIT_UNDETERMINED, list(verdict.states)
        detail = None
    else:
        res, code, states, detail = "holds", EXIT_OK, [], None
        d = derive_triple(net, triple)
        kvec = net.valuation_vector(val)
        obligations = [("final implication", d.final_implication)]
        obligations += [(f"vc {i} ({vc.kind})", vc.formula) for i, vc in enumerate(d.outcome.vcs, 1)]
        for name, a in obligations:
            f = compile_assertion(net, a)
            bad = next((s for s in enumerate_states(net) if not f(s, kvec)), None)
            if bad is not None:
                res, code, states, detail = "fails", EXIT_FAILS, [bad], name
                break
    if cfg.format == "json":
        doc = {"verdict": res, "mode": cfg.mode, "states": [net.format_state(s) for s in states]}
        if detail:
            doc["obligation"] = detail
        out.write(json.dumps(doc, indent=2) + "\n")
        return code
    line = res.capitalize()
    if states:
        line += (" at " if res == "fails" else " at states ") + ", ".join(net.format_state(s) for s in states)
    if detail:
        line += f" ({detail})"
    out.write(line + "\n")
    return code


def cmd_solve(cfg, out) -> int:
    net = _read_network(cfg)
    triple = _read_triple(cfg, net)
    report = solve_triple(net, triple, cfg.mode, cfg.fuel, cfg.jobs, cfg.simplify,
                          cfg.max_valuations, Path(cfg.network).stem)
    if cfg.format == "json":
        out.write(report.to_json(cfg.timing))
    else:
        names = [str(p) for p in net.param_symbols]
        out.write(f"network: {report.network_id}\nmode: {report.mode}\n")
        out.write(f"consistent: {len(report.consistent)} of {report.total}\n")
        if report.undetermined:
            out.write(f"undetermined: {len(report.undetermined)}\n")
        out.write(f"constraint: {format_assertion(report.constraint())}\n")
        for vec in report.consistent:
            out.write("  " + ", ".join(f"{n}={k}" for n, k in zip(names, vec)) + "\n")
        if cfg.timing:
            out.write(f"elapsed_ms: {report.elapsed_ms:.3f}\n")
    return EXIT_UNDETERMINED if report.undetermined else EXIT_OK


def render_dot(net: Network, val, name: str = "state_graph") -> str:
    """DOT text of the state graph; stable states get a double border."""
    graph = state_graph(net, val)
    lines = [f'digraph "{name}" {{', "  node [shape=box];"]
    for s in graph:
        label = net.format_state(s)
        attrs = ' [peripheries=2, xlabel="stable"]' if is_stable(net, val, s) else ""
        lines.append(f'  "{label}"{attrs};')
    for s, succ in graph.items():
        for t in succ:
            lines.append(f'  "{net.format_state(s)}" -> "{net.format_state(t)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_graph(cfg, out) -> int:
    net = _read_network(cfg)
    val = _read_valuation(cfg, net)
    if cfg.format == "dot":
        out.write(render_dot(net, val, Path(cfg.network).stem))
        return EXIT_OK
    for s, succ in state_graph(net, val).items():
        mark = " (stable)" if is_stable(net, val, s) else ""
        out.write(f"{net.format_state(s)}{mark} -> {', '.join(net.format_state(t) for t in succ)}\n")
    return EXIT_OK


COMMANDS = {"validate": cmd_validate, "wp": cmd_wp, "check": cmd_check, "solve": cmd_solve,
            "graph": cmd_graph}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    command = None
    try:
        cfg = parse_config(argv)
        command = cfg.command
        return COMMANDS[cfg.command](cfg, out)
    except (SizeLimitExceeded, ResultTooLarge) as e:
        err.write(f"error[{e.code}]: {e}\n")
        return EXIT_UNDETERMINED
    except UsageError as e:
        err.write(f"error[usage]: {e}\n")
        return EXIT_USAGE
    except GrnError as e:
        err.write(f"error[{e.code}]: {e}\n")
        return EXIT_FAILS if command == "validate" else EXIT_USAGE
    except OSError as e:
        err.write(f"error[io]: {e.strerror or e}: {e.filename}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
