"""Recursive-descent parsers for networks, assertions, programs and triples.

Input is whitespace insensitive and ``#`` starts a line comment.  Assertion
precedence, tightest first: ``!``, comparisons, ``&``, ``|``, ``=>`` (right
associative).
"""

from __future__ import annotations

import re
from typing import NamedTuple

from .assertions import (
    CMP_OPS,
    FALSE,
    TRUE,
    And,
    Assertion,
    Cmp,
    Const,
    Implies,
    Minus,
    Not,
    Or,
    ParamRef,
    Plus,
    VarSym,
    check_symbols,
)
from .errors import AssignOutOfRange, ParseError, UnknownVariable
from .network import MAnd, MNot, MOr, MuxAtom, Network, ParamSymbol, VarAtom, validate_network
from .programs import (
    EPS,
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
    program_assertions,
    walk,
)

KEYWORDS = {
    "network", "var", "multiplex", "target", "param", "K", "pre", "program", "post",
    "assert", "if", "then", "else", "end", "while", "with", "do", "forall", "exists",
    "eps", "true", "false",
}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>:=|\.\.|<-|=>|>=|<=|[{}()\[\],;:=<>+\-!&|])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str  # "int", "ident", "op", keyword text, or "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            if kind == "ident" and value in KEYWORDS:
                kind = value
            elif kind == "op":
                kind = value
            tokens.append(Token(kind, value, line, pos - line_start + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class Parser:
    def __init__(self, text: str, network: Network | None = None):
        self.toks = tokenize(text)
        self.pos = 0
        self.net = network

    # token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        return ParseError(f"{msg}, found {found!r}", tok.line, tok.col)

    def accept(self, kind):
        if self.tok.kind == kind:
            t = self.tok
            self.pos += 1
            return t
        return None

    def expect(self, kind, what=None):
        t = self.accept(kind)
        if t is None:
            raise self.error(f"expected {what or repr(kind)}")
        return t

    def ident(self):
        return self.expect("ident", "an identifier").text

    def integer(self):
        return int(self.expect("int", "an integer").text)

    def end(self):
        if self.tok.kind != "eof":
            raise self.error("expected end of input")

    # terms and assertions

    def param_symbol(self) -> ParamSymbol:
        self.expect("K")
        self.expect("[")
        v = self.ident()
        self.expect(",")
        self.expect("{")
        omega = []
        if self.tok.kind != "}":
            omega.append(self.ident())
            while self.accept(","):
                omega.append(self.ident())
        self.expect("}")
        self.expect("]")
        return ParamSymbol.of(v, omega)

    def term(self):
        t = self.term_primary()
        while self.tok.kind in ("+", "-"):
            op = self.accept(self.tok.kind).kind
            r = self.term_primary()
            t = Plus(t, r) if op == "+" else Minus(t, r)
        return t

    def term_primary(self):
        if self.tok.kind == "int":
            return Const(self.integer())
        if self.tok.kind == "ident":
            return VarSym(self.ident())
        if self.tok.kind == "K":
            return ParamRef(self.param_symbol())
        if self.accept("("):
            t = self.term()
            self.expect(")")
            return t
        raise self.error("expected a term")

    def atom(self) -> Cmp:
        left = self.term()
        if self.tok.kind not in CMP_OPS:
            raise self.error("expected a comparison operator")
        op = self.accept(self.tok.kind).kind
        return Cmp(op, left, self.term())

    def assertion(self) -> Assertion:
        left = self.disjunction()
        if self.accept("=>"):
            return Implies(left, self.assertion())
        return left

    def disjunction(self):
        parts = [self.conjunction()]
        while self.accept("|"):
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self):
        parts = [self.unary()]
        while self.accept("&"):
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self):
        if self.accept("!"):
            return Not(self.unary())
        if self.accept("true"):
            return TRUE
        if self.accept("false"):
            return FALSE
        if self.tok.kind == "(":
            start = self.pos
            try:
                return self.atom()
            except ParseError as atom_err:
                atom_pos = self.pos
                self.pos = start
                self.expect("(")
                try:
                    inner = self.assertion()
                    self.expect(")")
                except ParseError:
                    if atom_pos > self.pos:
                        raise atom_err from None
                    raise
                return inner
        return self.atom()

    # multiplex formulas

    def mformula(self):
        f = self.mconj()
        while self.accept("|"):
            f = MOr(f, self.mconj())
        return f

    def mconj(self):
        f = self.munary()
        while self.accept("&"):
            f = MAnd(f, self.munary())
        return f

    def munary(self):
        if self.accept("!"):
            return MNot(self.munary())
        if self.accept("("):
            f = self.mformula()
            self.expect(")")
            return f
        name = self.ident()
        if self.accept(">="):
            return VarAtom(name, self.integer())
        return MuxAtom(name)

    # programs

    def program(self) -> Program:
        first = self.tok
        parts = [self.instr()]
        while self.accept(";"):
            parts.append(self.instr())
        if len(parts) == 1:
            return parts[0]
        if any(isinstance(p, Epsilon) for p in parts):
            raise ParseError("'eps' must stand alone, not inside a sequence", first.line, first.col)
        return Seq(tuple(parts))

    def instr(self) -> Program:
        t = self.tok
        if self.accept("eps"):
            return EPS
        if self.accept("assert"):
            self.expect("(")
            cond = self.assertion()
            self.expect(")")
            return Assert(cond)
        if self.accept("if"):
            cond = self.assertion()
            self.expect("then")
            then = self.program()
            self.expect("else")
            orelse = self.program()
            self.expect("end")
            return If(cond, then, orelse)
        if self.accept("while"):
            cond = self.assertion()
            self.expect("with")
            inv = self.assertion()
            self.expect("do")
            body = self.program()
            self.expect("end")
            return While(cond, inv, body, loc=(t.line, t.col))
        if self.tok.kind in ("forall", "exists"):
            kind = Forall if self.accept(self.tok.kind).kind == "forall" else Exists
            self.expect("(")
            branches = [self.program()]
            while self.accept(","):
                branches.append(self.program())
            self.expect(")")
            if len(branches) < 2:
                raise ParseError(f"{t.text} needs at least two branches", t.line, t.col)
            flat = []
            for b in branches:
                flat.extend(b.branches if isinstance(b, kind) else (b,))
            return kind(tuple(flat))
        if self.tok.kind == "ident":
            name = self.ident()
            if self.accept("+"):
                return Inc(name)
            if self.accept("-"):
                return Dec(name)
            if self.accept(":="):
                return Assign(name, self.integer())
            raise self.error(f"expected '+', '-' or ':=' after {name!r}")
        raise self.error("expected an instruction")

    # files

    def network(self) -> Network:
        self.expect("network")
        self.expect("{")
        variables, multiplexes, targets, params = [], [], [], []
        while not self.accept("}"):
            if self.accept("var"):
                name = self.ident()
                self.expect(":")
                lo = self.expect("int")
                if lo.text != "0":
                    raise self.error("variable ranges start at 0", lo)
                self.expect("..")
                variables.append((name, self.integer()))
            elif self.accept("multiplex"):
                name = self.ident()
                self.expect(":")
                multiplexes.append((name, self.mformula()))
            elif self.accept("target"):
                v = self.ident()
                self.expect("<-")
                ms = [self.ident()]
                while self.accept(","):
                    ms.append(self.ident())
                targets.append((v, ms))
            elif self.tok.kind == "param":
                params.append(self.param_statement())
                continue
            else:
                raise self.error("expected 'var', 'multiplex', 'target', 'param' or '}'")
            self.expect(";")
        self.end()
        return validate_network(variables, multiplexes, targets, params)

    def param_statement(self):
        self.expect("param")
        p = self.param_symbol()
        self.expect("=")
        value = self.integer()
        self.expect(";")
        return (p.var, p.omega), value

    def valuation(self):
        entries = []
        while self.tok.kind != "eof":
            entries.append(self.param_statement())
        return entries

    def triple(self) -> HoareTriple:
        self.expect("pre")
        self.expect("{")
        pre = self.assertion()
        self.expect("}")
        self.expect("program")
        self.expect("{")
        prog = self.program()
        self.expect("}")
        self.expect("post")
        self.expect("{")
        post = self.assertion()
        self.expect("}")
        self.end()
        return HoareTriple(pre, prog, post)


# --- public entry points ------------------------------------------------------------


def _check_assertion(network, a):
    if network is not None:
        check_symbols(network, a)


def _check_program(network, p):
    if network is None:
        return
    for node in walk(p):
        if isinstance(node, (Inc, Dec, Assign)):
            if node.var not in network.bounds:
                raise UnknownVariable(f"unknown variable {node.var!r} in program")
            if isinstance(node, Assign) and not 0 <= node.value <= network.bounds[node.var]:
                raise AssignOutOfRange(
                    f"{node.var}:={node.value} outside [0,{network.bounds[node.var]}]"
                )
    for a in program_assertions(p):
        check_symbols(network, a)


def parse_assertion(text: str, network: Network | None = None) -> Assertion:
    ps = Parser(text, network)
    a = ps.assertion()
    ps.end()
    _check_assertion(network, a)
    return a


def parse_program(text: str, network: Network | None = None) -> Program:
    ps = Parser(text, network)
    p = ps.program()
    ps.end()
    _check_program(network, p)
    return p


def parse_network(text: str) -> Network:
    return Parser(text).network()


def parse_triple(text: str, network: Network | None = None) -> HoareTriple:
    t = Parser(text, network).triple()
    _check_assertion(network, t.pre)
    _check_program(network, t.program)
    _check_assertion(network, t.post)
    return t


def parse_valuation(text: str, network: Network) -> dict[ParamSymbol, int]:
    """Parse ``param K[...] = n;`` statements into a valuation (not checked for totality)."""
    out: dict[ParamSymbol, int] = {}
    for (v, omega), value in Parser(text, network).valuation():
        p = network.param(v, omega)
        out[p] = value
    return out


def load_network(path) -> Network:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())


def load_triple(path, network: Network | None = None) -> HoareTriple:
    with open(path, encoding="utf-8") as fh:
        return parse_triple(fh.read(), network)


def load_valuation(path, network: Network) -> dict[ParamSymbol, int]:
    with open(path, encoding="utf-8") as fh:
        return parse_valuation(fh.read(), network)
