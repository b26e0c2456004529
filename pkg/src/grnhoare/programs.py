"""Path programs: behaviour scripts run against the state graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from .assertions import Assertion, format_assertion


@dataclass(frozen=True)
class Inc:
    var: str


@dataclass(frozen=True)
class Dec:
    var: str


@dataclass(frozen=True)
class Assign:
    var: str
    value: int


@dataclass(frozen=True)
class Assert:
    cond: Assertion


@dataclass(frozen=True)
class Seq:
    parts: tuple


@dataclass(frozen=True)
class If:
    cond: Assertion
    then: "Program"
    orelse: "Program"


@dataclass(frozen=True)
class While:
    cond: Assertion
    invariant: Assertion
    body: "Program"
    loc: tuple | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Forall:
    branches: tuple


@dataclass(frozen=True)
class Exists:
    branches: tuple


@dataclass(frozen=True)
class Epsilon:
    pass


EPS = Epsilon()

Program = Union[Inc, Dec, Assign, Assert, Seq, If, While, Forall, Exists, Epsilon]


@dataclass(frozen=True)
class HoareTriple:
    pre: Assertion
    program: Program
    post: Assertion

    def __str__(self):
        return (
            f"pre {{ {format_assertion(self.pre)} }}\n"
            f"program {{ {print_program(self.program)} }}\n"
            f"post {{ {format_assertion(self.post)} }}\n"
        )


def seq(*parts: Program) -> Program:
    """Sequential composition, flattened; a single part is returned as is."""
    out = []
    for p in parts:
        out.extend(p.parts if isinstance(p, Seq) else (p,))
    return out[0] if len(out) == 1 else Seq(tuple(out))


def print_program(p: Program) -> str:
    if isinstance(p, Inc):
        return f"{p.var}+"
    if isinstance(p, Dec):
        return f"{p.var}-"
    if isinstance(p, Assign):
        return f"{p.var}:={p.value}"
    if isinstance(p, Assert):
        return f"assert({format_assertion(p.cond)})"
    if isinstance(p, Seq):
        return "; ".join(print_program(x) for x in p.parts)
    if isinstance(p, If):
        return (
            f"if {format_assertion(p.cond)} then {print_program(p.then)}"
            f" else {print_program(p.orelse)} end"
        )
    if isinstance(p, While):
        return (
            f"while {format_assertion(p.cond)} with {format_assertion(p.invariant)}"
            f" do {print_program(p.body)} end"
        )
    if isinstance(p, (Forall, Exists)):
        kw = "forall" if isinstance(p, Forall) else "exists"
        return f"{kw}(" + ", ".join(print_program(x) for x in p.branches) + ")"
    if isinstance(p, Epsilon):
        return "eps"
    raise TypeError(f"not a program: {p!r}")


def walk(p: Program) -> Iterator[Program]:
    """Pre-order traversal of every program node."""
    yield p
    if isinstance(p, Seq):
        for x in p.parts:
            yield from walk(x)
    elif isinstance(p, If):
        yield from walk(p.then)
        yield from walk(p.orelse)
    elif isinstance(p, While):
        yield from walk(p.body)
    elif isinstance(p, (Forall, Exists)):
        for x in p.branches:
            yield from walk(x)


def has_while(p: Program) -> bool:
    return any(isinstance(x, While) for x in walk(p))


def program_assertions(p: Program) -> Iterator[Assertion]:
    for x in walk(p):
        if isinstance(x, Assert):
            yield x.cond
        elif isinstance(x, If):
            yield x.cond
        elif isinstance(x, While):
            yield x.cond
            yield x.invariant
