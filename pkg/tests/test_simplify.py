import pytest

from grnhoare import FALSE, TRUE, equivalent, format_assertion, parse_assertion, simplify
from grnhoare.programs import Dec, Inc
from grnhoare.wp import wp_step

Q1 = (
    "b=1 & (c>=1 & a<1 => K[b,{}]=0) & (c>=1 & a>=1 => K[b,{sigma}]=0)"
    " & (c<1 & a<1 => K[b,{lambda}]=0) & (c<1 & a>=1 => K[b,{lambda,sigma}]=0)"
)
Q2 = (
    "c=0 & (a<1 => K[c,{}]=1) & (a>=1 => K[c,{l}]=1) & b=1"
    " & (a<1 => K[b,{}]=0) & (a>=1 => K[b,{sigma}]=0)"
)


def test_boundary_axioms(ffl):
    assert simplify(ffl, parse_assertion("c>=0")) == TRUE
    assert simplify(ffl, parse_assertion("c+1>=1")) == TRUE
    assert simplify(ffl, parse_assertion("c>1")) == FALSE
    assert simplify(ffl, parse_assertion("K[b,{sigma}]<1")) == parse_assertion("K[b,{sigma}]=0")
    assert simplify(ffl, parse_assertion("K[c,{l}]>0")) == parse_assertion("K[c,{l}]=1")
    assert simplify(ffl, parse_assertion("!(c>=1)")) == parse_assertion("c=0")


def test_contradiction(ffl):
    assert simplify(ffl, parse_assertion("K[b,{sigma}]=1 & K[b,{sigma}]=0")) == FALSE


def test_first_step_simplifies_to_q1(ffl):
    got = simplify(ffl, wp_step(ffl, Dec("b"), parse_assertion("b=0")))
    assert equivalent(ffl, got, parse_assertion(Q1, ffl))
    assert format_assertion(got).startswith("b=1 & ")


def test_second_step_simplifies_to_q2(ffl):
    q1 = simplify(ffl, wp_step(ffl, Dec("b"), parse_assertion("b=0")))
    got = simplify(ffl, wp_step(ffl, Inc("c"), q1))
    assert equivalent(ffl, got, parse_assertion(Q2, ffl))
    # the c+1 guards are decided by the bounds, so no c+1 survives
    assert "c+1" not in format_assertion(got)


def test_decides_small_nested_contradictions(fig1):
    a = parse_assertion("a=2 | (b=0 & b=1 & a=0)")
    assert simplify(fig1, a) == parse_assertion("a=2")


@pytest.mark.parametrize("text", [
    "a+b>=2 => b=0",
    "!(a-b<1) | (a=2 & b>0)",
    "a+1=b | a-1=b",
    "(a=1 => b=1) & (a=2 => b=0) & a>=1",
    "K[a,{mu1}]+a>2 & K[a,{}]<a",
    "!(K[b,{}]=b) => a<=1",
])
def test_equivalent_on_fig1(fig1, text):
    a = parse_assertion(text, fig1)
    assert equivalent(fig1, a, simplify(fig1, a))
