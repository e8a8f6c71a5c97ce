"""The textual TRS format."""

from __future__ import annotations

import pytest

from ddcheck.trs_format import parse_trs
from ddcheck.errors import ParseError, SignatureError
from ddcheck.terms import Fun, Rule, Var


def test_parse_with_variables():
    trs = parse_trs("(VAR x)(RULES g(x) -> f(x,x) a -> b)")
    x = Var("x")
    assert trs.rules == (
        Rule(Fun("g", (x,)), Fun("f", (x, x))),
        Rule(Fun("a"), Fun("b")),
    )
    assert trs.signature == {"g": 1, "f": 2, "a": 0, "b": 0}


def test_parse_ground_rules():
    trs = parse_trs("(RULES a -> b a -> d b -> a c -> a c -> b)")
    assert len(trs.rules) == 5
    assert all(isinstance(r.lhs, Fun) and not r.lhs.args for r in trs.rules)


def test_parse_arity_clash():
    with pytest.raises(SignatureError):
        parse_trs("(VAR x)(RULES f(x) -> f(x,x))")


def test_parse_comments_and_whitespace():
    text = """
    ; a tiny system
    (VAR x y) ; variables
    (RULES
      f(x, y)->f(y ,x) ; swap
    )
    """
    trs = parse_trs(text)
    assert trs.rules == (Rule(Fun("f", (Var("x"), Var("y"))), Fun("f", (Var("y"), Var("x")))),)


def test_parse_error_carries_location():
    with pytest.raises(ParseError) as err:
        parse_trs("(RULES a -> )")
    assert err.value.line == 1
    assert err.value.column is not None


def test_parse_variable_applied_is_an_error():
    with pytest.raises(ParseError):
        parse_trs("(VAR f)(RULES f(a) -> a)")


def test_parse_unknown_block():
    with pytest.raises(ParseError):
        parse_trs("(THEORY AC)(RULES a -> b)")


def test_parse_missing_rules_block():
    with pytest.raises(ParseError):
        parse_trs("(VAR x)")


def test_parse_empty_rules():
    assert parse_trs("(RULES)").rules == ()


def test_parse_hyphenated_identifier():
    trs = parse_trs("(RULES my-const -> b)")
    assert trs.rules[0].lhs == Fun("my-const")
