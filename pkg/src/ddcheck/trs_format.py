"""Parser for the parenthesised TRS input format.

    (VAR x y)
    (RULES
      g(x) -> f(x,x)
      a -> b
    )

Identifiers listed in the optional VAR block are variables, everything
else is a function symbol. Terms are written ``sym(arg,...)`` or as bare
identifiers; whitespace is insignificant and ';' starts a comment that
runs to the end of the line. Arities are inferred and must be consistent.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError
from .terms import Fun, Rule, Term, Trs, Var

_DELIMS = set("(),")


@dataclass(frozen=True)
class _Token:
    kind: str  # "(", ")", ",", "->", "ident"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in _DELIMS:
            tokens.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch == "-" and i + 1 < n and text[i + 1] == ">":
            tokens.append(_Token("->", "->", line, col))
            i += 2
            col += 2
            continue
        start = i
        start_col = col
        while i < n:
            ch = text[i]
            if ch in _DELIMS or ch in " \t\r\n;":
                break
            if ch == "-" and i + 1 < n and text[i + 1] == ">":
                break
            i += 1
            col += 1
        tokens.append(_Token("ident", text[start:i], line, start_col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.at = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.at] if self.at < len(self.tokens) else None

    def next(self, kind: str | None = None) -> _Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        if kind is not None and tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text!r}", tok.line, tok.column)
        self.at += 1
        return tok

    def parse_term(self, variables: set[str]) -> Term:
        head = self.next("ident")
        nxt = self.peek()
        if nxt is not None and nxt.kind == "(":
            if head.text in variables:
                raise ParseError(f"variable {head.text} used as function symbol", head.line, head.column)
            self.next("(")
            args: list[Term] = []
            if self.peek() is not None and self.peek().kind != ")":
                args.append(self.parse_term(variables))
                while self.peek() is not None and self.peek().kind == ",":
                    self.next(",")
                    args.append(self.parse_term(variables))
            self.next(")")
            return Fun(head.text, tuple(args))
        if head.text in variables:
            return Var(head.text)
        return Fun(head.text)


def parse_trs(text: str) -> Trs:
    """Parse the textual format into a rewrite system.

    Raises ParseError with the offending line and column, or
    SignatureError on an arity clash.
    """
    parser = _Parser(_tokenize(text))
    variables: set[str] = set()
    rules: list[Rule] | None = None
    while parser.peek() is not None:
        parser.next("(")
        keyword = parser.next("ident")
        if keyword.text.upper() == "VAR":
            while parser.peek() is not None and parser.peek().kind == "ident":
                variables.add(parser.next("ident").text)
            parser.next(")")
        elif keyword.text.upper() == "RULES":
            if rules is not None:
                raise ParseError("duplicate RULES block", keyword.line, keyword.column)
            rules = []
            while parser.peek() is not None and parser.peek().kind != ")":
                lhs = parser.parse_term(variables)
                parser.next("->")
                rhs = parser.parse_term(variables)
                rules.append(Rule(lhs, rhs))
            parser.next(")")
        else:
            raise ParseError(f"unknown block {keyword.text!r}", keyword.line, keyword.column)
    if rules is None:
        raise ParseError("missing RULES block")
    return Trs(tuple(rules))
