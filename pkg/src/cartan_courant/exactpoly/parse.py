"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INTEGER)?
    atom   := INTEGER | NAME | '(' expr ')'

Division is only allowed by nonzero constants, which is how rationals such
as ``1/2*x1^2`` are written.
"""
from __future__ import annotations

import re
from typing import Sequence

from .poly import Poly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class PolyParseError(ValueError):
    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset
        self.text = text


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        number, name, op = m.groups()
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if number is not None:
            tokens.append(("num", number, start))
        elif name is not None:
            tokens.append(("name", name, start))
        elif op is not None:
            if op not in "+-*/^()":
                raise PolyParseError(f"unexpected character {op!r}", start, text)
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = tuple(variables)
        self.index = {name: i for i, name in enumerate(self.variables)}
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok=None):
        tok = tok or self.peek()
        raise PolyParseError(message, tok[2], self.text)

    def parse(self) -> Poly:
        result = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return result

    def expr(self) -> Poly:
        left = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.advance()[1]
            right = self.term()
            left = left + right if op == "+" else left - right
        return left

    def term(self) -> Poly:
        left = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.advance()[1]
            tok = self.peek()
            right = self.unary()
            if op == "*":
                left = left * right
            else:
                if not right.is_constant() or right.is_zero():
                    self.error("division by a non-constant or zero expression", tok)
                left = left / right
        return left

    def unary(self) -> Poly:
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.advance()
            tok = self.peek()
            if tok[0] != "num":
                self.error("expected integer exponent")
            self.advance()
            return base ** int(tok[1])
        return base

    def atom(self) -> Poly:
        tok = self.peek()
        kind, value, _ = tok
        if kind == "num":
            self.advance()
            return Poly.constant(self.variables, int(value))
        if kind == "name":
            self.advance()
            if value not in self.index:
                self.error(f"unknown variable {value!r}", tok)
            return Poly.var(self.variables, self.index[value])
        if (kind, value) == ("op", "("):
            self.advance()
            inner = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.advance()
            return inner
        if kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected token {value!r}")


def parse_poly(text: str, variables: Sequence[str]) -> Poly:
    """Parse ``text`` into a Poly over ``variables``.

    Raises PolyParseError carrying the character offset of the problem.
    """
    return _Parser(text, variables).parse()
