"""Recursive-descent parser for the polynomial text syntax.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := ("+" | "-") factor | power
    power  := atom (("^" | "**") INT)?
    atom   := INT | NAME | "(" expr ")"

Division is only allowed by a nonzero constant, so ``3/2*x`` is a rational
literal times ``x``. The printer in ``MPoly.__str__`` emits this syntax.
"""

import re
from dataclasses import dataclass

from sympy import QQ

from logbb.algebra.poly import Ambient, MPoly
from logbb.errors import ParseError, UnknownVariable

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^()−]))"
)

_ATOM_START = frozenset({"number", "variable", "("})
_FACTOR_START = _ATOM_START | {"+", "-"}


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op" or "end"
    text: str
    offset: int


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(
                f"unexpected character {text[start]!r}",
                _byte_offset(text, start),
                _FACTOR_START,
            )
        kind = match.lastgroup or "op"
        value = match.group(kind).replace("−", "-")
        tokens.append(Token(kind, value, _byte_offset(text, match.start(kind))))
        pos = match.end()
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


class PolyParser:
    """Parses one polynomial over a fixed ambient."""

    def __init__(self, text: str, ambient: Ambient):
        self.text = text
        self.ambient = ambient
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def at(self, *ops: str) -> bool:
        return self.current.kind == "op" and self.current.text in ops

    def fail(self, expected: frozenset[str] | set[str]) -> ParseError:
        token = self.current
        found = "end of input" if token.kind == "end" else repr(token.text)
        return ParseError(f"unexpected {found}", token.offset, expected)

    def parse(self) -> MPoly:
        result = self.expr()
        if self.current.kind != "end":
            raise self.fail({"+", "-", "*", "/", "^", "end of input"})
        return result

    def expr(self) -> MPoly:
        result = self.term()
        while self.at("+", "-"):
            op = self.advance().text
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> MPoly:
        result = self.factor()
        while self.at("*", "/"):
            op = self.advance()
            rhs = self.factor()
            if op.text == "*":
                result = result * rhs
                continue
            if not rhs.is_constant() or not rhs.constant_value():
                raise ParseError(
                    "division is only allowed by a nonzero constant",
                    op.offset,
                    {"number"},
                )
            result = result.scale(QQ.one / rhs.constant_value())
        return result

    def factor(self) -> MPoly:
        if self.at("-"):
            self.advance()
            return -self.factor()
        if self.at("+"):
            self.advance()
            return self.factor()
        return self.power()

    def power(self) -> MPoly:
        base = self.atom()
        if self.at("^", "**"):
            self.advance()
            token = self.current
            if token.kind != "num":
                raise self.fail({"number"})
            self.advance()
            return base ** int(token.text)
        return base

    def atom(self) -> MPoly:
        token = self.current
        if token.kind == "num":
            self.advance()
            return MPoly.constant(self.ambient, int(token.text))
        if token.kind == "name":
            self.advance()
            if token.text not in self.ambient.names:
                raise UnknownVariable(token.text, token.offset)
            return MPoly.variable(self.ambient, token.text)
        if self.at("("):
            self.advance()
            inner = self.expr()
            if not self.at(")"):
                raise self.fail({")", "+", "-", "*", "/", "^"})
            self.advance()
            return inner
        raise self.fail(_ATOM_START | {"+", "-"})


def parse_poly(text: str, ambient: Ambient) -> MPoly:
    """Parse ``text`` into a polynomial over ``ambient``."""
    return PolyParser(text, ambient).parse()
