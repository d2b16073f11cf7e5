"""Recursive-descent parser for rational expressions over a tower.

Grammar (whitespace is insignificant)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('+' | '-') factor | base ('^' exponent)?
    exponent := ['-'] integer | '(' ['-'] integer ')'
    base   := number | 'x' | ident | '(' expr ')'
            | 'exp' '(' ('int' '(' expr ')' | expr) ')'

Numbers are integers or decimals.  Columns in error messages are 1-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from ..errors import HyperredError

RESERVED = frozenset({"exp", "int"})


class ExpressionSyntaxError(HyperredError, SyntaxError):
    """Malformed input; ``column`` is 1-based."""

    def __init__(self, message: str, text: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.msg = f"{message} at column {column}"
        self.reason = message
        self.text = text
        self.column = column
        self.offset = column


class UnknownIdentifier(HyperredError, NameError):
    def __init__(self, name: str, column: int):
        super().__init__(f"unknown identifier {name!r} at column {column}")
        self.name = name
        self.column = column


# -- AST -----------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str
    column: int = 0


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Exp:
    """``exp(arg)`` or, with ``integral`` set, ``exp(int(arg))``."""

    arg: "Node"
    integral: bool
    column: int = 0


Node = Union[Num, Var, Neg, BinOp, Pow, Exp]


@dataclass(frozen=True)
class SourceExpression:
    text: str
    ast: Node

    def generator_refs(self) -> list:
        """Inline ``exp`` forms in the order they appear."""
        out: list = []
        _collect(self.ast, out)
        return out


def _collect(node, out: list) -> None:
    if isinstance(node, Exp):
        out.append(node)
        _collect(node.arg, out)
    elif isinstance(node, BinOp):
        _collect(node.left, out)
        _collect(node.right, out)
    elif isinstance(node, (Neg,)):
        _collect(node.arg, out)
    elif isinstance(node, Pow):
        _collect(node.base, out)


# -- tokens --------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?|\.\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


@dataclass(frozen=True)
class _Tok:
    kind: str  # "num", "ident", "op", "end"
    text: str
    column: int


def tokenize(text: str) -> list:
    toks = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            toks.append(_Tok("end", "", n + 1))
            return toks
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", text, pos + 1)
        col = m.start(m.lastindex) + 1
        if m.group(1):
            toks.append(_Tok("num", m.group(1), col))
        elif m.group(2):
            toks.append(_Tok("ident", m.group(2), col))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            toks.append(_Tok("op", op, col))
        pos = m.end()


class _Parser:
    def __init__(self, text: str, names: Optional[Iterable[str]]):
        self.text = text
        self.toks = tokenize(text)
        self.pos = 0
        self.names = None if names is None else set(names) | {"x"}

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def take(self) -> _Tok:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: Optional[_Tok] = None):
        tok = tok or self.peek()
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ExpressionSyntaxError(f"{message}, found {what}", self.text, tok.column)

    def expect(self, op: str) -> _Tok:
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            self.error(f"expected {op!r}")
        return self.take()

    def is_op(self, *ops) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text in ops

    def parse(self) -> Node:
        node = self.expr()
        if self.peek().kind != "end":
            self.error("expected an operator")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.is_op("+", "-"):
            op = self.take().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.is_op("*", "/"):
            op = self.take().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        if self.is_op("-"):
            self.take()
            return Neg(self.factor())
        if self.is_op("+"):
            self.take()
            return self.factor()
        base = self.base()
        if self.is_op("^"):
            self.take()
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> int:
        paren = self.is_op("(")
        if paren:
            self.take()
        sign = 1
        if self.is_op("-"):
            self.take()
            sign = -1
        tok = self.peek()
        if tok.kind != "num" or not tok.text.isdigit():
            self.error("expected an integer exponent")
        self.take()
        if paren:
            self.expect(")")
        return sign * int(tok.text)

    def base(self) -> Node:
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            return Num(Fraction(tok.text))
        if tok.kind == "ident":
            self.take()
            if tok.text == "exp":
                return self.exp_form(tok)
            if tok.text in RESERVED:
                self.error("unexpected keyword", tok)
            if self.names is not None and tok.text not in self.names:
                raise UnknownIdentifier(tok.text, tok.column)
            return Var(tok.text, tok.column)
        if self.is_op("("):
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        self.error("expected a number, a name or '('")

    def exp_form(self, head: _Tok) -> Node:
        self.expect("(")
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "int":
            self.take()
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            self.expect(")")
            return Exp(arg, True, head.column)
        arg = self.expr()
        self.expect(")")
        return Exp(arg, False, head.column)


def parse(text: str, names: Optional[Iterable[str]] = None) -> SourceExpression:
    """Parse ``text``; identifiers other than ``x`` must be in ``names`` when given."""
    if not isinstance(text, str):
        raise TypeError("expression text must be a string")
    return SourceExpression(text, _Parser(text, names).parse())
