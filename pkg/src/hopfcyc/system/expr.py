"""Recursive-descent parser for the polynomial expressions in system files.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

Rational literals such as ``2/3`` are ordinary divisions of integers.
Expressions are kept as small ASTs and evaluated against an environment, so
the same text can yield a Poly3, a rational, or a univariate polynomial.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Mapping

from ..exact.rational import Q


class SystemSyntaxError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {message}")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    name: str
    col: int = 0


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


def tokenize(text: str, line: int = 0, col0: int = 0) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = len(text[pos:]) - len(text[pos:].lstrip())
            raise SystemSyntaxError(f"unexpected character {text[pos + bad]!r}", line, col0 + pos + bad + 1)
        col = col0 + m.start(m.lastindex) + 1
        if m.group(1):
            toks.append(("int", m.group(1), col))
        elif m.group(2):
            toks.append(("name", m.group(2), col))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            toks.append(("op", op, col))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, line: int, col0: int):
        self.toks = tokenize(text, line, col0)
        self.i = 0
        self.line = line
        self.end_col = col0 + len(text.rstrip()) + 1

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def error(self, msg: str, tok=None):
        tok = tok or self.peek()
        col = tok[2] if tok else self.end_col
        raise SystemSyntaxError(msg, self.line, col)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of expression")
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            self.error(f"unexpected {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            self.error("empty expression")
        node = self.expr()
        if self.peek() is not None:
            self.error(f"unexpected {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "+-":
            self.i += 1
            node = Bin(tok[1], node, self.term())
        return node

    def term(self):
        node = self.unary()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "*/":
            self.i += 1
            node = Bin(tok[1], node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.i += 1
            arg = self.unary()
            return Neg(arg) if tok[1] == "-" else arg
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.i += 1
            e = self.take("int")
            return Pow(base, int(e[1]))
        return base

    def atom(self):
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of expression")
        if tok[0] == "int":
            self.i += 1
            return Num(int(tok[1]))
        if tok[0] == "name":
            self.i += 1
            return Name(tok[1], tok[2])
        if tok[1] == "(":
            self.i += 1
            node = self.expr()
            self.take("op", ")")
            return node
        self.error(f"unexpected {tok[1]!r}")


def parse_expr(text: str, line: int = 0, col0: int = 0):
    return _Parser(text, line, col0).parse()


def names_in(node) -> set[str]:
    if isinstance(node, Name):
        return {node.name}
    if isinstance(node, Neg):
        return names_in(node.arg)
    if isinstance(node, Bin):
        return names_in(node.left) | names_in(node.right)
    if isinstance(node, Pow):
        return names_in(node.base)
    return set()


class EvalError(ValueError):
    pass


def evaluate(node, env: Mapping[str, object], divide: Callable | None = None):
    """Evaluate an AST; names are looked up in ``env``.

    Division is only ever by a scalar; ``divide(a, b)`` may override it.
    """
    if isinstance(node, Num):
        return Q(node.value)
    if isinstance(node, Name):
        try:
            return env[node.name]
        except KeyError:
            raise EvalError(f"unknown name {node.name!r}") from None
    if isinstance(node, Neg):
        return -evaluate(node.arg, env, divide)
    if isinstance(node, Pow):
        return evaluate(node.base, env, divide) ** node.exp
    a = evaluate(node.left, env, divide)
    b = evaluate(node.right, env, divide)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if divide is not None:
        return divide(a, b)
    if not _is_scalar(b):
        raise EvalError("division by a non-constant expression")
    if b == 0:
        raise ZeroDivisionError("division by zero")
    return a * (Q(1) / Q(b))


def _is_scalar(v) -> bool:
    try:
        Q(v)
    except (TypeError, ValueError):
        return False
    return True


def to_text(node) -> str:
    """Fully parenthesized text; parses back to the same tree."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Name):
        return node.name
    if isinstance(node, Neg):
        return f"-({to_text(node.arg)})"
    if isinstance(node, Pow):
        return f"({to_text(node.base)})^{node.exp}"
    return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
