"""Recursive-descent parser for analytic expressions in ``z``.

Grammar (``^`` binds tighter than unary minus, so ``-z^2`` is ``-(z^2)``)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | power
    power   := atom ('^' integer)?
    atom    := 'z' | number | number 'i' | 'i'
             | ('exp' | 'log' | 'sin' | 'cos') '(' expr ')'
             | '(' expr ')'
    integer := '-'? digits

Numbers are decimals with an optional exponent (``1.5``, ``2e-3``).
"""

from __future__ import annotations

import re

from .errors import ParseError
from .expr import Add, AnalyticFn, Const, Div, Func, Mul, Neg, Pow, Sub, Var

__all__ = ["parse_expression", "parse_complex"]

_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_FUNCS = ("exp", "log", "sin", "cos")


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    pos = 0
    n = len(src)
    while pos < n:
        ch = src[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch in "+-*/^()":
            tokens.append(_Token(ch, ch, pos))
            pos += 1
            continue
        m = _NUMBER.match(src, pos)
        if m:
            tokens.append(_Token("num", m.group(0), pos))
            pos = m.end()
            continue
        m = _NAME.match(src, pos)
        if m:
            tokens.append(_Token("name", m.group(0), pos))
            pos = m.end()
            continue
        raise ParseError(f"unexpected character {ch!r}", _byte_offset(src, pos))
    tokens.append(_Token("eof", "", n))
    return tokens


def _byte_offset(src: str, pos: int) -> int:
    return len(src[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def fail(self, message, expected):
        raise ParseError(message, _byte_offset(self.src, self.tok.pos), expected)

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind):
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            self.fail(f"unexpected {found!r}", {kind})
        return self.advance()

    def parse(self) -> AnalyticFn:
        node = self.expr()
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.tok.text!r}", {"+", "-", "*", "/", "end of input"})
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.tok.kind in ("*", "/"):
            op = self.advance().kind
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self):
        if self.tok.kind == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self):
        node = self.atom()
        if self.tok.kind == "^":
            self.advance()
            sign = 1
            if self.tok.kind == "-":
                self.advance()
                sign = -1
            if self.tok.kind != "num" or not self.tok.text.isdigit():
                self.fail("exponent must be an integer", {"integer"})
            node = Pow(node, sign * int(self.advance().text))
        return node

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            value = float(t.text)
            nxt = self.tok
            # '2i' is one literal; '2 i' is not
            if nxt.kind == "name" and nxt.text == "i" and nxt.pos == t.pos + len(t.text):
                self.advance()
                return Const(complex(0.0, value))
            return Const(complex(value, 0.0))
        if t.kind == "name":
            if t.text == "z":
                self.advance()
                return Var()
            if t.text == "i":
                self.advance()
                return Const(1j)
            if t.text in _FUNCS:
                self.advance()
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Func(t.text, arg)
            self.fail(f"unknown name {t.text!r}", {"z", "i", *_FUNCS})
        if t.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = t.text or "end of input"
        self.fail(f"unexpected {found!r}", {"z", "i", "number", "(", "-", *_FUNCS})


def parse_expression(src: str) -> AnalyticFn:
    """Parse ``src`` into an :class:`AnalyticFn`; raises :class:`ParseError`."""
    return _Parser(src).parse()


_COMPLEX = re.compile(
    r"""^\s*(?:
        (?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
        (?P<im>[+-](?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?i)?
      | (?P<imonly>[+-]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?i)
    )\s*$""",
    re.VERBOSE,
)


def _imag_part(text: str) -> float:
    body = text[:-1]
    if body in ("", "+"):
        return 1.0
    if body == "-":
        return -1.0
    return float(body)


def parse_complex(text: str) -> complex:
    """Parse a complex literal of the form ``a``, ``bi``, ``a+bi`` or ``a-bi``."""
    m = _COMPLEX.match(text)
    if not m:
        raise ParseError(f"malformed complex literal {text!r}", 0, {"a+bi"})
    if m.group("imonly") is not None:
        return complex(0.0, _imag_part(m.group("imonly")))
    im = _imag_part(m.group("im")) if m.group("im") else 0.0
    return complex(float(m.group("re")), im)
