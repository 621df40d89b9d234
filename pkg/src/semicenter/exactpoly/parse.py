"""Parser for the polynomial text form.

Accepts the canonical form produced by :meth:`Poly.to_text` plus
parentheses, ``**`` for powers and division by rational constants.
"""

from __future__ import annotations

import re
from typing import Sequence

from gmpy2 import mpq

from .poly import Poly, UsageError, default_names

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise UsageError(f"cannot parse polynomial near {text[pos:pos + 12]!r}")
        num, name, op = m.groups()
        if num is not None:
            toks.append(("num", num))
        elif name is not None:
            toks.append(("name", name))
        else:
            toks.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, toks, index: dict[str, int], nvars: int):
        self.toks = toks
        self.i = 0
        self.index = index
        self.n = nvars

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise UsageError(f"expected {op!r}")

    def expr(self) -> Poly:
        kind, val = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term().scale(sign)
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> Poly:
        acc = self.power()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.power()
            elif kind == "op" and val == "/":
                self.take()
                d = self.power()
                if not d.is_constant() or d.is_zero():
                    raise UsageError("division only by nonzero constants")
                acc = acc.scale(1 / d.constant_value())
            else:
                return acc

    def power(self) -> Poly:
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise UsageError("exponent must be a nonnegative integer literal")
            return base ** int(val)
        return base

    def atom(self) -> Poly:
        kind, val = self.take()
        if kind == "num":
            return Poly.const(self.n, mpq(int(val)))
        if kind == "name":
            if val not in self.index:
                raise UsageError(f"unknown variable {val!r}")
            return Poly.var(self.n, self.index[val])
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "op" and val == "-":
            return -self.power()
        raise UsageError("unexpected end of polynomial" if kind is None else f"unexpected {val!r}")


def parse_poly(text: str, names: Sequence[str] | int) -> Poly:
    """Parse ``text`` in the variables ``names`` (or ``x1..xn`` when given a count)."""
    if isinstance(names, int):
        names = default_names(names)
    index = {name: i for i, name in enumerate(names)}
    if len(index) != len(names):
        raise UsageError("duplicate variable names")
    toks = _tokenize(text)
    if not toks:
        raise UsageError("empty polynomial")
    p = _Parser(toks, index, len(names))
    out = p.expr()
    if p.i != len(toks):
        raise UsageError(f"trailing input in polynomial {text!r}")
    return out
