"""Canonical text form of polynomials and rational functions, and its parser.

Grammar accepted by :func:`parse` (a superset of what the formatter emits)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom (("^" | "**") ["-"] INTEGER)?
    atom   := INTEGER | SYMBOL | "(" expr ")"

``p/q`` literals are ordinary integer division and stay exact.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ParseError
from .polynomial import Context, Polynomial
from .rational import RationalFunction


def _format_coeff(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_monomial(names, e):
    parts = []
    for name, k in zip(names, e):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    terms = p.sorted_terms()
    if not terms:
        return "0"
    out = []
    for idx, (e, c) in enumerate(terms):
        mono = _format_monomial(p.context.names, e)
        neg = c < 0
        mag = -c if neg else c
        if not mono:
            body = _format_coeff(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_format_coeff(mag)}*{mono}"
        if idx == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def format_rational(r: RationalFunction) -> str:
    if r.is_polynomial():
        return format_polynomial(r.numerator)
    return f"({format_polynomial(r.numerator)})/({format_polynomial(r.denominator)})"


_TOKEN = re.compile(r"\s*(?:(\d+)|([^\W\d]\w*)|(\*\*|[-+*/^()]))", re.UNICODE)


def _tokenize(text):
    pos, toks = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r} at {pos}")
        num, name, op = m.groups()
        if num is not None:
            toks.append(("num", int(num)))
        elif name is not None:
            toks.append(("sym", name))
        else:
            toks.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text, ctx):
        self.toks = _tokenize(text)
        self.i = 0
        self.ctx = ctx

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"expected {value or kind}, got {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        val = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            val = val * rhs if op == "*" else val / rhs
        return val

    def unary(self):
        tok = self.peek()
        if tok == ("op", "-"):
            self.take()
            return -self.unary()
        if tok == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            k = self.take("num")[1]
            return base ** (sign * k)
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return RationalFunction.constant(self.ctx, val)
        if kind == "sym":
            self.take()
            try:
                return RationalFunction.var(self.ctx, val)
            except Exception as exc:
                raise ParseError(str(exc)) from None
        if (kind, val) == ("op", "("):
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        raise ParseError(f"unexpected token {val!r}")


def parse(text: str, ctx: Context) -> RationalFunction:
    """Parse an arithmetic expression over the symbols of ``ctx``."""
    p = _Parser(text, ctx)
    if not p.toks:
        raise ParseError("empty expression")
    val = p.expr()
    if p.i != len(p.toks):
        raise ParseError(f"trailing input at token {p.toks[p.i][1]!r}")
    return val


def parse_rational(text: str) -> Fraction:
    """Parse an exact scalar literal such as ``-3``, ``1/6`` or ``-2/7``."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational literal {text!r}") from exc
