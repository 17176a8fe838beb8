"""Text grammar for polynomials.

Printed form: graded-lex descending terms ``c*x1^a*x2^b`` joined by
``+``/``-`` with rational coefficients written ``p/q``.  The parser
accepts that form plus parentheses, so model files may say
``(1 - t1^2)^2``.  Division is only allowed by constants.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ParseError
from .poly import MultiPoly, grlex_key
from .scalar import EXACT, FLOAT, check_mode

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?|\d+[eE][-+]?\d+|\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^()]))"
)

_VAR_ORDER = re.compile(r"([A-Za-z_]+)(\d*)$")


def _var_sort_key(name):
    m = _VAR_ORDER.match(name)
    prefix, num = (m.group(1), m.group(2)) if m else (name, "")
    rank = {"x": 0, "t": 1, "rho": 2}.get(prefix, 3)
    return (rank, prefix, int(num) if num else -1)


def sort_variables(names):
    """Canonical variable order: ``x1..xn``, then ``t1..td``, then ``rho``."""
    return tuple(sorted(set(names), key=_var_sort_key))


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(m.lastgroup)
        out.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, variables, mode):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.variables = variables
        self.mode = mode

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def const(self, c):
        return MultiPoly.constant(c, self.variables, self.mode)

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty polynomial")
        p = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            tok = self.take()
            q = self.unary()
            if tok[1] == "*":
                p = p * q
            else:
                if not q.is_constant():
                    self.error("division by a non-constant", tok)
                c = q.constant_term()
                if c == 0:
                    self.error("division by zero", tok)
                p = p / c
        return p

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            p = self.unary()
            return -p if tok[1] == "-" else p
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("^", "**"):
            self.take()
            e = self.take()
            if e[0] != "num" or not e[1].isdigit():
                self.error("exponent must be a non-negative integer", e)
            return base ** int(e[1])
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            if self.mode == EXACT:
                if not val.isdigit():
                    self.error(f"decimal {val!r} not allowed in exact mode; write p/q", tok)
                return self.const(Fraction(int(val)))
            return self.const(float(val))
        if kind == "name":
            if val not in self.variables:
                self.error(f"unknown variable {val!r}", tok)
            return MultiPoly.var(val, self.variables, self.mode)
        if kind == "op" and val == "(":
            p = self.expr()
            if self.take()[1] != ")":
                self.error("missing ')'", tok)
            return p
        self.error(f"unexpected token {val!r}", tok)


def parse_poly(text: str, variables=None, mode: str = EXACT) -> MultiPoly:
    """Parse ``text``; variables default to the names used, canonically sorted."""
    check_mode(mode)
    if variables is None:
        names = [v for k, v, _ in _tokenize(text) if k == "name"]
        variables = sort_variables(names)
    return _Parser(text, tuple(variables), mode).parse()


def _format_coeff(c, mode):
    if mode == FLOAT:
        return repr(float(c))
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(m, variables):
    parts = []
    for v, e in zip(variables, m):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_poly(p: MultiPoly) -> str:
    """Canonical text: graded-lex descending, ``c*x1^a*x2^b`` terms."""
    if not p.terms:
        return "0"
    chunks = []
    for m in sorted(p.terms, key=grlex_key, reverse=True):
        c = p.terms[m]
        neg = c < 0
        a = -c if neg else c
        mono = format_monomial(m, p.variables)
        if not mono:
            body = _format_coeff(a, p.mode)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a, p.mode)}*{mono}"
        if not chunks:
            chunks.append(("-" if neg else "") + body)
        else:
            chunks.append((" - " if neg else " + ") + body)
    return "".join(chunks)
