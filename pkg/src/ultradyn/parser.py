"""Recursive-descent parser for rational maps in the variable z.

Grammar (whitespace ignored, no implicit multiplication)::

    expr     := term (('+' | '-') term)*
    term     := ['-'] factor (('*' | '/') factor)*
    factor   := base ('^' uint)?
    base     := 'z' | rational | '(' expr ')'
    rational := int ('/' uint)?

A signed integer literal is a single token, so ``-2^2`` is 4 while
``-z^2`` is the negation of z^2.  ``3/4^2`` reads the literal 3/4 first.
"""

import re
from fractions import Fraction

from ultradyn.errors import DegreeError, ParseError
from ultradyn.poly import Poly
from ultradyn.ratfunc import RatMap, _check_cap

_TOKEN = re.compile(r"\s*(?:(\d+)|(z)|([-+*/^()]))")


def tokenize(text):
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, ("z", "digit", "(", "operator"))
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("num", int(m.group(1)), start))
        else:
            toks.append((m.group(m.lastindex), None, start))
        pos = m.end()
    toks.append(("end", None, n))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind):
        t = self.peek()
        if t[0] != kind:
            raise ParseError(f"unexpected {_describe(t)}", t[2], (kind,))
        return self.take()

    def parse(self):
        val = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {_describe(t)}", t[2], ("+", "-", "*", "/", "^", "end of input"))
        return val

    def expr(self):
        val = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        neg = False
        if self.peek()[0] == "-" and self.peek(1)[0] != "num":
            self.take()
            neg = True
        val = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.take()
            rhs = self.factor()
            if op[0] == "*":
                val = val * rhs
            else:
                if rhs.num.is_zero():
                    raise ParseError("division by the zero polynomial", op[2])
                val = val / rhs
        return -val if neg else val

    def factor(self):
        val = self.base()
        if self.peek()[0] == "^":
            self.take()
            t = self.expect("num")
            k = t[1]
            _check_cap(val.degree * k)
            val = val**k
        return val

    def base(self):
        t = self.peek()
        if t[0] == "z":
            self.take()
            return RatMap(Poly.z())
        if t[0] == "(":
            self.take()
            val = self.expr()
            self.expect(")")
            return val
        if t[0] == "num" or (t[0] == "-" and self.peek(1)[0] == "num"):
            sign = 1
            if t[0] == "-":
                self.take()
                sign = -1
            a = self.take()[1]
            if self.peek()[0] == "/" and self.peek(1)[0] == "num":
                slash = self.take()
                b = self.take()[1]
                if b == 0:
                    raise ParseError("zero denominator in rational literal", slash[2])
                return RatMap(Poly.const(Fraction(sign * a, b)))
            return RatMap(Poly.const(sign * a))
        raise ParseError(f"unexpected {_describe(t)}", t[2], ("z", "number", "("))


def _describe(tok):
    if tok[0] == "end":
        return "end of input"
    if tok[0] == "num":
        return f"number {tok[1]}"
    return f"{tok[0]!r}"


def parse_expr(text):
    """Parse into a normalized RatMap without any degree requirement."""
    if not text.strip():
        raise ParseError("empty expression", 0, ("z", "number", "("))
    return _Parser(text).parse()


def parse_map(text):
    """Parse a map for dynamics; the normalized degree must be at least 1."""
    phi = parse_expr(text)
    if phi.degree == 0:
        raise DegreeError(f"map {text!r} has degree 0 after normalization")
    return phi


def parse_poly(text):
    phi = parse_expr(text)
    if not phi.is_polynomial():
        raise ParseError("expected a polynomial", 0)
    return phi.num


def render(phi):
    return phi.render()
