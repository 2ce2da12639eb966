"""Expression parser for the polynomial input language.

Grammar (UTF-8 text): integer literals, identifiers
``[A-Za-z][A-Za-z0-9_]*``, operators ``+ - * / ^`` with the usual
precedence, and parentheses.  Rationals are written ``p/q`` (ordinary
division).  Implicit multiplication is NOT allowed: ``2x`` is a syntax
error, write ``2*x``.  Exponents are nonnegative integer literals.

Vector fields use the same grammar extended with ``d/dx`` atoms, e.g.
``d/dx + p*d/dy + q^2*d/dz``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .scalars import MultiPoly, RationalFunction, ScalarError


class ParseError(ValueError):
    """Syntax error, with the offending position in the message."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UndeclaredVariableError(ParseError):
    pass


class NotPolynomialError(ValueError):
    """Division produced a genuine rational function where a polynomial
    was required."""


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|([-+*/^()]))")
_FIELD_ATOM_RE = re.compile(r"d/d([A-Za-z][A-Za-z0-9_]*)")


class _Tokens:
    def __init__(self, text: str, extra_atoms: bool = False):
        self.text = text
        self.items = []  # (kind, value, position)
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            if extra_atoms:
                m = _FIELD_ATOM_RE.match(text, pos)
                if m:
                    self.items.append(("partial", m.group(1), pos))
                    pos = m.end()
                    continue
            m = _TOKEN_RE.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            if m.group(1) is not None:
                self.items.append(("int", int(m.group(1)), m.start(1)))
            elif m.group(2) is not None:
                self.items.append(("name", m.group(2), m.start(2)))
            else:
                self.items.append(("op", m.group(3), m.start(3)))
            pos = m.end()
        self.items.append(("end", None, len(text)))
        self.index = 0

    def peek(self):
        return self.items[self.index]

    def next(self):
        tok = self.items[self.index]
        self.index += 1
        return tok


class _Parser:
    """Recursive descent over values that are Fraction, MultiPoly or
    RationalFunction; operators promote as needed."""

    def __init__(self, tokens: _Tokens, ring: Sequence[str], atom_hook=None):
        self.tokens = tokens
        self.ring = tuple(ring)
        self.atom_hook = atom_hook

    def parse(self):
        value = self.expr()
        kind, _, pos = self.tokens.peek()
        if kind != "end":
            raise ParseError("trailing input", pos)
        return value

    def expr(self):
        value = self.term()
        while True:
            kind, op, _ = self.tokens.peek()
            if kind == "op" and op in "+-":
                self.tokens.next()
                rhs = self.term()
                value = value + rhs if op == "+" else value - rhs
            else:
                return value

    def term(self):
        value = self.factor()
        while True:
            kind, op, _ = self.tokens.peek()
            if kind == "op" and op in "*/":
                _, _, pos = self.tokens.next()
                rhs = self.factor()
                if op == "*":
                    value = value * rhs
                else:
                    value = self._divide(value, rhs, pos)
            else:
                return value

    def _divide(self, a, b, pos: int):
        try:
            if isinstance(a, Fraction) and isinstance(b, Fraction):
                return a / b
            return a / b
        except ZeroDivisionError:
            raise ParseError("division by zero", pos) from None

    def factor(self):
        value = self.atom()
        kind, op, _ = self.tokens.peek()
        if kind == "op" and op == "^":
            self.tokens.next()
            ekind, exp, pos = self.tokens.next()
            if ekind != "int":
                raise ParseError("exponent must be a nonnegative integer literal", pos)
            if isinstance(value, Fraction):
                return value ** exp
            return value ** exp
        return value

    def atom(self):
        kind, val, pos = self.tokens.next()
        if kind == "int":
            return Fraction(val)
        if kind == "name":
            if val not in self.ring:
                raise UndeclaredVariableError(f"undeclared identifier {val!r}", pos)
            return MultiPoly.variable(self.ring, val)
        if kind == "partial":
            if self.atom_hook is None:
                raise ParseError("d/d-atoms are only valid in vector fields", pos)
            return self.atom_hook(val, pos)
        if kind == "op" and val == "(":
            value = self.expr()
            kind2, val2, pos2 = self.tokens.next()
            if not (kind2 == "op" and val2 == ")"):
                raise ParseError("expected ')'", pos2)
            return value
        if kind == "op" and val == "-":
            return -self.factor()
        if kind == "op" and val == "+":
            return self.factor()
        raise ParseError(f"unexpected token {val!r}" if val is not None
                         else "unexpected end of input", pos)


def parse_expression(text: str, ring: Sequence[str], *, require_poly: bool = False):
    """Parse an expression over the declared ring.

    Returns a MultiPoly when the result is polynomial (denominators
    cancel), otherwise a RationalFunction.  With ``require_poly`` a
    non-polynomial result raises NotPolynomialError.
    """
    tokens = _Tokens(text)
    value = _Parser(tokens, ring).parse()
    if isinstance(value, Fraction):
        value = MultiPoly.const(ring, value)
    if isinstance(value, RationalFunction):
        if value.is_polynomial():
            value = value.as_poly()
        elif require_poly:
            raise NotPolynomialError(
                f"expression is not a polynomial: denominator {value.den}")
    return value


def parse_rational(text: str) -> Fraction:
    """Parse an integer or p/q literal (with optional sign)."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational literal {text!r}: {exc}", 0) from None


def parse_vector_field(text: str, chart_variables: Sequence[str]):
    """Parse ``d/dx + p*d/dy + ...`` into a tuple of RationalFunction
    components over the chart ring.

    The expression must be linear in the ``d/d<var>`` atoms with
    coefficients free of them; denominators containing them are rejected.
    """
    chart_variables = tuple(chart_variables)
    marker = {}
    ext_ring = list(chart_variables)
    for v in chart_variables:
        name = f"_D_{v}"
        while name in ext_ring:
            name = "_" + name
        marker[v] = name
        ext_ring.append(name)
    ext_ring = tuple(ext_ring)

    def hook(var: str, pos: int):
        if var not in chart_variables:
            raise UndeclaredVariableError(f"d/d{var}: {var!r} is not a chart variable", pos)
        return MultiPoly.variable(ext_ring, marker[var])

    tokens = _Tokens(text, extra_atoms=True)
    value = _Parser(tokens, ext_ring, atom_hook=hook).parse()
    if isinstance(value, Fraction):
        raise ParseError("a vector field needs at least one d/d-atom", 0)
    if isinstance(value, MultiPoly):
        value = RationalFunction(value)
    marker_idx = {ext_ring.index(marker[v]): i for i, v in enumerate(chart_variables)}
    for i in marker_idx:
        if value.den.degree_in(ext_ring[i]) > 0:
            raise ParseError("d/d-atoms may not appear in denominators", 0)
    comp_num = [MultiPoly.zero(ext_ring) for _ in chart_variables]
    for mono, coef in value.num.terms.items():
        hit = None
        rest = []
        for idx, e in mono:
            if idx in marker_idx:
                if hit is not None or e != 1:
                    raise ParseError("vector field must be linear in d/d-atoms", 0)
                hit = marker_idx[idx]
            else:
                rest.append((idx, e))
        if hit is None:
            raise ParseError(f"stray scalar term in vector field: "
                             f"{MultiPoly(ext_ring, {mono: coef})}", 0)
        comp_num[hit] = comp_num[hit] + MultiPoly(ext_ring, {tuple(rest): coef})
    den = value.den.restrict_ring(chart_variables)
    components = []
    for num in comp_num:
        components.append(RationalFunction(num.restrict_ring(chart_variables), den))
    return tuple(components)
