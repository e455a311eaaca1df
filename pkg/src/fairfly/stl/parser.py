"""Recursive-descent parser for the mission text grammar.

::

    formula   := or_expr ( '->' formula )?            # a -> b  ==  !a | b
    or_expr   := and_expr ( '|' and_expr )*
    and_expr  := until ( '&' until )*
    until     := unary ( 'U' '[' n ',' n ']' unary )?
    unary     := '!' unary
               | 'F' '[' n ',' n ']' unary
               | 'G' '[' n ',' n ']' unary
               | primary
    primary   := 'true' | atom | '(' formula ')'
    atom      := 'in'  '(' uav ',' region ')'
               | 'out' '(' uav ',' region ')'
               | 'sep' '(' uav ',' uav ',' number ')'
               | 'hs'  '(' uav ',' number {',' number} ')'

UAV names come from a fleet table (default ``u1..uD``); region names resolve
against the scenario's region map.  Implication is desugared at parse time,
so the AST only ever carries the core connectives.
"""

from __future__ import annotations

import re
from typing import Mapping

from .formula import (
    And,
    Box,
    Eventually,
    Always,
    Formula,
    Halfspace,
    InBox,
    Interval,
    Not,
    Or,
    OutBox,
    Separation,
    TrueF,
    Until,
)


class FormulaSyntaxError(ValueError):
    """Parse failure; carries the character position of the offending token."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at column {pos})")
        self.pos = pos


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[!&|()\[\],-]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise FormulaSyntaxError(f"unexpected character {stripped[0]!r}", at)
        if m.lastgroup is not None:
            tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


def _fleet_table(fleet) -> Mapping[str, int]:
    if isinstance(fleet, int):
        return {f"u{i + 1}": i for i in range(fleet)}
    return dict(fleet)


class _Parser:
    def __init__(self, text: str, fleet, regions: Mapping[str, Box] | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.fleet = _fleet_table(fleet)
        self.regions = dict(regions or {})

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.next()
        if text != value:
            raise FormulaSyntaxError(f"expected {value!r}, found {text or 'end of input'!r}", pos)
        return pos

    def fail(self, message: str):
        _, _, pos = self.peek()
        raise FormulaSyntaxError(message, pos)

    # grammar rules, lowest precedence first

    def formula(self) -> Formula:
        left = self.or_expr()
        if self.peek()[0] == "arrow":
            self.next()
            right = self.formula()
            return Or(Not(left), right)
        return left

    def or_expr(self) -> Formula:
        node = self.and_expr()
        while self.peek()[1] == "|":
            self.next()
            node = Or(node, self.and_expr())
        return node

    def and_expr(self) -> Formula:
        node = self.until_expr()
        while self.peek()[1] == "&":
            self.next()
            node = And(node, self.until_expr())
        return node

    def until_expr(self) -> Formula:
        node = self.unary()
        if self.peek()[1] == "U":
            self.next()
            window = self.interval()
            right = self.unary()
            return Until(window, node, right)
        return node

    def unary(self) -> Formula:
        kind, text, pos = self.peek()
        if text == "!":
            self.next()
            return Not(self.unary())
        if text == "F":
            self.next()
            return Eventually(self.interval(), self.unary())
        if text == "G":
            self.next()
            return Always(self.interval(), self.unary())
        return self.primary()

    def primary(self) -> Formula:
        kind, text, pos = self.peek()
        if text == "(":
            self.next()
            node = self.formula()
            self.expect(")")
            return node
        if text == "true":
            self.next()
            return TrueF()
        if text in ("in", "out", "sep", "hs"):
            return self.atom()
        self.fail(f"expected a formula, found {text or 'end of input'!r}")

    def interval(self) -> Interval:
        open_pos = self.expect("[")
        lo = self.int_bound()
        self.expect(",")
        hi = self.int_bound()
        self.expect("]")
        try:
            return Interval(lo, hi)
        except ValueError as exc:
            raise FormulaSyntaxError(str(exc), open_pos) from None

    def int_bound(self) -> int:
        kind, text, pos = self.next()
        sign = 1
        if text == "-":
            sign = -1
            kind, text, pos = self.next()
        if kind != "num":
            raise FormulaSyntaxError(f"expected a bound, found {text!r}", pos)
        value = float(text)
        if not value.is_integer():
            raise FormulaSyntaxError(f"interval bounds are step indices, got {text}", pos)
        return sign * int(value)

    def number(self) -> float:
        kind, text, pos = self.next()
        sign = 1.0
        if text == "-":
            sign = -1.0
            kind, text, pos = self.next()
        if kind != "num":
            raise FormulaSyntaxError(f"expected a number, found {text!r}", pos)
        return sign * float(text)

    def uav(self) -> int:
        kind, text, pos = self.next()
        if kind != "name":
            raise FormulaSyntaxError(f"expected a UAV name, found {text!r}", pos)
        if text not in self.fleet:
            raise FormulaSyntaxError(f"unknown UAV name {text!r}", pos)
        return self.fleet[text]

    def region(self) -> tuple[str, Box]:
        kind, text, pos = self.next()
        if kind != "name":
            raise FormulaSyntaxError(f"expected a region name, found {text!r}", pos)
        if text not in self.regions:
            raise FormulaSyntaxError(f"unknown region {text!r}", pos)
        return text, self.regions[text]

    def atom(self) -> Formula:
        _, head, pos = self.next()
        self.expect("(")
        if head in ("in", "out"):
            uav = self.uav()
            self.expect(",")
            name, box = self.region()
            self.expect(")")
            cls = InBox if head == "in" else OutBox
            return cls(uav, name, box)
        if head == "sep":
            a = self.uav()
            self.expect(",")
            b = self.uav()
            self.expect(",")
            dist = self.number()
            self.expect(")")
            if a == b:
                raise FormulaSyntaxError("sep() needs two distinct UAVs", pos)
            return Separation(a, b, dist)
        # hs(uN, a1, .., ad, b)
        uav = self.uav()
        values = []
        while self.peek()[1] == ",":
            self.next()
            values.append(self.number())
        self.expect(")")
        if len(values) < 2:
            raise FormulaSyntaxError("hs() needs at least one coefficient and an offset", pos)
        return Halfspace(uav, tuple(values[:-1]), values[-1])


def parse(text: str, fleet, regions: Mapping[str, Box] | None = None) -> Formula:
    """Parse mission text into a Formula.

    ``fleet`` is either the UAV count (names default to ``u1..uD``) or a
    name-to-index mapping.  ``regions`` maps region names to boxes and is
    required whenever the text uses ``in``/``out`` atoms.
    """
    parser = _Parser(text, fleet, regions)
    node = parser.formula()
    kind, tok, pos = parser.peek()
    if kind != "eof":
        raise FormulaSyntaxError(f"trailing input {tok!r}", pos)
    return node
