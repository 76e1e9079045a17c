"""Recursive-descent parser for algebra elements, wavefunctions and scalars.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ['-'] (literal | symbol ['^' int] | '(' expr ')')

Products need an explicit ``*``.  Literals are integers, ``p/q`` rationals and
the imaginary unit ``i``.  Negative powers are accepted only on E, a and beta.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .freealg import NCPolynomial, Presentation, preset
from .opcalc import VARIABLES, WaveFunction
from .scalar import I_UNIT, LAURENT_SYMBOLS, SYMBOLS, GaussRational, Scalar

NEGATIVE_OK = frozenset({"E"}) | LAURENT_SYMBOLS


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"at byte {offset}: {message}")
        self.offset = offset
        self.message = message


class UnboundSymbol(ParseError):
    pass


# -- syntax tree ----------------------------------------------------------------


@dataclass(frozen=True)
class Literal:
    value: GaussRational
    offset: int


@dataclass(frozen=True)
class Symbol:
    name: str
    exp: int
    offset: int


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    offset: int


@dataclass(frozen=True)
class Product:
    factors: tuple["Node", ...]
    offset: int


@dataclass(frozen=True)
class Sum:
    terms: tuple[tuple[int, "Node"], ...]  # (sign, term)
    offset: int


@dataclass(frozen=True)
class Group:
    inner: "Node"
    offset: int


Node = Union[Literal, Symbol, Neg, Product, Sum, Group]

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, end
    text: str
    offset: int  # byte offset


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    byte_at = _byte_offsets(text)
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            tokens.append(Token("end", "", byte_at[len(text)]))
            return tokens
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", byte_at[pos])
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), byte_at[start]))
        pos = m.end()


def _byte_offsets(text: str) -> list[int]:
    out = [0]
    for ch in text:
        out.append(out[-1] + len(ch.encode("utf-8")))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def _take(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def _is(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return node

    def expr(self) -> Node:
        start = self.tok.offset
        terms = [(1, self.term())]
        while self._is("+") or self._is("-"):
            sign = 1 if self._take().text == "+" else -1
            terms.append((sign, self.term()))
        return terms[0][1] if len(terms) == 1 else Sum(tuple(terms), start)

    def term(self) -> Node:
        start = self.tok.offset
        factors = [self.factor()]
        while self._is("*"):
            self._take()
            factors.append(self.factor())
        if self.tok.kind in ("num", "name") or self._is("("):
            raise ParseError("missing '*' between factors", self.tok.offset)
        return factors[0] if len(factors) == 1 else Product(tuple(factors), start)

    def factor(self) -> Node:
        tok = self.tok
        if self._is("-"):
            self._take()
            return Neg(self._atom(), tok.offset)
        return self._atom()

    def _atom(self) -> Node:
        tok = self.tok
        if tok.kind == "num":
            self._take()
            value = Fraction(int(tok.text))
            if self._is("/"):
                self._take()
                den = self.tok
                if den.kind != "num":
                    raise ParseError("expected a denominator after '/'", den.offset)
                self._take()
                if int(den.text) == 0:
                    raise ParseError("zero denominator", den.offset)
                value = Fraction(int(tok.text), int(den.text))
            return Literal(GaussRational(value), tok.offset)
        if tok.kind == "name":
            self._take()
            if tok.text == "i":
                return Literal(I_UNIT, tok.offset)
            exp = 1
            if self._is("^"):
                self._take()
                exp = self._int()
                if exp < 0 and tok.text not in NEGATIVE_OK:
                    raise ParseError(f"negative power of {tok.text} (allowed only for E, a, beta)", tok.offset)
            return Symbol(tok.text, exp, tok.offset)
        if self._is("("):
            self._take()
            inner = self.expr()
            if not self._is(")"):
                raise ParseError("expected ')'", self.tok.offset)
            self._take()
            return Group(inner, tok.offset)
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"unexpected {what}", tok.offset)

    def _int(self) -> int:
        sign = 1
        if self._is("-"):
            self._take()
            sign = -1
        tok = self.tok
        if tok.kind != "num":
            raise ParseError("expected an integer exponent", tok.offset)
        self._take()
        return sign * int(tok.text)


def parse_ast(text: str) -> Node:
    return _Parser(text).parse()


# -- binding ---------------------------------------------------------------------


class _Binder:
    """Evaluates a tree into one value type."""

    def __init__(self, lift_scalar, lift_symbol):
        self.lift_scalar = lift_scalar
        self.lift_symbol = lift_symbol

    def __call__(self, node: Node):
        if isinstance(node, Literal):
            return self.lift_scalar(Scalar(node.value))
        if isinstance(node, Symbol):
            if node.name in SYMBOLS:
                return self.lift_scalar(Scalar.symbol(node.name, node.exp))
            return self.lift_symbol(node)
        if isinstance(node, Neg):
            return -self(node.operand)
        if isinstance(node, Group):
            return self(node.inner)
        if isinstance(node, Product):
            out = self(node.factors[0])
            for f in node.factors[1:]:
                out = out * self(f)
            return out
        if isinstance(node, Sum):
            out = None
            for sign, t in node.terms:
                val = self(t)
                val = val if sign > 0 else -val
                out = val if out is None else out + val
            return out
        raise TypeError(f"unknown node {node!r}")


def parse_element(text: str, pres: Presentation | str) -> NCPolynomial:
    """Parse and normal-order an element of a presentation."""
    if isinstance(pres, str):
        pres = preset(pres)

    def sym(node: Symbol):
        if node.name not in pres.index:
            raise UnboundSymbol(f"unknown symbol {node.name!r} for {pres.name}", node.offset)
        return pres.gen(node.name, node.exp)

    return _Binder(pres.scalar, sym)(parse_ast(text))


def parse_wavefunction(text: str, variables=VARIABLES) -> WaveFunction:
    variables = tuple(variables)

    def lift(c: Scalar) -> WaveFunction:
        return WaveFunction.constant(c, variables)

    def sym(node: Symbol):
        if node.name not in variables:
            raise UnboundSymbol(f"unknown symbol {node.name!r}; variables are {', '.join(variables)}", node.offset)
        return WaveFunction.monomial(variables=variables, **{node.name: node.exp})

    return _Binder(lift, sym)(parse_ast(text))


def parse_scalar(text: str) -> Scalar:
    def sym(node: Symbol):
        raise UnboundSymbol(f"unknown symbol {node.name!r} in a scalar", node.offset)

    return _Binder(lambda c: c, sym)(parse_ast(text))
