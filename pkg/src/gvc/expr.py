"""Text syntax for polynomials, operators and Weyl-algebra elements.

Grammar (whitespace is ignored)::

    expr     := term (("+" | "-") term)*
    term     := factor ("*" factor)*
    factor   := atom ("^" NAT)?
    atom     := RATIONAL | "i" | VAR | "(" expr ")" | "-" factor
    VAR      := ("x" | "dx" | "y" | "dy") NAT
    RATIONAL := INT ("/" NAT)?

Products are read left to right as composition, so ``dx1*x1`` is the Weyl
element ``x1*dx1 + 1`` while ``x1*dx1`` is already in normal form. There is
no implicit multiplication: ``x1x2`` is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import ParseError
from .fields import FieldSpec, GaussianRational
from .polynomials import DiffOp, Polynomial, Ring
from .weyl import WeylElement

__all__ = [
    "parse",
    "parse_ast",
    "lower",
    "format_expr",
    "coefficient_parts",
    "variables",
    "MAX_EXPONENT",
]

MAX_EXPONENT = 4096


# AST


@dataclass(frozen=True)
class Rational:
    value: Fraction
    pos: int


@dataclass(frozen=True)
class ImaginaryUnit:
    pos: int


@dataclass(frozen=True)
class Var:
    kind: str  # "x", "dx", "y" or "dy"
    index: int
    pos: int


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    pos: int


@dataclass(frozen=True)
class Sum:
    """``terms[0] +- terms[1] +- ...``; ``signs[k]`` is ``"+"`` or ``"-"``."""

    signs: tuple[str, ...]
    terms: tuple["Node", ...]
    pos: int


@dataclass(frozen=True)
class Product:
    """Left-to-right product; order matters for Weyl elements."""

    factors: tuple["Node", ...]
    pos: int


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int
    pos: int


Node = Union[Rational, ImaginaryUnit, Var, Neg, Sum, Product, Pow]


# lexer


@dataclass(frozen=True)
class _Token:
    kind: str  # NUM, VAR, I, OP, END
    text: str
    pos: int
    value: object = None


_VAR_PREFIXES = ("dx", "dy", "x", "y")


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    offsets = _byte_offsets(text)
    k = 0
    length = len(text)
    while k < length:
        ch = text[k]
        if ch in " \t\r\n":
            k += 1
            continue
        pos = offsets[k]
        if ch.isdigit() and ch.isascii():
            start = k
            while k < length and text[k].isdigit() and text[k].isascii():
                k += 1
            tokens.append(_Token("NUM", text[start:k], pos, _to_int(text[start:k], pos)))
            continue
        if ch in "+-*^/()":
            tokens.append(_Token("OP", ch, pos))
            k += 1
            continue
        prefix = next((p for p in _VAR_PREFIXES if text.startswith(p, k)), None)
        if prefix is not None:
            start = k
            k += len(prefix)
            digits_start = k
            while k < length and text[k].isdigit() and text[k].isascii():
                k += 1
            if k == digits_start:
                raise ParseError(f"variable {prefix!r} needs an index", pos)
            if k < length and (text[k].isalpha() or text[k] == "_"):
                raise ParseError("unexpected character after variable (use '*' to multiply)", offsets[k])
            index = _to_int(text[digits_start:k], pos)
            tokens.append(_Token("VAR", text[start:k], pos, (prefix, index)))
            continue
        if ch == "i":
            if k + 1 < length and (text[k + 1].isalnum() or text[k + 1] == "_"):
                raise ParseError("unexpected character after 'i' (use '*' to multiply)", offsets[k + 1])
            tokens.append(_Token("I", "i", pos))
            k += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", pos)
    tokens.append(_Token("END", "", offsets[length]))
    return tokens


def _to_int(digits: str, pos: int) -> int:
    try:
        return int(digits)
    except ValueError:
        raise ParseError("integer literal too long", pos) from None


def _byte_offsets(text: str) -> list[int]:
    out = []
    total = 0
    for ch in text:
        out.append(total)
        total += len(ch.encode("utf-8", "surrogatepass"))
    out.append(total)
    return out


# parser


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.k = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.k]

    def advance(self) -> _Token:
        t = self.tokens[self.k]
        self.k += 1
        return t

    def at_op(self, ch: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text == ch

    def expect_op(self, ch: str) -> _Token:
        if not self.at_op(ch):
            raise ParseError(f"expected {ch!r}", self.tok.pos)
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "END":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return node

    def expr(self) -> Node:
        pos = self.tok.pos
        signs, terms = ["+"], [self.term()]
        while self.at_op("+") or self.at_op("-"):
            signs.append(self.advance().text)
            terms.append(self.term())
        if len(terms) == 1:
            return terms[0]
        return Sum(tuple(signs), tuple(terms), pos)

    def term(self) -> Node:
        pos = self.tok.pos
        factors = [self.factor()]
        while self.at_op("*"):
            self.advance()
            factors.append(self.factor())
        if len(factors) == 1:
            return factors[0]
        return Product(tuple(factors), pos)

    def factor(self) -> Node:
        node = self.atom()
        if self.at_op("^"):
            op = self.advance()
            if self.tok.kind != "NUM":
                raise ParseError("exponent must be a natural number", self.tok.pos)
            exp = self.advance()
            if exp.value > MAX_EXPONENT:
                raise ParseError(f"exponent larger than {MAX_EXPONENT}", exp.pos)
            node = Pow(node, exp.value, op.pos)
        return node

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "NUM":
            self.advance()
            value = Fraction(t.value)
            if self.at_op("/"):
                self.advance()
                if self.tok.kind != "NUM":
                    raise ParseError("denominator must be a natural number", self.tok.pos)
                den = self.advance()
                if den.value == 0:
                    raise ParseError("zero denominator", den.pos)
                value = Fraction(t.value, den.value)
            return Rational(value, t.pos)
        if t.kind == "I":
            self.advance()
            return ImaginaryUnit(t.pos)
        if t.kind == "VAR":
            self.advance()
            prefix, index = t.value
            return Var(prefix, index, t.pos)
        if self.at_op("("):
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        if self.at_op("-"):
            self.advance()
            return Neg(self.factor(), t.pos)
        if t.kind == "END":
            raise ParseError("unexpected end of input", t.pos)
        raise ParseError(f"unexpected {t.text!r}", t.pos)


def parse_ast(text: str) -> Node:
    """Parse ``text`` into an AST without interpreting it."""
    tokens = _tokenize(text)
    try:
        return _Parser(tokens).parse()
    except RecursionError:
        raise ParseError("expression nested too deeply", 0) from None


# lowering


def _children(node: Node) -> tuple[Node, ...]:
    if isinstance(node, Neg):
        return (node.operand,)
    if isinstance(node, Pow):
        return (node.base,)
    if isinstance(node, Sum):
        return node.terms
    if isinstance(node, Product):
        return node.factors
    return ()


def variables(node: Node):
    """Every variable occurrence in ``node``, left to right."""
    stack = [node]
    while stack:
        cur = stack.pop()
        if isinstance(cur, Var):
            yield cur
        stack.extend(reversed(_children(cur)))


def _var_kind(v: Var) -> str:
    return "d" if v.kind.startswith("d") else "x"


def lower(node: Node, ring: Ring, want: str | None = None):
    """Interpret an AST in ``ring``.

    ``want`` is ``"poly"``, ``"op"``, ``"weyl"`` or ``None`` (pick by the
    variables present: x/y only gives a Polynomial, dx/dy only a DiffOp,
    both a WeylElement).
    """
    kinds = {_var_kind(v) for v in variables(node)}
    if want is None:
        if kinds == {"x", "d"}:
            want = "weyl"
        elif kinds == {"d"}:
            want = "op"
        else:
            want = "poly"
    elif want == "poly" and "d" in kinds:
        raise ParseError("expected a polynomial, found a partial derivative", _first_var(node, "d"))
    elif want == "op" and "x" in kinds:
        raise ParseError("expected an operator, found a polynomial variable", _first_var(node, "x"))
    elif want not in ("poly", "op", "weyl"):
        raise ValueError(f"unknown target {want!r}")
    cls = {"poly": Polynomial, "op": DiffOp, "weyl": WeylElement}[want]
    try:
        return _eval(node, ring, cls)
    except RecursionError:
        raise ParseError("expression nested too deeply", 0) from None


def _first_var(node: Node, kind: str) -> int:
    return next(v.pos for v in variables(node) if _var_kind(v) == kind)


def _var_index(node: Var, ring: Ring) -> int:
    bound = ring.n if node.kind in ("x", "dx") else ring.N
    if not 1 <= node.index <= bound:
        raise ParseError(f"variable {node.kind}{node.index} out of range (1..{bound})", node.pos)
    return node.index - 1 if node.kind in ("x", "dx") else ring.n + node.index - 1


def _constant(cls, ring: Ring, value, pos: int):
    try:
        return cls.constant(ring, value)
    except ZeroDivisionError:
        raise ParseError(f"{value} is not defined in {ring.field}", pos) from None


def _eval(node: Node, ring: Ring, cls):
    if isinstance(node, Rational):
        return _constant(cls, ring, node.value, node.pos)
    if isinstance(node, ImaginaryUnit):
        if ring.field.kind != "QI":
            raise ParseError(f"'i' is only available over qi, not {ring.field}", node.pos)
        return cls.constant(ring, GaussianRational(0, 1))
    if isinstance(node, Var):
        index = _var_index(node, ring)
        if cls is WeylElement:
            return WeylElement.d(ring, index) if node.kind.startswith("d") else WeylElement.x(ring, index)
        return cls.variable(ring, index)
    if isinstance(node, Neg):
        return -_eval(node.operand, ring, cls)
    if isinstance(node, Pow):
        return _eval(node.base, ring, cls) ** node.exponent
    if isinstance(node, Sum):
        total = cls.zero(ring)
        for sign, term in zip(node.signs, node.terms):
            value = _eval(term, ring, cls)
            total = total + value if sign == "+" else total - value
        return total
    result = _eval(node.factors[0], ring, cls)
    for factor in node.factors[1:]:
        result = result * _eval(factor, ring, cls)
    return result


def parse(text: str, field: FieldSpec, n: int, N: int = 0, want: str | None = None):
    """Parse and interpret ``text`` over ``field`` with ``n`` x-variables and ``N`` y-variables."""
    return lower(parse_ast(text), Ring(field, n, N), want)


# formatting


def coefficient_parts(c) -> tuple[bool, str]:
    """(negative, magnitude text); magnitude "1" means the coefficient is +-1."""
    if isinstance(c, GaussianRational):
        if not c.im:
            c = c.re
        elif not c.re:
            mag = abs(c.im)
            return c.im < 0, "i" if mag == 1 else f"{mag}*i"
        else:
            sign = "-" if c.im < 0 else "+"
            mag = abs(c.im)
            im = "i" if mag == 1 else f"{mag}*i"
            return False, f"({c.re} {sign} {im})"
    if isinstance(c, Fraction):
        return c < 0, str(abs(c))
    return False, str(c)


def _monomial_text(ring: Ring, e, prefix: str) -> list[str]:
    out = []
    for k, p in enumerate(e):
        if p:
            name = ring.var_name(k, prefix)
            out.append(name if p == 1 else f"{name}^{p}")
    return out


def format_expr(value) -> str:
    """Canonical text for a Polynomial, DiffOp or WeylElement; ``parse`` reads it back."""
    ring = value.ring
    if isinstance(value, WeylElement):
        items = [
            (_monomial_text(ring, a, "") + _monomial_text(ring, b, "d"), c)
            for (a, b), c in value.sorted_terms()
        ]
    else:
        prefix = "d" if isinstance(value, DiffOp) else ""
        items = [(_monomial_text(ring, e, prefix), c) for e, c in value.sorted_terms()]
    if not items:
        return "0"
    pieces = []
    for k, (factors, c) in enumerate(items):
        negative, mag = coefficient_parts(c)
        if not factors:
            body = mag
        elif mag == "1":
            body = "*".join(factors)
        else:
            body = "*".join([mag] + factors)
        if k == 0:
            pieces.append(("-" if negative else "") + body)
        else:
            pieces.append((" - " if negative else " + ") + body)
    return "".join(pieces)
