""" Lagrangian DSL: ``w^2 + 1/2*v_x^2 + a*w_t*v_xx``.

    Identifiers are base coordinates, parameters or fields with an optional
    jet suffix of base-coordinate letters (``v_xt`` reads as ``v_tx``).
    Operators are ``+ - * / ^`` with parentheses; multiplication is always
    explicit and ``^`` takes a positive integer exponent. A divisor is a
    number times a product of parameters.
"""
import re
from fractions import Fraction
from typing import Iterator, List, NamedTuple, Optional, Tuple

import sympy as sp

from .exceptions import DepthExceeded, DSLSyntaxError, UnknownSymbol
from .kernel import BaseCoordinate, DiffPoly, JetSpace, Term

__all__ = ['parse_lagrangian', 'parse_expression', 'parse_constraint', 'format_poly', 'format_term']

TOKEN_RE = re.compile(r"""
    (?P<space>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<number>\d+)
  | (?P<ident>[A-Za-z][A-Za-z0-9]*(?:_[A-Za-z0-9]*)?)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


class Token(NamedTuple):
    kind: str
    value: str
    line: int
    column: int


def tokenize(src: str) -> Iterator[Token]:
    line, start, pos = 1, 0, 0
    while pos < len(src):
        match = TOKEN_RE.match(src, pos)
        if match is None:
            raise DSLSyntaxError(f"Unexpected character `{src[pos]}`", line, pos - start + 1)
        kind = match.lastgroup
        if kind == 'newline':
            line, start = line + 1, match.end()
        elif kind != 'space':
            yield Token(kind, match.group(), line, match.start() - start + 1)
        pos = match.end()
    yield Token('end', '', line, pos - start + 1)


class _Parser:
    def __init__(self, src: str, space: JetSpace, max_order: int) -> None:
        self.tokens: List[Token] = list(tokenize(src))
        self.pos = 0
        self.space = space
        self.max_order = max_order

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def accept(self, *values: str) -> Optional[Token]:
        if self.current.kind == 'op' and self.current.value in values:
            return self.advance()
        return None

    def error(self, message: str, token: Optional[Token] = None) -> DSLSyntaxError:
        token = token or self.current
        return DSLSyntaxError(message, token.line, token.column)

    def parse(self) -> sp.Expr:
        if self.current.kind == 'end':
            raise self.error("Empty expression")
        expr = self.expression()
        if self.current.kind != 'end':
            if self.current.kind in ('ident', 'number') or self.current.value == '(':
                raise self.error("Implicit multiplication is not allowed, use `*`")
            raise self.error(f"Unexpected `{self.current.value}`")
        return expr

    def expression(self) -> sp.Expr:
        expr = self.product()
        while (op := self.accept('+', '-')) is not None:
            rhs = self.product()
            expr = expr + rhs if op.value == '+' else expr - rhs
        return expr

    def product(self) -> sp.Expr:
        expr = self.unary()
        while (op := self.accept('*', '/')) is not None:
            token = self.current
            rhs = self.unary()
            if op.value == '*':
                expr = expr * rhs
                continue
            if rhs == 0:
                raise self.error("Division by zero", token)
            if not self._is_monomial_divisor(rhs):
                raise self.error("Only a number times a product of parameters may appear in a divisor", token)
            expr = expr / rhs
        return expr

    def _is_monomial_divisor(self, expr: sp.Expr) -> bool:
        expr = sp.expand(expr)
        if expr.is_Add:
            return False
        rational, rest = expr.as_coeff_Mul()
        if not rational.is_Rational:
            return False
        for symbol, power in rest.as_powers_dict().items():
            if symbol == 1:
                continue
            if not (symbol.is_Symbol and power.is_Integer and power > 0):
                return False
            if not isinstance(self.space.decode(symbol), str):
                return False
        return True

    def unary(self) -> sp.Expr:
        if (op := self.accept('+', '-')) is not None:
            operand = self.unary()
            return -operand if op.value == '-' else operand
        return self.power()

    def power(self) -> sp.Expr:
        base = self.atom()
        if self.accept('^') is not None:
            token = self.current
            if token.kind != 'number' or int(token.value) == 0:
                raise self.error("Exponent must be a positive integer")
            self.advance()
            return base ** int(token.value)
        return base

    def atom(self) -> sp.Expr:
        token = self.current
        if token.kind == 'number':
            self.advance()
            return sp.Integer(int(token.value))
        if token.kind == 'ident':
            self.advance()
            return self.symbol(token)
        if self.accept('(') is not None:
            expr = self.expression()
            if self.accept(')') is None:
                raise self.error("Expected `)`")
            return expr
        if token.kind == 'end':
            raise self.error("Unexpected end of expression")
        raise self.error(f"Unexpected `{token.value}`")

    def symbol(self, token: Token) -> sp.Expr:
        space = self.space
        head, sep, suffix = token.value.partition('_')
        if not sep:
            if head in space.base_names:
                return space.base_symbol(space.base_index(head))
            if head in space.param_names:
                return space.param_symbol(head)
            if head in space.field_names:
                return space.coordinate(head)
            raise UnknownSymbol(f"Unknown symbol `{head}` (line {token.line}, column {token.column})")
        if head not in space.field_names:
            raise UnknownSymbol(f"Only fields take jet suffixes: `{token.value}` "
                                f"(line {token.line}, column {token.column})")
        index = space.parse_suffix(suffix) if suffix else None
        if index is None:
            raise UnknownSymbol(f"Jet suffix of `{token.value}` must consist of base coordinates "
                                f"(line {token.line}, column {token.column})")
        if len(index) > self.max_order:
            raise DepthExceeded(f"`{token.value}` exceeds the declared order {self.max_order}")
        return space.coordinate(head, index)


def parse_expression(src: str, space: JetSpace, max_order: Optional[int] = None) -> DiffPoly:
    max_order = space.order if max_order is None else max_order
    return DiffPoly(space, _Parser(src, space, max_order).parse())


def parse_lagrangian(src: str, space: JetSpace, max_order: Optional[int] = None) -> DiffPoly:
    return parse_expression(src, space, max_order)


def parse_constraint(src: str, space: JetSpace, max_order: Optional[int] = None) -> Tuple[str, DiffPoly]:
    """ ``"w = v_t"`` -> ("w", v_t) """
    lhs, sep, rhs = src.partition('=')
    name = lhs.strip()
    if not sep:
        raise DSLSyntaxError("Constraint must read `field = expression`", 1, 1)
    if name not in space.field_names:
        raise UnknownSymbol(f"Constraint target `{name}` is not a field")
    return name, parse_expression(rhs, space, max_order)


def _factor(name: str, power: int) -> str:
    return name if power == 1 else f"{name}^{power}"


def format_term(space: JetSpace, term: Term, value: Fraction, first: bool) -> str:
    sign = '-' if value < 0 else ('' if first else '+')
    magnitude = abs(value)
    factors, divisors = [], []
    for name, power in term.params:
        (factors if power > 0 else divisors).append(_factor(name, abs(power)))
    for coordinate, power in term.coordinates:
        if isinstance(coordinate, BaseCoordinate):
            name = space.base_names[coordinate.index]
        else:
            name = space.coordinate_name(coordinate.field, coordinate.index)
        factors.append(_factor(name, power))
    if magnitude != 1 or not factors:
        factors.insert(0, str(magnitude))
    body = "*".join(factors) + "".join(f"/{d}" for d in divisors)
    if first:
        return f"{sign}{body}"
    return f"{sign} {body}"


def format_poly(f: DiffPoly) -> str:
    """ DSL text of ``f`` with terms in (degree, lexicographic) order. """
    items = sorted(f.terms().items(), key=lambda item: item[0].sort_key())
    if not items:
        return "0"
    return " ".join(format_term(f.space, term, value, i == 0) for i, (term, value) in enumerate(items))


