from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, Mapping, NamedTuple, Optional, Sequence, Set, Tuple, Union

import sympy as sp
from loguru import logger

from ..exceptions import EliminationFailure, RecursiveSubstitution, UnboundParameter
from .jets import (
    BaseCoordinate, JetCoordinate, JetSpace, MultiIndex,
    as_base_index, as_multi_index,
)

__all__ = [
    'DiffPoly', 'Term', 'Coefficient', 'Scalar',
    'total_derivative', 'total_derivative_multi', 'jet_partial',
    'substitute_field', 'poly_eval', 'solve_linear',
    'to_rational', 'to_fraction',
]

Scalar = Union[int, Fraction, sp.Rational]
Coordinate = Union[JetCoordinate, BaseCoordinate]


def to_rational(value: Scalar) -> sp.Rational:
    if isinstance(value, Fraction):
        return sp.Rational(value.numerator, value.denominator)
    return sp.Rational(value)


def to_fraction(value: sp.Expr) -> Fraction:
    value = sp.sympify(value)
    if not value.is_Rational:
        raise ValueError(f"Expected an exact rational, got `{value}`")
    return Fraction(int(value.p), int(value.q))


def _coordinate_key(coordinate: Coordinate):
    if isinstance(coordinate, BaseCoordinate):
        return (0, '', (0, (coordinate.index,)))
    return (1, coordinate.field, coordinate.index.sort_key())


class Coefficient(NamedTuple):
    """ Exact rational times a monomial in the parameters. """
    rational: Fraction
    params: Tuple[Tuple[str, int], ...] = ()


class Term(NamedTuple):
    """ Monomial key of ``DiffPoly.terms()``: coordinate powers and parameter powers. """
    coordinates: Tuple[Tuple[Coordinate, int], ...]
    params: Tuple[Tuple[str, int], ...] = ()

    @property
    def degree(self) -> int:
        return sum(power for _, power in self.coordinates)

    def sort_key(self):
        return (
            self.degree,
            tuple((_coordinate_key(c), p) for c, p in self.coordinates),
            self.params,
        )


class DiffPoly:
    """ Differential polynomial over a ``JetSpace``.

        The expression is kept fully expanded, which makes the sympy tree
        canonical for polynomials with rational coefficients: structural
        equality is mathematical equality.
    """
    def __init__(self, space: JetSpace, expr: Union[sp.Expr, Scalar] = 0) -> None:
        if isinstance(expr, Fraction):
            expr = to_rational(expr)
        expr = sp.expand(sp.sympify(expr))
        order = 0
        for symbol in expr.free_symbols:
            decoded = space.decode(symbol)
            if isinstance(decoded, JetCoordinate):
                order = max(order, len(decoded.index))
        self.space = space.with_order(order)
        self.expr = expr

    # constructors

    @classmethod
    def zero(cls, space: JetSpace) -> "DiffPoly":
        return cls(space, sp.Integer(0))

    @classmethod
    def constant(cls, space: JetSpace, value: Scalar) -> "DiffPoly":
        return cls(space, to_rational(value))

    @classmethod
    def coordinate(cls, space: JetSpace, field: str,
                   index: Union[MultiIndex, str, Tuple[int, ...]] = MultiIndex()) -> "DiffPoly":
        return cls(space, space.coordinate(field, as_multi_index(space, index)))

    @classmethod
    def base(cls, space: JetSpace, i: Union[int, str]) -> "DiffPoly":
        return cls(space, space.base_symbol(as_base_index(space, i)))

    @classmethod
    def param(cls, space: JetSpace, name: str) -> "DiffPoly":
        return cls(space, space.param_symbol(name))

    # arithmetic

    def _lift(self, other) -> Optional[Tuple[JetSpace, sp.Expr]]:
        if isinstance(other, DiffPoly):
            if (other.space.base_names, other.space.field_names, other.space.param_names) != \
                    (self.space.base_names, self.space.field_names, self.space.param_names):
                raise ValueError("DiffPoly operands live on different jet spaces")
            space = self.space if self.space.order >= other.space.order else other.space
            return space, other.expr
        if isinstance(other, (int, Fraction, sp.Rational)):
            return self.space, to_rational(other)
        return None

    def __add__(self, other):
        if (lifted := self._lift(other)) is None:
            return NotImplemented
        return DiffPoly(lifted[0], self.expr + lifted[1])

    __radd__ = __add__

    def __sub__(self, other):
        if (lifted := self._lift(other)) is None:
            return NotImplemented
        return DiffPoly(lifted[0], self.expr - lifted[1])

    def __rsub__(self, other):
        if (lifted := self._lift(other)) is None:
            return NotImplemented
        return DiffPoly(lifted[0], lifted[1] - self.expr)

    def __mul__(self, other):
        if (lifted := self._lift(other)) is None:
            return NotImplemented
        return DiffPoly(lifted[0], self.expr * lifted[1])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (int, Fraction, sp.Rational)):
            return NotImplemented
        return DiffPoly(self.space, self.expr / to_rational(other))

    def __neg__(self):
        return DiffPoly(self.space, -self.expr)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"Exponent must be a non-negative integer, got {exponent}")
        return DiffPoly(self.space, self.expr ** exponent)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, sp.Rational)):
            return self.expr == to_rational(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self.expr == other.expr or sp.expand(self.expr - other.expr) == 0

    def __hash__(self) -> int:
        return hash(self.expr)

    def __repr__(self) -> str:
        return f"DiffPoly({self})"

    def __str__(self) -> str:
        from ..dsl import format_poly
        return format_poly(self)

    # inspection

    @property
    def is_zero(self) -> bool:
        return self.expr == 0

    @cached_property
    def _decoded(self) -> Dict[sp.Symbol, Union[Coordinate, str]]:
        return {symbol: self.space.decode(symbol) for symbol in self.expr.free_symbols}

    @property
    def order(self) -> int:
        return max((len(c.index) for c in self.jets()), default=0)

    def jets(self) -> Set[JetCoordinate]:
        return {c for c in self._decoded.values() if isinstance(c, JetCoordinate)}

    def jet_symbols(self) -> Dict[sp.Symbol, JetCoordinate]:
        return {s: c for s, c in self._decoded.items() if isinstance(c, JetCoordinate)}

    def free_fields(self) -> Set[str]:
        return {c.field for c in self.jets()}

    def free_params(self) -> Set[str]:
        return {c for c in self._decoded.values() if isinstance(c, str)}

    def has_explicit_base(self) -> bool:
        return any(isinstance(c, BaseCoordinate) for c in self._decoded.values())

    def terms(self) -> Dict[Term, Fraction]:
        """ Canonical term map: ``{Term(coordinate powers, parameter powers): rational}``. """
        result: Dict[Term, Fraction] = {}
        if self.is_zero:
            return result
        for addend in sp.Add.make_args(self.expr):
            rational, rest = addend.as_coeff_Mul()
            coordinates, params = [], []
            for symbol, power in rest.as_powers_dict().items():
                if symbol == 1:
                    continue
                if not (symbol.is_Symbol and power.is_Integer):
                    raise ValueError(f"Not a polynomial monomial: `{addend}`")
                decoded = self._decoded[symbol]
                if isinstance(decoded, str):
                    params.append((decoded, int(power)))
                elif power < 0:
                    raise ValueError(f"Negative power of a coordinate in `{addend}`")
                else:
                    coordinates.append((decoded, int(power)))
            term = Term(tuple(sorted(coordinates, key=lambda item: _coordinate_key(item[0]))),
                        tuple(sorted(params)))
            result[term] = result.get(term, Fraction(0)) + to_fraction(rational)
        return {term: value for term, value in result.items() if value}

    def coefficients(self) -> Iterable[Tuple[Term, Coefficient]]:
        for term, value in sorted(self.terms().items(), key=lambda item: item[0].sort_key()):
            yield term, Coefficient(value, term.params)

    def specialize(self, params: Mapping[str, Scalar]) -> "DiffPoly":
        """ Substitute rational values for a subset of the parameters. """
        mapping = {self.space.param_symbol(name): to_rational(value) for name, value in params.items()}
        result = self.expr.xreplace(mapping)
        if result.has(sp.zoo, sp.nan, sp.oo):
            raise ZeroDivisionError(f"Parameter assignment {dict(params)} divides by zero")
        return DiffPoly(self.space, result)

    def ratio_to(self, other: "DiffPoly") -> Optional[Fraction]:
        """ The rational ``r`` with ``self == r * other``, or ``None``. """
        mine, theirs = self.terms(), other.terms()
        if not theirs:
            return Fraction(1) if not mine else None
        pivot, value = next(iter(theirs.items()))
        if pivot not in mine or mine.keys() != theirs.keys():
            return None
        ratio = mine[pivot] / value
        if all(mine[term] == ratio * coeff for term, coeff in theirs.items()):
            return ratio
        return None

    def subs_symbols(self, mapping: Mapping[sp.Symbol, sp.Expr]) -> "DiffPoly":
        return DiffPoly(self.space, self.expr.xreplace(dict(mapping)))


def total_derivative(f: DiffPoly, i: Union[int, str]) -> DiffPoly:
    """ d_i f = ∂f/∂x^i + Σ y^σ_{Ji} ∂f/∂y^σ_J """
    space = f.space
    i = as_base_index(space, i)
    result = sp.diff(f.expr, space.base_symbol(i))
    for symbol, coordinate in f.jet_symbols().items():
        lifted = space.coordinate(coordinate.field, coordinate.index.add(i))
        result += sp.diff(f.expr, symbol) * lifted
    return DiffPoly(space, result)


def total_derivative_multi(f: DiffPoly, index: Union[MultiIndex, str, Tuple[int, ...]]) -> DiffPoly:
    for i in as_multi_index(f.space, index):
        f = total_derivative(f, i)
    return f


def jet_partial(f: DiffPoly, field: str, index: Union[MultiIndex, str, Tuple[int, ...]] = MultiIndex()) -> DiffPoly:
    symbol = f.space.coordinate(field, as_multi_index(f.space, index))
    return DiffPoly(f.space, sp.diff(f.expr, symbol))


def substitute_field(f: DiffPoly, field: str, g: DiffPoly) -> DiffPoly:
    """ Replace every y^σ_J in ``f`` by d_J g. """
    if field in g.free_fields():
        raise RecursiveSubstitution(f"Substitution for `{field}` refers to `{field}` itself")
    derivatives: Dict[MultiIndex, DiffPoly] = {MultiIndex(): g}

    def prolonged(index: MultiIndex) -> DiffPoly:
        if index not in derivatives:
            last = index.entries[-1]
            derivatives[index] = total_derivative(prolonged(index.remove(last)), last)
        return derivatives[index]

    mapping = {
        symbol: prolonged(coordinate.index).expr
        for symbol, coordinate in f.jet_symbols().items()
        if coordinate.field == field
    }
    if not mapping:
        return f
    logger.debug("substituting {} jets of `{}` up to order {}",
                 len(mapping), field, max(len(index) for index in derivatives))
    return DiffPoly(f.space, f.expr.xreplace(mapping))


def poly_eval(f: DiffPoly,
              section: Mapping[str, Union[DiffPoly, sp.Expr, Scalar]],
              point: Sequence[Scalar],
              params: Optional[Mapping[str, Scalar]] = None) -> Fraction:
    """ Evaluate ``f`` on the jet prolongation of a polynomial section at ``point``. """
    space = f.space
    params = params or {}
    if len(point) != space.n:
        raise ValueError(f"Point must have {space.n} coordinates, got {len(point)}")
    at = {space.base_symbol(i): to_rational(value) for i, value in enumerate(point)}
    sections = {}
    for name, value in section.items():
        sections[name] = value.expr if isinstance(value, DiffPoly) else sp.sympify(
            to_rational(value) if isinstance(value, Fraction) else value)
    values = {}
    for symbol, decoded in f._decoded.items():
        if isinstance(decoded, JetCoordinate):
            if decoded.field not in sections:
                raise ValueError(f"Section does not define field `{decoded.field}`")
            derivative = sections[decoded.field]
            for i in decoded.index:
                derivative = sp.diff(derivative, space.base_symbol(i))
            values[symbol] = derivative.xreplace(at)
        elif isinstance(decoded, BaseCoordinate):
            values[symbol] = at[symbol]
        else:
            if decoded not in params:
                raise UnboundParameter(f"Parameter `{decoded}` has no value")
            values[symbol] = to_rational(params[decoded])
    return to_fraction(sp.expand(f.expr.xreplace(values)))


def solve_linear(f: DiffPoly, field: str) -> DiffPoly:
    """ Solve ``f = 0`` for the undifferentiated coordinate of ``field``.

        ``f`` must be affine in y^σ with a parameter-only coefficient and must
        not contain any derivative of σ.
    """
    symbol = f.space.coordinate(field)
    coefficient = sp.diff(f.expr, symbol)
    rest = sp.expand(f.expr - coefficient * symbol)
    constant = DiffPoly(f.space, coefficient)
    if coefficient == 0 or constant.jets() or constant.has_explicit_base() \
            or field in DiffPoly(f.space, rest).free_fields():
        raise EliminationFailure(f"`{f}` is not linear in `{field}`")
    logger.debug("eliminating `{}` from a linear equation", field)
    return DiffPoly(f.space, -rest / coefficient)
