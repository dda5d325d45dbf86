from fractions import Fraction
from typing import Dict, Iterable, Iterator, Optional, Tuple, Union

import sympy as sp

from ..kernel import (
    DiffPoly, JetSpace, MultiIndex, Scalar,
    as_base_index, as_multi_index, total_derivative,
)
from .basis import BasisOneForm, FrameVector

__all__ = [
    'JetForm', 'Word',
    'wedge', 'exterior_d', 'contact_component', 'horizontal',
    'horizontal_d', 'vertical_d', 'interior_product', 'total_lie',
    'dx', 'omega', 'volume', 'ds',
]

Word = Tuple[BasisOneForm, ...]


def _canonical(word: Iterable[BasisOneForm]) -> Tuple[int, Optional[Word]]:
    """ Sort a wedge word, returning the permutation sign, or ``None`` for a repeated factor. """
    items = list(word)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(items, items[1:]):
        if a == b:
            return 0, None
    return sign, tuple(items)


class JetForm:
    """ Exterior form over the contact basis {dx^i, ω^σ_J}.

        Terms map strictly increasing wedge words to nonzero ``DiffPoly``
        coefficients. Every term has exactly ``degree`` factors, so each
        term is purely k-contact for k = number of ω factors.
    """
    def __init__(self, space: JetSpace, degree: int,
                 terms: Optional[Dict[Word, DiffPoly]] = None) -> None:
        if degree < 0:
            raise ValueError(f"Form degree must be non-negative, got {degree}")
        self.degree = degree
        self.terms: Dict[Word, DiffPoly] = {}
        order = space.order
        for word, coeff in (terms or {}).items():
            if len(word) != degree:
                raise ValueError(f"Word of length {len(word)} in a {degree}-form")
            if coeff.is_zero:
                continue
            self.terms[word] = coeff
            order = max([order, coeff.space.order] + [one.depth for one in word])
        self.space = space.with_order(order)

    @classmethod
    def collect(cls, space: JetSpace, degree: int,
                items: Iterable[Tuple[Iterable[BasisOneForm], DiffPoly]]) -> "JetForm":
        """ Build a form from arbitrary (possibly unsorted, repeated) words. """
        acc: Dict[Word, sp.Expr] = {}
        for word, coeff in items:
            sign, canonical = _canonical(word)
            if canonical is None:
                continue
            space = space if space.order >= coeff.space.order else coeff.space
            acc[canonical] = acc.get(canonical, sp.Integer(0)) + sign * coeff.expr
        return cls(space, degree, {word: DiffPoly(space, expr) for word, expr in acc.items()})

    @classmethod
    def zero(cls, space: JetSpace, degree: int = 0) -> "JetForm":
        return cls(space, degree)

    @classmethod
    def function(cls, f: Union[DiffPoly, Scalar], space: Optional[JetSpace] = None) -> "JetForm":
        if not isinstance(f, DiffPoly):
            f = DiffPoly.constant(space, f)
        return cls(f.space, 0, {(): f})

    # algebra

    def _check(self, other: "JetForm") -> None:
        if other.degree != self.degree:
            raise ValueError(f"Cannot add a {self.degree}-form and a {other.degree}-form")

    def _merged_space(self, other: "JetForm") -> JetSpace:
        return self.space if self.space.order >= other.space.order else other.space

    def __add__(self, other: "JetForm") -> "JetForm":
        if not isinstance(other, JetForm):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for word, coeff in other.terms.items():
            terms[word] = terms[word] + coeff if word in terms else coeff
        return JetForm(self._merged_space(other), self.degree, terms)

    def __sub__(self, other: "JetForm") -> "JetForm":
        if not isinstance(other, JetForm):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "JetForm":
        return JetForm(self.space, self.degree, {w: -c for w, c in self.terms.items()})

    def __mul__(self, factor: Union[DiffPoly, Scalar]) -> "JetForm":
        if not isinstance(factor, (DiffPoly, int, Fraction, sp.Rational)):
            return NotImplemented
        return JetForm(self.space, self.degree, {w: c * factor for w, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, JetForm):
            return NotImplemented
        if self.degree != other.degree:
            return self.is_zero and other.is_zero
        return (self - other).is_zero

    __hash__ = None

    def __iter__(self) -> Iterator[Tuple[Word, DiffPoly]]:
        return iter(sorted(self.terms.items(), key=lambda item: item[0]))

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"JetForm({self})"

    def __str__(self) -> str:
        from ..emit import format_form
        return format_form(self)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, *word: BasisOneForm) -> DiffPoly:
        """ Coefficient of a word given in any order (sign-adjusted). """
        sign, canonical = _canonical(word)
        if canonical is None or canonical not in self.terms:
            return DiffPoly.zero(self.space)
        return self.terms[canonical] * sign

    def contact_degrees(self) -> set:
        return {sum(1 for one in word if one.is_omega) for word in self.terms}

    def map_coefficients(self, fn) -> "JetForm":
        return JetForm(self.space, self.degree, {w: fn(c) for w, c in self.terms.items()})

    def specialize(self, params) -> "JetForm":
        return self.map_coefficients(lambda c: c.specialize(params))

    # calculus (method aliases of the module functions)

    def wedge(self, other: "JetForm") -> "JetForm":
        return wedge(self, other)

    def d(self) -> "JetForm":
        return exterior_d(self)

    def p(self, k: int) -> "JetForm":
        return contact_component(self, k)

    def total_lie(self, i: Union[int, str]) -> "JetForm":
        return total_lie(self, i)


def wedge(alpha: JetForm, beta: JetForm) -> JetForm:
    space = alpha._merged_space(beta)
    return JetForm.collect(space, alpha.degree + beta.degree, (
        (wa + wb, ca * cb)
        for wa, ca in alpha.terms.items()
        for wb, cb in beta.terms.items()
    ))


def _d_function(f: DiffPoly) -> Iterator[Tuple[Word, DiffPoly]]:
    """ df = Σ (d_i f) dx^i + Σ ∂f/∂y^σ_J ω^σ_J """
    space = f.space
    for i in range(space.n):
        yield (BasisOneForm.dx(space, i),), total_derivative(f, i)
    for symbol, coordinate in f.jet_symbols().items():
        yield (BasisOneForm.omega(space, coordinate.field, coordinate.index),), \
            DiffPoly(space, sp.diff(f.expr, symbol))


def exterior_d(rho: JetForm) -> JetForm:
    """ Exterior differential, using dω^σ_J = Σ_i dx^i ∧ ω^σ_{Ji}. """
    space = rho.space

    def items():
        for word, coeff in rho.terms.items():
            for one, df in _d_function(coeff):
                yield one + word, df
            for a, factor in enumerate(word):
                if factor.is_dx:
                    continue
                sign = -1 if a % 2 else 1
                for i in range(space.n):
                    lifted = factor.prolong(space, i)
                    yield word[:a] + (BasisOneForm.dx(space, i), lifted) + word[a + 1:], coeff * sign

    return JetForm.collect(space, rho.degree + 1, items())


def contact_component(rho: JetForm, k: int) -> JetForm:
    """ p_k: the terms carrying exactly ``k`` contact factors. """
    if k < 0:
        raise ValueError(f"Contact degree must be non-negative, got {k}")
    return JetForm(rho.space, rho.degree, {
        word: coeff for word, coeff in rho.terms.items()
        if sum(1 for one in word if one.is_omega) == k
    })


def horizontal(rho: JetForm) -> JetForm:
    return contact_component(rho, 0)


def horizontal_d(rho: JetForm) -> JetForm:
    """ d_H = Σ_k p_k d p_k """
    result = JetForm.zero(rho.space, rho.degree + 1)
    for k in sorted(rho.contact_degrees()):
        result += contact_component(exterior_d(contact_component(rho, k)), k)
    return result


def vertical_d(rho: JetForm) -> JetForm:
    """ d_V = Σ_k p_{k+1} d p_k """
    result = JetForm.zero(rho.space, rho.degree + 1)
    for k in sorted(rho.contact_degrees()):
        result += contact_component(exterior_d(contact_component(rho, k)), k + 1)
    return result


def interior_product(X: FrameVector, rho: JetForm) -> JetForm:
    """ X ⌟ ρ, an antiderivation of degree -1. """
    if rho.degree == 0:
        return JetForm.zero(rho.space, 0)

    def items():
        for word, coeff in rho.terms.items():
            for a, factor in enumerate(word):
                value = X.pair(factor)
                if value.is_zero:
                    continue
                yield word[:a] + word[a + 1:], coeff * value * (-1 if a % 2 else 1)

    return JetForm.collect(rho.space, rho.degree - 1, items())


def total_lie(rho: JetForm, i: Union[int, str]) -> JetForm:
    """ Lie derivative along d_i: coefficients take d_i, ω^σ_K -> ω^σ_{Ki}, dx^j -> 0. """
    space = rho.space
    i = as_base_index(space, i)

    def items():
        for word, coeff in rho.terms.items():
            yield word, total_derivative(coeff, i)
            for a, factor in enumerate(word):
                if factor.is_omega:
                    yield word[:a] + (factor.prolong(space, i),) + word[a + 1:], coeff

    return JetForm.collect(space, rho.degree, items())


# constructors

def dx(space: JetSpace, i: Union[int, str]) -> JetForm:
    return JetForm(space, 1, {(BasisOneForm.dx(space, i),): DiffPoly.constant(space, 1)})


def omega(space: JetSpace, name: str, index: Union[MultiIndex, str, Tuple[int, ...]] = MultiIndex()) -> JetForm:
    index = as_multi_index(space, index)
    return JetForm(space, 1, {(BasisOneForm.omega(space, name, index),): DiffPoly.constant(space, 1)})


def volume(space: JetSpace) -> JetForm:
    """ ds = dx^1 ∧ ... ∧ dx^n """
    word = tuple(BasisOneForm.dx(space, i) for i in range(space.n))
    return JetForm(space, space.n, {word: DiffPoly.constant(space, 1)})


def ds(space: JetSpace, *indices: Union[int, str]) -> JetForm:
    """ ds_{i_1...i_q} = ∂_{i_q} ⌟ ... ⌟ ∂_{i_1} ⌟ ds """
    form = volume(space)
    for i in indices:
        form = interior_product(FrameVector.total(space, i), form)
    return form
