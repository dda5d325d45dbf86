from fractions import Fraction
from itertools import combinations
from typing import Dict, Tuple

import sympy as sp
from loguru import logger

from ..exceptions import DegreeError, UnsupportedShape
from ..forms import (
    BasisOneForm, FrameVector, JetForm,
    contact_component, horizontal_d, interior_product, total_lie, wedge, omega,
)
from ..forms.jetform import _canonical
from ..kernel import DiffPoly, MultiIndex, jet_partial, total_derivative_multi
from .problem import LagrangianProblem

__all__ = ['euler_lagrange', 'euler_operator', 'interior_euler', 'lower_residual_k1']


def euler_operator(L: DiffPoly) -> Dict[str, DiffPoly]:
    """ ε_σ(L) = Σ_J (-1)^{|J|} d_J ∂L/∂y^σ_J, J over sorted multi-indices. """
    space = L.space
    result = {}
    for name in space.field_names:
        indices = {c.index for c in L.jets() if c.field == name}
        value = DiffPoly.zero(space)
        for index in sorted(indices, key=MultiIndex.sort_key):
            term = total_derivative_multi(jet_partial(L, name, index), index)
            value = value + (-term if len(index) % 2 else term)
        result[name] = value
    return result


def euler_lagrange(problem: LagrangianProblem) -> Dict[str, DiffPoly]:
    result = euler_operator(problem.lagrangian)
    logger.debug("euler-lagrange expressions of order {}",
                 max((e.order for e in result.values()), default=0))
    return result


def interior_euler(rho: JetForm, k: int) -> JetForm:
    """ I(ρ) = (1/k) ω^σ ∧ Σ_J (-1)^{|J|} L_{d_J}(∂/∂y^σ_J ⌟ p_k ρ) """
    space = rho.space
    if k < 1 or rho.degree != space.n + k:
        raise DegreeError(f"Interior Euler operator needs an (n+{k})-form with k >= 1, "
                          f"got degree {rho.degree} on a base of dimension {space.n}")
    part = contact_component(rho, k)
    coordinates = {one.coordinate for word in part.terms for one in word if one.is_omega}
    result = JetForm.zero(space, rho.degree)
    for name in space.field_names:
        inner = JetForm.zero(space, rho.degree - 1)
        for coordinate in sorted((c for c in coordinates if c.field == name),
                                 key=lambda c: c.index.sort_key()):
            contracted = interior_product(FrameVector.jet(space, name, coordinate.index), part)
            for i in coordinate.index:
                contracted = total_lie(contracted, i)
            inner = inner + (-contracted if len(coordinate.index) % 2 else contracted)
        result = result + wedge(omega(space, name), inner)
    return result * Fraction(1, k)


def _split_contact(part: JetForm) -> Tuple[Dict[str, Dict], Dict[Tuple[str, int], Dict]]:
    """ Write a 1-contact form as Σ ω^σ ∧ A_σ + Σ ω^σ_l ∧ η^l_σ (horizontal A, η as word maps). """
    generated: Dict[str, Dict] = {}
    first: Dict[Tuple[str, int], Dict] = {}
    for word, coeff in part.terms.items():
        (position, one), = [(a, f) for a, f in enumerate(word) if f.is_omega]
        rest = word[:position] + word[position + 1:]
        coeff = -coeff if position % 2 else coeff
        if one.depth == 0:
            generated.setdefault(one.field, {})[rest] = coeff
        elif one.depth == 1:
            first.setdefault((one.field, one.entries[0]), {})[rest] = coeff
        else:
            raise UnsupportedShape(f"Boundary reconstruction for {one.label(part.space)} "
                                   "needs coefficients beyond first order")
    return generated, first


def lower_residual_k1(rho: JetForm) -> Tuple[JetForm, JetForm]:
    """ Split p_1 ρ = source + d_H(boundary) with an ω^σ-generated source.

        The boundary is ω^σ ∧ β_σ, with horizontal β_σ solving
        dx^l ∧ β_σ = -η^l_σ for the ω^σ_l ∧ η^l_σ part of p_1 ρ.
    """
    space = rho.space
    q = rho.degree
    if not 2 <= q <= space.n + 1:
        raise DegreeError(f"Lower residual decomposition needs 2 <= degree <= n+1, got {q}")
    part = contact_component(rho, 1)
    generated, first = _split_contact(part)
    boundary = JetForm.zero(space, q - 1)
    if not first:
        return part, boundary

    dx = [BasisOneForm.dx(space, i) for i in range(space.n)]
    slots = [tuple(dx[i] for i in chosen) for chosen in combinations(range(space.n), q - 2)]
    for name in space.field_names:
        targets = {l: first[(name, l)] for l in range(space.n) if (name, l) in first}
        if not targets:
            continue
        unknowns = [sp.Dummy(f"c{a}") for a in range(len(slots))]
        equations: Dict[Tuple[int, Tuple], sp.Expr] = {}
        for l in range(space.n):
            eta = targets.get(l, {})
            for word, coeff in eta.items():
                equations[(l, word)] = equations.get((l, word), sp.Integer(0)) + coeff.expr
            for unknown, slot in zip(unknowns, slots):
                sign, word = _canonical((dx[l],) + slot)
                if word is None:
                    continue
                equations[(l, word)] = equations.get((l, word), sp.Integer(0)) + sign * unknown
        solutions = sp.linsolve(list(equations.values()), unknowns)
        if not solutions:
            raise UnsupportedShape(f"No first-order boundary term reproduces the ω^{name}_l part")
        solution, = solutions
        free = {s: 0 for value in solution for s in value.free_symbols if s in unknowns}
        beta = JetForm.collect(space, q - 2, (
            (slot, DiffPoly(space, sp.expand(value.xreplace(free))))
            for slot, value in zip(slots, solution)
        ))
        boundary = boundary + wedge(omega(space, name), beta)

    source = part - horizontal_d(boundary)
    leftover = [one for word in source.terms for one in word if one.is_omega and one.depth > 0]
    if leftover:
        raise UnsupportedShape("Boundary reconstruction left non-generated contact terms")
    logger.debug("lower residual: boundary with {} terms", len(boundary))
    return source, boundary
