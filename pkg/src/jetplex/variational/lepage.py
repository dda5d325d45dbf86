from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterator, List, Optional, Tuple

from loguru import logger

from ..exceptions import DegreeError, UnsupportedOrder
from ..forms import (
    BasisOneForm, JetForm, SourceFormReport,
    classify_source, contact_component, ds, exterior_d, omega, wedge,
)
from ..kernel import DiffPoly, JetSpace, MultiIndex, jet_partial
from .problem import LagrangianProblem, Momenta, symmetric_partial

__all__ = ['poincare_cartan', 'lepage_full', 'is_lepage', 'krupka_betounes']

Slot = Tuple[str, int]


@lru_cache(maxsize=None)
def _ds_term(space: JetSpace, indices: Tuple[int, ...]) -> Optional[Tuple[Tuple[BasisOneForm, ...], int]]:
    """ ds_{i_1...i_q} as a single signed word, or ``None`` for repeated indices. """
    if len(set(indices)) != len(indices):
        return None
    form = ds(space, *indices)
    (word, coeff), = form.terms.items()
    return word, int(coeff.expr)


def _check_order(problem: LagrangianProblem) -> None:
    if problem.order > 2:
        raise UnsupportedOrder(f"Closed-form Lepage equivalents need r <= 2, got r = {problem.order}")


def poincare_cartan(problem: LagrangianProblem) -> JetForm:
    """ θ = L ds + f^i_σ ω^σ ∧ ds_i + p^{ij}_σ ω^σ_j ∧ ds_i """
    _check_order(problem)
    space = problem.space
    momenta = Momenta.of(problem)
    theta = problem.form
    for name in space.field_names:
        for i in range(space.n):
            theta = theta + wedge(omega(space, name), ds(space, i)) * momenta.f(name, i)
            for j in range(space.n):
                p = momenta.second(name, i, j)
                if not p.is_zero:
                    theta = theta + wedge(omega(space, name, MultiIndex.of(j)), ds(space, i)) * p
    return theta


def _first_order_slots(f: DiffPoly, count: int, used_fields: Tuple[str, ...],
                       used_bases: Tuple[int, ...]) -> Iterator[Tuple[List[Slot], DiffPoly]]:
    """ Ordered tuples of ``count`` distinct (σ, i) slots with nonzero ∂^count f. """
    if count == 0:
        yield [], f
        return
    space = f.space
    for name in space.field_names:
        if name in used_fields:
            continue
        for i in range(space.n):
            if i in used_bases:
                continue
            derivative = jet_partial(f, name, MultiIndex.of(i))
            if derivative.is_zero:
                continue
            for rest, value in _first_order_slots(derivative, count - 1,
                                                  used_fields + (name,), used_bases + (i,)):
                yield [(name, i)] + rest, value


def _assemble(space: JetSpace, degree: int,
              pieces: Iterator[Tuple[List[BasisOneForm], Tuple[int, ...], DiffPoly]]) -> JetForm:
    items = []
    for factors, indices, coeff in pieces:
        term = _ds_term(space, indices)
        if term is None:
            continue
        word, sign = term
        items.append((tuple(factors) + word, coeff * sign))
    return JetForm.collect(space, degree, items)


def krupka_betounes(problem: LagrangianProblem) -> JetForm:
    """ First-order closed form:
        L ds + Σ_q 1/(q!)^2 ∂^q L/∂y^{σ_1}_{i_1}...∂y^{σ_q}_{i_q} ω^{σ_1}∧...∧ω^{σ_q}∧ds_{i_1...i_q}
    """
    space = problem.space
    rho = problem.form

    def pieces(q):
        for slots, value in _first_order_slots(problem.lagrangian, q, (), ()):
            factors = [BasisOneForm.omega(space, name) for name, _ in slots]
            yield factors, tuple(i for _, i in slots), value * Fraction(1, factorial(q) ** 2)

    for q in range(1, space.n + 1):
        rho = rho + _assemble(space, space.n, pieces(q))
    return rho


def _second_order(problem: LagrangianProblem, momenta: Momenta) -> JetForm:
    space = problem.space
    L = problem.lagrangian
    rho = problem.form

    # Σ_q 1/(q!(q-1)!) ∂^q L/∂y^{σ_1}_{i_1}...∂y^{σ_q}_{i_q j} ω^{σ_1}∧...∧ω^{σ_q}_j∧ds_{i_1...i_q}
    def first_summation(q):
        for name in space.field_names:
            for iq in range(space.n):
                for j in range(space.n):
                    top = symmetric_partial(L, name, iq, j)
                    if top.is_zero:
                        continue
                    for slots, value in _first_order_slots(top, q - 1, (), (iq,)):
                        factors = [BasisOneForm.omega(space, s) for s, _ in slots]
                        factors.append(BasisOneForm.omega(space, name, MultiIndex.of(j)))
                        indices = tuple(i for _, i in slots) + (iq,)
                        yield factors, indices, value * Fraction(1, factorial(q) * factorial(q - 1))

    # Σ_q 1/((q+1)!)^2 ∂f^{i_{q+1}}_{σ_{q+1}}/∂y^{σ_1}_{i_1}...∂y^{σ_q}_{i_q} ω^{σ_1}∧...∧ω^{σ_{q+1}}∧ds_{i_1...i_{q+1}}
    def second_summation(q):
        for name in space.field_names:
            for last in range(space.n):
                f = momenta.f(name, last)
                if f.is_zero:
                    continue
                for slots, value in _first_order_slots(f, q, (name,), (last,)):
                    factors = [BasisOneForm.omega(space, s) for s, _ in slots]
                    factors.append(BasisOneForm.omega(space, name))
                    indices = tuple(i for _, i in slots) + (last,)
                    yield factors, indices, value * Fraction(1, factorial(q + 1) ** 2)

    for q in range(1, space.n + 1):
        rho = rho + _assemble(space, space.n, first_summation(q))
    for name in space.field_names:
        for i in range(space.n):
            rho = rho + wedge(omega(space, name), ds(space, i)) * momenta.f(name, i)
    for q in range(1, space.n):
        excess = _assemble(space, space.n, second_summation(q))
        if not excess.is_zero:
            logger.debug("second summation contributes at q = {}", q + 1)
        rho = rho + excess
    return rho


def lepage_full(problem: LagrangianProblem) -> JetForm:
    """ The "full" Lepage equivalent: Krupka-Betounes for r <= 1, its second-order extension for r = 2. """
    _check_order(problem)
    if problem.order <= 1:
        return krupka_betounes(problem)
    return _second_order(problem, Momenta.of(problem))


def is_lepage(rho: JetForm) -> Tuple[bool, SourceFormReport]:
    """ ρ is Lepage iff p_1 dρ is a source form. """
    if rho.degree != rho.space.n:
        raise DegreeError(f"Lepage test needs an n-form, got degree {rho.degree}")
    report = classify_source(contact_component(exterior_d(rho), 1))
    return report.is_source, report

