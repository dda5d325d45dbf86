from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Union

import sympy as sp
from loguru import logger

from ..exceptions import IdentityViolation, NotExact, NotNull, OrderMismatch, ReconstructionFailure
from ..forms import (
    BasisOneForm, FrameVector, JetForm,
    contact_component, ds, exterior_d, horizontal, horizontal_d, interior_product, volume,
)
from ..kernel import DiffPoly, JetCoordinate, MultiIndex, jet_partial, total_derivative
from ..variational import LagrangianProblem, euler_lagrange, euler_operator, lepage_full, poincare_cartan
from .fields import ProjVectorField, prolong

__all__ = [
    'FirstVariation', 'ImprovedCurrent',
    'lie_derivative', 'first_variation', 'divergence_potential', 'density_of',
    'improved_current', 'noether_bessel_hagen_residual', 'lepage_excess_contraction',
]


def density_of(form: JetForm) -> DiffPoly:
    """ Coefficient of ds in a horizontal n-form. """
    space = form.space
    if form.degree != space.n:
        raise ValueError(f"Expected an n-form, got degree {form.degree}")
    if contact_component(form, 0) != form:
        raise ValueError("Expected a horizontal form")
    word = tuple(BasisOneForm.dx(space, i) for i in range(space.n))
    return form.terms.get(word, DiffPoly.zero(space))


def _max_depth(form: JetForm) -> int:
    return max((one.depth for word in form.terms for one in word if one.is_omega), default=0)


def lie_derivative(rho: JetForm, vector: ProjVectorField, r: Optional[int] = None) -> JetForm:
    """ L_{J^r Ξ} ρ = J^rΞ ⌟ dρ + d(J^rΞ ⌟ ρ) """
    d_rho = exterior_d(rho)
    needed = max(_max_depth(d_rho), _max_depth(rho))
    if r is None:
        r = needed
    elif r < needed:
        raise OrderMismatch(f"Prolongation of order {r} is too short for contact forms of order {needed}")
    X = prolong(vector, r).frame()
    if rho.degree == 0:
        return interior_product(X, d_rho)
    return interior_product(X, d_rho) + exterior_d(interior_product(X, rho))


@dataclass
class FirstVariation:
    """ lhs ds = source ds + d_H(current) """
    lhs: DiffPoly
    source: DiffPoly
    current: JetForm


def first_variation(problem: LagrangianProblem, vector: ProjVectorField) -> FirstVariation:
    space = problem.space
    theta = poincare_cartan(problem)
    lam = problem.form
    lhs = density_of(horizontal(lie_derivative(lam, vector)))

    prolonged = prolong(vector, max(problem.order, 1))
    vertical = prolonged.vertical_part()
    equations = euler_lagrange(problem)
    source = DiffPoly.zero(space)
    for name, value in equations.items():
        source = source + vertical[JetCoordinate(name, MultiIndex())] * value

    frame = prolonged.frame()
    current = interior_product(frame.vertical_part(), theta - lam) \
        + interior_product(frame.horizontal_part(), lam)
    recombined = density_of(horizontal(horizontal_d(current)))
    if lhs != source + recombined:
        raise IdentityViolation(f"First variation identity fails for `{vector.name or vector}`")
    return FirstVariation(lhs, source, current)


def _homogeneous_parts(f: DiffPoly) -> Dict[int, DiffPoly]:
    """ Split by total degree in the jet coordinates. """
    jets = f.jet_symbols()
    parts: Dict[int, sp.Expr] = {}
    for addend in sp.Add.make_args(f.expr):
        degree = sum(int(power) for symbol, power in addend.as_powers_dict().items() if symbol in jets)
        parts[degree] = parts.get(degree, sp.Integer(0)) + addend
    return {degree: DiffPoly(f.space, expr) for degree, expr in parts.items()}


def _integrate_by_parts(name: str, index: MultiIndex, factor: DiffPoly,
                        flux: Dict[int, DiffPoly]) -> None:
    """ Move d_J off y^σ_J in y^σ_J · A, accumulating the total-divergence flux. """
    space = factor.space
    while len(index):
        j = index.entries[-1]
        index = index.remove(j)
        flux[j] = flux.get(j, DiffPoly.zero(space)) + DiffPoly.coordinate(space, name, index) * factor
        factor = -total_derivative(factor, j)


def divergence_potential(form: Union[JetForm, DiffPoly]) -> JetForm:
    """ ψ with d_H ψ = ω for a null density without explicit base dependence.

        Each homogeneous part of degree d satisfies d·L = Σ y^σ_J ∂L/∂y^σ_J;
        integrating every term by parts leaves y^σ ε_σ(L) = 0, so
        ψ = (1/d) Σ_i P^i ds_i for the accumulated flux P^i.
    """
    if isinstance(form, DiffPoly):
        form = volume(form.space) * form
    space = form.space
    density = density_of(form)
    if density.is_zero:
        return JetForm.zero(space, space.n - 1)
    if density.has_explicit_base():
        raise ReconstructionFailure("Densities with explicit base dependence are not supported")
    if any(not e.is_zero for e in euler_operator(density).values()):
        raise NotNull("Density is not a total divergence: its Euler-Lagrange expressions do not vanish")

    psi = JetForm.zero(space, space.n - 1)
    for degree, part in sorted(_homogeneous_parts(density).items()):
        if degree == 0:
            psi = psi + ds(space, 0) * (part * DiffPoly.base(space, 0))
            continue
        flux: Dict[int, DiffPoly] = {}
        for symbol, coordinate in part.jet_symbols().items():
            factor = jet_partial(part, coordinate.field, coordinate.index)
            _integrate_by_parts(coordinate.field, coordinate.index, factor, flux)
        for i, value in flux.items():
            psi = psi + ds(space, i) * (value * Fraction(1, degree))

    if density_of(horizontal_d(psi)) != density:
        raise ReconstructionFailure("Reconstructed potential does not recombine to the density")
    logger.debug("divergence potential with {} terms", len(psi))
    return psi


@dataclass
class ImprovedCurrent:
    candidate: JetForm
    obstruction: JetForm
    potential: Optional[JetForm] = None
    current: Optional[JetForm] = None

    @property
    def is_exact(self) -> bool:
        return self.current is not None


def _vertical_source_contraction(frame: FrameVector, rho: JetForm) -> JetForm:
    """ h(Ξ_V ⌟ p_1 dρ) """
    return horizontal(interior_product(frame.vertical_part(), contact_component(exterior_d(rho), 1)))


def improved_current(problem: LagrangianProblem, vector: ProjVectorField,
                     strict: bool = True) -> ImprovedCurrent:
    """ Candidate J Ξ ⌟ ρ_λ, obstruction h(L_{JΞ} ρ_λ) and, when the obstruction
        is a total divergence d_H ψ, the conserved current J Ξ ⌟ ρ_λ - ψ.
    """
    rho = lepage_full(problem)
    space = rho.space
    lie = lie_derivative(rho, vector)
    frame = prolong(vector, max(_max_depth(exterior_d(rho)), 1)).frame()
    candidate = interior_product(frame, rho)
    obstruction = horizontal(lie)

    identity = _vertical_source_contraction(frame, rho) + horizontal(horizontal_d(candidate))
    if identity != obstruction:
        raise IdentityViolation(f"Obstruction identity fails for `{vector.name or vector}`")

    if obstruction.is_zero:
        return ImprovedCurrent(candidate, obstruction, JetForm.zero(space, space.n - 1), candidate)
    density = density_of(obstruction)
    if any(not e.is_zero for e in euler_operator(density).values()):
        if strict:
            raise NotExact(f"`{vector.name or vector}` does not leave the Euler-Lagrange form invariant",
                           candidate=candidate, obstruction=obstruction)
        logger.warning("obstruction of `{}` is not a total divergence", vector.name or vector)
        return ImprovedCurrent(candidate, obstruction)
    psi = divergence_potential(obstruction)
    return ImprovedCurrent(candidate, obstruction, psi, candidate - psi)


def noether_bessel_hagen_residual(problem: LagrangianProblem, vector: ProjVectorField) -> JetForm:
    """ ε = J Ξ ⌟ ρ_λ - ψ, certified against h(d_H ε) = -h(Ξ_V ⌟ p_1 dρ_λ). """
    record = improved_current(problem, vector, strict=True)
    rho = lepage_full(problem)
    frame = prolong(vector, max(_max_depth(exterior_d(rho)), 1)).frame()
    lhs = horizontal(horizontal_d(record.current))
    if lhs != -_vertical_source_contraction(frame, rho):
        raise IdentityViolation(f"Noether-Bessel-Hagen identity fails for `{vector.name or vector}`")
    return record.current


def lepage_excess_contraction(problem: LagrangianProblem, vector: ProjVectorField) -> JetForm:
    """ J¹Ξ ⌟ (ρ_λ - θ_λ), the form whose d_H-exactness decides symmetries of extremals. """
    excess = lepage_full(problem) - poincare_cartan(problem)
    frame = prolong(vector, max(_max_depth(excess), 1)).frame()
    return interior_product(frame, excess)
