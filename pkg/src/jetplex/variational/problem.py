from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from ..kernel import DiffPoly, JetSpace, MultiIndex, jet_partial, total_derivative
from ..forms import JetForm, volume

__all__ = ['LagrangianProblem', 'Momenta', 'symmetric_partial']


@dataclass(frozen=True)
class LagrangianProblem:
    """ A Lagrangian λ = L ds of declared order r on a jet space. """
    space: JetSpace
    lagrangian: DiffPoly
    order: Optional[int] = None
    name: str = ''

    def __post_init__(self):
        actual = self.lagrangian.order
        if self.order is None:
            object.__setattr__(self, 'order', actual)
        elif actual > self.order:
            raise ValueError(f"Lagrangian references jets of order {actual} "
                             f"but the declared order is {self.order}")
        space = self.space.with_order(max(self.order, self.lagrangian.space.order))
        object.__setattr__(self, 'space', space)

    @property
    def density(self) -> DiffPoly:
        return self.lagrangian

    @property
    def form(self) -> JetForm:
        """ λ = L ds """
        return volume(self.space) * self.lagrangian

    def with_lagrangian(self, lagrangian: DiffPoly, order: Optional[int] = None) -> "LagrangianProblem":
        order = max(self.order, lagrangian.order) if order is None else order
        return LagrangianProblem(self.space, lagrangian, order, self.name)


def symmetric_partial(f: DiffPoly, name: str, i: int, j: int) -> DiffPoly:
    """ ∂f/∂y^σ_{ij} with the symmetric convention (½ off the diagonal). """
    value = jet_partial(f, name, MultiIndex.of(i, j))
    return value if i == j else value * Fraction(1, 2)


@dataclass
class Momenta:
    """ p^i_σ, p^{ij}_σ (symmetric storage, i ≤ j) and f^i_σ = p^i_σ - d_k p^{ik}_σ. """
    space: JetSpace
    p1: Dict[Tuple[str, int], DiffPoly] = field(default_factory=dict)
    p2: Dict[Tuple[str, Tuple[int, int]], DiffPoly] = field(default_factory=dict)
    f1: Dict[Tuple[str, int], DiffPoly] = field(default_factory=dict)

    @classmethod
    def of(cls, problem: LagrangianProblem) -> "Momenta":
        space, L = problem.space, problem.lagrangian
        momenta = cls(space)
        n = space.n
        for name in space.field_names:
            for i in range(n):
                momenta.p1[(name, i)] = jet_partial(L, name, MultiIndex.of(i))
                for j in range(i, n):
                    momenta.p2[(name, (i, j))] = symmetric_partial(L, name, i, j)
        for name in space.field_names:
            for i in range(n):
                value = momenta.p1[(name, i)]
                for k in range(n):
                    value = value - total_derivative(momenta.second(name, i, k), k)
                momenta.f1[(name, i)] = value
        return momenta

    def first(self, name: str, i: int) -> DiffPoly:
        return self.p1[(name, i)]

    def second(self, name: str, i: int, j: int) -> DiffPoly:
        return self.p2[(name, (min(i, j), max(i, j)))]

    def f(self, name: str, i: int) -> DiffPoly:
        return self.f1[(name, i)]
