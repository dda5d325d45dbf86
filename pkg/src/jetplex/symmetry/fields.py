from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Union

from ..forms import FrameVector
from ..kernel import (
    DiffPoly, JetCoordinate, JetSpace, MultiIndex, Scalar,
    as_base_index, total_derivative,
)

__all__ = [
    'ProjVectorField', 'ProlongedField', 'prolong',
    'translation', 'field_shift', 'scaling',
]


@dataclass(frozen=True)
class ProjVectorField:
    """ Ξ = ξ^i(x) ∂_i + Ξ^σ(x, y) ∂_σ """
    space: JetSpace
    xi: Mapping[int, DiffPoly] = field(default_factory=dict)
    Xi: Mapping[str, DiffPoly] = field(default_factory=dict)
    name: str = ''

    def __post_init__(self):
        xi = {}
        for key, value in self.xi.items():
            i = as_base_index(self.space, key)
            if value.jets():
                raise ValueError(f"ξ^{self.space.base_names[i]} must depend on base coordinates only")
            xi[i] = value
        Xi = {}
        for key, value in self.Xi.items():
            self.space.field_index(key)
            if value.order > 0:
                raise ValueError(f"Ξ^{key} must not depend on derivatives")
            Xi[key] = value
        object.__setattr__(self, 'xi', xi)
        object.__setattr__(self, 'Xi', Xi)

    def base_component(self, i: int) -> DiffPoly:
        return self.xi.get(i, DiffPoly.zero(self.space))

    def fiber_component(self, name: str) -> DiffPoly:
        return self.Xi.get(name, DiffPoly.zero(self.space))

    @property
    def is_vertical(self) -> bool:
        return all(value.is_zero for value in self.xi.values())

    @property
    def is_zero(self) -> bool:
        return self.is_vertical and all(value.is_zero for value in self.Xi.values())


@dataclass
class ProlongedField:
    """ Components Ξ^σ_J of J^r Ξ for every |J| <= r. """
    base: ProjVectorField
    order: int
    components: Dict[JetCoordinate, DiffPoly] = field(default_factory=dict)

    @property
    def space(self) -> JetSpace:
        return self.base.space

    def component(self, name: str, index: MultiIndex = MultiIndex()) -> DiffPoly:
        return self.components[JetCoordinate(name, index)]

    def vertical_part(self) -> Dict[JetCoordinate, DiffPoly]:
        """ V^σ_J = Ξ^σ_J - y^σ_{Ji} ξ^i """
        space = self.space
        result = {}
        for key, value in self.components.items():
            for i, coeff in self.base.xi.items():
                value = value - DiffPoly.coordinate(space, key.field, key.index.add(i)) * coeff
            result[key] = value
        return result

    def frame(self) -> FrameVector:
        return FrameVector(self.space, dict(self.base.xi), self.vertical_part(), self.order)


def prolong(vector: ProjVectorField, r: int) -> ProlongedField:
    """ Ξ^σ_{Ji} = d_i Ξ^σ_J - y^σ_{Jk} d_i ξ^k """
    if r < 0:
        raise ValueError(f"Prolongation order must be non-negative, got {r}")
    space = vector.space
    dxi = {(k, i): total_derivative(value, i)
           for k, value in vector.xi.items() for i in range(space.n)}
    components: Dict[JetCoordinate, DiffPoly] = {}
    for name in space.field_names:
        components[JetCoordinate(name, MultiIndex())] = vector.fiber_component(name)
        for length in range(1, r + 1):
            for index in MultiIndex.all_of_length(space.n, length):
                i = index.entries[-1]
                parent = index.remove(i)
                value = total_derivative(components[JetCoordinate(name, parent)], i)
                for k in vector.xi:
                    value = value - DiffPoly.coordinate(space, name, parent.add(k)) * dxi[(k, i)]
                components[JetCoordinate(name, index)] = value
    return ProlongedField(vector, r, components)


# canonical vector fields

def translation(space: JetSpace, base: Union[int, str]) -> ProjVectorField:
    i = as_base_index(space, base)
    return ProjVectorField(space, {i: DiffPoly.constant(space, 1)},
                           name=f"translate:{space.base_names[i]}")


def field_shift(space: JetSpace, name: str) -> ProjVectorField:
    space.field_index(name)
    return ProjVectorField(space, Xi={name: DiffPoly.constant(space, 1)}, name=f"shift:{name}")


def scaling(space: JetSpace,
            base_weights: Optional[Mapping[Union[int, str], Scalar]] = None,
            field_weights: Optional[Mapping[str, Scalar]] = None) -> ProjVectorField:
    """ ξ^i = w_i x^i, Ξ^σ = c_σ y^σ (default: unit weights on every coordinate). """
    if base_weights is None:
        base_weights = {i: 1 for i in range(space.n)}
    if field_weights is None:
        field_weights = {name: 1 for name in space.field_names}
    xi = {as_base_index(space, key): DiffPoly.base(space, key) * weight
          for key, weight in base_weights.items() if weight}
    Xi = {name: DiffPoly.coordinate(space, name) * weight
          for name, weight in field_weights.items() if weight}
    return ProjVectorField(space, xi, Xi, name='scale')
