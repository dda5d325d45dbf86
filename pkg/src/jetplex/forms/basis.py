from dataclasses import dataclass, field as dataclass_field
from typing import Mapping, Optional, Tuple, Union

from ..exceptions import OrderMismatch
from ..kernel import (
    DiffPoly, JetCoordinate, JetSpace, MultiIndex,
    as_base_index, as_multi_index,
)

__all__ = ['BasisOneForm', 'FrameVector']

DX, OMEGA = 0, 1


@dataclass(frozen=True, order=True)
class BasisOneForm:
    """ dx^i or ω^σ_J.

        Field order sorts all dx^i first (by i), then ω^σ_J by
        (field position, |J|, J). Wedge words are stored in this order.
    """
    kind: int
    slot: int
    depth: int = 0
    entries: Tuple[int, ...] = ()
    name: str = dataclass_field(default='', compare=False)

    @classmethod
    def dx(cls, space: JetSpace, i: Union[int, str]) -> "BasisOneForm":
        i = as_base_index(space, i)
        return cls(DX, i, name=space.base_names[i])

    @classmethod
    def omega(cls, space: JetSpace, name: str,
              index: Union[MultiIndex, str, Tuple[int, ...]] = MultiIndex()) -> "BasisOneForm":
        index = as_multi_index(space, index)
        return cls(OMEGA, space.field_index(name), len(index), index.entries, name)

    @property
    def is_dx(self) -> bool:
        return self.kind == DX

    @property
    def is_omega(self) -> bool:
        return self.kind == OMEGA

    @property
    def base(self) -> int:
        return self.slot

    @property
    def field(self) -> str:
        return self.name

    @property
    def index(self) -> MultiIndex:
        return MultiIndex(self.entries)

    @property
    def coordinate(self) -> JetCoordinate:
        return JetCoordinate(self.name, self.index)

    def prolong(self, space: JetSpace, i: int) -> "BasisOneForm":
        """ ω^σ_J -> ω^σ_{Ji} """
        return BasisOneForm.omega(space, self.name, self.index.add(i))

    def label(self, space: JetSpace) -> str:
        if self.is_dx:
            return f"d{self.name}"
        return f"omega^{space.coordinate_name(self.name, self.index)}"


@dataclass(frozen=True)
class FrameVector:
    """ Vector in the frame {d_i, ∂/∂y^σ_J} dual to {dx^i, ω^σ_J}.

        ``order`` truncates the vertical part: pairing with ω^σ_J for
        |J| > order is an error instead of a silent zero.
    """
    space: JetSpace
    horizontal: Mapping[int, DiffPoly] = dataclass_field(default_factory=dict)
    vertical: Mapping[JetCoordinate, DiffPoly] = dataclass_field(default_factory=dict)
    order: Optional[int] = None

    @classmethod
    def total(cls, space: JetSpace, i: Union[int, str]) -> "FrameVector":
        """ The total derivative d_i. """
        return cls(space, {as_base_index(space, i): DiffPoly.constant(space, 1)})

    @classmethod
    def jet(cls, space: JetSpace, name: str,
            index: Union[MultiIndex, str, Tuple[int, ...]] = MultiIndex()) -> "FrameVector":
        """ The coordinate vector ∂/∂y^σ_J. """
        key = JetCoordinate(name, as_multi_index(space, index))
        return cls(space, vertical={key: DiffPoly.constant(space, 1)})

    def pair(self, one: BasisOneForm) -> DiffPoly:
        if one.is_dx:
            return self.horizontal.get(one.base, DiffPoly.zero(self.space))
        if self.order is not None and one.depth > self.order:
            raise OrderMismatch(f"Vector field of order {self.order} cannot contract "
                                f"{one.label(self.space)}")
        return self.vertical.get(one.coordinate, DiffPoly.zero(self.space))

    @property
    def is_vertical(self) -> bool:
        return all(value.is_zero for value in self.horizontal.values())

    def vertical_part(self) -> "FrameVector":
        return FrameVector(self.space, {}, self.vertical, self.order)

    def horizontal_part(self) -> "FrameVector":
        return FrameVector(self.space, self.horizontal, {}, self.order)
