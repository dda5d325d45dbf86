import re
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterator, NamedTuple, Optional, Tuple, Union

import sympy as sp

__all__ = ['MultiIndex', 'JetSpace', 'JetCoordinate', 'BaseCoordinate', 'as_multi_index', 'as_base_index']

_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9]*$")


@dataclass(frozen=True, order=True)
class MultiIndex:
    """ Sorted multiset of base indices (0-based positions into ``JetSpace.base_names``). """
    entries: Tuple[int, ...] = ()

    def __post_init__(self):
        if any(i < 0 for i in self.entries):
            raise ValueError(f"Negative base index in {self.entries}")
        object.__setattr__(self, 'entries', tuple(sorted(self.entries)))

    @classmethod
    def of(cls, *entries: int) -> "MultiIndex":
        return cls(tuple(entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __contains__(self, i: int) -> bool:
        return i in self.entries

    def add(self, i: int) -> "MultiIndex":
        return MultiIndex(self.entries + (i,))

    def remove(self, i: int) -> "MultiIndex":
        entries = list(self.entries)
        entries.remove(i)
        return MultiIndex(tuple(entries))

    def count(self, i: int) -> int:
        return self.entries.count(i)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return len(self.entries), self.entries

    @staticmethod
    def all_of_length(n: int, length: int) -> Iterator["MultiIndex"]:
        for entries in combinations_with_replacement(range(n), length):
            yield MultiIndex(entries)

    @staticmethod
    def up_to(n: int, order: int) -> Iterator["MultiIndex"]:
        for length in range(order + 1):
            yield from MultiIndex.all_of_length(n, length)


class JetCoordinate(NamedTuple):
    field: str
    index: MultiIndex

    @property
    def order(self) -> int:
        return len(self.index)


class BaseCoordinate(NamedTuple):
    index: int


@lru_cache(maxsize=4096)
def _symbol(name: str) -> sp.Symbol:
    return sp.Symbol(name)


@dataclass(frozen=True)
class JetSpace:
    """ Coordinates x^i, y^σ, y^σ_J of J^s Y plus the symbolic parameters.

        Base names are single letters so that jet suffixes (``v_tx``) read
        back unambiguously. ``order`` only grows: operations that reach a
        higher jet return a prolonged copy through ``with_order``.
    """
    base_names: Tuple[str, ...]
    field_names: Tuple[str, ...]
    param_names: Tuple[str, ...] = ()
    order: int = 0
    _field_pos: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        for attr in ('base_names', 'field_names', 'param_names'):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        if not self.base_names:
            raise ValueError("At least one base coordinate is required")
        if not self.field_names:
            raise ValueError("At least one field coordinate is required")
        if self.order < 0:
            raise ValueError(f"Jet order must be non-negative, got {self.order}")
        names = self.base_names + self.field_names + self.param_names
        if len(set(names)) != len(names):
            raise ValueError(f"Coordinate and parameter names must be distinct: {names}")
        for name in names:
            if not _NAME_RE.match(name):
                raise ValueError(f"Invalid name `{name}`: letters and digits only, no underscores")
        for name in self.base_names:
            if len(name) != 1:
                raise ValueError(f"Base coordinate `{name}` must be a single letter")
        object.__setattr__(self, '_field_pos', {name: i for i, name in enumerate(self.field_names)})

    @property
    def n(self) -> int:
        return len(self.base_names)

    @property
    def m(self) -> int:
        return len(self.field_names)

    def with_order(self, order: int) -> "JetSpace":
        return self if order <= self.order else replace(self, order=order)

    def field_index(self, name: str) -> int:
        try:
            return self._field_pos[name]
        except KeyError:
            raise ValueError(f"Unknown field `{name}`") from None

    def base_index(self, name: str) -> int:
        try:
            return self.base_names.index(name)
        except ValueError:
            raise ValueError(f"Unknown base coordinate `{name}`") from None

    def label(self, index: MultiIndex) -> str:
        return "".join(self.base_names[i] for i in index)

    def coordinate_name(self, name: str, index: MultiIndex) -> str:
        return f"{name}_{self.label(index)}" if len(index) else name

    def coordinate(self, name: str, index: Union[MultiIndex, Tuple[int, ...]] = MultiIndex()) -> sp.Symbol:
        if not isinstance(index, MultiIndex):
            index = MultiIndex(tuple(index))
        if name not in self._field_pos:
            raise ValueError(f"Unknown field `{name}`")
        if any(i >= self.n for i in index):
            raise ValueError(f"Base index out of range in {index.entries}")
        return _symbol(self.coordinate_name(name, index))

    def base_symbol(self, i: int) -> sp.Symbol:
        return _symbol(self.base_names[i])

    def param_symbol(self, name: str) -> sp.Symbol:
        if name not in self.param_names:
            raise ValueError(f"Unknown parameter `{name}`")
        return _symbol(name)

    def parse_suffix(self, suffix: str) -> Optional[MultiIndex]:
        try:
            return MultiIndex(tuple(self.base_names.index(ch) for ch in suffix))
        except ValueError:
            return None

    def decode(self, symbol: sp.Symbol) -> Union[JetCoordinate, BaseCoordinate, str]:
        """ Classify a symbol as a jet coordinate, a base coordinate or a parameter name. """
        return _decode(self, symbol.name)

    def jet(self, symbol: sp.Symbol) -> Optional[JetCoordinate]:
        decoded = _decode(self, symbol.name)
        return decoded if isinstance(decoded, JetCoordinate) else None

    def jets(self, order: Optional[int] = None) -> Iterator[JetCoordinate]:
        order = self.order if order is None else order
        for name in self.field_names:
            for index in MultiIndex.up_to(self.n, order):
                yield JetCoordinate(name, index)


@lru_cache(maxsize=4096)
def _decode(space: JetSpace, name: str) -> Union[JetCoordinate, BaseCoordinate, str]:
    if name in space.param_names:
        return name
    if name in space.base_names:
        return BaseCoordinate(space.base_names.index(name))
    head, sep, suffix = name.partition('_')
    if head in space.field_names:
        index = space.parse_suffix(suffix) if sep else MultiIndex()
        if index is not None and (not sep or suffix):
            return JetCoordinate(head, index)
    raise ValueError(f"Symbol `{name}` does not belong to the jet space")


def as_multi_index(space: JetSpace, value: Union[MultiIndex, str, Tuple[int, ...]]) -> MultiIndex:
    """ Accept a ``MultiIndex``, a suffix label (``"tx"``) or a tuple of base indices. """
    if isinstance(value, MultiIndex):
        return value
    if isinstance(value, str):
        index = space.parse_suffix(value)
        if index is None:
            raise ValueError(f"Unknown base coordinate in suffix `{value}`")
        return index
    return MultiIndex(tuple(value))


def as_base_index(space: JetSpace, value: Union[int, str]) -> int:
    if isinstance(value, str):
        return space.base_index(value)
    if not 0 <= value < space.n:
        raise ValueError(f"Base index {value} out of range 0..{space.n - 1}")
    return value
