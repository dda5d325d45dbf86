from fractions import Fraction
from typing import Dict

__all__ = ['AttrDict', 'parse_params']


class AttrDict(dict):
    def __getattr__(self, name):
        if name in self:
            return self[name]
        return super().__getattribute__(name)


def parse_params(value: str) -> Dict[str, Fraction]:
    """ Parse ``a=1,b=-1/2`` into exact rational assignments. """
    params: Dict[str, Fraction] = {}
    for item in filter(None, (part.strip() for part in value.split(','))):
        name, sep, raw = item.partition('=')
        if not sep or not name.strip():
            raise ValueError(f"Expected `name=value`, got `{item}`")
        params[name.strip()] = Fraction(raw.strip())
    return params

