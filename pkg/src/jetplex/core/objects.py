from typing import Dict, List, TypedDict

__all__ = ['ProblemConfig', 'VectorFieldConfig']


class VectorFieldConfig(TypedDict, total=False):
    """ Components as DSL strings: ``xi`` by base name, ``Xi`` by field name. """
    xi: Dict[str, str]
    Xi: Dict[str, str]


class ProblemConfig(TypedDict, total=False):
    base: List[str]
    fields: List[str]
    params: List[str]
    lagrangian: str
    order: int
    vector_fields: Dict[str, VectorFieldConfig]
    constraints: List[str]
