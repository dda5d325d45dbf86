import re
from collections import defaultdict
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from loguru import logger

from .objects import ProblemConfig, VectorFieldConfig
from ..dsl import parse_constraint, parse_expression, parse_lagrangian
from ..exceptions import ConfigError
from ..kernel import DiffPoly, JetSpace
from ..symmetry import ProjVectorField
from ..utils import AttrDict
from ..variational import LagrangianProblem
from ..yaml import load_file, require_keys

__all__ = ['config_loader', 'ProblemTree', 'load_problem']

REQUIRED_KEYS = ('base', 'fields', 'lagrangian', 'order')

Node = Callable[[Any, str, JetSpace], Any]


class _ConfigLoader:
    """ Walks a problem spec by dotted path and hands every matching node to
        the most recently registered handler.
    """
    def __init__(self) -> None:
        self._filters = []

    def add_node(
        self,
        flt: Union[str, Callable[[Any, str], bool]],
        collection: Optional[str] = None,
    ) -> Callable[[Node], Node]:
        def inner(fn: Node):
            nonlocal flt
            if not callable(flt):
                flt = self._regexp_flt(flt)
            self._filters.append([flt, fn, collection])
            return fn
        return inner

    def _regexp_flt(self, regexp: str):
        _regexp = re.compile(regexp)

        def _filter(cfg: Any, path: str) -> bool:
            return _regexp.match(path) is not None
        return _filter

    def _get_node(self, cfg: Any, path: str, space: JetSpace, collections: defaultdict) -> Any:
        # check filters as LIFO
        for flt, node, collection in self._filters[::-1]:
            if flt(cfg, path):
                value = node(cfg, path, space)
                if collection:
                    collections[collection][path.rsplit('.', 1)[-1]] = value
                return value
        return cfg

    def parse(self, cfg: ProblemConfig) -> "ProblemTree":
        space = build_space(cfg)
        collections: defaultdict = defaultdict(AttrDict)

        def _parse_cfg(value: Any, path: str) -> Any:
            if isinstance(value, dict):
                parsed = AttrDict()
                for key, item in value.items():
                    parsed[key] = _parse_cfg(item, ".".join([path, str(key)]) if path else str(key))
                value = parsed
            return self._get_node(value, path, space, collections)

        tree = _parse_cfg(dict(cfg), "")
        tree['space'] = space
        return ProblemTree(tree, collections)


class ProblemTree(AttrDict):
    """ Parsed problem spec: ``space``, ``lagrangian``, ``constraints`` and
        named collections exposed as ``get_<collection>()``.
    """
    def __init__(self, tree: Dict, collections: Optional[Dict[str, Dict]] = None):
        super().__init__(tree)
        self._collections = collections or {}

    def __getattr__(self, name: str) -> Any:
        if name.startswith('get_'):
            collection = self._collections.get(name[4:])
            if collection is None:
                collection = AttrDict()
            return lambda: collection
        return super().__getattr__(name)

    @property
    def problem(self) -> LagrangianProblem:
        return LagrangianProblem(self.space, self.lagrangian, self.get('order'), self.get('name', ''))

    @classmethod
    def from_problem(cls, problem: LagrangianProblem,
                     constraints: Optional[List[Tuple[str, DiffPoly]]] = None) -> "ProblemTree":
        return cls({
            'space': problem.space,
            'lagrangian': problem.lagrangian,
            'order': problem.order,
            'name': problem.name,
            'constraints': constraints or [],
        })


def build_space(cfg: ProblemConfig) -> JetSpace:
    require_keys(cfg, REQUIRED_KEYS, "Problem spec")
    try:
        order = int(cfg['order'])
        return JetSpace(tuple(cfg['base']), tuple(cfg['fields']), tuple(cfg.get('params') or ()), order)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid problem spec: {e}") from e


config_loader = _ConfigLoader()


@config_loader.add_node(r'^lagrangian$')
def load_lagrangian(cfg: str, path: str, space: JetSpace) -> DiffPoly:
    return parse_lagrangian(str(cfg), space)


@config_loader.add_node(r'^order$')
def load_order(cfg: Any, path: str, space: JetSpace) -> int:
    return space.order


@config_loader.add_node(r'^constraints$')
def load_constraints(cfg: List[str], path: str, space: JetSpace) -> List[Tuple[str, DiffPoly]]:
    if not isinstance(cfg, list):
        raise ConfigError("`constraints` must be a list of `field = expression` strings")
    return [parse_constraint(str(item), space, 2 * space.order + 2) for item in cfg]


@config_loader.add_node(r'^vector_fields\.[^.]+$', 'vector_fields')
def load_vector_field(cfg: VectorFieldConfig, path: str, space: JetSpace) -> ProjVectorField:
    name = path.rsplit('.', 1)[-1]
    unknown = set(cfg) - {'xi', 'Xi'}
    if unknown:
        raise ConfigError(f"Vector field `{name}` has unknown keys: {', '.join(sorted(unknown))}")
    try:
        field = ProjVectorField(
            space,
            {key: parse_expression(str(value), space, 0) for key, value in (cfg.get('xi') or {}).items()},
            {key: parse_expression(str(value), space, 0) for key, value in (cfg.get('Xi') or {}).items()},
            name=name,
        )
    except ValueError as e:
        raise ConfigError(f"Vector field `{name}`: {e}") from e
    logger.debug("loaded vector field `{}`", name)
    return field


def load_problem(path: str) -> ProblemTree:
    cfg = require_keys(load_file(path), (), f"Problem spec `{path}`")
    return config_loader.parse(cfg)
