""" YAML for problem specs and fixture files.

    ``!include`` pulls a mapping from a file next to the including one,
    optionally restricted to ``items``; ``init`` writes it back the same way.
"""
import os
from typing import Any, Iterable, Mapping, Optional, Sequence, TextIO

import ruamel.yaml as yaml
from ruamel.yaml import comments

from .exceptions import ConfigError

__all__ = ['Include', 'Loader', 'Dumper', 'load_file', 'dump', 'require_keys']


class Include:
    def __init__(self, filename: str, items: Optional[Sequence[str]] = None):
        self.filename = filename
        self.items = list(items) if items is not None else None


def require_keys(data: Any, keys: Iterable[str], where: str) -> Mapping:
    if not isinstance(data, Mapping):
        raise ConfigError(f"{where} must be a mapping")
    missing = [key for key in keys if key not in data]
    if missing:
        raise ConfigError(f"{where} is missing required keys: {', '.join(missing)}")
    return data


def _read(path: str) -> Any:
    try:
        with open(path, 'r') as f:
            return yaml.YAML(typ='rt').load(f)
    except OSError as e:
        raise ConfigError(f"Can't read included file `{path}`: {e}") from e


class Loader(yaml.RoundTripLoader):
    """ Round-trip loader with the ``!include`` directive. """
    def __init__(self, stream, *args, **kwargs):
        self._root = os.path.split(getattr(stream, 'name', ''))[0]
        super(Loader, self).__init__(stream, *args, **kwargs)

    def include(self, node):
        if isinstance(node, yaml.ScalarNode):
            return _read(os.path.join(self._root, self.construct_scalar(node)))
        if not isinstance(node, yaml.MappingNode):
            raise ConfigError("Unrecognized node type in !include directive")

        mapping = comments.CommentedMap()
        self.construct_mapping(node, maptyp=mapping, deep=True)
        require_keys(mapping, ('file',), "`!include`")
        content = _read(os.path.join(self._root, str(mapping['file'])))
        items = mapping.get('items')
        if items is None:
            return content
        require_keys(content, items, f"Included file `{mapping['file']}`")
        return {item: content[item] for item in items}


Loader.add_constructor('!include', Loader.include)


class Dumper(yaml.RoundTripDumper):
    def increase_indent(self, flow=False, sequence=False, *args, **kwargs):
        return super(Dumper, self).increase_indent(flow, False, *args, **kwargs)

    def represent_include(self, data: Include):
        value = comments.CommentedMap()
        value['file'] = data.filename
        if data.items is not None:
            value['items'] = comments.CommentedSeq(data.items)
            value['items'].fa.set_flow_style()
        return self.represent_mapping(u'!include', value, flow_style=False)


Dumper.add_representer(Include, Dumper.represent_include)


def load_file(path: str, required: Sequence[str] = ()) -> Any:
    """ Load ``path``; a non-empty ``required`` makes it a mapping with those keys. """
    try:
        with open(path, 'r') as f:
            data = yaml.load(f, Loader=Loader)
    except OSError as e:
        raise ConfigError(f"Can't read `{path}`: {e}") from e
    if required:
        require_keys(data, required, f"`{os.path.basename(path)}`")
    return data


def dump(data: Any, stream: TextIO) -> None:
    yaml.dump(data, stream, Dumper=Dumper, default_flow_style=False, allow_unicode=True)
