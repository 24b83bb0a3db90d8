import os
from typing import Any, Dict, Iterable

import yaml
from jinja2 import Template

from ..exceptions import ConfigError


def load_yaml_with_env(path: str) -> Dict[str, Any]:
    """
    Loads YAML file with environment variable substitution via Jinja2.

    Args:
        path: Path to YAML file

    Returns:
        dict: Loaded configuration with substituted variables
    """
    with open(path, "r", encoding="utf-8") as f:
        template = Template(f.read())
        rendered = template.render(env=os.environ)
        return yaml.safe_load(rendered) or {}


def parse_override(item: str) -> tuple[list[str], Any]:
    """
    Splits a ``dotted.key=value`` override into its key path and YAML-parsed value.

    Args:
        item: Override text as given on the command line

    Returns:
        (key path, value)
    """
    if "=" not in item:
        raise ConfigError(f"Override must look like key=value: {item!r}")
    key, raw = item.split("=", 1)
    path = [part for part in key.strip().split(".") if part]
    if not path:
        raise ConfigError(f"Override has an empty key: {item!r}")
    try:
        value = yaml.safe_load(raw) if raw.strip() else None
    except yaml.YAMLError as e:
        raise ConfigError(f"Override value is not valid YAML: {item!r} ({e})") from e
    return path, value


def apply_overrides(data: Dict[str, Any], overrides: Iterable[str]) -> Dict[str, Any]:
    """
    Applies overrides in order onto a parsed configuration tree.

    Missing intermediate mappings are created; later overrides win.

    Args:
        data: Parsed configuration (modified in place)
        overrides: ``dotted.key=value`` strings

    Returns:
        The same mapping, for chaining
    """
    for item in overrides:
        path, value = parse_override(item)
        node = data
        for part in path[:-1]:
            child = node.get(part)
            if child is None:
                child = {}
                node[part] = child
            elif not isinstance(child, dict):
                raise ConfigError(
                    f"Cannot override {'.'.join(path)}: '{part}' is not a mapping"
                )
            node = child
        node[path[-1]] = value
    return data
