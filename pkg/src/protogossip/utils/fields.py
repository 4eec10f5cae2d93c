"""Type checks for config values that come from YAML or plain dicts.

Dataclass constructors do not check annotations, so ``n: five`` in an
experiment file would only fail deep inside validation with a TypeError.
:func:`field_type_problems` compares every supplied value with the field's
annotation and returns readable problems instead.

Ints are accepted for float fields. Bools are never accepted for numbers.
Lists are accepted for tuple fields and strings for ``Path`` fields.
"""

from __future__ import annotations

import types
from collections.abc import Mapping
from dataclasses import is_dataclass
from pathlib import Path
from typing import Any, Union, get_args, get_origin, get_type_hints

_NAMES: dict[Any, str] = {
    int: "an integer",
    float: "a number",
    bool: "true or false",
    str: "a string",
}


def _matches(value: Any, expected: Any) -> bool:
    origin = get_origin(expected)
    if expected is Any:
        return True
    if origin in (Union, types.UnionType):
        return any(_matches(value, arg) for arg in get_args(expected))
    if expected is type(None):
        return value is None
    if expected is bool:
        return isinstance(value, bool)
    if expected is int:
        return isinstance(value, int) and not isinstance(value, bool)
    if expected is float:
        return isinstance(value, int | float) and not isinstance(value, bool)
    if expected is Path:
        return isinstance(value, str | Path)
    if origin is tuple:
        args = get_args(expected)
        if not isinstance(value, tuple | list):
            return False
        if len(args) == 2 and args[1] is Ellipsis:
            return all(_matches(v, args[0]) for v in value)
        return len(value) == len(args) and all(_matches(v, a) for v, a in zip(value, args))
    if isinstance(expected, type) and is_dataclass(expected):
        return isinstance(value, expected | dict)
    if origin is not None:
        return isinstance(value, origin)
    return isinstance(value, expected) if isinstance(expected, type) else True


def _describe(expected: Any) -> str:
    if get_origin(expected) in (Union, types.UnionType):
        parts = [_describe(a) for a in get_args(expected) if a is not type(None)]
        return " or ".join(parts)
    if expected in _NAMES:
        return _NAMES[expected]
    if get_origin(expected) is tuple:
        return "a list"
    return getattr(expected, "__name__", str(expected))


def field_type_problems(cls: type, values: Mapping[str, Any]) -> list[str]:
    """One message per value in ``values`` that does not fit ``cls``'s annotation.

    Keys that are not fields of ``cls`` are skipped.

    Example:
        >>> from protogossip.config import IlvqConfig
        >>> field_type_problems(IlvqConfig, {"max_edge_age": "ten"})
        ["max_edge_age: expected an integer, got 'ten'"]
    """
    hints = get_type_hints(cls)
    problems = []
    for name, value in values.items():
        expected = hints.get(name)
        if expected is not None and not _matches(value, expected):
            problems.append(f"{name}: expected {_describe(expected)}, got {value!r}")
    return problems


__all__ = ["field_type_problems"]
