"""Logger naming for Protogossip.

Every module logs through ``get_logger(__name__)``. Handlers are never
installed here: the CLI sets the level once (``-v`` debug, ``-q`` warnings).
"""

import logging

_ROOT = "protogossip"


def get_logger(name: str) -> logging.Logger:
    """Logger under the ``protogossip`` hierarchy.

    Module names already inside the package are used as is; anything else is
    prefixed, so ``get_logger("engine").name == "protogossip.engine"``.
    """
    if name != _ROOT and not name.startswith(_ROOT + "."):
        name = f"{_ROOT}.{name}"
    return logging.getLogger(name)
