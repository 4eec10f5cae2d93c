"""SHA-256 fingerprints of run output.

The experiment summary stores one fingerprint per run CSV. Two runs of the
same configuration and seed must produce the same fingerprint, whatever the
number of worker processes.

Example:
    >>> from protogossip.utils.hashing import hash_bytes
    >>> hash_bytes(b"hello world", truncate=16)
    'b94d27b9934d3e08'
"""

import hashlib
from pathlib import Path

_CHUNK = 1 << 16


def hash_bytes(content: bytes, truncate: int | None = None) -> str:
    """Hex SHA-256 of ``content``, cut to ``truncate`` characters if given."""
    digest = hashlib.sha256(content).hexdigest()
    return digest if truncate is None else digest[:truncate]


def hash_str(content: str, truncate: int | None = None) -> str:
    """Fingerprint of the UTF-8 encoding of ``content``."""
    return hash_bytes(content.encode("utf-8"), truncate=truncate)


def hash_file(path: Path, truncate: int | None = None) -> str:
    """Fingerprint of a file on disk, read in chunks.

    Equal to :func:`hash_str` of the file's text when it was written as UTF-8.
    """
    hasher = hashlib.sha256()
    with path.open("rb") as fh:
        while chunk := fh.read(_CHUNK):
            hasher.update(chunk)
    digest = hasher.hexdigest()
    return digest if truncate is None else digest[:truncate]
