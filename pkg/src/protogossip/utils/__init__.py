"""Utility modules for Protogossip.

Provides:
- hashing: hash_bytes, hash_str, hash_file for output fingerprinting
- logger: get_logger for logging
"""

from protogossip.utils.hashing import hash_bytes, hash_file, hash_str
from protogossip.utils.logger import get_logger

__all__ = [
    "get_logger",
    "hash_bytes",
    "hash_file",
    "hash_str",
]
