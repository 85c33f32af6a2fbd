"""Small shared helpers."""

from __future__ import annotations

import hashlib


def derive_seed(seed: int, *parts) -> int:
    """Stable 63-bit sub-seed derived from a master seed and context labels.

    Uses sha256 so the derivation is identical across platforms and runs
    (Python's salted hash() is deliberately avoided).
    """
    h = hashlib.sha256(repr((int(seed),) + tuple(parts)).encode()).digest()
    return int.from_bytes(h[:8], "big") >> 1
