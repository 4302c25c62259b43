"""Small shared helpers."""

import hashlib


def derive_seed(seed: int, label: str) -> int:
    """Derive a stable 64-bit sub-seed from a master seed and a stage label.

    Uses SHA-256 so the derivation is identical across platforms and runs.
    """
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "little")
