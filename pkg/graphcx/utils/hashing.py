"""
Output digests for determinism checks.
"""
import hashlib
from pathlib import Path


def generate_file_digest(path: str | Path) -> str:
    """SHA256 of a file's bytes."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
