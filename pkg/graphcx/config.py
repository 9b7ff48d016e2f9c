"""
Runtime configuration.

Values come from the environment (a local .env file is honoured) and are
resolved once per process. CLI flags override them per invocation.
"""

import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Hard safety caps on generated slices
VERTEX_HARD_CAP = 12
EDGE_HARD_CAP = 14
RIBBON_EDGE_HARD_CAP = 6

# Two large primes for the modular rank shadow
RANK_PRIMES = (2147483647, 2147483629)


@dataclass(frozen=True)
class Settings:
    cache_dir: Path
    vmax: int
    emax: int
    ribbon_emax: int
    jobs: int
    seed: int
    exact: bool
    memory_limit_mb: int


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        from graphcx.utils.logger import logger

        logger.warning(f"[Config] Ignoring non-integer {name}={raw!r}, using {default}")
        return default


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Resolve settings from the environment (cached)."""
    return Settings(
        cache_dir=Path(os.getenv("GRAPHCX_CACHE_DIR", ".graphcx-cache")),
        vmax=min(_env_int("GRAPHCX_VMAX", VERTEX_HARD_CAP), VERTEX_HARD_CAP),
        emax=min(_env_int("GRAPHCX_EMAX", EDGE_HARD_CAP), EDGE_HARD_CAP),
        ribbon_emax=min(_env_int("GRAPHCX_RIBBON_EMAX", RIBBON_EDGE_HARD_CAP), RIBBON_EDGE_HARD_CAP),
        jobs=max(1, _env_int("GRAPHCX_JOBS", 1)),
        seed=_env_int("GRAPHCX_SEED", 20240601),
        exact=os.getenv("GRAPHCX_EXACT", "false").lower() in ("1", "true", "yes"),
        memory_limit_mb=_env_int("GRAPHCX_MEMORY_LIMIT_MB", 8192),
    )
