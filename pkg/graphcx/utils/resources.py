"""
Process memory guard used by the long-running generation loops.
"""
import psutil

from graphcx.config import get_settings
from graphcx.core.errors import BudgetExceededError
from graphcx.utils.logger import logger


def rss_mb() -> float:
    """Resident set size of the current process in MiB."""
    return psutil.Process().memory_info().rss / (1024 * 1024)


def check_memory_budget(context: str, limit_mb: int | None = None) -> None:
    """Raise BudgetExceededError when the process outgrows the configured limit."""
    limit = limit_mb if limit_mb is not None else get_settings().memory_limit_mb
    used = rss_mb()
    if used > limit:
        logger.error(f"[Budget] {context}: {used:.0f} MiB in use, limit {limit} MiB")
        raise BudgetExceededError(f"memory budget exceeded during {context} ({used:.0f} > {limit} MiB)")
