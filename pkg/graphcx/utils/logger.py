"""
Package logger.

Messages go to stderr; stdout carries only command reports. Component tags
such as [Rank] are part of the message text.
"""
import logging
import os
import sys

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def _level_from_env(default: int = logging.INFO) -> int:
    return getattr(logging, os.getenv("LOG_LEVEL", "").upper(), default)


def setup_logger(name: str = "graphcx") -> logging.Logger:
    """Return the named logger, installing a stderr handler on first use."""
    log = logging.getLogger(name)
    if log.handlers:
        return log

    level = _level_from_env()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt="%H:%M:%S"))
    log.addHandler(handler)
    log.setLevel(level)
    handler.setLevel(level)
    log.propagate = False
    return log


def set_level(level: int | str) -> None:
    """Change the level of the package logger and all of its handlers."""
    logger.setLevel(level)
    for handler in logger.handlers:
        handler.setLevel(level)


logger = setup_logger()
