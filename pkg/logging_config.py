from __future__ import annotations

import logging
import os
import sys
from typing import Optional, TextIO

LOGGER_NAME = "wheelgraph"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


def _level(value: Optional[str], default: int) -> int:
    if not value:
        return default
    level = logging.getLevelName(value.strip().upper())
    return level if isinstance(level, int) else default


def _debug_areas() -> list[str]:
    raw = os.getenv("WHEELGRAPH_DEBUG_AREAS", "")
    return [area.strip() for area in raw.split(",") if area.strip()]


def configure_logging(stream: Optional[TextIO] = None) -> logging.Logger:
    """Attach handlers to the ``wheelgraph`` logger tree once and return it.

    ``stream`` defaults to stdout; the CLI passes stderr so stdout carries only results.
    ``WHEELGRAPH_DEBUG_AREAS=reedy,segal`` drops those areas to DEBUG.
    """
    logger = logging.getLogger(LOGGER_NAME)
    if logger.handlers:
        return logger

    console_level = _level(os.getenv("LOG_LEVEL"), logging.INFO)
    file_level = _level(os.getenv("LOG_FILE_LEVEL"), logging.WARNING)
    formatter = logging.Formatter(LOG_FORMAT)

    console = logging.StreamHandler(stream or sys.stdout)
    console.setFormatter(formatter)
    console.setLevel(console_level)
    logger.addHandler(console)
    levels = [console_level]

    log_file = os.getenv("LOG_FILE")
    if log_file:
        to_file = logging.FileHandler(log_file, encoding="utf-8")
        to_file.setFormatter(formatter)
        to_file.setLevel(file_level)
        logger.addHandler(to_file)
        levels.append(file_level)

    areas = _debug_areas()
    for area in areas:
        logging.getLogger(f"{LOGGER_NAME}.{area}").setLevel(logging.DEBUG)
    if areas:
        console.setLevel(logging.DEBUG)

    logger.setLevel(min(levels))
    # records stop at the package logger
    logger.propagate = False
    logger.debug("Logging configured (areas=%s)", ",".join(areas) or "-")
    return logger
