"""
Engine Log

Timestamped lines appended to Config.LOG_PATH; stdout belongs to reports.
Lines below Config.LOG_LEVEL are dropped. Keyword fields are appended as
sorted key=value pairs so that runs can be grepped and diffed:

    2026-01-01 12:00:00.000000 - INFO - tiling done | depth=4 overlaps=0 translates=161
"""

import datetime
from typing import Any

from backend.infra.config import Config

LEVELS = {"DEBUG": 10, "INFO": 20, "WARNING": 30, "ERROR": 40}


def _format_fields(fields: dict) -> str:
    if not fields:
        return ""
    return " | " + " ".join(f"{key}={fields[key]}" for key in sorted(fields))


class Logger:
    """Static engine logger."""

    @staticmethod
    def enabled(level: str) -> bool:
        threshold = LEVELS.get(str(Config.get("LOG_LEVEL")).upper(), LEVELS["INFO"])
        return LEVELS[level] >= threshold

    @staticmethod
    def log(level: str, message: str, **fields: Any) -> None:
        if not Logger.enabled(level):
            return
        try:
            with open(Config.get("LOG_PATH"), 'a', encoding='utf-8') as f:
                f.write(f"{datetime.datetime.now()} - {level} - {message}{_format_fields(fields)}\n")
        except Exception:
            # A failing log must never fail a computation
            pass

    @staticmethod
    def info(message: str, **fields: Any) -> None:
        Logger.log("INFO", message, **fields)

    @staticmethod
    def error(message: str, **fields: Any) -> None:
        """
        Example:
            >>> Logger.error("instance rejected", source="bad.yaml", reason="not valid YAML")
        """
        Logger.log("ERROR", message, **fields)

    @staticmethod
    def warning(message: str, **fields: Any) -> None:
        Logger.log("WARNING", message, **fields)

    @staticmethod
    def debug(message: str, **fields: Any) -> None:
        Logger.log("DEBUG", message, **fields)
