"""Centralized logging utilities for textkernel."""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Mapping, Optional, Union

_DEFAULT_FORMAT = "%(asctime)s [%(levelname)s] %(command)s/%(profile)s %(name)s - %(message)s"


class RunContextFilter(logging.Filter):
    """Stamp every record with the running subcommand and dataset profile."""

    def __init__(self, command: str = "-", profile: str = "-") -> None:
        super().__init__()
        self.command = command
        self.profile = profile

    def filter(self, record: logging.LogRecord) -> bool:
        record.command = self.command
        record.profile = self.profile
        return True


def configure_logging(
    level: Union[int, str] = logging.INFO,
    logfile: Optional[Path] = None,
    *,
    command: str = "-",
    profile: str = "-",
) -> RunContextFilter:
    """Configure the root logger and return the context filter on its handlers.

    Parameters
    ----------
    level:
        Level as an int or a name such as ``"DEBUG"``.
    logfile:
        Optional UTF-8 log file in addition to stderr. Nothing is ever
        logged to stdout, which carries command output.
    command, profile:
        Run context shown in every line; the returned filter can be updated
        when the active profile changes.
    """

    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            raise ValueError(f"Unknown log level {level!r}")

    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    # Remove existing handlers to avoid duplicate logs when re-configuring.
    for handler in list(root_logger.handlers):
        root_logger.removeHandler(handler)

    context = RunContextFilter(command, profile)
    formatter = logging.Formatter(_DEFAULT_FORMAT)
    stream_handler = logging.StreamHandler()  # stderr
    stream_handler.setFormatter(formatter)
    stream_handler.addFilter(context)
    root_logger.addHandler(stream_handler)

    if logfile is not None:
        logfile = Path(logfile)
        logfile.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(logfile, encoding="utf-8")
        file_handler.setFormatter(formatter)
        file_handler.addFilter(context)
        root_logger.addHandler(file_handler)

    return context


def log_stage_timings(logger: logging.Logger, timings_ms: Mapping[str, float], *, label: str) -> None:
    """One DEBUG line with the per-stage milliseconds of a pipeline run."""

    if logger.isEnabledFor(logging.DEBUG):
        stages = " ".join(f"{name}={value:.3f}ms" for name, value in timings_ms.items())
        logger.debug("%s stages: %s", label, stages)


__all__ = ["RunContextFilter", "configure_logging", "log_stage_timings"]
