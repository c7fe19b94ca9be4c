"""Logging setup for emh-rank.

Console output stays human readable; ``--log-file`` adds a JSON-lines file
handler so long experiment runs can be inspected afterwards.
"""

import logging
import sys
from pathlib import Path

import structlog
from pythonjsonlogger.json import JsonFormatter

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]

_HANDLER_MARKER = "_emh_rank_handler"


def setup_logging(log_level: str = "WARNING", log_file: Path | None = None) -> None:
    """Configure stdlib logging and structlog.

    Calling this more than once replaces the handlers installed by the
    previous call.

    Args:
        log_level: One of LOG_LEVELS
        log_file: Optional path for structured JSON logs
    """
    level = getattr(logging, log_level.upper(), logging.WARNING)
    root = logging.getLogger()

    for handler in list(root.handlers):
        if getattr(handler, _HANDLER_MARKER, False):
            root.removeHandler(handler)
            handler.close()

    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    setattr(console, _HANDLER_MARKER, True)
    root.addHandler(console)

    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(
            JsonFormatter("%(asctime)s %(levelname)s %(name)s %(message)s")
        )
        setattr(file_handler, _HANDLER_MARKER, True)
        root.addHandler(file_handler)

    root.setLevel(level)
    # EdgeListWarning and friends go through the same handlers
    logging.captureWarnings(True)

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.format_exc_info,
            structlog.stdlib.render_to_log_kwargs,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )
