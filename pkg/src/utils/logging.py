"""Logging configuration module."""
import json
import logging
import logging.config
import sys
import traceback
from contextlib import contextmanager
from typing import Any, Dict, Iterator, Optional, Union

# Attributes every LogRecord carries; anything else came in through ``extra``.
_RESERVED = set(vars(logging.LogRecord("", 0, "", 0, "", (), None))) | {"message", "asctime"}


class JsonFormatter(logging.Formatter):
    """JSON formatter for structured logging."""

    def __init__(self, **kwargs):
        """Initialize formatter with optional default fields."""
        self.default_fields = kwargs
        super().__init__()

    def format(self, record: logging.LogRecord) -> str:
        """Format the log record as one JSON object."""
        log_data = {
            "timestamp": self.formatTime(record),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "location": f"{record.filename}:{record.lineno}",
            "function": record.funcName,
        }

        if record.exc_info:
            log_data["traceback"] = self.formatException(record.exc_info)

        for key, value in record.__dict__.items():
            if key not in _RESERVED and not key.startswith("_"):
                log_data[key] = value

        log_data.update(self.default_fields)
        return json.dumps(log_data, default=str)


class TextFormatter(logging.Formatter):
    """Text formatter for standard logging."""

    def __init__(self):
        super().__init__(
            fmt="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )


class _ContextFilter(logging.Filter):
    """Stamps a fixed set of context fields onto every record."""

    def __init__(self, context: Dict[str, Any]):
        super().__init__()
        self.context = context

    def filter(self, record: logging.LogRecord) -> bool:
        for key, value in self.context.items():
            if not hasattr(record, key):
                setattr(record, key, value)
        return True


def setup_logging(
    level: Union[int, str] = logging.INFO,
    log_file: Optional[str] = None,
    format_type: str = "text",
    env: str = "development",
) -> None:
    """Setup global logging configuration.

    Logs go to stderr so that command output on stdout stays machine readable.

    Args:
        level: Logging level (name or number)
        log_file: Path to a rotating log file
        format_type: Log format ('json' or 'text')
        env: Environment tag stamped on JSON records
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    if format_type not in ("json", "text"):
        format_type = "text"

    config: Dict[str, Any] = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "json": {
                "()": "src.utils.logging.JsonFormatter",
                "environment": env,
            },
            "text": {
                "()": "src.utils.logging.TextFormatter",
            },
        },
        "handlers": {
            "console": {
                "class": "logging.StreamHandler",
                "formatter": format_type,
                "stream": sys.stderr,
            }
        },
        "root": {
            "level": level,
            "handlers": ["console"],
        },
    }

    if log_file:
        config["handlers"]["file"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "formatter": format_type,
            "filename": log_file,
            "maxBytes": 10 * 1024 * 1024,  # 10MB
            "backupCount": 5,
            "encoding": "utf-8",
        }
        config["root"]["handlers"].append("file")

    logging.config.dictConfig(config)


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance.

    Args:
        name: Logger name (usually __name__)

    Returns:
        logging.Logger: Logger instance
    """
    return logging.getLogger(name)


@contextmanager
def LogContext(logger: logging.Logger, **context) -> Iterator[logging.Logger]:
    """Context manager for adding context fields to every record of a logger.

    Args:
        logger: Logger instance
        **context: Context key-value pairs
    """
    context_filter = _ContextFilter(context)
    logger.addFilter(context_filter)
    try:
        yield logger
    finally:
        logger.removeFilter(context_filter)


def log_error(
    logger: logging.Logger,
    error: Exception,
    message: str,
    context: Optional[Dict[str, Any]] = None,
) -> None:
    """Log an error with context.

    Args:
        logger: Logger instance
        error: Exception to log
        message: Error message
        context: Additional context
    """
    error_context = {
        "error_type": error.__class__.__name__,
        "error_message": str(error),
        "traceback": "".join(traceback.format_exception(type(error), error, error.__traceback__)),
    }
    if context:
        error_context.update(context)

    logger.error(message, extra=error_context)
