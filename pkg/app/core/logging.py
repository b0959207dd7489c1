from __future__ import annotations

from logging.config import dictConfig

# third-party loggers that stay at WARNING unless DEBUG is asked for
_QUIET = ("uvicorn.access", "httpx", "asyncio")


def configure_logging(level: str = "WARNING") -> None:
    """Send log records to stderr so CLI stdout stays machine-readable."""

    quiet_level = level if level == "DEBUG" else "WARNING"
    dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {
                "default": {
                    "format": "%(asctime)s | %(levelname)s | %(name)s | %(message)s",
                }
            },
            "handlers": {
                "stderr": {
                    "class": "logging.StreamHandler",
                    "formatter": "default",
                    "level": level,
                    "stream": "ext://sys.stderr",
                }
            },
            "loggers": {
                "app": {"level": level},
                **{name: {"level": quiet_level} for name in _QUIET},
            },
            "root": {"handlers": ["stderr"], "level": level},
        }
    )
