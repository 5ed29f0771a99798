"""
Logging configuration and utilities for fadeber.

Console output goes to stderr: the command-line tools write CSV to stdout.
"""
import json
import logging
import logging.config
import os
import platform
import sys
import time
from functools import wraps
from pathlib import Path
from typing import Any, Callable, Dict, Optional, TypeVar, cast

import numpy as np
import psutil
import scipy

from .exceptions import ConvergenceError

F = TypeVar("F", bound=Callable[..., Any])

# Attributes every LogRecord carries; anything else on a record came in through `extra`.
_STANDARD_RECORD_KEYS = frozenset(
    vars(logging.LogRecord("", logging.INFO, "", 0, "", None, None))
) | {"message", "asctime"}


def setup_logging(
    level: str = "WARNING",
    log_file: Optional[Path] = None,
    json_format: bool = False,
) -> logging.Logger:
    """
    Set up logging configuration for fadeber.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional file to write logs to
        json_format: Use JSON format for structured logging

    Returns:
        Configured ``fadeber`` logger
    """
    if json_format:
        formatter: Dict[str, Any] = {'()': JsonFormatter}
    else:
        formatter = {'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s'}

    logging_config: Dict[str, Any] = {
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': {
            'standard': formatter,
        },
        'handlers': {
            'console': {
                'class': 'logging.StreamHandler',
                'level': level,
                'formatter': 'standard',
                'stream': sys.stderr,
            },
        },
        'loggers': {
            'fadeber': {
                'level': level,
                'handlers': ['console'],
                'propagate': False,
            },
        },
    }

    if log_file:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        logging_config['handlers']['file'] = {
            'class': 'logging.handlers.RotatingFileHandler',
            'level': level,
            'formatter': 'standard',
            'filename': str(log_file),
            'maxBytes': 10 * 1024 * 1024,  # 10MB
            'backupCount': 5,
        }
        logging_config['loggers']['fadeber']['handlers'].append('file')

    logging.config.dictConfig(logging_config)

    logger = logging.getLogger('fadeber')
    logger.debug(f"Logging initialized with level: {level}")
    if log_file:
        logger.debug(f"Log file: {log_file}")

    return logger


class JsonFormatter(logging.Formatter):
    """JSON formatter for structured logging."""

    def format(self, record: logging.LogRecord) -> str:
        """Format log record as JSON."""
        log_entry: Dict[str, Any] = {
            'timestamp': self.formatTime(record),
            'level': record.levelname,
            'logger': record.name,
            'message': record.getMessage(),
            'module': record.module,
            'function': record.funcName,
            'line': record.lineno,
        }

        if record.exc_info:
            log_entry['exception'] = self.formatException(record.exc_info)

        for key, value in record.__dict__.items():
            if key not in _STANDARD_RECORD_KEYS:
                log_entry[key] = value

        return json.dumps(log_entry, default=str)


def timed_operation(operation_name: Optional[str] = None) -> Callable[[F], F]:
    """
    Decorator logging the wall time of a numerical operation to ``fadeber.performance``.

    Records carry ``operation``, ``duration_ms`` and ``success``; failures add
    ``error_type``. Convergence failures are logged at WARNING, everything else at DEBUG.
    """
    def decorator(func: F) -> F:
        name = operation_name or f"{func.__module__}.{func.__name__}"
        perf_logger = logging.getLogger('fadeber.performance')

        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            fields: Dict[str, Any] = {'operation': name, 'success': False}
            level = logging.DEBUG
            start = time.perf_counter()
            try:
                result = func(*args, **kwargs)
                fields['success'] = True
                return result
            except Exception as e:
                fields['error_type'] = type(e).__name__
                if isinstance(e, ConvergenceError):
                    level = logging.WARNING
                raise
            finally:
                fields['duration_ms'] = round((time.perf_counter() - start) * 1000, 2)
                outcome = "completed" if fields['success'] else "failed"
                perf_logger.log(level, f"{name} {outcome} in {fields['duration_ms']} ms",
                                extra=fields)
        return cast(F, wrapper)
    return decorator


def log_system_info(logger: logging.Logger) -> None:
    """Log the platform, numerical library versions and the CPUs available to workers."""
    try:
        memory = psutil.virtual_memory()
        logger.info("System information", extra={
            'platform': platform.platform(),
            'python_version': platform.python_version(),
            'numpy_version': np.__version__,
            'scipy_version': scipy.__version__,
            'cpu_count': psutil.cpu_count(),
            'cpu_count_physical': psutil.cpu_count(logical=False),
            'memory_available': memory.available,
        })
    except Exception as e:
        logger.error(f"Failed to gather system info: {e}")


def configure_logging_from_env(
    default_level: str = "WARNING",
    default_json: bool = False,
) -> logging.Logger:
    """Configure logging from FADEBER_LOG_* environment variables, else the defaults."""
    level = os.getenv('FADEBER_LOG_LEVEL', default_level).upper()
    log_file = os.getenv('FADEBER_LOG_FILE')
    json_env = os.getenv('FADEBER_LOG_JSON')
    json_format = json_env.lower() == 'true' if json_env is not None else default_json

    return setup_logging(
        level=level,
        log_file=Path(log_file) if log_file else None,
        json_format=json_format
    )
