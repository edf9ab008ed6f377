"""
Runtime configuration for curvkit.

Every setting is read from the environment when it is asked for, so a
.env file loaded by the command line (or a test's monkeypatch) is always
seen. Defaults live in the DEFAULT_* constants.
"""
from __future__ import annotations

import logging
import os
from typing import List

import pytz

logger = logging.getLogger(__name__)

ENV_PREFIX = "CURVKIT_"

DEFAULT_MAX_DIM = 8
DEFAULT_WORKERS = 1
DEFAULT_HTTP_TIMEOUT = 10
DEFAULT_PORT = 8080
DEFAULT_BIND = "127.0.0.1"
DEFAULT_TIMEZONE = "UTC"

LOG_FORMAT = "%(asctime)s %(levelname)s [%(name)s]: %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"


def load_env_file(path: str = ".env") -> List[str]:
    """
    Seed os.environ from a curvkit .env file (see config.example.env).

    Lines are KEY=value with optional `export` and surrounding quotes;
    `#` starts a comment. Variables already set in the environment win.

    Returns:
        Names of the variables this call set
    """
    if not os.path.isfile(path):
        return []
    loaded = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if stripped.startswith("export "):
                stripped = stripped[len("export "):].lstrip()
            if "=" not in stripped:
                logger.warning("%s:%d: ignoring line without '='", path, lineno)
                continue
            key, val = (part.strip() for part in stripped.split("=", 1))
            if len(val) >= 2 and val[0] == val[-1] and val[0] in "'\"":
                val = val[1:-1]
            if key not in os.environ:
                os.environ[key] = val
                loaded.append(key)
    if loaded:
        logger.debug("Loaded %s from %s", ", ".join(loaded), path)
    return loaded


def _env_int(name: str, default: int, minimum: int = 0) -> int:
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        value = int(raw.split("#", 1)[0].strip())
    except (TypeError, ValueError):
        logger.warning("%s=%r is not an integer; using %d", name, raw, default)
        return default
    return max(minimum, value)


def max_dim() -> int:
    """Largest instance dimension accepted (CURVKIT_MAX_DIM)."""
    return _env_int(ENV_PREFIX + "MAX_DIM", DEFAULT_MAX_DIM, minimum=1)


def workers() -> int:
    """Suite worker processes (CURVKIT_WORKERS), at least 1."""
    return _env_int(ENV_PREFIX + "WORKERS", DEFAULT_WORKERS, minimum=1)


def http_timeout() -> int:
    """Seconds to wait for an instance served over http(s) (CURVKIT_HTTP_TIMEOUT)."""
    return _env_int(ENV_PREFIX + "HTTP_TIMEOUT", DEFAULT_HTTP_TIMEOUT, minimum=1)


def api_port() -> int:
    return _env_int(ENV_PREFIX + "PORT", DEFAULT_PORT, minimum=1)


def api_bind() -> str:
    return os.getenv(ENV_PREFIX + "BIND", DEFAULT_BIND).strip() or DEFAULT_BIND


def report_timezone():
    """Timezone of report timestamps (CURVKIT_TZ); unknown names fall back to UTC."""
    name = os.getenv(ENV_PREFIX + "TZ", DEFAULT_TIMEZONE).strip()
    try:
        return pytz.timezone(name)
    except pytz.UnknownTimeZoneError:
        logger.warning("Unknown timezone %r in CURVKIT_TZ; using UTC", name)
        return pytz.utc


def configure_logging(verbose: bool = False) -> None:
    """
    Configure root logging from LOG_LEVEL (DEBUG, INFO, WARNING, ERROR).

    Args:
        verbose: Force DEBUG regardless of LOG_LEVEL
    """
    raw_ll = os.getenv("LOG_LEVEL", "INFO").split("#", 1)[0].strip().upper()
    level = logging.DEBUG if verbose else getattr(logging, raw_ll, logging.INFO)
    logging.basicConfig(level=level, format=LOG_FORMAT, datefmt=LOG_DATEFMT)


__all__ = [
    "api_bind",
    "api_port",
    "configure_logging",
    "http_timeout",
    "load_env_file",
    "max_dim",
    "report_timezone",
    "workers",
]
