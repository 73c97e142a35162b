"""
Configuration module for mixdisc

This module loads environment variables and provides configuration settings
for the solver, the exact oracle and the experiment worker pool.
"""

import logging
import os
import sys
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# Load environment variables from .env file if it exists
env_path = Path(__file__).parent.parent / '.env'
if env_path.exists():
    load_dotenv(dotenv_path=env_path)
    logger.info(f"Loaded environment variables from {env_path}")
else:
    logger.debug(f"No .env file found at {env_path}. Using system environment variables.")


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}; using {default}")
        return default


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        logger.warning(f"Ignoring non-numeric {name}={raw!r}; using {default}")
        return default


# Application settings
DEBUG = os.environ.get("MIXDISC_DEBUG", "False").lower() == "true"
LOG_LEVEL = os.environ.get("MIXDISC_LOG_LEVEL", "DEBUG" if DEBUG else "INFO").upper()

# Solver defaults; command-line flags override these
TRACE_TOL = _env_float("MIXDISC_TRACE_TOL", 1e-10)
MAX_ITERATIONS = _env_int("MIXDISC_MAX_ITER", 500)

# Number of contiguous subset chunks the exact oracle reduces over.
# Results are bit-stable for a fixed chunk count.
EXACT_CHUNKS = max(1, _env_int("MIXDISC_EXACT_CHUNKS", 1))

# Export configuration
config = {
    "debug": DEBUG,
    "log_level": LOG_LEVEL,
    "trace_tol": TRACE_TOL,
    "max_iterations": MAX_ITERATIONS,
    "exact_chunks": EXACT_CHUNKS,
}


def get_config():
    """Get the application configuration."""
    return config


def get_thread_count() -> int:
    """Worker-pool size: MIXDISC_THREADS if positive, else the logical CPU count.

    Read on every call so a changed environment takes effect without re-import.
    """
    threads = _env_int("MIXDISC_THREADS", 0)
    if threads > 0:
        return threads
    return os.cpu_count() or 1


def configure_logging(level: Optional[str] = None) -> None:
    """Send log records to stderr so stdout stays machine-readable."""
    logging.basicConfig(level=logging.INFO, format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger().setLevel(getattr(logging, (level or LOG_LEVEL).upper(), logging.INFO))
