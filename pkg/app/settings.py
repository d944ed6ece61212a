"""Application settings loaded from environment variables with defaults."""

import os

try:
    from dotenv import load_dotenv

    load_dotenv()
except ImportError:
    load_dotenv = None


def str_to_int(s: str, default: int) -> int:
    """Convert string to integer with default fallback."""
    try:
        return int(s)
    except (TypeError, ValueError):
        return default


APP_NAME = os.getenv("APP_NAME", "qmatrix")
ENVIRONMENT = os.getenv("ENVIRONMENT", "development").lower()
LOG_LEVEL = os.getenv("LOG_LEVEL", "").upper()

# Output settings
SCHEMA_VERSION = 1

# Engine settings
CENTER_DEG_CAP = str_to_int(os.getenv("CENTER_DEG_CAP"), 12)
# Reduction prime for the modular rank certificates is the first p = 1 (mod L) above this
MODULAR_PRIME_FLOOR = str_to_int(os.getenv("MODULAR_PRIME_FLOOR"), 2**31)
# Entries kept per PBW rewriting cache (normal forms and monomial products)
NORMAL_FORM_CACHE_SIZE = str_to_int(os.getenv("NORMAL_FORM_CACHE_SIZE"), 65536)

# Sweep settings
SWEEP_GRID_MAX = str_to_int(os.getenv("SWEEP_GRID_MAX"), 12)
SWEEP_WORKERS = str_to_int(os.getenv("SWEEP_WORKERS"), 1)
SWEEP_BROKER = os.getenv("SWEEP_BROKER", "stub").strip().lower()
SWEEP_TASK_TIME_LIMIT_MS = str_to_int(os.getenv("SWEEP_TASK_TIME_LIMIT_MS"), 60000)
SWEEP_RESULT_TIMEOUT_MS = str_to_int(os.getenv("SWEEP_RESULT_TIMEOUT_MS"), 120000)

# Redis settings (only read when SWEEP_BROKER=redis)
REDIS_HOST = os.getenv("REDIS_HOST", "localhost")
REDIS_PORT = str_to_int(os.getenv("REDIS_PORT"), 6379)
REDIS_DB = str_to_int(os.getenv("REDIS_DB"), 0)
REDIS_URL = f"redis://{REDIS_HOST}:{REDIS_PORT}/{REDIS_DB}"
REDIS_RESULT_TTL = str_to_int(os.getenv("REDIS_RESULT_TTL"), 3600)

# API settings
API_HOST = (os.getenv("API_HOST") or "").strip() or "0.0.0.0"
API_PORT = str_to_int(os.getenv("API_PORT"), 8000)
