"""Dramatiq actor evaluating one sweep point."""

import dramatiq

from app.logger import logger
from app.queue import broker
from app.settings import SWEEP_TASK_TIME_LIMIT_MS
from app.sweep import evaluate_point

# Import queue configuration BEFORE defining actors
# This ensures broker middlewares are loaded (and IDE won't remove import)
logger.debug(f"Broker loaded: {getattr(broker, 'broker_id', type(broker).__name__)}")


@dramatiq.actor(
    time_limit=SWEEP_TASK_TIME_LIMIT_MS,
    actor_name="sweep_point",
    max_retries=0,
    store_results=True,
)
def sweep_point(m: int, n: int, k1: int, k2: int) -> dict:
    """PI degree record for (m, n, k1, k2); raises on any cross-check failure."""
    try:
        record = evaluate_point(m, n, k1, k2)
        logger.debug(f"Point ({m},{n},{k1},{k2}): pideg {record['pideg']}")
        return record
    except Exception as e:
        logger.error(f"Point ({m},{n},{k1},{k2}): Failed: {e}")
        raise
