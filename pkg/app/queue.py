"""Dramatiq broker and results backend configuration.

SWEEP_BROKER=stub (default) keeps everything in process; SWEEP_BROKER=redis
sends sweep messages to redis for ``dramatiq app.tasks`` workers. Redis is
created with decode_responses=False for raw bytes; Dramatiq handles result
decoding internally.
"""

import dramatiq
import redis
from dramatiq.brokers.redis import RedisBroker
from dramatiq.brokers.stub import StubBroker
from dramatiq.results import Results
from dramatiq.results.backends import RedisBackend, StubBackend

from app.settings import REDIS_RESULT_TTL, REDIS_URL, SWEEP_BROKER

# TTL for stored results (ms); 0 => keep indefinitely.
result_ttl_ms = REDIS_RESULT_TTL * 1000 if REDIS_RESULT_TTL > 0 else 0

if SWEEP_BROKER == "redis":
    # Connection pool: bytes responses (no implicit decoding)
    pool = redis.ConnectionPool.from_url(REDIS_URL, decode_responses=False)
    broker = RedisBroker(connection_pool=pool)
    result_backend = RedisBackend(connection_pool=pool)
else:
    broker = StubBroker()
    broker.emit_after("process_boot")
    result_backend = StubBackend()

broker.add_middleware(
    Results(
        backend=result_backend,
        store_results=True,
        result_ttl=result_ttl_ms or None,
    )
)

# Global broker registration
dramatiq.set_broker(broker)


def is_stub() -> bool:
    return isinstance(broker, StubBroker)
