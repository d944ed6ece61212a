"""Broker wiring for sweeps in the default in-process mode."""

import dramatiq
from dramatiq.results import Results
from dramatiq.results.backends import StubBackend

import app.queue as queue


def test_stub_broker_is_registered_globally():
    assert queue.is_stub()
    assert dramatiq.get_broker() is queue.broker


def test_results_middleware_uses_the_module_backend():
    results = [m for m in queue.broker.middleware if isinstance(m, Results)]
    assert len(results) == 1
    assert results[0].backend is queue.result_backend
    assert isinstance(queue.result_backend, StubBackend)


def test_module_exposes_only_broker_wiring():
    public = {name for name in vars(queue) if not name.startswith("_")}
    assert {"broker", "result_backend", "result_ttl_ms", "is_stub"} <= public
    assert "redis_client" not in public
