import pytest

import app.sweep as sweep
import app.tasks as tasks_module
from app.errors import InvariantViolation

# Access the actor's underlying function via .fn
sweep_fn = tasks_module.sweep_point.fn


def test_iter_grid_counts_coprime_points():
    assert len(list(sweep.iter_grid(12))) == 2025
    assert list(sweep.iter_grid(2)) == [(2, 2, 1, 1)]
    assert (4, 6, 2, 1) not in set(sweep.iter_grid(6))


def test_evaluate_point():
    record = sweep.evaluate_point(2, 3, 1, 1)
    assert record == {
        "m": 2, "n": 3, "k1": 1, "k2": 1, "regime": "generic", "pideg": 36, "snf": 36,
        "closed": 36, "special": None, "swapped": 36,
    }


def test_sweep_actor_fn():
    assert sweep_fn(2, 6, 1, 1)["pideg"] == 18


def test_sweep_actor_fn_propagates_errors():
    with pytest.raises(ValueError):
        sweep_fn(4, 6, 2, 1)


def test_inline_sweep():
    report = sweep.run_sweep(4)
    assert report.points == len(list(sweep.iter_grid(4)))
    assert report.generic + report.degenerate == report.points
    assert all(r.pideg == r.closed == r.swapped for r in report.records)
    assert [(r.m, r.n, r.k1, r.k2) for r in report.records] == list(sweep.iter_grid(4))


def test_inline_sweep_failure(monkeypatch):
    def broken(m, n, k1, k2):
        raise InvariantViolation(f"Point ({m},{n},{k1},{k2}): swapped PI degree differs")

    monkeypatch.setattr(sweep, "evaluate_point", broken)
    with pytest.raises(InvariantViolation, match="swapped PI degree differs"):
        sweep.run_sweep(3)


def test_worker_sweep_matches_inline():
    inline = sweep.run_sweep(4)
    pooled = sweep.run_sweep(4, workers=2)
    assert pooled == inline


def test_worker_sweep_failure_names_the_point(monkeypatch):
    def broken(m, n, k1, k2):
        raise InvariantViolation("closed form disagrees")

    monkeypatch.setattr(tasks_module, "evaluate_point", broken)
    with pytest.raises(InvariantViolation, match=r"Point \(2, 2, 1, 1\)"):
        sweep.run_sweep(3, workers=2)


@pytest.mark.slow
def test_full_default_sweep():
    report = sweep.run_sweep(12)
    assert report.points == 2025
    assert all(r.pideg == r.closed for r in report.records)
