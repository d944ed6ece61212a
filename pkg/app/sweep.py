"""Parameter-space PI degree sweeps.

Every point (m, n, k1, k2) of the grid is evaluated with ``pi_degree`` (which
already cross-checks the Smith normal form against the closed form) and then
against the swapped parameters (n, m, k2, k1). With more than one worker the
points go through the ``sweep_point`` dramatiq actor.
"""

from collections.abc import Iterator
from math import gcd

from dramatiq import Worker
from dramatiq.results import ResultFailure, ResultTimeout

from app.errors import InvariantViolation, QMatrixError
from app.logger import logger
from app.models import SweepRecord, SweepReport
from app.ncalgebra import AlgebraParams
from app.pidegree import pi_degree
from app.settings import SWEEP_RESULT_TIMEOUT_MS

Point = tuple[int, int, int, int]


def iter_grid(grid_max: int) -> Iterator[Point]:
    """All (m, n, k1, k2) with 2 <= m, n <= grid_max and k coprime in [1, m) / [1, n)."""
    for m in range(2, grid_max + 1):
        for n in range(2, grid_max + 1):
            for k1 in range(1, m):
                if gcd(k1, m) != 1:
                    continue
                for k2 in range(1, n):
                    if gcd(k2, n) == 1:
                        yield m, n, k1, k2


def evaluate_point(m: int, n: int, k1: int, k2: int) -> dict:
    p = AlgebraParams(m, n, k1, k2)
    result = pi_degree(p)
    swapped = pi_degree(p.swapped()).value
    if swapped != result.value:
        raise InvariantViolation(
            f"Point {p.label}: PI degree {result.value} but swapped parameters give {swapped}"
        )
    return SweepRecord(
        m=m,
        n=n,
        k1=k1,
        k2=k2,
        regime=result.regime,
        pideg=result.value,
        snf=result.snf,
        closed=result.closed,
        special=result.special,
        swapped=swapped,
    ).model_dump(mode="json")


def _run_inline(points: list[Point]) -> list[dict]:
    return [evaluate_point(*point) for point in points]


def _run_actors(points: list[Point], workers: int) -> list[dict]:
    from app.queue import broker, is_stub
    from app.tasks import sweep_point

    worker = None
    if is_stub():
        worker = Worker(broker, worker_threads=workers)
        worker.start()
    try:
        messages = [sweep_point.send(*point) for point in points]
        logger.info(f"Sweep: {len(messages)} points enqueued on {type(broker).__name__}")
        records = []
        for point, message in zip(points, messages, strict=True):
            try:
                records.append(message.get_result(block=True, timeout=SWEEP_RESULT_TIMEOUT_MS))
            except ResultFailure as e:
                raise InvariantViolation(f"Point {point}: {e.orig_exc_msg or e}") from e
            except ResultTimeout as e:
                raise InvariantViolation(f"Point {point}: no result within the timeout") from e
        return records
    finally:
        if worker is not None:
            worker.stop()


def run_sweep(grid_max: int, workers: int = 1) -> SweepReport:
    """Evaluate the whole grid; records come back in grid order."""
    points = list(iter_grid(grid_max))
    logger.info(f"Sweep: {len(points)} points up to {grid_max}, {workers} worker(s)")
    if workers > 1:
        records = _run_actors(points, workers)
    else:
        try:
            records = _run_inline(points)
        except QMatrixError as e:
            logger.error(f"Sweep aborted: {e}")
            raise
    parsed = [SweepRecord.model_validate(record) for record in records]
    generic = sum(1 for record in parsed if record.regime == "generic")
    return SweepReport(
        grid_max=grid_max,
        points=len(parsed),
        generic=generic,
        degenerate=len(parsed) - generic,
        records=parsed,
    )
