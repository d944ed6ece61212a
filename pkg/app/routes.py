"""FastAPI routes exposing the read-only queries.

- GET /pidegree: PI degree of M2(alpha, beta) for (m, n, k1, k2).
- GET /classify: simple-module classification report.
- GET /center: center generators checked against central elements up to deg_cap.
"""

import traceback
from collections.abc import Callable

from fastapi import APIRouter, HTTPException, Query
from pydantic import BaseModel, ValidationError

from app.errors import InvariantViolation, QMatrixError
from app.helpers import envelope, new_run_id
from app.logger import logger
from app.models import HTTPError, RunConfig
from app.reports import center_report, classification_report, pidegree_report
from app.settings import CENTER_DEG_CAP

router = APIRouter()

ERROR_RESPONSES = {
    400: {"model": HTTPError, "description": "Invalid parameters or hypothesis not met"},
    500: {"model": HTTPError, "description": "A proven identity failed"},
}


def _run(command: str, compute: Callable[[RunConfig], BaseModel], **params) -> dict:
    run_id = new_run_id()
    try:
        config = RunConfig.model_validate(params)
        logger.info(f"Run {run_id}: {command} {config.algebra().label}")
        return envelope(command, compute(config))
    except ValidationError as e:
        detail = "; ".join(err["msg"].removeprefix("Value error, ") for err in e.errors())
        logger.warning(f"Run {run_id}: invalid parameters: {detail}")
        raise HTTPException(status_code=400, detail=detail)
    except InvariantViolation as e:
        logger.error(f"Run {run_id}: {e}\n{traceback.format_exc()}")
        raise HTTPException(status_code=500, detail=str(e))
    except QMatrixError as e:
        logger.warning(f"Run {run_id}: {e}")
        raise HTTPException(status_code=400, detail=str(e))


@router.get("/pidegree", responses=ERROR_RESPONSES)
def get_pidegree(
    m: int = Query(ge=1), n: int = Query(ge=1), k1: int = 1, k2: int = 1
) -> dict[str, object]:
    """Envelope around a ``PiDegreeReport``."""
    return _run("pidegree", lambda c: pidegree_report(c.algebra()), m=m, n=n, k1=k1, k2=k2)


@router.get("/classify", responses=ERROR_RESPONSES)
def get_classify(
    m: int = Query(ge=1), n: int = Query(ge=1), k1: int = 1, k2: int = 1
) -> dict[str, object]:
    """Envelope around a ``ClassificationReport``."""
    return _run("classify", lambda c: classification_report(c.algebra()), m=m, n=n, k1=k1, k2=k2)


@router.get("/center", responses=ERROR_RESPONSES)
def get_center(
    m: int = Query(ge=1),
    n: int = Query(ge=1),
    k1: int = 1,
    k2: int = 1,
    deg_cap: int = Query(default=CENTER_DEG_CAP, ge=0),
) -> dict[str, object]:
    """Envelope around a ``CenterReport``."""
    return _run(
        "center",
        lambda c: center_report(c.algebra(), c.deg_cap),
        m=m,
        n=n,
        k1=k1,
        k2=k2,
        deg_cap=deg_cap,
    )

