"""Payload envelope and rendering shared by the CLI and the HTTP routes."""

import json
from datetime import datetime, timezone
from uuid import uuid4

from pydantic import BaseModel

from app.settings import SCHEMA_VERSION

UTC = timezone.utc


def new_run_id() -> str:
    """Generate a new unique run ID as a hex string."""
    return uuid4().hex


def envelope(command: str, result: BaseModel | dict, metadata: dict | None = None) -> dict:
    body = result.model_dump(mode="json") if isinstance(result, BaseModel) else result
    payload = {"schema_version": SCHEMA_VERSION, "command": command, "result": body}
    if metadata is not None:
        payload["metadata"] = metadata
    return payload


def run_metadata(run_id: str, started: datetime, finished: datetime) -> dict:
    return {
        "run_id": run_id,
        "timestamp": finished.astimezone(UTC).isoformat(),
        "elapsed_ms": int((finished - started).total_seconds() * 1000),
    }


def render_json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _flatten(prefix: str, value, lines: list[str]) -> None:
    if isinstance(value, dict):
        if not value:
            lines.append(f"{prefix}: {{}}")
        for key, item in value.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), item, lines)
    elif isinstance(value, list) and any(isinstance(item, (dict, list)) for item in value):
        for i, item in enumerate(value):
            _flatten(f"{prefix}.{i}", item, lines)
    else:
        lines.append(f"{prefix}: {json.dumps(value)}")


def render_text(payload: dict) -> str:
    """One ``dotted.key: value`` line per scalar or flat list."""
    lines: list[str] = []
    _flatten("", payload, lines)
    return "\n".join(lines) + "\n"


def render(payload: dict, fmt: str) -> str:
    return render_text(payload) if fmt == "text" else render_json(payload)
