"""Tests for app.helpers: run ids, the payload envelope and the text renderer."""

import json
import re
from datetime import datetime, timedelta, timezone

from app.helpers import envelope, new_run_id, render, render_text, run_metadata
from app.models import FamilyDimension

UTC = timezone.utc

HEX_RE = re.compile(r"^[0-9a-f]{32}$")


def test_new_run_id_is_hex_lowercase():
    rid = new_run_id()
    assert isinstance(rid, str)
    assert HEX_RE.match(rid), f"Not lowercase hex: {rid}"


def test_new_run_id_uniqueness_sample():
    sample_size = 200
    ids = {new_run_id() for _ in range(sample_size)}
    assert len(ids) == sample_size


def test_envelope_dumps_models():
    payload = envelope("classify", FamilyDimension(family="V3", dimension=36))
    assert payload == {
        "schema_version": 1,
        "command": "classify",
        "result": {"family": "V3", "dimension": 36},
    }


def test_envelope_with_metadata():
    started = datetime(2026, 1, 1, tzinfo=UTC)
    metadata = run_metadata("abc", started, started + timedelta(milliseconds=1500))
    assert metadata == {
        "run_id": "abc",
        "timestamp": "2026-01-01T00:00:01.500000+00:00",
        "elapsed_ms": 1500,
    }
    assert list(envelope("schema", {}, metadata)) == [
        "schema_version",
        "command",
        "result",
        "metadata",
    ]


def test_render_text_flattens_nested_values():
    payload = {
        "command": "iso",
        "result": {
            "shift": [0, 1],
            "partition": [[0, 1], [2]],
            "profile": {},
            "reason": None,
        },
    }
    assert render_text(payload).splitlines() == [
        'command: "iso"',
        "result.shift: [0, 1]",
        "result.partition.0: [0, 1]",
        "result.partition.1: [2]",
        "result.profile: {}",
        "result.reason: null",
    ]


def test_render_json_is_indented_with_trailing_newline():
    text = render({"a": [1]}, "json")
    assert text == '{\n  "a": [\n    1\n  ]\n}\n'
    assert json.loads(text) == {"a": [1]}
