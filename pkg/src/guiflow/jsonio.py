"""Canonical JSON serialization: sorted keys, two-space indent, LF, UTF-8.

Identical values serialize to identical bytes, which is what makes the
on-disk database and report exports byte-stable.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import SchemaError


def canonical_bytes(value) -> bytes:
    return (json.dumps(value, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def write_canonical(path: Path, value) -> None:
    path.write_bytes(canonical_bytes(value))


def read_json(path: Path, rel_name: str):
    """Parse a JSON file, mapping failures to SchemaError naming the file."""
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise SchemaError(rel_name, "file is missing") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(rel_name, f"invalid JSON: {exc.msg} (line {exc.lineno})") from exc
