"""Line-delimited JSON record IO and RFC 3339 timestamp helpers.

Every machine-readable artifact in this package is a UTF-8 file with one
JSON object per line. Serialization is deterministic: key order follows
construction order and floats use repr, so identical inputs always produce
byte-identical files.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import Any, Iterable, Iterator, TextIO

from .errors import DataError


def dumps(obj: Any) -> str:
    """Serialize one record to a compact, deterministic JSON line."""
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def write_jsonl(fp: TextIO, records: Iterable[Any]) -> int:
    n = 0
    for rec in records:
        fp.write(dumps(rec))
        fp.write("\n")
        n += 1
    return n


def read_jsonl(fp: TextIO) -> Iterator[tuple[int, Any]]:
    """Yield (line_number, parsed object) for every non-blank line."""
    for lineno, line in enumerate(fp, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            yield lineno, json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"line {lineno}: invalid JSON ({exc.msg})") from exc


def parse_rfc3339(value: str) -> datetime:
    """Parse an RFC 3339 timestamp into an aware UTC datetime.

    Accepts the trailing-Z form that datetime.fromisoformat rejects on 3.10.
    """
    if not isinstance(value, str) or not value:
        raise DataError(f"not a timestamp: {value!r}")
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        parsed = datetime.fromisoformat(text)
    except ValueError as exc:
        raise DataError(f"invalid RFC 3339 timestamp: {value!r}") from exc
    if parsed.tzinfo is None:
        raise DataError(f"timestamp lacks a UTC offset: {value!r}")
    return parsed.astimezone(timezone.utc)


def format_rfc3339(value: datetime) -> str:
    """Render an aware datetime as RFC 3339 with a Z suffix."""
    if value.tzinfo is None:
        raise DataError("naive datetime cannot be serialized")
    utc = value.astimezone(timezone.utc).replace(tzinfo=None)
    return utc.isoformat() + "Z"
