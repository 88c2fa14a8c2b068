"""Canonical review corpus: import from store-export files, normalization,
dedup, need units, and per-app count summaries.

The canonical persistence format is line-delimited JSON, one review per
line, with an explicit schema version field (see save_corpus/load_corpus).
"""

from __future__ import annotations

import csv
import io
import unicodedata
from dataclasses import dataclass, field, replace
from datetime import datetime
from enum import Enum
from typing import Any, BinaryIO, Iterable, Sequence, TextIO

from .errors import DataError
from .records import dumps, format_rfc3339, parse_rfc3339, read_jsonl

REVIEW_SCHEMA = "review/1"

VALID_KINDS = ("explicit", "implicit", "potential", "none")


class StoreKind(str, Enum):
    GOOGLE_PLAY = "google-play"
    APPLE_APP_STORE = "apple-app-store"


class ImportFormat(str, Enum):
    JSON_LINES = "json-lines"
    DELIMITED_TABLE = "delimited-table"


@dataclass(frozen=True)
class ResponseRecord:
    text: str
    responded_at: datetime


@dataclass(frozen=True)
class Review:
    id: str
    store: StoreKind
    app_id: str
    title: str | None
    body: str
    rating: int
    language: str
    created_at: datetime
    developer_responses: tuple[ResponseRecord, ...] = ()

    @property
    def key(self) -> tuple[StoreKind, str, str]:
        return (self.store, self.app_id, self.id)

    @property
    def text(self) -> str:
        """Title and body as one matchable text (titles carry questions too)."""
        if self.title:
            return f"{self.title}\n{self.body}"
        return self.body


@dataclass(frozen=True)
class NeedUnit:
    """One individually countable explanation need inside a review."""

    unit_id: str
    review_ref: tuple[StoreKind, str, str]
    span: tuple[int, int] | None = None
    ordinal: int = 1

    def __post_init__(self) -> None:
        if self.ordinal < 1:
            raise DataError(f"unit {self.unit_id!r}: ordinal must be >= 1")
        if self.span is not None:
            start, end = self.span
            if not (0 <= start < end):
                raise DataError(f"unit {self.unit_id!r}: invalid span {self.span}")


@dataclass(frozen=True)
class RejectedRecord:
    line: int
    reason: str


@dataclass
class ImportReport:
    accepted: int = 0
    rejected: list[RejectedRecord] = field(default_factory=list)

    @property
    def rejected_count(self) -> int:
        return len(self.rejected)

    def reject(self, line: int, reason: str) -> None:
        self.rejected.append(RejectedRecord(line, reason))


def normalize_text(text: str) -> str:
    """NFC-normalize, trim, and collapse internal whitespace runs."""
    normalized = unicodedata.normalize("NFC", text)
    return " ".join(normalized.split())


def normalize_review(raw: Review) -> Review:
    """Normalize title and body; every other field is untouched."""
    body = normalize_text(raw.body)
    if not body:
        raise DataError(f"review {raw.id!r}: body is empty after normalization")
    title = normalize_text(raw.title) if raw.title is not None else None
    if title == "":
        title = None
    if body == raw.body and title == raw.title:
        return raw
    return replace(raw, body=body, title=title)


def dedupe(reviews: Sequence[Review]) -> list[Review]:
    """Keep the first occurrence of each (store, app_id, id), in order."""
    seen: set[tuple[StoreKind, str, str]] = set()
    unique = []
    for review in reviews:
        if review.key in seen:
            continue
        seen.add(review.key)
        unique.append(review)
    return unique


# --- import from store-export files ---------------------------------------

_REQUIRED_FIELDS = ("id", "app_id", "body")


def _build_review(
    record: dict[str, Any], store: StoreKind, line: int, report: ImportReport
) -> Review | None:
    for name in _REQUIRED_FIELDS:
        value = record.get(name)
        if value is None or not str(value).strip():
            report.reject(line, f"missing {name}")
            return None
    rating = record.get("rating")
    if rating is None or rating == "":
        report.reject(line, "rating missing")
        return None
    try:
        rating = int(rating)
    except (TypeError, ValueError):
        report.reject(line, f"rating not an integer: {rating!r}")
        return None
    if not 1 <= rating <= 5:
        report.reject(line, "rating out of range")
        return None
    try:
        created_at = parse_rfc3339(record.get("created_at"))
    except DataError as exc:
        report.reject(line, f"invalid created_at: {exc}")
        return None
    responses = []
    try:
        for resp in record.get("developer_responses") or ():
            text = str(resp.get("text", "")).strip()
            if not text:
                raise DataError("developer response with empty text")
            responses.append(
                ResponseRecord(text=text, responded_at=parse_rfc3339(resp.get("responded_at")))
            )
    except (DataError, AttributeError) as exc:
        report.reject(line, f"invalid developer response: {exc}")
        return None
    title = record.get("title")
    title = str(title) if title is not None and str(title).strip() else None
    language = str(record.get("language") or "und")
    if not normalize_text(str(record["body"])):
        report.reject(line, "body empty after normalization")
        return None
    return Review(
        id=str(record["id"]),
        store=store,
        app_id=str(record["app_id"]),
        title=title,
        body=str(record["body"]),
        rating=rating,
        language=language,
        created_at=created_at,
        developer_responses=tuple(responses),
    )


def _records_from_table(
    text: str, mapping: dict[str, Any] | None
) -> Iterable[tuple[int, dict[str, Any]]]:
    """Apply a column mapping to a delimited table with a header row.

    mapping maps canonical field names to either a column name or
    {"const": value}; unmapped fields default to the same-named column.
    """
    mapping = mapping or {}
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        return
    for row in reader:
        record: dict[str, Any] = {}
        for name in (
            "id", "app_id", "title", "body", "rating", "language", "created_at",
        ):
            spec = mapping.get(name, name)
            if isinstance(spec, dict):
                record[name] = spec.get("const")
            else:
                record[name] = row.get(spec)
        resp_col = mapping.get("response_text", "response_text")
        resp_at_col = mapping.get("responded_at", "responded_at")
        resp_text = row.get(resp_col)
        resp_at = row.get(resp_at_col)
        if resp_text and resp_text.strip() and resp_at:
            record["developer_responses"] = [
                {"text": resp_text, "responded_at": resp_at}
            ]
        yield reader.line_num, record


def import_reviews(
    stream: BinaryIO,
    format: ImportFormat | str,
    store: StoreKind | str,
    mapping: dict[str, Any] | None = None,
) -> tuple[list[Review], ImportReport]:
    """Read a store-export dump into Reviews.

    Malformed records are skipped and recorded in the report with their
    line number; undecodable bytes or an unknown format are fatal.
    """
    try:
        format = ImportFormat(format)
    except ValueError:
        raise DataError(f"unknown import format: {format!r}") from None
    store = StoreKind(store)
    try:
        text = stream.read().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(f"input is not valid UTF-8: {exc}") from exc

    report = ImportReport()
    reviews: list[Review] = []
    if format == ImportFormat.JSON_LINES:
        pairs: Iterable[tuple[int, Any]] = []
        lines = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if line.strip():
                lines.append((lineno, line))
        def gen() -> Iterable[tuple[int, Any]]:
            import json
            for lineno, line in lines:
                try:
                    yield lineno, json.loads(line)
                except ValueError:
                    report.reject(lineno, "invalid JSON")
        pairs = gen()
    else:
        pairs = _records_from_table(text, mapping)

    for lineno, record in pairs:
        if not isinstance(record, dict):
            report.reject(lineno, "record is not an object")
            continue
        review = _build_review(record, store, lineno, report)
        if review is not None:
            reviews.append(review)
            report.accepted += 1
    return reviews, report


# --- canonical corpus persistence ------------------------------------------

def review_to_record(review: Review) -> dict[str, Any]:
    return {
        "schema": REVIEW_SCHEMA,
        "store": review.store.value,
        "app_id": review.app_id,
        "id": review.id,
        "title": review.title,
        "body": review.body,
        "rating": review.rating,
        "language": review.language,
        "created_at": format_rfc3339(review.created_at),
        "developer_responses": [
            {"text": r.text, "responded_at": format_rfc3339(r.responded_at)}
            for r in review.developer_responses
        ],
    }


def save_corpus(fp: TextIO, reviews: Iterable[Review]) -> int:
    n = 0
    for review in reviews:
        fp.write(dumps(review_to_record(review)))
        fp.write("\n")
        n += 1
    return n


def load_corpus(fp: TextIO) -> list[Review]:
    """Load a canonical corpus file; any invalid line is fatal."""
    reviews = []
    for lineno, record in read_jsonl(fp):
        if not isinstance(record, dict) or record.get("schema") != REVIEW_SCHEMA:
            raise DataError(f"line {lineno}: not a {REVIEW_SCHEMA} record")
        report = ImportReport()
        review = _build_review(record, StoreKind(record.get("store")), lineno, report)
        if review is None:
            raise DataError(f"line {lineno}: {report.rejected[0].reason}")
        reviews.append(review)
    return reviews


# --- need units and stats ---------------------------------------------------

def unit_for_review(review: Review, ordinal: int = 1) -> NeedUnit:
    # colon-separated so unit ids stay URL-path-safe (they double as case ids)
    return NeedUnit(
        unit_id=f"{review.store.value}:{review.app_id}:{review.id}:{ordinal}",
        review_ref=review.key,
        span=None,
        ordinal=ordinal,
    )


def validate_units(units: Sequence[NeedUnit], reviews: Sequence[Review]) -> None:
    """Check span bounds and per-review ordinal contiguity."""
    by_key = {r.key: r for r in reviews}
    ordinals: dict[tuple[StoreKind, str, str], list[int]] = {}
    for unit in units:
        review = by_key.get(unit.review_ref)
        if review is None:
            raise DataError(f"unit {unit.unit_id!r}: review {unit.review_ref} not in corpus")
        if unit.span is not None and unit.span[1] > len(review.body):
            raise DataError(f"unit {unit.unit_id!r}: span exceeds body length")
        ordinals.setdefault(unit.review_ref, []).append(unit.ordinal)
    for ref, seen in ordinals.items():
        if sorted(seen) != list(range(1, len(seen) + 1)):
            raise DataError(f"review {ref}: unit ordinals {sorted(seen)} are not consecutive from 1")


@dataclass
class CorpusStats:
    """Counts of labeled need units per app, by label kind, plus a total row."""

    rows: dict[tuple[str, str], dict[str, int]] = field(default_factory=dict)

    def add(self, app_id: str, store: StoreKind | str, kind: str) -> None:
        if kind not in VALID_KINDS:
            raise DataError(f"unknown need kind {kind!r}")
        store_value = store.value if isinstance(store, StoreKind) else str(store)
        row = self.rows.setdefault(
            (app_id, store_value), {k: 0 for k in VALID_KINDS}
        )
        row[kind] += 1

    @property
    def total(self) -> dict[str, int]:
        total = {k: 0 for k in VALID_KINDS}
        for row in self.rows.values():
            for k in VALID_KINDS:
                total[k] += row[k]
        return total

    @property
    def unit_count(self) -> int:
        return sum(self.total.values())

    def as_records(self) -> list[dict[str, Any]]:
        """Machine-readable rows sorted by app, with the Total row last."""
        records = []
        for (app_id, store), row in sorted(self.rows.items()):
            records.append({"app_id": app_id, "store": store, **row})
        records.append({"app_id": "Total", "store": "*", **self.total})
        return records


def corpus_stats(
    labeled_units: Iterable[tuple[NeedUnit, str]],
    reviews: Sequence[Review],
) -> CorpusStats:
    """Aggregate labeled units into per-app counts by need kind."""
    by_key = {r.key: r for r in reviews}
    stats = CorpusStats()
    for unit, kind in labeled_units:
        if unit.review_ref not in by_key:
            raise DataError(
                f"unit {unit.unit_id!r}: review {unit.review_ref} not in corpus"
            )
        store, app_id, _ = unit.review_ref
        stats.add(app_id, store, str(kind))
    return stats
