"""Explanation-need detection with a word-and-phrase lexicon.

Matching is case-insensitive and anchored at word boundaries: a lexicon
word never fires inside another word ("how" does not hit "showtime"), and
phrases must appear as the same contiguous word sequence. A review is
labeled with the strongest kind among its hits (explicit > implicit >
potential).
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from enum import Enum
from typing import Any, BinaryIO, Iterable, Sequence, TextIO

from .corpus import CorpusStats, NeedUnit, Review, corpus_stats, unit_for_review
from .errors import DataError

_WORD_RE = re.compile(r"\w+")


class NeedKind(str, Enum):
    EXPLICIT = "explicit"
    IMPLICIT = "implicit"
    POTENTIAL = "potential"
    NONE = "none"


_PRIORITY = {
    NeedKind.EXPLICIT: 3,
    NeedKind.IMPLICIT: 2,
    NeedKind.POTENTIAL: 1,
    NeedKind.NONE: 0,
}


def kind_priority(kind: NeedKind) -> int:
    return _PRIORITY[kind]


class MatchMode(str, Enum):
    WHOLE_WORD = "word"
    PHRASE = "phrase"


class LabeledBy(str, Enum):
    FILTER = "filter"
    HUMAN = "human"


@dataclass(frozen=True)
class LexiconEntry:
    pattern: str
    kind: NeedKind
    language: str = "*"
    match_mode: MatchMode = MatchMode.PHRASE
    source: str = ""

    def __post_init__(self) -> None:
        if not self.pattern:
            raise DataError("lexicon entry with empty pattern")
        if self.kind == NeedKind.NONE:
            raise DataError(f"entry {self.pattern!r}: kind 'none' is not a lexicon kind")

    @property
    def tokens(self) -> tuple[str, ...]:
        return tuple(_WORD_RE.findall(self.pattern))

    def applies_to(self, language: str) -> bool:
        if self.language == "*" or language == "und":
            return True
        return self.language.casefold() == language.casefold()


@dataclass(frozen=True)
class Lexicon:
    entries: tuple[LexiconEntry, ...]
    version: str = ""

    def __post_init__(self) -> None:
        seen: set[tuple[str, str, NeedKind]] = set()
        for entry in self.entries:
            key = (entry.pattern, entry.language, entry.kind)
            if key in seen:
                raise DataError(
                    f"duplicate lexicon entry ({entry.pattern!r}, {entry.language}, "
                    f"{entry.kind.value})"
                )
            seen.add(key)


@dataclass(frozen=True)
class MatchHit:
    entry: LexiconEntry
    span: tuple[int, int]
    matched_text: str


@dataclass(frozen=True)
class NeedLabel:
    unit: NeedUnit
    kind: NeedKind
    hits: tuple[MatchHit, ...] = ()
    labeled_by: LabeledBy = LabeledBy.FILTER
    note: str | None = None

    def __post_init__(self) -> None:
        if (
            self.labeled_by == LabeledBy.FILTER
            and self.kind != NeedKind.NONE
            and not self.hits
        ):
            raise DataError(
                f"unit {self.unit.unit_id!r}: filter label {self.kind.value} without hits"
            )


def _normalize_pattern(raw: str) -> str:
    return " ".join(raw.casefold().split())


def load_lexicon(stream: BinaryIO | TextIO) -> Lexicon:
    """Load a delimited lexicon file.

    Expected header: pattern,kind,language,match_mode,source. Lines starting
    with '#' are comments; a '# version:' comment sets the lexicon version.
    """
    data = stream.read()
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    version = ""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("#"):
            comment = stripped.lstrip("#").strip()
            if comment.lower().startswith("version:"):
                version = comment.split(":", 1)[1].strip()
            continue
        if stripped:
            rows.append((lineno, line))
    if not rows:
        return Lexicon(entries=(), version=version)

    reader = csv.DictReader(io.StringIO("\n".join(line for _, line in rows)))
    expected = {"pattern", "kind", "language", "match_mode", "source"}
    if reader.fieldnames is None or not expected.issubset(set(reader.fieldnames)):
        raise DataError(
            f"lexicon header must contain {sorted(expected)}, got {reader.fieldnames}"
        )
    entries: list[LexiconEntry] = []
    seen: dict[tuple[str, str, NeedKind], int] = {}
    for offset, row in enumerate(reader):
        lineno = rows[offset + 1][0]
        pattern = _normalize_pattern(row.get("pattern") or "")
        if not pattern:
            raise DataError(f"line {lineno}: empty pattern")
        kind_token = (row.get("kind") or "").strip().lower()
        try:
            kind = NeedKind(kind_token)
        except ValueError:
            raise DataError(f"line {lineno}: unknown kind {kind_token!r}") from None
        if kind == NeedKind.NONE:
            raise DataError(f"line {lineno}: kind 'none' is not a lexicon kind")
        mode_token = (row.get("match_mode") or "").strip().lower()
        try:
            mode = MatchMode(mode_token)
        except ValueError:
            raise DataError(f"line {lineno}: unknown match_mode {mode_token!r}") from None
        entry = LexiconEntry(
            pattern=pattern,
            kind=kind,
            language=(row.get("language") or "*").strip() or "*",
            match_mode=mode,
            source=(row.get("source") or "").strip(),
        )
        if mode == MatchMode.WHOLE_WORD and len(entry.tokens) != 1:
            raise DataError(
                f"line {lineno}: whole-word entry {pattern!r} must be a single word"
            )
        key = (entry.pattern, entry.language, entry.kind)
        if key in seen:
            raise DataError(
                f"line {lineno}: duplicate of line {seen[key]} "
                f"({pattern!r}, {entry.language}, {kind.value})"
            )
        seen[key] = lineno
        entries.append(entry)
    return Lexicon(entries=tuple(entries), version=version)


def find_hits(text: str, entries: Iterable[LexiconEntry]) -> list[MatchHit]:
    """All word-boundary matches of the entries in text, sorted by span.

    Overlapping hits are all reported. A candidate token sequence only
    counts when the exact text slice case-folds to the entry pattern, so
    hits always slice back to their pattern.
    """
    tokens = [(m.start(), m.end(), m.group().casefold()) for m in _WORD_RE.finditer(text)]
    hits: list[MatchHit] = []
    for entry in entries:
        pattern_tokens = entry.tokens
        if not pattern_tokens:
            continue
        width = len(pattern_tokens)
        for k in range(len(tokens) - width + 1):
            if tokens[k][2] != pattern_tokens[0]:
                continue
            if any(tokens[k + i][2] != pattern_tokens[i] for i in range(1, width)):
                continue
            start, end = tokens[k][0], tokens[k + width - 1][1]
            slice_ = text[start:end]
            if slice_.casefold() != entry.pattern:
                continue
            hits.append(MatchHit(entry=entry, span=(start, end), matched_text=slice_))
    hits.sort(key=lambda h: (h.span[0], h.span[1], h.entry.pattern, h.entry.kind.value))
    return hits


def match_review(review: Review, lexicon: Lexicon) -> list[MatchHit]:
    """Match the lexicon against title + body of a normalized review."""
    entries = [e for e in lexicon.entries if e.applies_to(review.language)]
    return find_hits(review.text, entries)


def label_unit(hits: Sequence[MatchHit]) -> NeedKind:
    """The strongest kind among the hits; no hits means none."""
    kind = NeedKind.NONE
    for hit in hits:
        if _PRIORITY[hit.entry.kind] > _PRIORITY[kind]:
            kind = hit.entry.kind
    return kind


def detect_corpus(
    reviews: Sequence[Review], lexicon: Lexicon
) -> tuple[list[NeedLabel], CorpusStats]:
    """Filter-label every review (one ordinal-1 unit each) and aggregate
    per-app counts."""
    labels = []
    for review in reviews:
        hits = match_review(review, lexicon)
        labels.append(
            NeedLabel(
                unit=unit_for_review(review),
                kind=label_unit(hits),
                hits=tuple(hits),
                labeled_by=LabeledBy.FILTER,
            )
        )
    stats = corpus_stats(
        ((label.unit, label.kind.value) for label in labels), reviews
    )
    return labels, stats


# --- record round-trip -------------------------------------------------------

LABEL_SCHEMA = "need-label/1"


def label_to_record(label: NeedLabel) -> dict[str, Any]:
    store, app_id, review_id = label.unit.review_ref
    return {
        "schema": LABEL_SCHEMA,
        "unit_id": label.unit.unit_id,
        "store": store.value,
        "app_id": app_id,
        "review_id": review_id,
        "ordinal": label.unit.ordinal,
        "span": list(label.unit.span) if label.unit.span else None,
        "kind": label.kind.value,
        "labeled_by": label.labeled_by.value,
        "note": label.note,
        "hits": [
            {
                "pattern": h.entry.pattern,
                "kind": h.entry.kind.value,
                "language": h.entry.language,
                "match_mode": h.entry.match_mode.value,
                "source": h.entry.source,
                "span": list(h.span),
                "text": h.matched_text,
            }
            for h in label.hits
        ],
    }


def record_to_label(record: dict[str, Any]) -> NeedLabel:
    if record.get("schema") != LABEL_SCHEMA:
        raise DataError(f"not a {LABEL_SCHEMA} record: {record.get('schema')!r}")
    from .corpus import StoreKind

    unit = NeedUnit(
        unit_id=record["unit_id"],
        review_ref=(StoreKind(record["store"]), record["app_id"], record["review_id"]),
        span=tuple(record["span"]) if record.get("span") else None,
        ordinal=record.get("ordinal", 1),
    )
    hits = tuple(
        MatchHit(
            entry=LexiconEntry(
                pattern=h["pattern"],
                kind=NeedKind(h["kind"]),
                language=h.get("language", "*"),
                match_mode=MatchMode(h.get("match_mode", "phrase")),
                source=h.get("source", ""),
            ),
            span=tuple(h["span"]),
            matched_text=h["text"],
        )
        for h in record.get("hits", ())
    )
    return NeedLabel(
        unit=unit,
        kind=NeedKind(record["kind"]),
        hits=hits,
        labeled_by=LabeledBy(record.get("labeled_by", "filter")),
        note=record.get("note"),
    )
