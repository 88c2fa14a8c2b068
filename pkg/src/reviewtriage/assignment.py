"""Category-to-team assignment: derive the ranked team hierarchy from
assignment-evidence votes with a share threshold, and look up ranked teams
for categorized units with the Meta fallback.

Shares are exact vote-count fractions and the threshold comparison is
exact, so a team at precisely the threshold is always included; percentages
are display-only rounding.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, BinaryIO, Iterable, Mapping, Sequence, TextIO

from .errors import DataError

META_TEAM = "Meta"

DEFAULT_THRESHOLD = Fraction(1, 4)


@dataclass(frozen=True)
class Team:
    name: str
    description: str = ""


@dataclass(frozen=True)
class EvidenceRecord:
    unit_id: str
    category: str
    team: str
    rater: str


@dataclass
class AssignmentEvidence:
    records: list[EvidenceRecord] = field(default_factory=list)

    def __post_init__(self) -> None:
        seen: set[tuple[str, str]] = set()
        for rec in self.records:
            key = (rec.unit_id, rec.rater)
            if key in seen:
                raise DataError(
                    f"rater {rec.rater!r} voted twice on unit {rec.unit_id!r}"
                )
            seen.add(key)


@dataclass(frozen=True)
class TableRow:
    team: str
    share: Fraction
    votes: int

    @property
    def percent(self) -> int:
        return round(float(100 * self.share))


@dataclass
class AssignmentTable:
    threshold: Fraction
    rows: dict[str, list[TableRow]] = field(default_factory=dict)
    version: str = ""

    def __post_init__(self) -> None:
        if not 0 < self.threshold <= 1:
            raise DataError(f"threshold {self.threshold} outside (0, 1]")
        for category, entries in self.rows.items():
            for entry in entries:
                if entry.share < self.threshold:
                    raise DataError(
                        f"{category!r}: listed team {entry.team!r} below threshold"
                    )
            shares = [e.share for e in entries]
            if shares != sorted(shares, reverse=True):
                raise DataError(f"{category!r}: rows not sorted by share")


def as_fraction(value: Fraction | str | float | int) -> Fraction:
    """Exact threshold/share parsing; floats go through their decimal repr."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def load_teams(stream: BinaryIO | TextIO) -> list[Team]:
    data = stream.read()
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = [l for l in text.splitlines() if l.strip() and not l.strip().startswith("#")]
    reader = csv.DictReader(io.StringIO("\n".join(lines)))
    if reader.fieldnames is None or "name" not in reader.fieldnames:
        raise DataError(f"teams header must contain name, got {reader.fieldnames}")
    teams = []
    seen = set()
    for row in reader:
        name = (row.get("name") or "").strip()
        if not name:
            raise DataError("team row with empty name")
        if name in seen:
            raise DataError(f"team {name!r} declared twice")
        seen.add(name)
        teams.append(Team(name=name, description=(row.get("description") or "").strip()))
    if META_TEAM not in seen:
        teams.append(Team(name=META_TEAM, description="fallback reference point"))
    return teams


def load_evidence(stream: BinaryIO | TextIO) -> AssignmentEvidence:
    """Load an evidence file with header unit_id,category,team,rater."""
    data = stream.read()
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = [l for l in text.splitlines() if l.strip() and not l.strip().startswith("#")]
    reader = csv.DictReader(io.StringIO("\n".join(lines)))
    expected = {"unit_id", "category", "team", "rater"}
    if reader.fieldnames is None or not expected.issubset(reader.fieldnames):
        raise DataError(f"evidence header must contain {sorted(expected)}")
    records = []
    for row in reader:
        values = {k: (row.get(k) or "").strip() for k in expected}
        if not all(values.values()):
            raise DataError(f"evidence row with blank field: {row}")
        records.append(EvidenceRecord(**values))
    return AssignmentEvidence(records=records)


def consensus_votes(evidence: AssignmentEvidence) -> AssignmentEvidence:
    """Pre-aggregate multi-rater evidence to one plurality vote per unit.

    Ties on the plurality team go to the lexicographically smallest name.
    """
    by_unit: dict[tuple[str, str], dict[str, int]] = {}
    for rec in evidence.records:
        counts = by_unit.setdefault((rec.unit_id, rec.category), {})
        counts[rec.team] = counts.get(rec.team, 0) + 1
    records = []
    for (unit_id, category), counts in by_unit.items():
        team = min(counts, key=lambda t: (-counts[t], t))
        records.append(
            EvidenceRecord(unit_id=unit_id, category=category, team=team, rater="consensus")
        )
    records.sort(key=lambda r: (r.category, r.unit_id))
    return AssignmentEvidence(records=records)


def derive_table(
    evidence: AssignmentEvidence,
    threshold: Fraction | str | float = DEFAULT_THRESHOLD,
    categories: Sequence[str] | None = None,
    tie_order: Mapping[str, Sequence[str]] | None = None,
    teams: Iterable[Team] | None = None,
    consensus: bool = False,
) -> AssignmentTable:
    """Compute per-category team shares and keep teams at or above the
    threshold, ranked by share.

    categories adds declared categories with no evidence as empty rows
    (they fall back to Meta on assignment). tie_order fixes the order of
    exact share ties per category; remaining ties break on team name.
    """
    threshold = as_fraction(threshold)
    if not 0 < threshold <= 1:
        raise DataError(f"threshold {threshold} outside (0, 1]")
    if teams is not None:
        declared = {t.name for t in teams}
        for rec in evidence.records:
            if rec.team not in declared:
                raise DataError(f"unknown team {rec.team!r} in evidence")
    if consensus:
        evidence = consensus_votes(evidence)
    votes: dict[str, dict[str, int]] = {}
    for rec in evidence.records:
        per_team = votes.setdefault(rec.category, {})
        per_team[rec.team] = per_team.get(rec.team, 0) + 1
    tie_order = tie_order or {}
    rows: dict[str, list[TableRow]] = {}
    all_categories = sorted(set(votes) | set(categories or ()))
    for category in all_categories:
        per_team = votes.get(category, {})
        total = sum(per_team.values())
        entries = []
        for team, count in per_team.items():
            share = Fraction(count, total)
            if share >= threshold:
                entries.append(TableRow(team=team, share=share, votes=count))
        order = list(tie_order.get(category, ()))

        def sort_key(row: TableRow) -> tuple:
            try:
                override = order.index(row.team)
            except ValueError:
                override = len(order)
            return (-row.share, -row.votes, override, row.team)

        entries.sort(key=sort_key)
        rows[category] = entries
    return AssignmentTable(threshold=threshold, rows=rows)


def assign(category: str, table: AssignmentTable) -> list[str]:
    """Ranked team names for a category; empty rows fall back to [Meta]."""
    if category not in table.rows:
        raise DataError(f"category {category!r} not declared in assignment table")
    entries = table.rows[category]
    if not entries:
        return [META_TEAM]
    return [entry.team for entry in entries]


@dataclass
class HitReport:
    n_cases: int
    overall: float
    per_rank: dict[int, float]

    def as_record(self) -> dict[str, Any]:
        return {
            "n_cases": self.n_cases,
            "overall": self.overall,
            "per_rank": {str(rank): frac for rank, frac in sorted(self.per_rank.items())},
        }


def hierarchy_hit_rate(
    assignments: Sequence[tuple[Sequence[str], str]]
) -> HitReport:
    """Fraction of cases whose true team appears in the ranked list, plus
    the fraction hit at each rank."""
    if not assignments:
        raise DataError("hierarchy_hit_rate needs at least one case")
    n = len(assignments)
    rank_hits: dict[int, int] = {}
    hits = 0
    max_rank = 0
    for ranked, truth in assignments:
        ranked = list(ranked)
        max_rank = max(max_rank, len(ranked))
        if truth in ranked:
            hits += 1
            rank = ranked.index(truth) + 1
            rank_hits[rank] = rank_hits.get(rank, 0) + 1
    per_rank = {rank: rank_hits.get(rank, 0) / n for rank in range(1, max(max_rank, 3) + 1)}
    return HitReport(n_cases=n, overall=hits / n, per_rank=per_rank)


# --- table persistence -------------------------------------------------------

TABLE_SCHEMA = "assignment-table/1"


def table_to_record(table: AssignmentTable) -> dict[str, Any]:
    return {
        "schema": TABLE_SCHEMA,
        "threshold": str(table.threshold),
        "version": table.version,
        "rows": {
            category: [
                {
                    "team": e.team,
                    "share": str(e.share),
                    "votes": e.votes,
                    "percent": e.percent,
                }
                for e in entries
            ]
            for category, entries in table.rows.items()
        },
    }


def record_to_table(record: dict[str, Any]) -> AssignmentTable:
    if record.get("schema") != TABLE_SCHEMA:
        raise DataError(f"not a {TABLE_SCHEMA} record: {record.get('schema')!r}")
    rows = {
        category: [
            TableRow(
                team=e["team"],
                share=Fraction(e["share"]),
                votes=int(e.get("votes", 0)),
            )
            for e in entries
        ]
        for category, entries in record.get("rows", {}).items()
    }
    return AssignmentTable(
        threshold=Fraction(record["threshold"]),
        rows=rows,
        version=record.get("version", ""),
    )


def save_table(fp: TextIO, table: AssignmentTable) -> None:
    json.dump(table_to_record(table), fp, ensure_ascii=False, indent=2)
    fp.write("\n")


def load_table(fp: TextIO) -> AssignmentTable:
    try:
        record = json.load(fp)
    except json.JSONDecodeError as exc:
        raise DataError(f"assignment table is not valid JSON: {exc.msg}") from exc
    return record_to_table(record)
