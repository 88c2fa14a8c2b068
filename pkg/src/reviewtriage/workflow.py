"""Semi-automated triage workflow: an explicit case state machine with
mandatory human checkpoints, an append-only audit log with snapshot
persistence, and addressability reporting.

Every mutation is an event applied through advance(); replaying a case's
events reproduces its state exactly, which doubles as crash recovery.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping

from .assignment import AssignmentEvidence, EvidenceRecord
from .corpus import NeedUnit, StoreKind
from .detect import NeedKind
from .errors import DataError, IllegalTransition, VersionConflict
from .metrics import (
    MetricValue,
    RatingsTable,
    cohen_kappa,
    fleiss_kappa,
    landis_koch,
    validity,
)
from .records import dumps, format_rfc3339, parse_rfc3339


class CaseState(str, Enum):
    INGESTED = "ingested"
    AUTO_DETECTED = "auto-detected"
    NEED_CONFIRMED = "need-confirmed"
    NO_NEED = "no-need"
    CATEGORIZED = "categorized"
    TEAM_ASSIGNED = "team-assigned"
    SOURCE_PROPOSED = "source-proposed"
    ANSWERED = "answered"
    UNRESOLVABLE = "unresolvable"


TERMINAL_STATES = frozenset(
    {CaseState.NO_NEED, CaseState.ANSWERED, CaseState.UNRESOLVABLE}
)


class Resolution(str, Enum):
    ANSWERED = "answered"
    ALREADY_SOLVED = "already-solved"
    WILL_BE_SOLVED = "will-be-solved"
    UNRESOLVABLE = "unresolvable"


class ActionType(str, Enum):
    AUTO_DETECT = "auto-detect"
    CONFIRM_NEED = "confirm-need"
    REJECT_NEED = "reject-need"
    SUGGEST_CATEGORY = "suggest-category"
    CONFIRM_CATEGORY = "confirm-category"
    CONFIRM_TEAM = "confirm-team"
    PROPOSE_SOURCES = "propose-sources"
    RESOLVE_CASE = "resolve-case"
    MARK_UNRESOLVABLE = "mark-unresolvable"


# (state, action) -> next state. suggest-category attaches a suggestion
# without leaving need-confirmed; terminal states accept nothing.
TRANSITIONS: dict[tuple[CaseState, ActionType], CaseState] = {
    (CaseState.INGESTED, ActionType.AUTO_DETECT): CaseState.AUTO_DETECTED,
    (CaseState.AUTO_DETECTED, ActionType.CONFIRM_NEED): CaseState.NEED_CONFIRMED,
    (CaseState.AUTO_DETECTED, ActionType.REJECT_NEED): CaseState.NO_NEED,
    (CaseState.NEED_CONFIRMED, ActionType.SUGGEST_CATEGORY): CaseState.NEED_CONFIRMED,
    (CaseState.NEED_CONFIRMED, ActionType.CONFIRM_CATEGORY): CaseState.CATEGORIZED,
    (CaseState.CATEGORIZED, ActionType.CONFIRM_TEAM): CaseState.TEAM_ASSIGNED,
    (CaseState.TEAM_ASSIGNED, ActionType.PROPOSE_SOURCES): CaseState.SOURCE_PROPOSED,
    (CaseState.SOURCE_PROPOSED, ActionType.RESOLVE_CASE): CaseState.ANSWERED,
    (CaseState.SOURCE_PROPOSED, ActionType.MARK_UNRESOLVABLE): CaseState.UNRESOLVABLE,
}

SYSTEM_ACTIONS = frozenset(
    {ActionType.AUTO_DETECT, ActionType.SUGGEST_CATEGORY, ActionType.PROPOSE_SOURCES}
)
HUMAN_ACTIONS = frozenset(set(ActionType) - SYSTEM_ACTIONS)


@dataclass(frozen=True)
class Actor:
    kind: str  # "system" | "human"
    id: str | None = None

    @classmethod
    def system(cls) -> "Actor":
        return cls(kind="system")

    @classmethod
    def human(cls, identifier: str) -> "Actor":
        if not identifier:
            raise DataError("human actor needs an identifier")
        return cls(kind="human", id=identifier)

    @property
    def is_human(self) -> bool:
        return self.kind == "human"


@dataclass(frozen=True)
class Action:
    type: ActionType
    actor: Actor
    payload: Mapping[str, Any] = field(default_factory=dict)
    timestamp: datetime | None = None
    expected_version: int | None = None


@dataclass(frozen=True)
class AuditEvent:
    case_id: str
    action: ActionType
    actor: Actor
    timestamp: datetime
    payload: Mapping[str, Any]
    resulting_state: CaseState
    resulting_version: int


@dataclass(frozen=True)
class TriageCase:
    case_id: str
    unit: NeedUnit
    review_text: str
    rating: int
    language: str
    state: CaseState = CaseState.INGESTED
    version: int = 0
    filter_label: NeedKind | None = None
    filter_hits: tuple[Mapping[str, Any], ...] = ()
    confirmed_label: NeedKind | None = None
    suggestion: tuple[tuple[str, int], ...] | None = None
    suggestion_tags: tuple[str, ...] = ()
    confirmed_category: str | None = None
    confirmed_category_by: str | None = None
    team_ranking: tuple[str, ...] | None = None
    confirmed_team: str | None = None
    confirmed_team_by: str | None = None
    team_override: bool = False
    source_candidates: tuple[Mapping[str, Any], ...] | None = None
    chosen_source: Mapping[str, Any] | None = None
    response_text: str | None = None
    resolution: Resolution | None = None
    pending_need_confirmation: tuple[str, str] | None = None

    @property
    def app_id(self) -> str:
        return self.unit.review_ref[1]

    @property
    def store(self) -> StoreKind:
        return self.unit.review_ref[0]

    @property
    def is_terminal(self) -> bool:
        return self.state in TERMINAL_STATES


@dataclass(frozen=True)
class WorkflowPolicy:
    # dual_review requires a second, distinct human confirmation of the
    # need label before the case leaves auto-detected.
    dual_review: bool = False


def allowed_actions(state: CaseState) -> list[ActionType]:
    return sorted(
        (action for (s, action) in TRANSITIONS if s == state),
        key=lambda a: a.value,
    )


def _require(payload: Mapping[str, Any], key: str, action: ActionType) -> Any:
    if key not in payload or payload[key] in (None, ""):
        raise DataError(f"{action.value}: payload field {key!r} is required")
    return payload[key]


def advance(
    case: TriageCase,
    action: Action,
    policy: WorkflowPolicy = WorkflowPolicy(),
) -> tuple[TriageCase, AuditEvent]:
    """Apply one event to a case, enforcing the transition table, actor
    attribution, and optimistic version checks."""
    if action.expected_version is not None and action.expected_version != case.version:
        raise VersionConflict(case.case_id, action.expected_version, case.version)
    key = (case.state, action.type)
    if key not in TRANSITIONS:
        raise IllegalTransition(case.state.value, action.type.value)
    if action.type in SYSTEM_ACTIONS and action.actor.is_human:
        raise DataError(f"{action.type.value} is a system action")
    if action.type in HUMAN_ACTIONS and not action.actor.is_human:
        raise DataError(f"{action.type.value} requires a human actor")

    next_state = TRANSITIONS[key]
    payload = dict(action.payload)
    updates: dict[str, Any] = {}

    if action.type == ActionType.AUTO_DETECT:
        kind = NeedKind(_require(payload, "kind", action.type))
        updates["filter_label"] = kind
        updates["filter_hits"] = tuple(payload.get("hits") or ())
    elif action.type == ActionType.CONFIRM_NEED:
        kind = NeedKind(_require(payload, "kind", action.type))
        if kind not in (NeedKind.EXPLICIT, NeedKind.IMPLICIT):
            raise DataError("confirmed need must be explicit or implicit")
        if policy.dual_review:
            pending = case.pending_need_confirmation
            if pending is None or pending[1] != kind.value:
                updates["pending_need_confirmation"] = (action.actor.id or "", kind.value)
                next_state = case.state
                payload["pending"] = True
            elif pending[0] == action.actor.id:
                raise DataError("dual review needs a second distinct reviewer")
            else:
                updates["confirmed_label"] = kind
                updates["pending_need_confirmation"] = None
        else:
            updates["confirmed_label"] = kind
    elif action.type == ActionType.REJECT_NEED:
        pass
    elif action.type == ActionType.SUGGEST_CATEGORY:
        ranked = payload.get("ranked") or []
        updates["suggestion"] = tuple((str(c), int(s)) for c, s in ranked)
        updates["suggestion_tags"] = tuple(payload.get("tags") or ())
    elif action.type == ActionType.CONFIRM_CATEGORY:
        category = str(_require(payload, "category", action.type))
        suggested = [c for c, _ in (case.suggestion or ())]
        payload["override"] = bool(suggested) and category not in suggested
        updates["confirmed_category"] = category
        updates["confirmed_category_by"] = action.actor.id
        ranking = payload.get("team_ranking")
        if ranking is not None:
            updates["team_ranking"] = tuple(str(t) for t in ranking)
    elif action.type == ActionType.CONFIRM_TEAM:
        team = str(_require(payload, "team", action.type))
        override = case.team_ranking is not None and team not in case.team_ranking
        payload["override"] = override
        updates["confirmed_team"] = team
        updates["confirmed_team_by"] = action.actor.id
        updates["team_override"] = override
    elif action.type == ActionType.PROPOSE_SOURCES:
        updates["source_candidates"] = tuple(payload.get("candidates") or ())
    elif action.type == ActionType.RESOLVE_CASE:
        resolution = Resolution(str(_require(payload, "resolution", action.type)))
        if resolution == Resolution.UNRESOLVABLE:
            raise DataError("use mark-unresolvable for unresolvable cases")
        updates["resolution"] = resolution
        if payload.get("source") is not None:
            updates["chosen_source"] = dict(payload["source"])
        if payload.get("response_text"):
            updates["response_text"] = str(payload["response_text"])
    elif action.type == ActionType.MARK_UNRESOLVABLE:
        updates["resolution"] = Resolution.UNRESOLVABLE

    timestamp = action.timestamp or datetime.now(timezone.utc)
    new_case = replace(case, state=next_state, version=case.version + 1, **updates)
    event = AuditEvent(
        case_id=case.case_id,
        action=action.type,
        actor=action.actor,
        timestamp=timestamp,
        payload=payload,
        resulting_state=next_state,
        resulting_version=new_case.version,
    )
    return new_case, event


def apply_event(
    case: TriageCase, event: AuditEvent, policy: WorkflowPolicy = WorkflowPolicy()
) -> TriageCase:
    """Replay one audit event; events are facts, so no version check."""
    action = Action(
        type=event.action,
        actor=event.actor,
        payload=event.payload,
        timestamp=event.timestamp,
    )
    new_case, _ = advance(case, action, policy)
    if new_case.version != event.resulting_version:
        raise DataError(
            f"case {case.case_id!r}: replay version {new_case.version} "
            f"!= logged {event.resulting_version}"
        )
    return new_case


# --- serialization -----------------------------------------------------------

def case_to_record(case: TriageCase) -> dict[str, Any]:
    store, app_id, review_id = case.unit.review_ref
    return {
        "case_id": case.case_id,
        "unit_id": case.unit.unit_id,
        "store": store.value,
        "app_id": app_id,
        "review_id": review_id,
        "ordinal": case.unit.ordinal,
        "review_text": case.review_text,
        "rating": case.rating,
        "language": case.language,
        "state": case.state.value,
        "version": case.version,
        "filter_label": case.filter_label.value if case.filter_label else None,
        "filter_hits": [dict(h) for h in case.filter_hits],
        "confirmed_label": case.confirmed_label.value if case.confirmed_label else None,
        "suggestion": [[c, s] for c, s in case.suggestion] if case.suggestion is not None else None,
        "suggestion_tags": list(case.suggestion_tags),
        "confirmed_category": case.confirmed_category,
        "confirmed_category_by": case.confirmed_category_by,
        "team_ranking": list(case.team_ranking) if case.team_ranking is not None else None,
        "confirmed_team": case.confirmed_team,
        "confirmed_team_by": case.confirmed_team_by,
        "team_override": case.team_override,
        "source_candidates": (
            [dict(c) for c in case.source_candidates]
            if case.source_candidates is not None
            else None
        ),
        "chosen_source": dict(case.chosen_source) if case.chosen_source else None,
        "response_text": case.response_text,
        "resolution": case.resolution.value if case.resolution else None,
        "pending_need_confirmation": (
            list(case.pending_need_confirmation) if case.pending_need_confirmation else None
        ),
    }


def record_to_case(record: dict[str, Any]) -> TriageCase:
    unit = NeedUnit(
        unit_id=record["unit_id"],
        review_ref=(
            StoreKind(record["store"]),
            record["app_id"],
            record["review_id"],
        ),
        ordinal=record.get("ordinal", 1),
    )
    return TriageCase(
        case_id=record["case_id"],
        unit=unit,
        review_text=record.get("review_text", ""),
        rating=record.get("rating", 0),
        language=record.get("language", "und"),
        state=CaseState(record["state"]),
        version=record["version"],
        filter_label=NeedKind(record["filter_label"]) if record.get("filter_label") else None,
        filter_hits=tuple(record.get("filter_hits") or ()),
        confirmed_label=(
            NeedKind(record["confirmed_label"]) if record.get("confirmed_label") else None
        ),
        suggestion=(
            tuple((c, s) for c, s in record["suggestion"])
            if record.get("suggestion") is not None
            else None
        ),
        suggestion_tags=tuple(record.get("suggestion_tags") or ()),
        confirmed_category=record.get("confirmed_category"),
        confirmed_category_by=record.get("confirmed_category_by"),
        team_ranking=(
            tuple(record["team_ranking"]) if record.get("team_ranking") is not None else None
        ),
        confirmed_team=record.get("confirmed_team"),
        confirmed_team_by=record.get("confirmed_team_by"),
        team_override=record.get("team_override", False),
        source_candidates=(
            tuple(record["source_candidates"])
            if record.get("source_candidates") is not None
            else None
        ),
        chosen_source=record.get("chosen_source"),
        response_text=record.get("response_text"),
        resolution=Resolution(record["resolution"]) if record.get("resolution") else None,
        pending_need_confirmation=(
            tuple(record["pending_need_confirmation"])
            if record.get("pending_need_confirmation")
            else None
        ),
    )


def event_to_record(event: AuditEvent) -> dict[str, Any]:
    return {
        "case_id": event.case_id,
        "action": event.action.value,
        "actor": {"kind": event.actor.kind, "id": event.actor.id},
        "timestamp": format_rfc3339(event.timestamp),
        "payload": dict(event.payload),
        "resulting_state": event.resulting_state.value,
        "resulting_version": event.resulting_version,
    }


def record_to_event(record: dict[str, Any]) -> AuditEvent:
    actor_rec = record.get("actor") or {}
    return AuditEvent(
        case_id=record["case_id"],
        action=ActionType(record["action"]),
        actor=Actor(kind=actor_rec.get("kind", "system"), id=actor_rec.get("id")),
        timestamp=parse_rfc3339(record["timestamp"]),
        payload=record.get("payload") or {},
        resulting_state=CaseState(record["resulting_state"]),
        resulting_version=record["resulting_version"],
    )


# --- persistent store -------------------------------------------------------

class CaseStore:
    """Append-only event log plus a derived snapshot file.

    The log (events.jsonl) is the authority: loading replays it from
    scratch. cases.json is a convenience snapshot rewritten after each
    applied event. Mutations are serialized by a process-wide lock with
    optimistic version checks, so concurrent conflicting decisions cannot
    both win.
    """

    def __init__(
        self,
        directory: str | Path,
        policy: WorkflowPolicy = WorkflowPolicy(),
        clock: Callable[[], datetime] | None = None,
    ):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.policy = policy
        self.clock = clock or (lambda: datetime.now(timezone.utc))
        self._lock = threading.Lock()
        self._cases: dict[str, TriageCase] = {}
        self._events: dict[str, list[AuditEvent]] = {}
        self._replay()

    @property
    def log_path(self) -> Path:
        return self.directory / "events.jsonl"

    @property
    def snapshot_path(self) -> Path:
        return self.directory / "cases.json"

    def _replay(self) -> None:
        if not self.log_path.exists():
            return
        with self.log_path.open(encoding="utf-8") as fp:
            for lineno, line in enumerate(fp, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise DataError(f"{self.log_path}:{lineno}: invalid JSON") from exc
                if record.get("type") == "case":
                    case = record_to_case(record["case"])
                    self._cases[case.case_id] = case
                    self._events[case.case_id] = []
                elif record.get("type") == "event":
                    event = record_to_event(record["event"])
                    case = self._cases.get(event.case_id)
                    if case is None:
                        raise DataError(
                            f"{self.log_path}:{lineno}: event for unknown case "
                            f"{event.case_id!r}"
                        )
                    self._cases[event.case_id] = apply_event(case, event, self.policy)
                    self._events[event.case_id].append(event)
                else:
                    raise DataError(f"{self.log_path}:{lineno}: unknown log record type")

    def _append_log(self, record: dict[str, Any]) -> None:
        with self.log_path.open("a", encoding="utf-8") as fp:
            fp.write(dumps(record))
            fp.write("\n")

    def _write_snapshot(self) -> None:
        cases = [case_to_record(c) for _, c in sorted(self._cases.items())]
        with self.snapshot_path.open("w", encoding="utf-8") as fp:
            json.dump({"schema": "case-snapshot/1", "cases": cases}, fp, ensure_ascii=False, indent=2)
            fp.write("\n")

    def create_case(self, case: TriageCase) -> TriageCase:
        with self._lock:
            if case.case_id in self._cases:
                raise DataError(f"case {case.case_id!r} already exists")
            if case.state != CaseState.INGESTED or case.version != 0:
                raise DataError("new cases must start at ingested, version 0")
            self._cases[case.case_id] = case
            self._events[case.case_id] = []
            self._append_log({"type": "case", "case": case_to_record(case)})
            self._write_snapshot()
            return case

    def apply(self, case_id: str, action: Action) -> TriageCase:
        with self._lock:
            case = self._cases.get(case_id)
            if case is None:
                raise DataError(f"no such case: {case_id!r}")
            if action.timestamp is None:
                action = replace(action, timestamp=self.clock())
            new_case, event = advance(case, action, self.policy)
            self._append_log({"type": "event", "event": event_to_record(event)})
            self._cases[case_id] = new_case
            self._events[case_id].append(event)
            self._write_snapshot()
            return new_case

    def get(self, case_id: str) -> TriageCase:
        case = self._cases.get(case_id)
        if case is None:
            raise DataError(f"no such case: {case_id!r}")
        return case

    def events(self, case_id: str) -> list[AuditEvent]:
        self.get(case_id)
        return list(self._events[case_id])

    def cases(
        self,
        state: CaseState | None = None,
        app: str | None = None,
        store: StoreKind | None = None,
    ) -> list[TriageCase]:
        selected = []
        for _, case in sorted(self._cases.items()):
            if state is not None and case.state != state:
                continue
            if app is not None and case.app_id != app:
                continue
            if store is not None and case.store != store:
                continue
            selected.append(case)
        return selected

    def __len__(self) -> int:
        return len(self._cases)


# --- reports ------------------------------------------------------------------

RESOLVED_RESOLUTIONS = (
    Resolution.ANSWERED,
    Resolution.ALREADY_SOLVED,
    Resolution.WILL_BE_SOLVED,
)


@dataclass
class AddressabilityReport:
    confirmed_terminal: int
    in_flight: int
    no_need: int
    by_resolution: dict[str, int]
    resolved: int
    resolved_percent: float | None

    @property
    def no_data(self) -> bool:
        return self.confirmed_terminal == 0

    @property
    def resolved_percent_display(self) -> int | None:
        if self.resolved_percent is None:
            return None
        return round(self.resolved_percent)

    def as_record(self) -> dict[str, Any]:
        fractions = {
            name: (count / self.confirmed_terminal if self.confirmed_terminal else None)
            for name, count in self.by_resolution.items()
        }
        return {
            "confirmed_terminal": self.confirmed_terminal,
            "in_flight": self.in_flight,
            "no_need": self.no_need,
            "by_resolution": self.by_resolution,
            "fractions": fractions,
            "resolved": self.resolved,
            "resolved_percent": self.resolved_percent,
            "resolved_percent_display": self.resolved_percent_display,
            "no_data": self.no_data,
        }


def addressability_report(cases: Iterable[TriageCase]) -> AddressabilityReport:
    """How much of the confirmed explanation need got resolved.

    Only terminal confirmed-need cases enter the fractions; in-flight and
    rejected (no-need) cases are counted separately.
    """
    by_resolution = {r.value: 0 for r in Resolution}
    confirmed_terminal = 0
    in_flight = 0
    no_need = 0
    for case in cases:
        if case.state == CaseState.NO_NEED:
            no_need += 1
        elif case.state in (CaseState.ANSWERED, CaseState.UNRESOLVABLE):
            confirmed_terminal += 1
            if case.resolution is None:
                raise DataError(f"terminal case {case.case_id!r} lacks a resolution")
            by_resolution[case.resolution.value] += 1
        else:
            in_flight += 1
    resolved = sum(by_resolution[r.value] for r in RESOLVED_RESOLUTIONS)
    percent = (
        validity(resolved, confirmed_terminal) if confirmed_terminal > 0 else None
    )
    return AddressabilityReport(
        confirmed_terminal=confirmed_terminal,
        in_flight=in_flight,
        no_need=no_need,
        by_resolution=by_resolution,
        resolved=resolved,
        resolved_percent=percent,
    )


def export_evidence(cases: Iterable[TriageCase]) -> AssignmentEvidence:
    """Turn human-confirmed category/team decisions into assignment
    evidence, attributed to the confirming reviewer."""
    records = []
    for case in cases:
        if case.confirmed_category is None or case.confirmed_team is None:
            continue
        records.append(
            EvidenceRecord(
                unit_id=case.unit.unit_id,
                category=case.confirmed_category,
                team=case.confirmed_team,
                rater=case.confirmed_team_by or "unknown",
            )
        )
    return AssignmentEvidence(records=records)


@dataclass
class AgreementGroup:
    raters: tuple[str, ...]
    n_units: int
    category_kappa: float | None
    category_band: str | None
    supercategory_kappa: float | None
    supercategory_band: str | None
    team_kappa: float | None
    team_band: str | None
    statistic: str

    def as_record(self) -> dict[str, Any]:
        return {
            "raters": list(self.raters),
            "n_units": self.n_units,
            "statistic": self.statistic,
            "category_kappa": self.category_kappa,
            "category_band": self.category_band,
            "supercategory_kappa": self.supercategory_kappa,
            "supercategory_band": self.supercategory_band,
            "team_kappa": self.team_kappa,
            "team_band": self.team_band,
        }


def _kappa_for(labels_per_unit: list[list[str]], n_raters: int) -> MetricValue:
    if n_raters == 2:
        return cohen_kappa([(labs[0], labs[1]) for labs in labels_per_unit])
    table = RatingsTable.from_labels(
        [(str(i), labs) for i, labs in enumerate(labels_per_unit)]
    )
    return fleiss_kappa(table)


def agreement_report(
    evidence: AssignmentEvidence,
    rollup_fn: Callable[[str], str] | None = None,
) -> list[AgreementGroup]:
    """Inter-rater agreement over assignment evidence, grouped by rater set.

    Units rated by exactly two raters get Cohen's kappa, three or more get
    Fleiss'. Groups with a single rater are skipped (agreement between one
    person is meaningless). rollup_fn enables the supercategory columns.
    """
    by_unit: dict[str, dict[str, tuple[str, str]]] = {}
    for rec in evidence.records:
        by_unit.setdefault(rec.unit_id, {})[rec.rater] = (rec.category, rec.team)
    by_rater_set: dict[tuple[str, ...], list[dict[str, tuple[str, str]]]] = {}
    for unit_id, votes in sorted(by_unit.items()):
        raters = tuple(sorted(votes))
        by_rater_set.setdefault(raters, []).append(votes)
    groups = []
    for raters, units in sorted(by_rater_set.items()):
        n_raters = len(raters)
        if n_raters < 2:
            continue
        category_rows = [[votes[r][0] for r in raters] for votes in units]
        team_rows = [[votes[r][1] for r in raters] for votes in units]
        category_kappa = _kappa_for(category_rows, n_raters)
        team_kappa = _kappa_for(team_rows, n_raters)
        super_kappa = None
        super_band = None
        if rollup_fn is not None:
            super_rows = [[rollup_fn(lab) for lab in labs] for labs in category_rows]
            super_kappa = _kappa_for(super_rows, n_raters)
            super_band = landis_koch(super_kappa).value
        groups.append(
            AgreementGroup(
                raters=raters,
                n_units=len(units),
                category_kappa=float(category_kappa),
                category_band=landis_koch(category_kappa).value,
                supercategory_kappa=float(super_kappa) if super_kappa is not None else None,
                supercategory_band=super_band,
                team_kappa=float(team_kappa),
                team_band=landis_koch(team_kappa).value,
                statistic="cohen" if n_raters == 2 else "fleiss",
            )
        )
    return groups
