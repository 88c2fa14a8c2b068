"""HTTP triage service: serves the case queue, accepts human decisions,
chains the system automation between checkpoints, and exposes the report
endpoints. The single-page reviewer console is served statically when a
built UI directory is configured.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Header, HTTPException, Query, Request
from fastapi.responses import JSONResponse, RedirectResponse
from fastapi.staticfiles import StaticFiles

from . import data as _data
from .assignment import (
    META_TEAM,
    AssignmentTable,
    assign,
    derive_table,
    hierarchy_hit_rate,
    load_evidence,
    load_table,
    load_teams,
)
from .corpus import Review, StoreKind, load_corpus
from .detect import Lexicon, NeedKind, detect_corpus, load_lexicon
from .errors import DataError, IllegalTransition, TriageError, VersionConflict
from .sources import (
    ArticleIndex,
    PastResponse,
    ResolvePolicy,
    build_response_store,
    candidate_to_record,
    index_articles,
    load_articles,
    resolve,
)
from .taxonomy import CategoryFilter, TaxonomyConfig, classify, load_rules, load_taxonomy
from .taxonomy import rollup as rollup_category
from .workflow import (
    HUMAN_ACTIONS,
    Action,
    ActionType,
    Actor,
    CaseState,
    CaseStore,
    TriageCase,
    WorkflowPolicy,
    addressability_report,
    agreement_report,
    allowed_actions,
    case_to_record,
    event_to_record,
)


@dataclass
class ServiceConfig:
    store_dir: str
    corpus: str | None = None
    lexicon: str | None = None
    taxonomy: str | None = None
    rules: str | None = None
    table: str | None = None
    articles: str | None = None
    evidence: str | None = None
    teams: str | None = None
    ui_dir: str | None = None
    dual_review: bool = False
    resolve: ResolvePolicy = field(default_factory=ResolvePolicy)

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        with open(path, encoding="utf-8") as fp:
            try:
                raw = json.load(fp)
            except json.JSONDecodeError as exc:
                raise DataError(f"service config is not valid JSON: {exc.msg}") from exc
        resolve_cfg = raw.pop("resolve", {})
        try:
            return cls(resolve=ResolvePolicy(**resolve_cfg), **raw)
        except TypeError as exc:
            raise DataError(f"invalid service config: {exc}") from exc


class TriageService:
    """Loaded resources plus the case store; every mutation goes through
    the workflow advance() path."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        policy = WorkflowPolicy(dual_review=config.dual_review)
        self.store = CaseStore(config.store_dir, policy=policy)
        self.taxonomy: TaxonomyConfig = _load_or_default(
            config.taxonomy, load_taxonomy, "taxonomy_default.csv"
        )
        self.rules: CategoryFilter = _load_or_default(
            config.rules, lambda fp: load_rules(fp, self.taxonomy), "rules_fine.csv"
        )
        self.table: AssignmentTable = _load_or_default(
            config.table, load_table, "team_assignment_table.json"
        )
        self.reviews: list[Review] = (
            _open_with(config.corpus, load_corpus) if config.corpus else []
        )
        self.lexicon: Lexicon = _load_or_default(
            config.lexicon, load_lexicon, "lexicon_default.csv"
        )
        articles = _open_with(config.articles, load_articles) if config.articles else []
        self.article_index: ArticleIndex = index_articles(articles)
        self.responses: list[PastResponse] = build_response_store(self.reviews)
        self.teams = _load_or_default(config.teams, load_teams, "teams.csv")

    # --- automation between human checkpoints ---

    def ingest(self, include_all: bool = False) -> list[str]:
        """Detect over the configured corpus and open cases (filter-flagged
        units only, unless include_all)."""
        if not self.reviews:
            raise DataError("service has no corpus configured")
        labels, _ = detect_corpus(self.reviews, self.lexicon)
        by_key = {r.key: r for r in self.reviews}
        created = []
        for label in labels:
            if not include_all and label.kind == NeedKind.NONE:
                continue
            if label.unit.unit_id in {c.case_id for c in self.store.cases()}:
                continue
            review = by_key[label.unit.review_ref]
            case = TriageCase(
                case_id=label.unit.unit_id,
                unit=label.unit,
                review_text=review.text,
                rating=review.rating,
                language=review.language,
            )
            self.store.create_case(case)
            self.store.apply(
                case.case_id,
                Action(
                    type=ActionType.AUTO_DETECT,
                    actor=Actor.system(),
                    payload={
                        "kind": label.kind.value,
                        "hits": [
                            {
                                "pattern": h.entry.pattern,
                                "kind": h.entry.kind.value,
                                "span": list(h.span),
                                "text": h.matched_text,
                            }
                            for h in label.hits
                        ],
                    },
                ),
            )
            created.append(case.case_id)
        return created

    def decide(
        self, case_id: str, actor: Actor, action_type: ActionType,
        version: int, payload: dict[str, Any],
    ) -> TriageCase:
        if action_type not in HUMAN_ACTIONS:
            raise DataError(f"{action_type.value} is not a reviewer decision")
        payload = dict(payload)
        if action_type == ActionType.CONFIRM_CATEGORY and "team_ranking" not in payload:
            category = payload.get("category")
            try:
                payload["team_ranking"] = assign(str(category), self.table)
            except DataError:
                payload["team_ranking"] = [META_TEAM]
        case = self.store.apply(
            case_id,
            Action(
                type=action_type,
                actor=actor,
                payload=payload,
                expected_version=version,
            ),
        )
        return self._automate(case)

    def _automate(self, case: TriageCase) -> TriageCase:
        """Run the system stage that follows a human decision, if any."""
        if case.state == CaseState.NEED_CONFIRMED and case.suggestion is None:
            suggestion = classify(case.review_text, self.rules)
            return self.store.apply(
                case.case_id,
                Action(
                    type=ActionType.SUGGEST_CATEGORY,
                    actor=Actor.system(),
                    payload={
                        "ranked": [[c, s] for c, s in suggestion.ranked],
                        "tags": list(suggestion.tags),
                    },
                ),
            )
        if case.state == CaseState.TEAM_ASSIGNED:
            candidates = resolve(
                case.review_text,
                case.store,
                case.app_id,
                self.article_index,
                self.responses,
                self.config.resolve,
            )
            return self.store.apply(
                case.case_id,
                Action(
                    type=ActionType.PROPOSE_SOURCES,
                    actor=Actor.system(),
                    payload={
                        "candidates": [
                            candidate_to_record(case.unit.unit_id, c) for c in candidates
                        ]
                    },
                ),
            )
        return case

    # --- reports ---

    def addressability(self) -> dict[str, Any]:
        record = addressability_report(self.store.cases()).as_record()
        ranked = [
            (case.team_ranking, case.confirmed_team)
            for case in self.store.cases()
            if case.team_ranking and case.confirmed_team
        ]
        record["team_hit_rate"] = (
            hierarchy_hit_rate(ranked).as_record() if ranked else None
        )
        return record

    def agreement(self) -> dict[str, Any]:
        if not self.config.evidence:
            return {"groups": [], "no_data": True}
        evidence = _open_with(self.config.evidence, load_evidence)
        groups = agreement_report(
            evidence, rollup_fn=lambda c: rollup_category(c, self.taxonomy)
        )
        return {"groups": [g.as_record() for g in groups], "no_data": not groups}

    def stats(self) -> dict[str, Any]:
        from .corpus import CorpusStats

        stats = CorpusStats()
        for case in self.store.cases():
            kind = case.filter_label.value if case.filter_label else "none"
            stats.add(case.app_id, case.store, kind)
        return {"rows": stats.as_records(), "cases": len(self.store)}


def _open_with(path: str, loader):
    try:
        with open(path, encoding="utf-8") as fp:
            return loader(fp)
    except FileNotFoundError:
        raise DataError(f"cannot read {path!r}: file not found") from None


def _load_or_default(path: str | None, loader, default_name: str):
    if path:
        return _open_with(path, loader)
    from importlib import resources

    with resources.files(_data).joinpath(default_name).open(encoding="utf-8") as fp:
        return loader(fp)


def _case_summary(case: TriageCase) -> dict[str, Any]:
    return {
        "case_id": case.case_id,
        "unit_id": case.unit.unit_id,
        "app_id": case.app_id,
        "store": case.store.value,
        "state": case.state.value,
        "version": case.version,
        "rating": case.rating,
        "language": case.language,
        "filter_label": case.filter_label.value if case.filter_label else None,
        "confirmed_label": case.confirmed_label.value if case.confirmed_label else None,
        "resolution": case.resolution.value if case.resolution else None,
        "snippet": case.review_text[:120],
    }


def _case_detail(service: TriageService, case: TriageCase) -> dict[str, Any]:
    record = case_to_record(case)
    record["allowed_actions"] = [
        a.value for a in allowed_actions(case.state) if a in HUMAN_ACTIONS
    ]
    record["audit"] = [event_to_record(e) for e in service.store.events(case.case_id)]
    detail = None
    if case.team_ranking is not None:
        shares = {
            e.team: e.percent
            for e in service.table.rows.get(case.confirmed_category or "", ())
        }
        detail = [
            {"team": team, "percent": shares.get(team)} for team in case.team_ranking
        ]
    record["team_ranking_detail"] = detail
    return record


def create_app(config: ServiceConfig) -> FastAPI:
    service = TriageService(config)
    app = FastAPI(title="reviewtriage", docs_url=None, redoc_url=None)
    app.state.service = service

    @app.exception_handler(VersionConflict)
    async def _conflict(request: Request, exc: VersionConflict):
        return JSONResponse(
            status_code=409,
            content={
                "error": "version-conflict",
                "detail": str(exc),
                "current_version": exc.actual,
            },
        )

    @app.exception_handler(IllegalTransition)
    async def _illegal(request: Request, exc: IllegalTransition):
        return JSONResponse(
            status_code=409,
            content={
                "error": "illegal-transition",
                "detail": str(exc),
                "state": exc.state,
                "action": exc.action,
            },
        )

    @app.exception_handler(TriageError)
    async def _data_error(request: Request, exc: TriageError):
        return JSONResponse(status_code=422, content={"error": "invalid", "detail": str(exc)})

    @app.get("/cases")
    def list_cases(
        state: str | None = None,
        app_id: str | None = Query(default=None, alias="app"),
        store: str | None = None,
        page: int = 1,
        page_size: int = 50,
    ):
        state_filter = CaseState(state) if state else None
        store_filter = StoreKind(store) if store else None
        cases = service.store.cases(state=state_filter, app=app_id, store=store_filter)
        if page < 1 or page_size < 1:
            raise DataError("page and page_size must be >= 1")
        start = (page - 1) * page_size
        return {
            "cases": [_case_summary(c) for c in cases[start : start + page_size]],
            "total": len(cases),
            "page": page,
            "page_size": page_size,
        }

    @app.get("/cases/{case_id}")
    def get_case(case_id: str):
        case = service.store.get(case_id)
        return _case_detail(service, case)

    @app.post("/cases/{case_id}/decision")
    def post_decision(
        case_id: str,
        body: dict[str, Any],
        x_actor: str | None = Header(default=None),
    ):
        if not x_actor:
            raise HTTPException(status_code=400, detail="X-Actor header is required")
        if not isinstance(body.get("version"), int):
            raise DataError("decision body needs an integer 'version'")
        try:
            action_type = ActionType(str(body.get("action")))
        except ValueError:
            raise DataError(f"unknown action {body.get('action')!r}") from None
        case = service.decide(
            case_id,
            Actor.human(x_actor),
            action_type,
            body["version"],
            body.get("payload") or {},
        )
        return _case_detail(service, case)

    @app.get("/meta")
    def meta():
        taxonomy = service.taxonomy
        return {
            "taxonomy": {
                "subcategories": list(taxonomy.subcategories),
                "supercategories": list(taxonomy.supercategories),
                "rollup": dict(taxonomy.rollup),
                "standalone": sorted(taxonomy.standalone),
            },
            "teams": [{"name": t.name, "description": t.description} for t in service.teams],
        }

    @app.get("/reports/addressability")
    def report_addressability():
        return service.addressability()

    @app.get("/reports/agreement")
    def report_agreement():
        return service.agreement()

    @app.get("/reports/stats")
    def report_stats():
        return service.stats()

    @app.post("/admin/ingest")
    def admin_ingest(body: dict[str, Any] | None = None):
        created = service.ingest(include_all=bool((body or {}).get("include_all")))
        return {"created": created, "count": len(created)}

    @app.post("/admin/derive-table")
    def admin_derive_table(body: dict[str, Any] | None = None):
        body = body or {}
        evidence_path = body.get("evidence") or service.config.evidence
        if not evidence_path:
            raise DataError("no evidence file configured or given")
        evidence = _open_with(evidence_path, load_evidence)
        table = derive_table(
            evidence,
            threshold=body.get("threshold", "1/4"),
            categories=service.taxonomy.subcategories,
            tie_order=body.get("tie_order"),
            consensus=bool(body.get("consensus")),
        )
        from .assignment import table_to_record

        return table_to_record(table)

    ui_dir = config.ui_dir
    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

        @app.get("/")
        def index():
            return RedirectResponse(url="/ui/")

    return app
