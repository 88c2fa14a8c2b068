"""Command-line entry point for the batch pipeline and the triage service.

Subcommands: ingest, detect, classify, assign, resolve, evaluate, report,
derive-table, export, similarity, serve, validate. All outputs are
deterministic; there is no randomness anywhere in the pipeline.

Exit codes: 0 success, 1 data errors, 2 usage errors.
"""

from __future__ import annotations

import json
import sys
from importlib import resources
from typing import Any, Iterable, TextIO

import click

from . import data as _data
from .assignment import (
    derive_table,
    load_evidence,
    load_table,
    load_teams,
    save_table,
)
from .corpus import (
    CorpusStats,
    ImportFormat,
    NeedUnit,
    Review,
    StoreKind,
    corpus_stats,
    dedupe,
    import_reviews,
    load_corpus,
    normalize_review,
    save_corpus,
    validate_units,
)
from .detect import (
    NeedKind,
    detect_corpus,
    label_to_record,
    load_lexicon,
    record_to_label,
)
from .errors import DataError, TriageError
from .metrics import (
    AggregationMode,
    ConfusionMatrix,
    RatingsTable,
    accuracy,
    aggregate_prf,
    cohen_kappa,
    fleiss_kappa,
    landis_koch,
    per_class_prf,
)
from .records import dumps, read_jsonl
from .service import ServiceConfig, create_app
from .sources import (
    ResolvePolicy,
    build_response_store,
    candidate_to_record,
    index_articles,
    load_articles,
    resolve as resolve_unit,
    similarity,
)
from .taxonomy import (
    classify as classify_text,
    evaluate_filter,
    load_rules,
    load_taxonomy,
    record_to_suggestion,
    rollup,
    suggestion_to_record,
)
from .workflow import CaseStore, addressability_report, agreement_report, export_evidence

ASSIGNMENT_SCHEMA = "team-assignment/1"


def _packaged(name: str):
    return resources.files(_data).joinpath(name).open(encoding="utf-8")


def _open_text(path: str) -> TextIO:
    try:
        return open(path, encoding="utf-8")
    except FileNotFoundError:
        raise DataError(f"cannot read {path!r}: file not found") from None


def _load_corpus(path: str) -> list[Review]:
    with _open_text(path) as fp:
        return load_corpus(fp)


def _load_labels(path: str):
    with _open_text(path) as fp:
        return [record_to_label(rec) for _, rec in read_jsonl(fp)]


def _write_json(path: str, payload: Any) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        json.dump(payload, fp, ensure_ascii=False, indent=2)
        fp.write("\n")


def _write_jsonl(path: str, records: Iterable[Any]) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fp:
        for rec in records:
            fp.write(dumps(rec))
            fp.write("\n")
            n += 1
    return n


def _read_label_csv(path: str, columns: tuple[str, ...]) -> list[dict[str, str]]:
    import csv as _csv
    import io as _io

    with _open_text(path) as fp:
        text = fp.read()
    lines = [l for l in text.splitlines() if l.strip() and not l.strip().startswith("#")]
    reader = _csv.DictReader(_io.StringIO("\n".join(lines)))
    if reader.fieldnames is None or not set(columns).issubset(reader.fieldnames):
        raise DataError(f"{path}: header must contain {list(columns)}")
    rows = []
    for row in reader:
        values = {k: (v or "").strip() for k, v in row.items() if k}
        if not all(values.get(k) for k in columns):
            raise DataError(f"{path}: row with blank field: {row}")
        rows.append(values)
    return rows


def _stats_table(stats: CorpusStats) -> str:
    header = f"{'App':<40}{'Explicit':>10}{'Implicit':>10}{'Potential':>11}{'None':>8}"
    lines = [header]
    for rec in stats.as_records():
        app = rec["app_id"] if rec["store"] == "*" else f"{rec['app_id']} ({rec['store']})"
        lines.append(
            f"{app:<40}{rec['explicit']:>10}{rec['implicit']:>10}"
            f"{rec['potential']:>11}{rec['none']:>8}"
        )
    return "\n".join(lines)


def _unit_text(unit: NeedUnit, review: Review) -> str:
    if unit.span is not None:
        return review.body[unit.span[0] : unit.span[1]]
    return review.text


_CONFIG_PATH_KEYS = (
    "corpus", "lexicon", "taxonomy", "rules", "table", "articles",
    "evidence", "labels", "suggestions", "mapping", "store_dir",
)


@click.group()
@click.option("--config", "config_path", default=None,
              help="pipeline config JSON; flags override its values")
@click.pass_context
def cli(ctx: click.Context, config_path: str | None) -> None:
    """Semi-automated explanation-need triage for app reviews."""
    config: dict[str, Any] = {}
    if config_path:
        with _open_text(config_path) as fp:
            try:
                config = json.load(fp)
            except json.JSONDecodeError as exc:
                raise DataError(f"pipeline config is not valid JSON: {exc.msg}") from exc
        import os

        for key in _CONFIG_PATH_KEYS:
            value = config.get(key)
            if value and not os.path.exists(value):
                raise DataError(f"config {key!r}: file {value!r} does not exist")
        out_dir = config.get("out_dir")
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
    ctx.obj = config


def _cfg(key: str, value):
    """Flag value if given, else the pipeline-config value."""
    if value not in (None, ""):
        return value
    ctx = click.get_current_context(silent=True)
    config = (ctx.obj if ctx else None) or {}
    return config.get(key)


def _cfg_required(key: str, value) -> str:
    resolved = _cfg(key, value)
    if not resolved:
        raise click.UsageError(f"missing --{key.replace('_', '-')} (flag or config)")
    return str(resolved)


def _cfg_out(value, default_name: str) -> str:
    """Explicit --out wins; otherwise the config's output directory."""
    if value:
        return str(value)
    ctx = click.get_current_context(silent=True)
    config = (ctx.obj if ctx else None) or {}
    out_dir = config.get("out_dir")
    if not out_dir:
        raise click.UsageError("missing --out (flag or config out_dir)")
    import os

    return os.path.join(out_dir, default_name)


@cli.command("ingest")
@click.option("--in", "in_path", required=True, help="store export file")
@click.option(
    "--format", "format_", type=click.Choice([f.value for f in ImportFormat]),
    default=ImportFormat.JSON_LINES.value, show_default=True,
)
@click.option("--store", type=click.Choice([s.value for s in StoreKind]), required=True)
@click.option("--mapping", default=None, help="column mapping JSON for delimited tables")
@click.option("--out", required=True, help="canonical corpus output (JSONL)")
@click.option("--report-out", default=None, help="import report output (JSON)")
def cmd_ingest(in_path: str, format_: str, store: str, mapping: str | None,
               out: str, report_out: str | None) -> None:
    """Import a store-export dump into the canonical corpus format."""
    mapping_cfg = None
    if mapping:
        with _open_text(mapping) as fp:
            mapping_cfg = json.load(fp)
    with open(in_path, "rb") as stream:
        reviews, report = import_reviews(stream, format_, store, mapping_cfg)
    normalized = [normalize_review(r) for r in reviews]
    unique = dedupe(normalized)
    with open(out, "w", encoding="utf-8") as fp:
        save_corpus(fp, unique)
    payload = {
        "accepted": report.accepted,
        "rejected": [{"line": r.line, "reason": r.reason} for r in report.rejected],
        "duplicates_removed": len(normalized) - len(unique),
        "written": len(unique),
    }
    if report_out:
        _write_json(report_out, payload)
    click.echo(
        f"accepted {report.accepted}, rejected {report.rejected_count}, "
        f"wrote {len(unique)} reviews"
    )


@cli.command("detect")
@click.option("--corpus", default=None)
@click.option("--lexicon", default=None, help="lexicon CSV (default: shipped starter)")
@click.option("--out", default=None, help="need-label output (JSONL)")
@click.option("--stats-out", default=None, help="per-app stats output (JSON)")
def cmd_detect(corpus: str | None, lexicon: str | None, out: str | None,
               stats_out: str | None) -> None:
    """Flag explanation needs in a corpus with the word/phrase lexicon."""
    corpus = _cfg_required("corpus", corpus)
    lexicon = _cfg("lexicon", lexicon)
    out = _cfg_out(out, "labels.jsonl")
    reviews = _load_corpus(corpus)
    with (_open_text(lexicon) if lexicon else _packaged("lexicon_default.csv")) as fp:
        lex = load_lexicon(fp)
    labels, stats = detect_corpus(reviews, lex)
    _write_jsonl(out, (label_to_record(l) for l in labels))
    if stats_out:
        _write_json(stats_out, {"rows": stats.as_records()})
    click.echo(_stats_table(stats))


@cli.command("classify")
@click.option("--corpus", default=None)
@click.option("--labels", default=None, help="need-label records from detect")
@click.option("--rules", default=None, help="rule CSV (default: shipped fine rules)")
@click.option("--taxonomy", "taxonomy_path", default=None)
@click.option("--out", default=None, help="category suggestions (JSONL)")
@click.option("--include-none", is_flag=True, help="also classify unflagged units")
def cmd_classify(corpus: str | None, labels: str | None, rules: str | None,
                 taxonomy_path: str | None, out: str | None, include_none: bool) -> None:
    """Suggest ranked taxonomy categories for labeled units."""
    corpus = _cfg_required("corpus", corpus)
    labels = _cfg_required("labels", labels)
    rules = _cfg("rules", rules)
    taxonomy_path = _cfg("taxonomy", taxonomy_path)
    out = _cfg_out(out, "suggestions.jsonl")
    reviews = _load_corpus(corpus)
    by_key = {r.key: r for r in reviews}
    with (_open_text(taxonomy_path) if taxonomy_path else _packaged("taxonomy_default.csv")) as fp:
        config = load_taxonomy(fp)
    with (_open_text(rules) if rules else _packaged("rules_fine.csv")) as fp:
        category_filter = load_rules(fp, config)
    records = []
    for label in _load_labels(labels):
        if label.kind == NeedKind.NONE and not include_none:
            continue
        review = by_key.get(label.unit.review_ref)
        if review is None:
            raise DataError(f"unit {label.unit.unit_id!r}: review not in corpus")
        suggestion = classify_text(_unit_text(label.unit, review), category_filter, label.unit)
        records.append(suggestion_to_record(suggestion))
    n = _write_jsonl(out, records)
    click.echo(f"classified {n} units")


@cli.command("assign")
@click.option("--suggestions", default=None, help="category suggestions from classify")
@click.option("--table", "table_path", default=None, help="assignment table JSON")
@click.option("--out", default=None, help="team assignments (JSONL)")
def cmd_assign(suggestions: str | None, table_path: str | None, out: str | None) -> None:
    """Annotate category suggestions with ranked reference-point teams."""
    from .assignment import META_TEAM, assign as assign_teams

    suggestions = _cfg_required("suggestions", suggestions)
    table_path = _cfg("table", table_path)
    out = _cfg_out(out, "assigned.jsonl")

    with (_open_text(table_path) if table_path else _packaged("team_assignment_table.json")) as fp:
        table = load_table(fp)
    records = []
    with _open_text(suggestions) as fp:
        for _, rec in read_jsonl(fp):
            suggestion = record_to_suggestion(rec)
            if suggestion.top is None:
                teams = [META_TEAM]
            else:
                teams = assign_teams(suggestion.top, table)
            records.append(
                {
                    "schema": ASSIGNMENT_SCHEMA,
                    "unit_id": suggestion.unit.unit_id,
                    "category": suggestion.top,
                    "teams": teams,
                }
            )
    n = _write_jsonl(out, records)
    click.echo(f"assigned teams for {n} units")


@cli.command("resolve")
@click.option("--corpus", default=None)
@click.option("--labels", default=None, help="need-label records from detect")
@click.option("--articles", default=None, help="support article store (JSONL)")
@click.option("--out", default=None, help="source candidates (JSONL)")
@click.option("--min-article-score", type=float, default=None,
              help="article-tier cutoff [config or 0.35]")
@click.option("--min-response-score", type=float, default=None,
              help="response-tier cutoff [config or 0.45]")
@click.option("--top-k", type=int, default=None, help="candidates per tier [config or 5]")
@click.option("--cross-store", is_flag=True, help="reuse responses across stores")
@click.option("--include-none", is_flag=True)
def cmd_resolve(corpus: str | None, labels: str | None, articles: str | None,
                out: str | None, min_article_score: float | None,
                min_response_score: float | None, top_k: int | None,
                cross_store: bool, include_none: bool) -> None:
    """Resolve answer sources through the article/response/new hierarchy."""
    corpus = _cfg_required("corpus", corpus)
    labels = _cfg_required("labels", labels)
    articles = _cfg("articles", articles)
    out = _cfg_out(out, "candidates.jsonl")

    def threshold(key: str, given: float | None, fallback: float) -> float:
        resolved = given if given is not None else _cfg(key, None)
        return fallback if resolved is None else float(resolved)

    min_article_score = threshold("min_article_score", min_article_score, 0.35)
    min_response_score = threshold("min_response_score", min_response_score, 0.45)
    top_k = int(threshold("top_k", top_k, 5))
    reviews = _load_corpus(corpus)
    by_key = {r.key: r for r in reviews}
    article_list = []
    if articles:
        with _open_text(articles) as fp:
            article_list = load_articles(fp)
    index = index_articles(article_list)
    responses = build_response_store(reviews)
    policy = ResolvePolicy(
        min_article_score=min_article_score,
        min_response_score=min_response_score,
        top_k=top_k,
        cross_store_responses=cross_store,
    )
    records = []
    for label in _load_labels(labels):
        if label.kind == NeedKind.NONE and not include_none:
            continue
        review = by_key.get(label.unit.review_ref)
        if review is None:
            raise DataError(f"unit {label.unit.unit_id!r}: review not in corpus")
        candidates = resolve_unit(
            _unit_text(label.unit, review), review.store, review.app_id,
            index, responses, policy,
        )
        for candidate in candidates:
            records.append(candidate_to_record(label.unit.unit_id, candidate))
    n = _write_jsonl(out, records)
    click.echo(f"wrote {n} source candidates")


@cli.group("evaluate")
def cmd_evaluate() -> None:
    """Evaluate predictions or rater agreement."""


@cmd_evaluate.command("labels")
@click.option("--pred", required=True, help="predicted labels")
@click.option(
    "--pred-format", type=click.Choice(["csv", "need-labels"]), default="csv",
    show_default=True, help="csv: unit_id,label rows; need-labels: detect output JSONL",
)
@click.option("--truth", required=True, help="CSV with unit_id,label")
@click.option("--out", default=None, help="report output (JSON)")
def cmd_evaluate_labels(pred: str, pred_format: str, truth: str, out: str | None) -> None:
    """Confusion-matrix metrics of predicted need labels vs ground truth."""
    if pred_format == "need-labels":
        pred_rows = {l.unit.unit_id: l.kind.value for l in _load_labels(pred)}
    else:
        pred_rows = {r["unit_id"]: r["label"] for r in _read_label_csv(pred, ("unit_id", "label"))}
    truth_rows = {r["unit_id"]: r["label"] for r in _read_label_csv(truth, ("unit_id", "label"))}
    missing = sorted(set(pred_rows) - set(truth_rows))
    if missing:
        raise DataError(f"units without truth: {missing[:5]}")
    pairs = [(truth_rows[u], pred_rows[u]) for u in sorted(pred_rows)]
    matrix = ConfusionMatrix.from_pairs(pairs)
    per_class = {
        label: per_class_prf(matrix, label) for label in matrix.labels
    }
    micro = aggregate_prf(matrix, AggregationMode.MICRO)
    macro = aggregate_prf(matrix, AggregationMode.MACRO)
    payload = {
        "labels": matrix.labels,
        "counts": matrix.counts,
        "per_class": {
            label: {
                "precision": float(m.precision),
                "recall": float(m.recall),
                "f1": float(m.f1),
            }
            for label, m in per_class.items()
        },
        "micro": {"precision": float(micro.precision), "recall": float(micro.recall), "f1": float(micro.f1)},
        "macro": {"precision": float(macro.precision), "recall": float(macro.recall), "f1": float(macro.f1)},
        "accuracy": accuracy(matrix),
    }
    if out:
        _write_json(out, payload)
    header = f"{'Metric':<12}" + "".join(f"{label:>14}" for label in matrix.labels)
    click.echo(header)
    for name in ("precision", "recall", "f1"):
        row = f"{name:<12}" + "".join(
            f"{getattr(per_class[label], name):>14.4f}" for label in matrix.labels
        )
        click.echo(row)
    click.echo(f"accuracy {payload['accuracy']:.4f}")


@cmd_evaluate.command("categories")
@click.option("--suggestions", required=True, help="suggestions from classify")
@click.option("--truth", required=True, help="CSV with unit_id,category")
@click.option("--beta", type=float, default=0.2, show_default=True)
@click.option("--out", default=None)
def cmd_evaluate_categories(suggestions: str, truth: str, beta: float, out: str | None) -> None:
    """Top-1 category filter evaluation with the precision-weighted F-beta."""
    with _open_text(suggestions) as fp:
        preds = [record_to_suggestion(rec) for _, rec in read_jsonl(fp)]
    truth_map = {
        r["unit_id"]: r["category"] for r in _read_label_csv(truth, ("unit_id", "category"))
    }
    evaluation = evaluate_filter(preds, truth_map, beta=beta)
    payload = evaluation.as_record()
    if out:
        _write_json(out, payload)
    click.echo(
        f"precision {payload['precision']:.4f}  recall {payload['recall']:.4f}  "
        f"f1 {payload['f1']:.4f}  accuracy {payload['accuracy']:.4f}  "
        f"f-beta({beta}) {payload['f_beta_paper']:.4f}"
    )


@cmd_evaluate.command("agreement")
@click.option("--ratings", required=True, help="CSV with unit_id,rater,label")
@click.option("--out", default=None)
def cmd_evaluate_agreement(ratings: str, out: str | None) -> None:
    """Cohen's kappa for two raters, Fleiss' kappa for more."""
    rows = _read_label_csv(ratings, ("unit_id", "rater", "label"))
    by_unit: dict[str, dict[str, str]] = {}
    for row in rows:
        votes = by_unit.setdefault(row["unit_id"], {})
        if row["rater"] in votes:
            raise DataError(f"rater {row['rater']!r} rated unit {row['unit_id']!r} twice")
        votes[row["rater"]] = row["label"]
    rater_sets = {tuple(sorted(v)) for v in by_unit.values()}
    counts = {len(rs) for rs in rater_sets}
    if len(counts) != 1:
        raise DataError(f"rater count varies across units: {sorted(counts)}")
    n_raters = counts.pop()
    if n_raters < 2:
        raise DataError("agreement needs at least two raters per unit")
    units = sorted(by_unit)
    if len(rater_sets) == 1 and n_raters == 2:
        raters = sorted(next(iter(rater_sets)))
        kappa = cohen_kappa([(by_unit[u][raters[0]], by_unit[u][raters[1]]) for u in units])
        statistic = "cohen"
    else:
        table = RatingsTable.from_labels(
            [(u, list(by_unit[u].values())) for u in units]
        )
        kappa = fleiss_kappa(table)
        statistic = "fleiss"
    band = landis_koch(kappa)
    payload = {
        "statistic": statistic,
        "n_units": len(units),
        "n_raters": n_raters,
        "kappa": float(kappa),
        "band": band.value,
        "degenerate": kappa.degenerate,
    }
    if out:
        _write_json(out, payload)
    click.echo(f"{statistic} kappa {float(kappa):.4f} ({band.value})")


@cmd_evaluate.command("granularity")
@click.option("--sub", "sub_path", required=True,
              help="CSV with unit_id,predicted,truth[,set] at subcategory level")
@click.option("--super", "super_path", required=True,
              help="CSV with the same units at supercategory level")
@click.option("--out", default=None)
def cmd_evaluate_granularity(sub_path: str, super_path: str, out: str | None) -> None:
    """Per-set validity at subcategory vs supercategory level."""
    from .taxonomy import compare_granularity

    def read_sets(path: str) -> dict[str, list[tuple[str, str, str]]]:
        sets: dict[str, list[tuple[str, str, str]]] = {}
        for row in _read_label_csv(path, ("unit_id", "predicted", "truth")):
            name = row.get("set") or "all"
            sets.setdefault(name, []).append(
                (row["unit_id"], row["predicted"], row["truth"])
            )
        return sets

    report = compare_granularity(read_sets(sub_path), read_sets(super_path))
    payload = report.as_record()
    if out:
        _write_json(out, payload)
    for name, delta in payload.items():
        if delta["no_data"]:
            click.echo(f"{name}: no data")
        else:
            click.echo(
                f"{name}: sub {delta['sub_validity']:.2f}% -> "
                f"super {delta['super_validity']:.2f}% (delta {delta['delta']:+.2f}pp)"
            )


@cli.group("report")
def cmd_report() -> None:
    """Workflow and corpus reports."""


@cmd_report.command("addressability")
@click.option("--store-dir", required=True)
@click.option("--out", default=None)
def cmd_report_addressability(store_dir: str, out: str | None) -> None:
    """How much of the confirmed explanation need was resolved."""
    store = CaseStore(store_dir)
    report = addressability_report(store.cases())
    payload = report.as_record()
    if out:
        _write_json(out, payload)
    if report.no_data:
        click.echo("no data: no terminal confirmed-need cases")
    else:
        click.echo(
            f"resolved {report.resolved}/{report.confirmed_terminal} "
            f"({report.resolved_percent_display}%), in flight {report.in_flight}, "
            f"no need {report.no_need}"
        )


@cmd_report.command("agreement")
@click.option("--evidence", required=True, help="evidence CSV")
@click.option("--taxonomy", "taxonomy_path", default=None)
@click.option("--out", default=None)
def cmd_report_agreement(evidence: str, taxonomy_path: str | None, out: str | None) -> None:
    """Inter-rater agreement over assignment evidence, by rater group."""
    with _open_text(evidence) as fp:
        ev = load_evidence(fp)
    with (_open_text(taxonomy_path) if taxonomy_path else _packaged("taxonomy_default.csv")) as fp:
        config = load_taxonomy(fp)
    groups = agreement_report(ev, rollup_fn=lambda c: rollup(c, config))
    payload = {"groups": [g.as_record() for g in groups], "no_data": not groups}
    if out:
        _write_json(out, payload)
    if not groups:
        click.echo("no data: no multi-rater groups in evidence")
    for group in groups:
        click.echo(
            f"raters {','.join(group.raters)} ({group.n_units} units, {group.statistic}): "
            f"category k={group.category_kappa:.3f} ({group.category_band}), "
            f"team k={group.team_kappa:.3f} ({group.team_band})"
        )


@cmd_report.command("stats")
@click.option("--labels", required=True)
@click.option("--corpus", required=True)
@click.option("--out", default=None)
def cmd_report_stats(labels: str, corpus: str, out: str | None) -> None:
    """Per-app need counts from labeled units."""
    reviews = _load_corpus(corpus)
    labeled = [(l.unit, l.kind.value) for l in _load_labels(labels)]
    stats = corpus_stats(labeled, reviews)
    if out:
        _write_json(out, {"rows": stats.as_records()})
    click.echo(_stats_table(stats))


@cli.command("derive-table")
@click.option("--evidence", required=True)
@click.option("--threshold", default="1/4", show_default=True)
@click.option("--taxonomy", "taxonomy_path", default=None,
              help="declare all taxonomy subcategories as table rows")
@click.option("--tie-order", "tie_order_path", default=None, help="JSON tie-order overrides")
@click.option("--teams", "teams_path", default=None, help="teams CSV for vote validation")
@click.option("--consensus", is_flag=True, help="pre-aggregate to one vote per unit")
@click.option("--out", required=True)
def cmd_derive_table(evidence: str, threshold: str, taxonomy_path: str | None,
                     tie_order_path: str | None, teams_path: str | None,
                     consensus: bool, out: str) -> None:
    """Derive the category-to-team table from assignment evidence."""
    with _open_text(evidence) as fp:
        ev = load_evidence(fp)
    categories = None
    if taxonomy_path:
        with _open_text(taxonomy_path) as fp:
            categories = load_taxonomy(fp).subcategories
    tie_order = None
    if tie_order_path:
        with _open_text(tie_order_path) as fp:
            tie_order = json.load(fp)
    teams = None
    if teams_path:
        with _open_text(teams_path) as fp:
            teams = load_teams(fp)
    table = derive_table(
        ev, threshold=threshold, categories=categories,
        tie_order=tie_order, teams=teams, consensus=consensus,
    )
    with open(out, "w", encoding="utf-8") as fp:
        save_table(fp, table)
    click.echo(f"derived table with {len(table.rows)} categories")


@cli.group("export")
def cmd_export() -> None:
    """Export workflow data."""


@cmd_export.command("evidence")
@click.option("--store-dir", required=True)
@click.option("--out", required=True)
def cmd_export_evidence(store_dir: str, out: str) -> None:
    """Export confirmed category/team decisions as assignment evidence."""
    import csv as _csv

    store = CaseStore(store_dir)
    evidence = export_evidence(store.cases())
    with open(out, "w", encoding="utf-8", newline="") as fp:
        writer = _csv.writer(fp)
        writer.writerow(["unit_id", "category", "team", "rater"])
        for rec in evidence.records:
            writer.writerow([rec.unit_id, rec.category, rec.team, rec.rater])
    click.echo(f"exported {len(evidence.records)} evidence records")


@cli.command("similarity")
@click.argument("file_a")
@click.argument("file_b")
def cmd_similarity(file_a: str, file_b: str) -> None:
    """Score two text files with the sequence-similarity ratio (debug aid)."""
    with _open_text(file_a) as fp:
        a = fp.read()
    with _open_text(file_b) as fp:
        b = fp.read()
    click.echo(f"{similarity(a, b):.6f}")


@cli.command("serve")
@click.option("--port", type=int, default=8400, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--store-dir", "--store", default=None, envvar="REVIEWTRIAGE_STORE")
@click.option("--config", "config_path", default=None, help="service config JSON")
@click.option("--corpus", default=None)
@click.option("--articles", default=None)
@click.option("--evidence", default=None)
@click.option("--ui", "ui_dir", default=None, help="built UI directory to serve at /ui")
def cmd_serve(port: int, host: str, store_dir: str | None, config_path: str | None,
              corpus: str | None, articles: str | None, evidence: str | None,
              ui_dir: str | None) -> None:
    """Run the triage HTTP service."""
    import uvicorn

    if config_path:
        config = ServiceConfig.from_file(config_path)
    elif store_dir:
        config = ServiceConfig(store_dir=store_dir)
    else:
        raise DataError("serve needs --store-dir or --config")
    for name, value in (
        ("corpus", corpus), ("articles", articles),
        ("evidence", evidence), ("ui_dir", ui_dir),
    ):
        if value:
            setattr(config, name, value)
    app = create_app(config)
    uvicorn.run(app, host=host, port=port, log_level="warning")


@cli.command("validate")
@click.option("--corpus", default=None, help="also validate this corpus file")
@click.option("--lexicon", default=None, help="also validate this lexicon file")
def cmd_validate(corpus: str | None, lexicon: str | None) -> None:
    """Validate the shipped fixtures (and optionally operator files)."""
    with _packaged("lexicon_default.csv") as fp:
        lex = load_lexicon(fp)
    click.echo(f"lexicon: {len(lex.entries)} entries")
    with _packaged("taxonomy_default.csv") as fp:
        config = load_taxonomy(fp)
    click.echo(
        f"taxonomy: {len(config.subcategories)} subcategories, "
        f"{len(config.supercategories)} supercategories"
    )
    for name in ("rules_fine.csv", "rules_broad.csv"):
        with _packaged(name) as fp:
            rules = load_rules(fp, config)
        click.echo(f"{name}: {len(rules.rules)} rules ({rules.granularity.value})")
    with _packaged("teams.csv") as fp:
        teams = load_teams(fp)
    click.echo(f"teams: {len(teams)}")
    with _packaged("team_assignment_evidence.csv") as fp:
        evidence = load_evidence(fp)
    with _packaged("team_assignment_tie_order.json") as fp:
        tie_order = json.load(fp)
    with _packaged("team_assignment_table.json") as fp:
        table = load_table(fp)
    derived = derive_table(
        evidence, threshold=table.threshold,
        categories=sorted(table.rows), tie_order=tie_order, teams=teams,
    )
    if derived.rows != table.rows:
        raise DataError("shipped table does not match its evidence fixture")
    click.echo(f"assignment table: {len(table.rows)} categories, consistent with evidence")
    if corpus:
        reviews = _load_corpus(corpus)
        validate_units([], reviews)
        click.echo(f"corpus {corpus}: {len(reviews)} reviews")
    if lexicon:
        with _open_text(lexicon) as fp:
            user_lex = load_lexicon(fp)
        click.echo(f"lexicon {lexicon}: {len(user_lex.entries)} entries")
    click.echo("ok")


def main(argv: list[str] | None = None) -> int:
    """Entry point with the documented exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.UsageError as exc:
        exc.show(file=sys.stderr)
        return 2
    except click.exceptions.Abort:
        return 130
    except click.exceptions.ClickException as exc:
        exc.show(file=sys.stderr)
        return 1
    except TriageError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
