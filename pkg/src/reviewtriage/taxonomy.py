"""Explanation-need taxonomy: subcategory/supercategory configuration,
keyword-rule classification into ranked category suggestions, and
granularity comparison reports.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, BinaryIO, Mapping, Sequence, TextIO

from .corpus import NeedUnit
from .detect import _WORD_RE, MatchMode
from .errors import DataError
from .metrics import FBetaVariant, MetricValue, f_beta

TIMING_TAG = "Timing"


@dataclass(frozen=True)
class TaxonomyConfig:
    subcategories: tuple[str, ...]
    supercategories: tuple[str, ...]
    rollup: Mapping[str, str]
    standalone: frozenset[str]
    version: str = ""

    def __post_init__(self) -> None:
        for sub in self.subcategories:
            in_rollup = sub in self.rollup
            is_standalone = sub in self.standalone
            if in_rollup == is_standalone:
                kind = "both rolled up and standalone" if in_rollup else "neither rolled up nor standalone"
                raise DataError(f"subcategory {sub!r} is {kind}")
        for sub, sup in self.rollup.items():
            if sup not in self.supercategories:
                raise DataError(f"rollup of {sub!r} references unknown supercategory {sup!r}")


def load_taxonomy(stream: BinaryIO | TextIO) -> TaxonomyConfig:
    """Load a taxonomy config file.

    Expected header: name,role,parent. role is 'supercategory' or
    'subcategory'; a subcategory with an empty parent is standalone.
    '#' comment lines are allowed; '# version:' sets the config version.
    """
    data = stream.read()
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    version = ""
    lines = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            comment = stripped.lstrip("#").strip()
            if comment.lower().startswith("version:"):
                version = comment.split(":", 1)[1].strip()
            continue
        if stripped:
            lines.append(line)
    reader = csv.DictReader(io.StringIO("\n".join(lines)))
    if reader.fieldnames is None or not {"name", "role", "parent"}.issubset(reader.fieldnames):
        raise DataError(f"taxonomy header must contain name,role,parent, got {reader.fieldnames}")
    supercategories: list[str] = []
    subcategories: list[str] = []
    rollup: dict[str, str] = {}
    standalone: set[str] = set()
    for row in reader:
        name = (row.get("name") or "").strip()
        role = (row.get("role") or "").strip().lower()
        parent = (row.get("parent") or "").strip()
        if not name:
            raise DataError("taxonomy row with empty name")
        if role == "supercategory":
            if name in supercategories:
                raise DataError(f"supercategory {name!r} declared twice")
            supercategories.append(name)
        elif role == "subcategory":
            if name in subcategories:
                raise DataError(f"subcategory {name!r} has two homes")
            subcategories.append(name)
            if parent:
                rollup[name] = parent
            else:
                standalone.add(name)
        else:
            raise DataError(f"unknown taxonomy role {role!r} for {name!r}")
    return TaxonomyConfig(
        subcategories=tuple(subcategories),
        supercategories=tuple(supercategories),
        rollup=rollup,
        standalone=frozenset(standalone),
        version=version,
    )


def rollup(category: str, config: TaxonomyConfig) -> str:
    """Map a subcategory to its supercategory; standalone categories and
    supercategories map to themselves."""
    if category in config.rollup:
        return config.rollup[category]
    if category in config.standalone or category in config.supercategories:
        return category
    raise DataError(f"category {category!r} not declared in taxonomy")


class Granularity(str, Enum):
    FINE = "fine"
    BROAD = "broad"


class SuggestedBy(str, Enum):
    FILTER = "filter"
    HUMAN = "human"


@dataclass(frozen=True)
class CategoryRule:
    pattern: str
    match_mode: MatchMode
    categories: tuple[str, ...] = ()
    tags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.pattern:
            raise DataError("category rule with empty pattern")
        if not self.categories and not self.tags:
            raise DataError(f"rule {self.pattern!r} maps to nothing")


@dataclass(frozen=True)
class CategoryFilter:
    granularity: Granularity
    rules: tuple[CategoryRule, ...]
    version: str = ""

    def __post_init__(self) -> None:
        for rule in self.rules:
            if self.granularity == Granularity.FINE and len(rule.categories) > 1:
                raise DataError(
                    f"fine rule {rule.pattern!r} maps to {len(rule.categories)} subcategories"
                )


@dataclass(frozen=True)
class CategorySuggestion:
    ranked: tuple[tuple[str, int], ...]
    suggested_by: SuggestedBy = SuggestedBy.FILTER
    unit: NeedUnit | None = None
    tags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        scores = [score for _, score in self.ranked]
        if any(s < 1 for s in scores) and self.suggested_by == SuggestedBy.FILTER:
            raise DataError("filter suggestion scores must be >= 1")
        if scores != sorted(scores, reverse=True):
            raise DataError("suggestion ranking is not sorted by score")

    @property
    def top(self) -> str | None:
        return self.ranked[0][0] if self.ranked else None


def load_rules(
    stream: BinaryIO | TextIO, config: TaxonomyConfig | None = None
) -> CategoryFilter:
    """Load a category rule file.

    Expected header: pattern,match_mode,categories. The categories column
    is ';'-separated; entries prefixed 'tag:' declare tags instead of
    categories. '# granularity:' and '# version:' comments are required
    and optional respectively.
    """
    data = stream.read()
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    version = ""
    granularity: Granularity | None = None
    lines = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            comment = stripped.lstrip("#").strip()
            lower = comment.lower()
            if lower.startswith("version:"):
                version = comment.split(":", 1)[1].strip()
            elif lower.startswith("granularity:"):
                token = comment.split(":", 1)[1].strip().lower()
                try:
                    granularity = Granularity(token)
                except ValueError:
                    raise DataError(f"unknown granularity {token!r}") from None
            continue
        if stripped:
            lines.append(line)
    if granularity is None:
        raise DataError("rule file missing '# granularity: fine|broad' comment")
    reader = csv.DictReader(io.StringIO("\n".join(lines)))
    if reader.fieldnames is None or not {"pattern", "match_mode", "categories"}.issubset(
        reader.fieldnames
    ):
        raise DataError(
            f"rule header must contain pattern,match_mode,categories, got {reader.fieldnames}"
        )
    rules = []
    for row in reader:
        pattern = " ".join((row.get("pattern") or "").casefold().split())
        if not pattern:
            raise DataError("rule with empty pattern")
        mode_token = (row.get("match_mode") or "").strip().lower()
        try:
            mode = MatchMode(mode_token)
        except ValueError:
            raise DataError(f"rule {pattern!r}: unknown match_mode {mode_token!r}") from None
        categories = []
        tags = []
        for item in (row.get("categories") or "").split(";"):
            item = item.strip()
            if not item:
                continue
            if item.lower().startswith("tag:"):
                tags.append(item.split(":", 1)[1].strip())
            else:
                categories.append(item)
        if config is not None:
            for cat in categories:
                if cat not in config.subcategories:
                    raise DataError(f"rule {pattern!r}: unknown subcategory {cat!r}")
        rules.append(
            CategoryRule(
                pattern=pattern,
                match_mode=mode,
                categories=tuple(categories),
                tags=tuple(tags),
            )
        )
    return CategoryFilter(granularity=granularity, rules=tuple(rules), version=version)


def _pattern_occurrences(text: str, tokens: Sequence[tuple[int, int, str]], pattern: str) -> int:
    """Count word-boundary occurrences of a normalized pattern."""
    pattern_tokens = _WORD_RE.findall(pattern)
    if not pattern_tokens:
        return 0
    width = len(pattern_tokens)
    count = 0
    for k in range(len(tokens) - width + 1):
        if any(tokens[k + i][2] != pattern_tokens[i] for i in range(width)):
            continue
        start, end = tokens[k][0], tokens[k + width - 1][1]
        if text[start:end].casefold() == pattern:
            count += 1
    return count


def classify(
    unit_text: str,
    category_filter: CategoryFilter,
    unit: NeedUnit | None = None,
) -> CategorySuggestion:
    """Score subcategories by rule-hit counts over normalized unit text.

    Ranking is score-descending with a lexicographic tie-break, so results
    do not depend on rule file order.
    """
    tokens = [(m.start(), m.end(), m.group().casefold()) for m in _WORD_RE.finditer(unit_text)]
    scores: dict[str, int] = {}
    tags: set[str] = set()
    for rule in category_filter.rules:
        n = _pattern_occurrences(unit_text, tokens, rule.pattern)
        if n == 0:
            continue
        for cat in rule.categories:
            scores[cat] = scores.get(cat, 0) + n
        tags.update(rule.tags)
    ranked = tuple(sorted(scores.items(), key=lambda item: (-item[1], item[0])))
    return CategorySuggestion(
        ranked=ranked,
        suggested_by=SuggestedBy.FILTER,
        unit=unit,
        tags=tuple(sorted(tags)),
    )


@dataclass
class FilterEvaluation:
    n_units: int
    n_predicted: int
    n_correct: int
    precision: MetricValue
    recall: MetricValue
    f1: MetricValue
    accuracy: MetricValue
    f_beta_paper: MetricValue
    beta: float

    def as_record(self) -> dict[str, Any]:
        return {
            "n_units": self.n_units,
            "n_predicted": self.n_predicted,
            "n_correct": self.n_correct,
            "precision": float(self.precision),
            "recall": float(self.recall),
            "f1": float(self.f1),
            "accuracy": float(self.accuracy),
            "f_beta_paper": float(self.f_beta_paper),
            "beta": self.beta,
        }


def evaluate_filter(
    predictions: Sequence[CategorySuggestion],
    truth: Mapping[str, str],
    beta: float = 0.2,
) -> FilterEvaluation:
    """Score top-1 predictions against ground truth.

    Units with an empty ranking count as unpredicted: they hurt recall and
    accuracy but not precision.
    """
    n_units = len(predictions)
    n_predicted = 0
    n_correct = 0
    for suggestion in predictions:
        if suggestion.unit is None:
            raise DataError("evaluate_filter needs suggestions tied to units")
        unit_id = suggestion.unit.unit_id
        if unit_id not in truth:
            raise DataError(f"unit {unit_id!r} has no truth entry")
        if suggestion.top is None:
            continue
        n_predicted += 1
        if suggestion.top == truth[unit_id]:
            n_correct += 1
    precision = (
        MetricValue(0.0, degenerate=True)
        if n_predicted == 0
        else MetricValue(n_correct / n_predicted)
    )
    recall = (
        MetricValue(0.0, degenerate=True) if n_units == 0 else MetricValue(n_correct / n_units)
    )
    if precision + recall == 0:
        f1 = MetricValue(0.0, degenerate=True)
    else:
        f1 = MetricValue(2 * precision * recall / (precision + recall))
    fb = f_beta(float(precision), float(recall), beta, FBetaVariant.PAPER)
    return FilterEvaluation(
        n_units=n_units,
        n_predicted=n_predicted,
        n_correct=n_correct,
        precision=precision,
        recall=recall,
        f1=f1,
        accuracy=recall,
        f_beta_paper=fb,
        beta=beta,
    )


@dataclass
class SetDelta:
    n_units: int
    sub_validity: float | None
    super_validity: float | None
    delta: float | None

    @property
    def no_data(self) -> bool:
        return self.n_units == 0


@dataclass
class DeltaReport:
    sets: dict[str, SetDelta] = field(default_factory=dict)

    def as_record(self) -> dict[str, Any]:
        return {
            name: {
                "n_units": d.n_units,
                "sub_validity": d.sub_validity,
                "super_validity": d.super_validity,
                "delta": d.delta,
                "no_data": d.no_data,
            }
            for name, d in self.sets.items()
        }


def compare_granularity(
    sub_results: Mapping[str, Sequence[tuple[str, str, str]]],
    super_results: Mapping[str, Sequence[tuple[str, str, str]]],
) -> DeltaReport:
    """Compare per-set validity at subcategory and supercategory level.

    Both inputs map a set name to (unit_id, predicted, truth) rows over the
    same units; validity is the percentage of exact matches.
    """
    if set(sub_results) != set(super_results):
        raise DataError("granularity comparison needs identical set names")
    report = DeltaReport()
    for name in sorted(sub_results):
        sub_rows = list(sub_results[name])
        super_rows = list(super_results[name])
        sub_units = sorted(unit for unit, _, _ in sub_rows)
        super_units = sorted(unit for unit, _, _ in super_rows)
        if sub_units != super_units:
            raise DataError(f"set {name!r}: unit sets differ between granularities")
        n = len(sub_rows)
        if n == 0:
            report.sets[name] = SetDelta(0, None, None, None)
            continue
        sub_validity = 100.0 * sum(1 for _, p, t in sub_rows if p == t) / n
        super_validity = 100.0 * sum(1 for _, p, t in super_rows if p == t) / n
        report.sets[name] = SetDelta(n, sub_validity, super_validity, super_validity - sub_validity)
    return report


# --- record round-trip -------------------------------------------------------

SUGGESTION_SCHEMA = "category-suggestion/1"


def suggestion_to_record(suggestion: CategorySuggestion) -> dict[str, Any]:
    if suggestion.unit is None:
        raise DataError("cannot serialize a suggestion without a unit")
    store, app_id, review_id = suggestion.unit.review_ref
    return {
        "schema": SUGGESTION_SCHEMA,
        "unit_id": suggestion.unit.unit_id,
        "store": store.value,
        "app_id": app_id,
        "review_id": review_id,
        "ordinal": suggestion.unit.ordinal,
        "ranked": [[cat, score] for cat, score in suggestion.ranked],
        "tags": list(suggestion.tags),
        "suggested_by": suggestion.suggested_by.value,
    }


def record_to_suggestion(record: dict[str, Any]) -> CategorySuggestion:
    if record.get("schema") != SUGGESTION_SCHEMA:
        raise DataError(f"not a {SUGGESTION_SCHEMA} record: {record.get('schema')!r}")
    from .corpus import StoreKind

    unit = NeedUnit(
        unit_id=record["unit_id"],
        review_ref=(StoreKind(record["store"]), record["app_id"], record["review_id"]),
        ordinal=record.get("ordinal", 1),
    )
    return CategorySuggestion(
        ranked=tuple((cat, score) for cat, score in record.get("ranked", ())),
        suggested_by=SuggestedBy(record.get("suggested_by", "filter")),
        unit=unit,
        tags=tuple(record.get("tags", ())),
    )
