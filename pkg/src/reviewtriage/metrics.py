"""Evaluation mathematics: confusion-matrix metrics, F-beta scores,
chance-corrected agreement (Cohen's and Fleiss' kappa), Landis-Koch
interpretation bands, and validity percentages.

All functions are pure. Metrics that can hit a zero denominator return 0.0
flagged as degenerate instead of NaN, so report code stays arithmetic-safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .errors import DataError


class MetricValue(float):
    """A float metric carrying a flag for zero-denominator conventions."""

    degenerate: bool

    def __new__(cls, value: float, degenerate: bool = False) -> "MetricValue":
        obj = super().__new__(cls, value)
        obj.degenerate = degenerate
        return obj


@dataclass(frozen=True)
class ClassMetrics:
    precision: MetricValue
    recall: MetricValue
    f1: MetricValue


class FBetaVariant(str, Enum):
    STANDARD = "standard"
    PAPER = "paper"


class AgreementBand(str, Enum):
    POOR = "Poor"
    SLIGHT = "Slight"
    FAIR = "Fair"
    MODERATE = "Moderate"
    SUBSTANTIAL = "Substantial"
    ALMOST_PERFECT = "AlmostPerfect"


class AggregationMode(str, Enum):
    MICRO = "micro"
    MACRO = "macro"


@dataclass
class ConfusionMatrix:
    """Square multi-class confusion matrix; rows are truth, columns are
    predictions."""

    labels: list[str]
    counts: list[list[int]]

    def __post_init__(self) -> None:
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise DataError("confusion matrix labels must be unique")
        if len(self.counts) != n or any(len(row) != n for row in self.counts):
            raise DataError("confusion matrix counts must be square over labels")
        for row in self.counts:
            for c in row:
                if not isinstance(c, int) or c < 0:
                    raise DataError(f"confusion count {c!r} is not a non-negative int")

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[str, str]], labels: Sequence[str] | None = None
    ) -> "ConfusionMatrix":
        """Build a matrix from (truth, prediction) pairs.

        Labels not given explicitly are the sorted union of observed labels.
        """
        pairs = list(pairs)
        if labels is None:
            seen = {t for t, _ in pairs} | {p for _, p in pairs}
            labels = sorted(seen)
        index = {lab: i for i, lab in enumerate(labels)}
        counts = [[0] * len(labels) for _ in labels]
        for truth, pred in pairs:
            if truth not in index:
                raise DataError(f"truth label {truth!r} not in matrix labels")
            if pred not in index:
                raise DataError(f"predicted label {pred!r} not in matrix labels")
        for truth, pred in pairs:
            counts[index[truth]][index[pred]] += 1
        return cls(labels=list(labels), counts=counts)

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    def _index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise DataError(f"label {label!r} not declared in matrix") from None


def _ratio(num: int, den: int) -> MetricValue:
    if den == 0:
        return MetricValue(0.0, degenerate=True)
    return MetricValue(num / den)


def per_class_prf(m: ConfusionMatrix, label: str) -> ClassMetrics:
    """One-vs-rest precision, recall and F1 for a single class."""
    i = m._index(label)
    tp = m.counts[i][i]
    fp = sum(m.counts[r][i] for r in range(len(m.labels))) - tp
    fn = sum(m.counts[i]) - tp
    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    if precision + recall == 0:
        f1 = MetricValue(0.0, degenerate=True)
    else:
        f1 = MetricValue(
            2 * precision * recall / (precision + recall),
            degenerate=precision.degenerate or recall.degenerate,
        )
    return ClassMetrics(precision, recall, f1)


def accuracy(m: ConfusionMatrix) -> float:
    total = m.total
    if total == 0:
        raise DataError("accuracy is undefined on an empty confusion matrix")
    trace = sum(m.counts[i][i] for i in range(len(m.labels)))
    return trace / total


def aggregate_prf(m: ConfusionMatrix, mode: AggregationMode) -> ClassMetrics:
    """Pool counts (micro) or average per-class metrics (macro)."""
    if m.total == 0:
        raise DataError("aggregate metrics undefined on an empty confusion matrix")
    n = len(m.labels)
    if mode == AggregationMode.MICRO:
        tp = sum(m.counts[i][i] for i in range(n))
        fp = sum(sum(m.counts[r][i] for r in range(n)) - m.counts[i][i] for i in range(n))
        fn = sum(sum(m.counts[i]) - m.counts[i][i] for i in range(n))
        precision = _ratio(tp, tp + fp)
        recall = _ratio(tp, tp + fn)
        if precision + recall == 0:
            f1 = MetricValue(0.0, degenerate=True)
        else:
            f1 = MetricValue(2 * precision * recall / (precision + recall))
        return ClassMetrics(precision, recall, f1)
    per_class = [per_class_prf(m, lab) for lab in m.labels]
    def mean(values: list[MetricValue]) -> MetricValue:
        return MetricValue(
            sum(values) / len(values), degenerate=any(v.degenerate for v in values)
        )
    return ClassMetrics(
        mean([c.precision for c in per_class]),
        mean([c.recall for c in per_class]),
        mean([c.f1 for c in per_class]),
    )


def f_beta(
    p: float,
    r: float,
    beta: float,
    variant: FBetaVariant = FBetaVariant.STANDARD,
) -> MetricValue:
    """Precision-weighted F-score.

    standard: (1 + b^2) * p * r / (b^2 * p + r)
    paper:    (1 + b)   * p * r / (b * p + r)

    The paper variant drops the squaring of beta; it is what the shipped
    category-filter reports use at beta = 0.2.
    """
    if not (0.0 <= p <= 1.0 and 0.0 <= r <= 1.0):
        raise DataError("precision and recall must lie in [0, 1]")
    if beta <= 0:
        raise DataError("beta must be positive")
    if p == 0 and r == 0:
        return MetricValue(0.0, degenerate=True)
    if variant == FBetaVariant.STANDARD:
        weight = beta * beta
    else:
        weight = beta
    return MetricValue((1 + weight) * p * r / (weight * p + r))


def cohen_kappa(pairs: Sequence[tuple[str, str]]) -> MetricValue:
    """Cohen's kappa between two raters.

          po - pe
    k = -----------
          1 - pe

    po is the observed agreement rate; pe the chance agreement implied by
    the two raters' marginal label distributions. When pe is 1 (both raters
    unanimous on one label) the result is 1.0 flagged degenerate.
    """
    if not pairs:
        raise DataError("cohen_kappa needs at least one pair of labels")
    n = len(pairs)
    po = sum(1 for a, b in pairs if a == b) / n
    labels = {a for a, _ in pairs} | {b for _, b in pairs}
    pe = 0.0
    for lab in labels:
        pa = sum(1 for a, _ in pairs if a == lab) / n
        pb = sum(1 for _, b in pairs if b == lab) / n
        pe += pa * pb
    if pe == 1.0:
        return MetricValue(1.0, degenerate=True)
    return MetricValue((po - pe) / (1 - pe))


@dataclass
class RatingsTable:
    """Vote counts per item and category, for multi-rater agreement.

    votes[i][j] is how many raters put item i into category j. Fleiss'
    kappa requires the same number of ratings on every item.
    """

    items: list[str]
    categories: list[str]
    votes: list[list[int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if len(self.votes) != len(self.items):
            raise DataError("one vote row required per item")
        for item, row in zip(self.items, self.votes):
            if len(row) != len(self.categories):
                raise DataError(f"item {item!r}: vote row does not cover all categories")
            for v in row:
                if not isinstance(v, int) or v < 0:
                    raise DataError(f"item {item!r}: votes must be non-negative ints")

    @classmethod
    def from_labels(
        cls, labeled: Sequence[tuple[str, Sequence[str]]]
    ) -> "RatingsTable":
        """Build from (item, [label per rater]) rows."""
        categories = sorted({lab for _, labs in labeled for lab in labs})
        index = {lab: j for j, lab in enumerate(categories)}
        votes = []
        for _, labs in labeled:
            row = [0] * len(categories)
            for lab in labs:
                row[index[lab]] += 1
            votes.append(row)
        return cls(
            items=[item for item, _ in labeled], categories=categories, votes=votes
        )


def fleiss_kappa(table: RatingsTable) -> MetricValue:
    """Fleiss' kappa over a ratings table with a constant rater count.

          P - Pe
    k = ----------
          1 - Pe

    P is the mean per-item pairwise agreement, Pe the chance agreement from
    the pooled category proportions. Pe of 1 yields 1.0 flagged degenerate.
    """
    if not table.items:
        raise DataError("fleiss_kappa needs at least one item")
    totals = [sum(row) for row in table.votes]
    n = totals[0]
    for item, t in zip(table.items, totals):
        if t != n:
            raise DataError(
                f"item {item!r} has {t} ratings, expected {n} (constant rater count)"
            )
    if n < 2:
        raise DataError("fleiss_kappa needs at least 2 ratings per item")
    n_items = len(table.items)
    grand_total = n * n_items
    p_cat = [
        sum(table.votes[i][j] for i in range(n_items)) / grand_total
        for j in range(len(table.categories))
    ]
    p_items = [
        (sum(v * v for v in row) - n) / (n * (n - 1)) for row in table.votes
    ]
    p_mean = sum(p_items) / n_items
    p_exp = sum(p * p for p in p_cat)
    if p_exp == 1.0:
        return MetricValue(1.0, degenerate=True)
    return MetricValue((p_mean - p_exp) / (1 - p_exp))


def landis_koch(kappa: float) -> AgreementBand:
    """Map a kappa value onto the Landis-Koch interpretation bands.

    Bands are right-closed: 0.40 is still Fair, 0.60 still Moderate.
    """
    if not (-1.0 <= kappa <= 1.0):
        raise DataError(f"kappa {kappa} outside [-1, 1]")
    if kappa < 0.0:
        return AgreementBand.POOR
    if kappa <= 0.20:
        return AgreementBand.SLIGHT
    if kappa <= 0.40:
        return AgreementBand.FAIR
    if kappa <= 0.60:
        return AgreementBand.MODERATE
    if kappa <= 0.80:
        return AgreementBand.SUBSTANTIAL
    return AgreementBand.ALMOST_PERFECT


def validity(correct: int, total: int) -> float:
    """Percentage of correct suggestions: 100 * correct / total."""
    if total <= 0:
        raise DataError("validity undefined for a total of 0")
    if not 0 <= correct <= total:
        raise DataError(f"correct count {correct} outside [0, {total}]")
    return 100.0 * correct / total
