"""Answer-source resolution through a three-tier hierarchy: support
articles by text similarity, then past store responses, then a flag for a
newly drafted response.

Similarity is the Ratcliff/Obershelp ratio 2M/T over case-folded,
whitespace-collapsed text: M is the total length of matching blocks found
by recursively taking the longest common contiguous block (ties broken
leftmost in the first text, then leftmost in the second) and recursing on
both flanks; T is the combined length.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Any, Iterable, Sequence, TextIO

from .corpus import Review, StoreKind
from .errors import DataError
from .records import dumps, read_jsonl


def _normalize(text: str) -> str:
    return " ".join(text.split()).casefold()


def _longest_match(
    a: str, b: str, alo: int, ahi: int, blo: int, bhi: int, b2j: dict[str, list[int]]
) -> tuple[int, int, int]:
    """Longest common contiguous block of a[alo:ahi] and b[blo:bhi].

    Returns (i, j, size); among equal sizes the block starting leftmost in
    a wins, then leftmost in b.
    """
    besti, bestj, bestsize = alo, blo, 0
    j2len: dict[int, int] = {}
    for i in range(alo, ahi):
        newj2len: dict[int, int] = {}
        for j in b2j.get(a[i], ()):
            if j < blo:
                continue
            if j >= bhi:
                break
            k = newj2len[j] = j2len.get(j - 1, 0) + 1
            if k > bestsize:
                besti, bestj, bestsize = i - k + 1, j - k + 1, k
        j2len = newj2len
    return besti, bestj, bestsize


def matching_blocks_total(a: str, b: str) -> int:
    """Total length M of the recursive longest-matching-block decomposition."""
    b2j: dict[str, list[int]] = {}
    for j, ch in enumerate(b):
        b2j.setdefault(ch, []).append(j)
    total = 0
    stack = [(0, len(a), 0, len(b))]
    while stack:
        alo, ahi, blo, bhi = stack.pop()
        if alo >= ahi or blo >= bhi:
            continue
        i, j, k = _longest_match(a, b, alo, ahi, blo, bhi, b2j)
        if k == 0:
            continue
        total += k
        stack.append((alo, i, blo, j))
        stack.append((i + k, ahi, j + k, bhi))
    return total


def similarity(a: str, b: str) -> float:
    """Ratcliff/Obershelp ratio 2M/T in [0, 1]; two empty texts score 1.0."""
    a = _normalize(a)
    b = _normalize(b)
    total = len(a) + len(b)
    if total == 0:
        return 1.0
    return 2.0 * matching_blocks_total(a, b) / total


# --- article tier -------------------------------------------------------------

@dataclass(frozen=True)
class SupportArticle:
    id: str
    title: str
    body: str
    url: str = ""
    apps: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if not self.id:
            raise DataError("support article with empty id")
        if not self.title.strip():
            raise DataError(f"article {self.id!r}: title must be non-empty")

    def serves(self, app_id: str) -> bool:
        return not self.apps or app_id in self.apps


class ArticleIndex:
    """Immutable similarity index over support articles."""

    def __init__(self, articles: Sequence[SupportArticle]):
        self._articles: dict[str, SupportArticle] = {}
        self._normalized: dict[str, tuple[str, str]] = {}
        for article in articles:
            if article.id in self._articles:
                raise DataError(f"duplicate article id {article.id!r}")
            self._articles[article.id] = article
            self._normalized[article.id] = (
                _normalize(article.title),
                _normalize(article.body),
            )

    def __len__(self) -> int:
        return len(self._articles)

    def __iter__(self) -> Iterable[SupportArticle]:
        return iter(self._articles.values())

    def get(self, article_id: str) -> SupportArticle | None:
        return self._articles.get(article_id)

    def score(self, normalized_query: str, article_id: str) -> float:
        """Best of title and body similarity (articles are question-titled)."""
        title, body = self._normalized[article_id]
        return max(
            _ratio_normalized(normalized_query, title),
            _ratio_normalized(normalized_query, body),
        )


def _ratio_normalized(a: str, b: str) -> float:
    total = len(a) + len(b)
    if total == 0:
        return 1.0
    return 2.0 * matching_blocks_total(a, b) / total


def index_articles(articles: Sequence[SupportArticle]) -> ArticleIndex:
    return ArticleIndex(articles)


# --- past-response tier -------------------------------------------------------

@dataclass(frozen=True)
class PastResponse:
    response_id: str
    review_ref: tuple[StoreKind, str, str]
    text: str
    store: StoreKind
    responded_at: datetime
    review_text: str

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise DataError(f"response {self.response_id!r}: text must be non-empty")


def build_response_store(reviews: Sequence[Review]) -> list[PastResponse]:
    """Collect developer responses with the review text they answered."""
    responses = []
    for review in reviews:
        for n, resp in enumerate(review.developer_responses, start=1):
            responses.append(
                PastResponse(
                    response_id=f"{review.store.value}/{review.app_id}/{review.id}#resp{n}",
                    review_ref=review.key,
                    text=resp.text,
                    store=review.store,
                    responded_at=resp.responded_at,
                    review_text=review.text,
                )
            )
    return responses


# --- candidates and resolution --------------------------------------------

class SourceTier(str, Enum):
    ARTICLE = "article"
    PAST_RESPONSE = "past-response"
    NEW_RESPONSE = "new-response"


@dataclass(frozen=True)
class SourceCandidate:
    tier: SourceTier
    ref: str | None
    score: float
    rank: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.score <= 1.0:
            raise DataError(f"candidate score {self.score} outside [0, 1]")
        if self.rank < 1:
            raise DataError(f"candidate rank {self.rank} must be >= 1")
        if self.tier == SourceTier.NEW_RESPONSE and (self.ref is not None or self.score != 0.0):
            raise DataError("new-response candidates carry no ref and score 0")


@dataclass(frozen=True)
class ResolvePolicy:
    # Defaults are non-normative operating points; tune per corpus.
    min_article_score: float = 0.35
    min_response_score: float = 0.45
    top_k: int = 5
    cross_store_responses: bool = False

    def __post_init__(self) -> None:
        if self.top_k < 1:
            raise DataError("top_k must be >= 1")


def find_articles(
    query: str,
    index: ArticleIndex,
    app: str,
    min_score: float,
    top_k: int,
) -> list[SourceCandidate]:
    """Top-k articles serving the app with similarity >= min_score."""
    if top_k < 1:
        raise DataError("top_k must be >= 1")
    normalized_query = _normalize(query)
    scored = []
    for article in index:
        if not article.serves(app):
            continue
        score = index.score(normalized_query, article.id)
        if score >= min_score:
            scored.append((score, article.id))
    scored.sort(key=lambda item: (-item[0], item[1]))
    return [
        SourceCandidate(tier=SourceTier.ARTICLE, ref=article_id, score=score, rank=rank)
        for rank, (score, article_id) in enumerate(scored[:top_k], start=1)
    ]


def find_past_responses(
    unit_text: str,
    responses: Sequence[PastResponse],
    min_score: float,
    top_k: int,
) -> list[SourceCandidate]:
    """Top-k past responses whose originating review resembles the unit.

    A good past answer is one given to a similar question, so scoring
    compares review texts, not answer texts.
    """
    if top_k < 1:
        raise DataError("top_k must be >= 1")
    scored = []
    for resp in responses:
        score = similarity(unit_text, resp.review_text)
        if score >= min_score:
            scored.append((score, resp.response_id))
    scored.sort(key=lambda item: (-item[0], item[1]))
    return [
        SourceCandidate(tier=SourceTier.PAST_RESPONSE, ref=ref, score=score, rank=rank)
        for rank, (score, ref) in enumerate(scored[:top_k], start=1)
    ]


def resolve(
    unit_text: str,
    unit_store: StoreKind,
    app: str,
    index: ArticleIndex,
    responses: Sequence[PastResponse],
    policy: ResolvePolicy = ResolvePolicy(),
) -> list[SourceCandidate]:
    """Resolve one unit through the tier hierarchy.

    Articles win if any qualify; otherwise past responses (skipped for
    Apple-store units unless cross-store reuse is enabled); otherwise a
    single new-response flag. Never returns candidates from two tiers.
    """
    articles = find_articles(unit_text, index, app, policy.min_article_score, policy.top_k)
    if articles:
        return articles
    if policy.cross_store_responses:
        pool = list(responses)
    elif unit_store == StoreKind.APPLE_APP_STORE:
        pool = []
    else:
        pool = [r for r in responses if r.store == unit_store]
    if pool:
        past = find_past_responses(unit_text, pool, policy.min_response_score, policy.top_k)
        if past:
            return past
    return [SourceCandidate(tier=SourceTier.NEW_RESPONSE, ref=None, score=0.0, rank=1)]


# --- persistence ----------------------------------------------------------------

ARTICLE_SCHEMA = "support-article/1"
CANDIDATE_SCHEMA = "source-candidate/1"


def article_to_record(article: SupportArticle) -> dict[str, Any]:
    return {
        "schema": ARTICLE_SCHEMA,
        "id": article.id,
        "title": article.title,
        "body": article.body,
        "url": article.url,
        "apps": sorted(article.apps),
    }


def load_articles(fp: TextIO) -> list[SupportArticle]:
    articles = []
    for lineno, record in read_jsonl(fp):
        if not isinstance(record, dict) or record.get("schema") != ARTICLE_SCHEMA:
            raise DataError(f"line {lineno}: not a {ARTICLE_SCHEMA} record")
        articles.append(
            SupportArticle(
                id=str(record.get("id", "")),
                title=str(record.get("title", "")),
                body=str(record.get("body", "")),
                url=str(record.get("url", "")),
                apps=frozenset(record.get("apps") or ()),
            )
        )
    return articles


def save_articles(fp: TextIO, articles: Iterable[SupportArticle]) -> int:
    n = 0
    for article in articles:
        fp.write(dumps(article_to_record(article)))
        fp.write("\n")
        n += 1
    return n


def candidate_to_record(unit_id: str, candidate: SourceCandidate) -> dict[str, Any]:
    return {
        "schema": CANDIDATE_SCHEMA,
        "unit_id": unit_id,
        "tier": candidate.tier.value,
        "ref": candidate.ref,
        "score": candidate.score,
        "rank": candidate.rank,
    }


def record_to_candidate(record: dict[str, Any]) -> tuple[str, SourceCandidate]:
    if record.get("schema") != CANDIDATE_SCHEMA:
        raise DataError(f"not a {CANDIDATE_SCHEMA} record: {record.get('schema')!r}")
    return record["unit_id"], SourceCandidate(
        tier=SourceTier(record["tier"]),
        ref=record.get("ref"),
        score=float(record["score"]),
        rank=int(record["rank"]),
    )
