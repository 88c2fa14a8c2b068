from __future__ import annotations

import random

import pytest

from conftest import make_review
from oracles import oracle_similarity
from reviewtriage.corpus import ResponseRecord, StoreKind
from reviewtriage.errors import DataError
from reviewtriage.sources import (
    ResolvePolicy,
    SourceCandidate,
    SourceTier,
    SupportArticle,
    build_response_store,
    candidate_to_record,
    find_articles,
    find_past_responses,
    index_articles,
    record_to_candidate,
    resolve,
    similarity,
)
from reviewtriage.records import parse_rfc3339


def test_similarity_identity():
    for s in ("", "a", "hello world", "ÄÖÜ straße"):
        assert similarity(s, s) == 1.0


def test_similarity_disjoint_alphabets_is_zero():
    assert similarity("abc", "xyz") == 0.0


def test_similarity_abcd_bcde():
    assert similarity("abcd", "bcde") == 0.75


def test_similarity_case_and_whitespace_normalization():
    assert similarity("Hello   World", "hello world") == 1.0
    assert similarity("  ", "") == 1.0


def test_similarity_zero_iff_no_shared_character():
    assert similarity("ab", "cd") == 0.0
    assert similarity("ab", "bc") > 0.0
    assert similarity("", "x") == 0.0


def test_similarity_upper_bound_shorter_length():
    cases = [("abc", "abcdef"), ("aa", "aaaa"), ("xyz", "zyxzyx")]
    for a, b in cases:
        bound = 2 * min(len(a), len(b)) / (len(a) + len(b))
        assert similarity(a, b) <= bound + 1e-12


def test_similarity_matches_exhaustive_oracle_on_random_pairs():
    rng = random.Random(977)
    alphabet = "abcd"
    for _ in range(300):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
        b = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
        assert similarity(a, b) == oracle_similarity(a, b), (a, b)


def _articles() -> list[SupportArticle]:
    return [
        SupportArticle(
            id="a-voice",
            title="How do I mute the voice?",
            body="Settings, audio, voice output, mute.",
        ),
        SupportArticle(
            id="a-route",
            title="Why does my route change?",
            body="Routes follow live traffic and are recalculated continuously.",
        ),
        SupportArticle(
            id="a-nav-only",
            title="Navigation specific topic",
            body="Only for the nav app.",
            apps=frozenset({"demo-nav"}),
        ),
    ]


def test_index_articles_counts_and_duplicates():
    assert len(index_articles([])) == 0
    assert len(index_articles(_articles())) == 3
    with pytest.raises(DataError, match="duplicate"):
        index_articles(_articles() + [_articles()[0]])


def test_find_articles_exact_title_scores_one():
    index = index_articles(_articles())
    hits = find_articles("How do I mute the voice?", index, "demo-nav", 0.1, 5)
    assert hits[0].ref == "a-voice"
    assert hits[0].score == 1.0
    assert hits[0].rank == 1


def test_find_articles_min_score_one_without_exact_match():
    index = index_articles(_articles())
    assert find_articles("totally unrelated request", index, "demo-nav", 1.0, 5) == []


def test_find_articles_app_filter():
    index = index_articles(_articles())
    hits = find_articles("Navigation specific topic", index, "demo-courier", 0.2, 5)
    assert all(h.ref != "a-nav-only" for h in hits)
    hits_nav = find_articles("Navigation specific topic", index, "demo-nav", 0.2, 5)
    assert hits_nav[0].ref == "a-nav-only"


def test_find_articles_ordering_matches_oracle():
    articles = [
        SupportArticle(id=f"a{i}", title=t, body=b)
        for i, (t, b) in enumerate(
            [
                ("alpha beta gamma", "first body text"),
                ("route change reasons", "second body text"),
                ("muting the voice", "third body text"),
                ("route recalculation details", "fourth body about routes"),
                ("completely different", "fifth body"),
            ]
        )
    ]
    index = index_articles(articles)
    query = "why did my route change today"
    hits = find_articles(query, index, "any-app", 0.0, 5)

    def oracle_score(article: SupportArticle) -> float:
        normalize = lambda s: " ".join(s.split()).casefold()
        return max(
            oracle_similarity(normalize(query), normalize(article.title)),
            oracle_similarity(normalize(query), normalize(article.body)),
        )

    expected = sorted(
        ((oracle_score(a), a.id) for a in articles), key=lambda x: (-x[0], x[1])
    )
    assert [(h.score, h.ref) for h in hits] == expected


def _reviews_with_responses():
    return [
        make_review(
            "g1",
            body="How do I mute the voice during navigation?",
            responses=(
                ResponseRecord("Mute it under settings.", parse_rfc3339("2024-06-02T08:00:00Z")),
            ),
        ),
        make_review(
            "g2",
            body="Why does the route change all the time?",
            responses=(
                ResponseRecord("Routes follow traffic.", parse_rfc3339("2024-06-02T09:00:00Z")),
            ),
        ),
        make_review("g3", body="No responses here."),
        make_review(
            "g4",
            body="The route keeps changing, why?",
            responses=(
                ResponseRecord("See our traffic article.", parse_rfc3339("2024-06-02T10:00:00Z")),
            ),
        ),
    ]


def test_build_response_store():
    responses = build_response_store(_reviews_with_responses())
    assert len(responses) == 3
    assert responses[0].response_id.endswith("#resp1")
    assert responses[0].review_text.startswith("How do I mute")


def test_find_past_responses_empty_store():
    assert find_past_responses("anything", [], 0.0, 5) == []


def test_find_past_responses_identical_review_scores_one():
    responses = build_response_store(_reviews_with_responses())
    hits = find_past_responses(
        "How do I mute the voice during navigation?", responses, 0.9, 5
    )
    assert hits[0].score == 1.0
    assert hits[0].rank == 1
    assert hits[0].tier == SourceTier.PAST_RESPONSE


def test_find_past_responses_ordering_matches_oracle():
    responses = build_response_store(_reviews_with_responses())
    query = "why is the route changing so much"
    hits = find_past_responses(query, responses, 0.0, 5)
    normalize = lambda s: " ".join(s.split()).casefold()
    expected = sorted(
        (
            (oracle_similarity(normalize(query), normalize(r.review_text)), r.response_id)
            for r in responses
        ),
        key=lambda x: (-x[0], x[1]),
    )
    assert [(h.score, h.ref) for h in hits] == expected


def test_resolve_article_tier_wins():
    index = index_articles(_articles())
    responses = build_response_store(_reviews_with_responses())
    candidates = resolve(
        "How do I mute the voice?", StoreKind.GOOGLE_PLAY, "demo-nav", index, responses
    )
    assert candidates
    assert {c.tier for c in candidates} == {SourceTier.ARTICLE}


def test_resolve_falls_back_to_past_responses():
    index = index_articles([])
    responses = build_response_store(_reviews_with_responses())
    candidates = resolve(
        "Why does the route change all the time?",
        StoreKind.GOOGLE_PLAY,
        "demo-nav",
        index,
        responses,
    )
    assert {c.tier for c in candidates} == {SourceTier.PAST_RESPONSE}


def test_resolve_nothing_qualifies_is_new_response():
    candidates = resolve(
        "zzz qqq jjj", StoreKind.GOOGLE_PLAY, "demo-nav", index_articles([]), []
    )
    assert len(candidates) == 1
    only = candidates[0]
    assert only.tier == SourceTier.NEW_RESPONSE
    assert only.ref is None and only.score == 0.0 and only.rank == 1


def test_resolve_apple_units_skip_response_tier_by_default():
    index = index_articles([])
    responses = build_response_store(_reviews_with_responses())
    query = "Why does the route change all the time?"
    apple = resolve(query, StoreKind.APPLE_APP_STORE, "demo-nav", index, responses)
    assert apple[0].tier == SourceTier.NEW_RESPONSE
    crossed = resolve(
        query,
        StoreKind.APPLE_APP_STORE,
        "demo-nav",
        index,
        responses,
        ResolvePolicy(cross_store_responses=True),
    )
    assert crossed[0].tier == SourceTier.PAST_RESPONSE


def test_resolve_single_tier_and_totality_properties():
    index = index_articles(_articles())
    responses = build_response_store(_reviews_with_responses())
    queries = [
        "How do I mute the voice?",
        "Why does the route change all the time?",
        "qqq zzz nothing shared",
        "",
    ]
    for query in queries:
        for store in StoreKind:
            candidates = resolve(query, store, "demo-nav", index, responses)
            assert candidates, (query, store)
            assert len({c.tier for c in candidates}) == 1


def test_candidate_record_roundtrip():
    candidate = SourceCandidate(tier=SourceTier.ARTICLE, ref="a-voice", score=0.42, rank=1)
    unit_id, loaded = record_to_candidate(candidate_to_record("u1", candidate))
    assert unit_id == "u1" and loaded == candidate


def test_new_response_invariants():
    with pytest.raises(DataError):
        SourceCandidate(tier=SourceTier.NEW_RESPONSE, ref="x", score=0.0, rank=1)
    with pytest.raises(DataError):
        SourceCandidate(tier=SourceTier.NEW_RESPONSE, ref=None, score=0.5, rank=1)


def test_top_k_limits_results():
    articles = [
        SupportArticle(id=f"a{i}", title=f"route topic {i}", body="route body")
        for i in range(10)
    ]
    index = index_articles(articles)
    hits = find_articles("route topic", index, "app", 0.0, 3)
    assert len(hits) == 3
    assert [h.rank for h in hits] == [1, 2, 3]
    with pytest.raises(DataError):
        find_articles("x", index, "app", 0.0, 0)
