from __future__ import annotations

import io

import pytest

from conftest import make_review
from reviewtriage.corpus import corpus_stats
from reviewtriage.detect import (
    LabeledBy,
    Lexicon,
    LexiconEntry,
    MatchMode,
    NeedKind,
    NeedLabel,
    detect_corpus,
    label_to_record,
    label_unit,
    load_lexicon,
    match_review,
    record_to_label,
)
from reviewtriage.errors import DataError
from reviewtriage.metrics import ConfusionMatrix, per_class_prf
from reviewtriage.records import dumps


def entry(pattern, kind=NeedKind.POTENTIAL, language="*", mode=None):
    if mode is None:
        mode = MatchMode.WHOLE_WORD if " " not in pattern else MatchMode.PHRASE
    return LexiconEntry(pattern=pattern, kind=kind, language=language, match_mode=mode)


LEXICON_CSV = """\
# version: 7
pattern,kind,language,match_mode,source
i want to understand,explicit,en,phrase,starter-en
how,potential,en,word,starter-en
"""


def test_load_lexicon_two_entries():
    lexicon = load_lexicon(io.BytesIO(LEXICON_CSV.encode("utf-8")))
    assert len(lexicon.entries) == 2
    assert lexicon.version == "7"
    first = lexicon.entries[0]
    assert first.pattern == "i want to understand"
    assert first.kind == NeedKind.EXPLICIT
    assert first.match_mode == MatchMode.PHRASE


def test_load_lexicon_empty_file_is_valid():
    lexicon = load_lexicon(io.BytesIO(b""))
    assert lexicon.entries == ()


def test_load_lexicon_rejects_duplicate_naming_line():
    text = LEXICON_CSV + "how,potential,en,word,other\n"
    with pytest.raises(DataError, match="duplicate"):
        load_lexicon(io.BytesIO(text.encode("utf-8")))


def test_load_lexicon_rejects_unknown_kind_with_line_number():
    text = "pattern,kind,language,match_mode,source\nhow,maybe,en,word,x\n"
    with pytest.raises(DataError, match="line 2"):
        load_lexicon(io.BytesIO(text.encode("utf-8")))


def test_load_lexicon_rejects_empty_pattern():
    text = 'pattern,kind,language,match_mode,source\n"",potential,en,word,x\n'
    with pytest.raises(DataError, match="empty pattern"):
        load_lexicon(io.BytesIO(text.encode("utf-8")))


def test_load_lexicon_casefolds_patterns():
    text = "pattern,kind,language,match_mode,source\nHOW,potential,en,word,x\n"
    lexicon = load_lexicon(io.BytesIO(text.encode("utf-8")))
    assert lexicon.entries[0].pattern == "how"


def test_match_whole_word_case_insensitive():
    review = make_review(body="How do I start?")
    hits = match_review(review, Lexicon(entries=(entry("how"),)))
    assert len(hits) == 1
    assert hits[0].span == (0, 3)
    assert hits[0].matched_text == "How"


def test_no_match_inside_other_word():
    review = make_review(body="showtime")
    hits = match_review(review, Lexicon(entries=(entry("how"),)))
    assert hits == []


def test_phrase_match_covers_whole_phrase():
    review = make_review(body="I want to understand the routing")
    lexicon = Lexicon(entries=(entry("i want to understand", NeedKind.EXPLICIT),))
    hits = match_review(review, lexicon)
    assert len(hits) == 1
    start, end = hits[0].span
    assert review.body[start:end] == "I want to understand"


def test_phrase_broken_by_punctuation_does_not_match():
    review = make_review(body="I want, to understand")
    lexicon = Lexicon(entries=(entry("i want to understand", NeedKind.EXPLICIT),))
    assert match_review(review, lexicon) == []


def test_title_is_matched_too():
    review = make_review(body="Otherwise fine.", title="How does rerouting work?")
    hits = match_review(review, Lexicon(entries=(entry("how"),)))
    assert len(hits) == 1
    assert review.text[hits[0].span[0] : hits[0].span[1]] == "How"


def test_language_gating():
    lexicon = Lexicon(entries=(entry("warum", language="de"),))
    assert match_review(make_review(body="warum denn", language="de"), lexicon)
    assert not match_review(make_review(body="warum denn", language="en"), lexicon)
    # unknown review language matches everything
    assert match_review(make_review(body="warum denn", language="und"), lexicon)
    # wildcard entries always apply
    wild = Lexicon(entries=(entry("warum", language="*"),))
    assert match_review(make_review(body="warum denn", language="en"), wild)


def test_overlapping_hits_all_reported_and_sorted():
    review = make_review(body="how to understand how")
    lexicon = Lexicon(
        entries=(entry("how"), entry("how to understand", NeedKind.EXPLICIT))
    )
    hits = match_review(review, lexicon)
    spans = [h.span for h in hits]
    assert spans == sorted(spans)
    assert len(hits) == 3  # two "how" plus the overlapping phrase


def test_every_hit_slices_back_to_pattern():
    review = make_review(body="Why oh WHY does it reroute, and how?")
    lexicon = Lexicon(entries=(entry("why"), entry("how")))
    for hit in match_review(review, lexicon):
        assert hit.matched_text.casefold() == hit.entry.pattern
        start, end = hit.span
        assert review.text[start:end] == hit.matched_text


def test_label_unit_priority():
    explicit = entry("a", NeedKind.EXPLICIT)
    implicit = entry("b", NeedKind.IMPLICIT)
    potential = entry("c", NeedKind.POTENTIAL)

    def hit(e):
        return match_review(make_review(body="a b c"), Lexicon(entries=(e,)))[0]

    assert label_unit([hit(potential), hit(explicit)]) == NeedKind.EXPLICIT
    assert label_unit([]) == NeedKind.NONE
    assert label_unit([hit(potential), hit(implicit)]) == NeedKind.IMPLICIT


def test_filter_label_requires_hits():
    review = make_review()
    from reviewtriage.corpus import unit_for_review

    with pytest.raises(DataError):
        NeedLabel(
            unit=unit_for_review(review),
            kind=NeedKind.EXPLICIT,
            hits=(),
            labeled_by=LabeledBy.FILTER,
        )


def test_detect_corpus_all_noise_is_all_none():
    reviews = [make_review(f"r{i}", body="nothing to see") for i in range(4)]
    labels, stats = detect_corpus(reviews, Lexicon(entries=(entry("how"),)))
    assert all(l.kind == NeedKind.NONE for l in labels)
    assert stats.total["none"] == 4


def test_detect_corpus_seeded_recall_is_one():
    phrases = ["i want to understand", "please explain this", "what does that mean"]
    lexicon = Lexicon(
        entries=tuple(entry(p, NeedKind.EXPLICIT, mode=MatchMode.PHRASE) for p in phrases)
    )
    reviews = [
        make_review(f"r{i}", body=f"Intro words. {phrase.capitalize()} right now.")
        for i, phrase in enumerate(phrases)
    ]
    labels, stats = detect_corpus(reviews, lexicon)
    assert [l.kind for l in labels] == [NeedKind.EXPLICIT] * 3
    assert stats.total["explicit"] == 3


def test_detect_corpus_rerun_is_byte_identical():
    reviews = [
        make_review("r1", body="How do I start?"),
        make_review("r2", body="I want to understand the detour"),
        make_review("r3", body="all good"),
    ]
    lexicon = load_lexicon(io.BytesIO(LEXICON_CSV.encode("utf-8")))
    first_labels, _ = detect_corpus(reviews, lexicon)
    second_labels, _ = detect_corpus(reviews, lexicon)
    first_bytes = "\n".join(dumps(label_to_record(l)) for l in first_labels)
    second_bytes = "\n".join(dumps(label_to_record(l)) for l in second_labels)
    assert first_bytes == second_bytes


def test_monotonicity_adding_entries_never_removes_hits():
    review = make_review(body="How do I mute the confusing voice?")
    small = Lexicon(entries=(entry("how"),))
    large = Lexicon(
        entries=(entry("how"), entry("confusing", NeedKind.IMPLICIT), entry("voice"))
    )
    small_hits = {(h.span, h.entry.pattern) for h in match_review(review, small)}
    large_hits = {(h.span, h.entry.pattern) for h in match_review(review, large)}
    assert small_hits <= large_hits
    small_kind = label_unit(match_review(review, small))
    large_kind = label_unit(match_review(review, large))
    from reviewtriage.detect import kind_priority

    assert kind_priority(large_kind) >= kind_priority(small_kind)


def test_label_record_roundtrip():
    review = make_review(body="How does this work?")
    labels, _ = detect_corpus([review], Lexicon(entries=(entry("how"),)))
    record = label_to_record(labels[0])
    assert record_to_label(record) == labels[0]


def test_detection_metrics_match_brute_force_confusion_counts():
    # labeled fixture corpus: the metrics module must reproduce counts
    # that a direct comparison loop produces
    bodies_and_truth = [
        ("How do I start?", "potential"),
        ("I want to understand the fares", "explicit"),
        ("nothing here", "none"),
        ("how how how", "potential"),
        ("all fine", "none"),
    ]
    reviews = [make_review(f"r{i}", body=b) for i, (b, _) in enumerate(bodies_and_truth)]
    lexicon = load_lexicon(io.BytesIO(LEXICON_CSV.encode("utf-8")))
    labels, _ = detect_corpus(reviews, lexicon)
    predicted = [l.kind.value for l in labels]
    truth = [t for _, t in bodies_and_truth]
    matrix = ConfusionMatrix.from_pairs(list(zip(truth, predicted)))
    for label in matrix.labels:
        tp = sum(1 for t, p in zip(truth, predicted) if t == p == label)
        fp = sum(1 for t, p in zip(truth, predicted) if t != label and p == label)
        fn = sum(1 for t, p in zip(truth, predicted) if t == label and p != label)
        c = per_class_prf(matrix, label)
        assert c.precision == (tp / (tp + fp) if tp + fp else 0.0)
        assert c.recall == (tp / (tp + fn) if tp + fn else 0.0)


def test_corpus_stats_totals_equal_labeled_units():
    reviews = [make_review(f"r{i}", body="How?") for i in range(7)]
    labels, stats = detect_corpus(reviews, Lexicon(entries=(entry("how"),)))
    assert stats.unit_count == len(labels) == 7
    recomputed = corpus_stats([(l.unit, l.kind.value) for l in labels], reviews)
    assert recomputed.rows == stats.rows
