"""Acceptance suite: one test per acceptance criterion, each printing a
PASS/FAIL line (bypassing capture so the lines always appear).

Run just this gate with:  pytest tests/test_acceptance.py -q
"""

from __future__ import annotations

import json
import random
import sys
from contextlib import contextmanager
from fractions import Fraction

import pytest

from conftest import GOLDEN, make_review
from oracles import oracle_cohen_kappa, oracle_fleiss_kappa, oracle_similarity
from test_cli import GOLDEN_FILES, run_pipeline
from test_workflow import (
    EXPECTED_TRANSITIONS,
    HAPPY_PATH,
    _random_walk,
    fresh_case,
    run_path,
    step,
)

from reviewtriage.assignment import (
    META_TEAM,
    assign,
    derive_table,
    hierarchy_hit_rate,
    load_evidence,
)
from reviewtriage.cli import _packaged
from reviewtriage.detect import detect_corpus, load_lexicon
from reviewtriage.errors import IllegalTransition
from reviewtriage.metrics import (
    AgreementBand,
    FBetaVariant,
    RatingsTable,
    cohen_kappa,
    f_beta,
    fleiss_kappa,
    landis_koch,
)
from reviewtriage.records import dumps
from reviewtriage.detect import label_to_record
from reviewtriage.workflow import (
    ActionType,
    CaseState,
    TRANSITIONS,
    addressability_report,
    apply_event,
)


@contextmanager
def criterion(name: str, capsys):
    """Print one PASS/FAIL line per criterion, bypassing output capture."""
    try:
        yield
    except BaseException:
        with capsys.disabled():
            print(f"[FAIL] {name}", flush=True)
        raise
    with capsys.disabled():
        print(f"[PASS] {name}", flush=True)


def test_f_beta_reproduction(capsys):
    with criterion("F-beta reproduction (paper variant, beta=0.2)", capsys):
        assert f_beta(0.6727, 0.2341, 0.2, FBetaVariant.PAPER) == pytest.approx(
            0.5126, abs=5e-4
        )
        assert f_beta(0.5079, 0.4051, 0.2, FBetaVariant.PAPER) == pytest.approx(
            0.4873, abs=5e-4
        )


def test_per_class_f1_reproduction(capsys):
    with criterion("per-class F1 reproduction (four printed P/R pairs)", capsys):
        cases = [
            (0.8276, 0.1765, 0.2909),
            (0.1333, 0.1818, 0.1538),
            (0.2106, 0.6519, 0.3184),
            (0.9858, 0.8124, 0.8901),
        ]
        for p, r, expected in cases:
            f1 = f_beta(p, r, 1.0, FBetaVariant.STANDARD)
            assert f1 == pytest.approx(expected, abs=7e-4), (p, r)


def test_assignment_table_round_trip(capsys):
    with criterion("assignment-table round trip from engineered evidence", capsys):
        with _packaged("team_assignment_evidence.csv") as fp:
            evidence = load_evidence(fp)
        with _packaged("team_assignment_tie_order.json") as fp:
            tie_order = json.load(fp)
        with _packaged("taxonomy_default.csv") as fp:
            from reviewtriage.taxonomy import load_taxonomy

            categories = load_taxonomy(fp).subcategories
        table = derive_table(
            evidence, threshold="1/4", categories=categories, tie_order=tie_order
        )
        printed = {
            "Business": [("Business", 28), ("Support", 28), ("Mobile", 28)],
            "Operation": [("Mobile", 43), ("Support", 41)],
            "Tutorial": [("Support", 54), ("Mobile", 30)],
            "Navigation": [("Support", 35), ("Mobile", 35)],
            "Algorithms": [("Routing", 42), ("Support", 28)],
            "Consequences": [("Mobile", 88)],
            "Unexpected system behavior": [("Mobile", 42), ("Routing", 33)],
            "Bugs & Crashes": [("Mobile", 57)],
            "User Interface": [("UI/UX", 55), ("Mobile", 36)],
            "Privacy": [("Mobile", 75), ("Meta", 25)],
            "Security": [],
            "Meta information": [("Mobile", 36), ("Support", 36)],
            "Terminology": [],
            "System-specific elements": [("Support", 75), ("Mobile", 25)],
        }
        for category, expected in printed.items():
            row = [(e.team, e.percent) for e in table.rows[category]]
            assert row == expected, category
        # the inclusive threshold keeps Meta at exactly 25%
        privacy = table.rows["Privacy"]
        assert privacy[1].team == META_TEAM and privacy[1].share == Fraction(1, 4)
        assert assign("Security", table) == [META_TEAM]
        assert assign("Terminology", table) == [META_TEAM]


def test_similarity_oracle_equivalence(capsys):
    with criterion("similarity equals exhaustive matching-block oracle (1000 pairs)", capsys):
        from reviewtriage.sources import similarity

        assert similarity("abcd", "bcde") == 0.75
        rng = random.Random(20240601)
        alphabet = "abcd"
        for _ in range(1000):
            a = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
            b = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
            assert similarity(a, b) == oracle_similarity(a, b), (a, b)


def test_kappa_oracle_equivalence_and_bands(capsys):
    with criterion("kappa oracle equivalence, hand cases, Landis-Koch bands", capsys):
        rng = random.Random(20240602)
        labels = ["a", "b", "c", "d"]
        for _ in range(200):
            pairs = [
                (rng.choice(labels[: rng.randint(2, 4)]), rng.choice(labels[: rng.randint(2, 4)]))
                for _ in range(rng.randint(1, 12))
            ]
            assert cohen_kappa(pairs) == pytest.approx(
                oracle_cohen_kappa(pairs), abs=1e-12
            )
        for _ in range(200):
            n_items = rng.randint(1, 6)
            n_categories = rng.randint(2, 4)
            n_raters = rng.randint(2, 4)
            votes = []
            for _ in range(n_items):
                row = [0] * n_categories
                for _ in range(n_raters):
                    row[rng.randrange(n_categories)] += 1
                votes.append(row)
            table = RatingsTable(
                items=[f"i{k}" for k in range(n_items)],
                categories=[f"c{k}" for k in range(n_categories)],
                votes=votes,
            )
            assert fleiss_kappa(table) == pytest.approx(
                oracle_fleiss_kappa(votes), abs=1e-12
            )
        # hand-derived cases, exact
        assert cohen_kappa([("x", "x"), ("x", "y"), ("y", "x"), ("y", "y")]) == 0.0
        assert cohen_kappa([("x", "x"), ("x", "x"), ("x", "y"), ("y", "y")]) == 0.5
        minus_third = fleiss_kappa(
            RatingsTable(items=["i1", "i2"], categories=["A", "B"], votes=[[2, 1], [1, 2]])
        )
        assert minus_third == pytest.approx(-1 / 3, abs=1e-15)
        assert landis_koch(0.61) == AgreementBand.SUBSTANTIAL
        assert landis_koch(0.39) == AgreementBand.FAIR
        assert landis_koch(0.558) == AgreementBand.MODERATE


def test_hierarchy_hit_rate_and_addressability_arithmetic(capsys):
    with criterion("hierarchy hit rates 0.8/0.6/0.2 and addressability 88%", capsys):
        cases = (
            [(["Mobile", "Support"], "Mobile")] * 6
            + [(["Mobile", "Support"], "Support")] * 2
            + [(["Mobile", "Support"], "Routing")] * 2
        )
        report = hierarchy_hit_rate(cases)
        assert report.overall == 0.8
        assert report.per_rank[1] == 0.6
        assert report.per_rank[2] == 0.2

        resolved = []
        for i in range(139):
            case, _ = run_path(fresh_case(f"res-{i}"), HAPPY_PATH)
            resolved.append(case)
        for i in range(19):
            case, _ = run_path(
                fresh_case(f"unr-{i}"), HAPPY_PATH[:6] + [ActionType.MARK_UNRESOLVABLE]
            )
            resolved.append(case)
        addressability = addressability_report(resolved)
        assert addressability.confirmed_terminal == 158
        assert addressability.resolved == 139
        assert addressability.resolved_percent_display == 88


def test_detection_recall_on_seeded_corpus(capsys):
    with criterion("seeded detection recall 1.0, spans slice back, byte-identical", capsys):
        with _packaged("lexicon_default.csv") as fp:
            lexicon = load_lexicon(fp)
        entries = list(lexicon.entries)
        reviews = []
        seeded_kinds = []
        for i in range(1000):
            entry = entries[i % len(entries)]
            body = f"The app keeps running smoothly. {entry.pattern.capitalize()} indeed."
            reviews.append(
                make_review(f"r{i:04d}", body=body, language=entry.language, minute=i % 60)
            )
            seeded_kinds.append(entry.kind)
        labels, stats = detect_corpus(reviews, lexicon)
        assert len(labels) == 1000
        hits_total = 0
        for label, seeded in zip(labels, seeded_kinds):
            assert label.kind == seeded  # recall 1.0 against the seeding
        for label, review in zip(labels, reviews):
            for hit in label.hits:
                hits_total += 1
                start, end = hit.span
                assert review.text[start:end] == hit.matched_text
                assert hit.matched_text.casefold() == hit.entry.pattern
        assert hits_total >= 1000
        labels2, _ = detect_corpus(reviews, lexicon)
        first = "\n".join(dumps(label_to_record(l)) for l in labels)
        second = "\n".join(dumps(label_to_record(l)) for l in labels2)
        assert first == second


def test_workflow_soundness(capsys):
    with criterion("workflow transitions, human gating, 500-sequence replay", capsys):
        actual = {
            (state.value, action.value): target.value
            for (state, action), target in TRANSITIONS.items()
        }
        assert actual == EXPECTED_TRANSITIONS
        # every illegal (state, action) pair raises
        from test_workflow import _case_in_state

        for state in CaseState:
            case = _case_in_state(state)
            for action in ActionType:
                if (state, action) in TRANSITIONS:
                    step(case, action)
                else:
                    with pytest.raises(IllegalTransition):
                        step(case, action)

        rng = random.Random(20240603)
        answered = 0
        for _ in range(500):
            base, final, events = _random_walk(rng, max_steps=15)
            replayed = base
            for event in events:
                replayed = apply_event(replayed, event)
            assert replayed == final
            if final.state == CaseState.ANSWERED:
                answered += 1
                for i, event in enumerate(events):
                    if not event.actor.is_human:
                        assert any(e.actor.is_human for e in events[i + 1 :])
        assert answered > 0


def test_end_to_end_golden_run(tmp_path, capsys):
    with criterion("end-to-end CLI golden run (byte-for-byte)", capsys):
        run_pipeline(tmp_path)
        for name in GOLDEN_FILES:
            assert (tmp_path / name).read_bytes() == (GOLDEN / name).read_bytes(), name
