from __future__ import annotations

import io
import json
from fractions import Fraction

import pytest

from reviewtriage.assignment import (
    AssignmentEvidence,
    EvidenceRecord,
    META_TEAM,
    assign,
    consensus_votes,
    derive_table,
    hierarchy_hit_rate,
    load_evidence,
    load_table,
    record_to_table,
    save_table,
    table_to_record,
)
from reviewtriage.cli import _packaged
from reviewtriage.errors import DataError


def votes_to_evidence(per_category: dict[str, list[tuple[str, int]]]) -> AssignmentEvidence:
    """Expand (team, count) specs into unique (unit, rater) vote records."""
    records = []
    for category, team_counts in per_category.items():
        index = 0
        for team, count in team_counts:
            for _ in range(count):
                records.append(
                    EvidenceRecord(
                        unit_id=f"{category}-{index // 4}",
                        category=category,
                        team=team,
                        rater=f"r{index % 4 + 1}",
                    )
                )
                index += 1
    return AssignmentEvidence(records=records)


def test_derive_table_shares_and_threshold():
    evidence = votes_to_evidence(
        {"Operation": [("Mobile", 43), ("Support", 41), ("Routing", 16)]}
    )
    table = derive_table(evidence, threshold="1/4")
    row = table.rows["Operation"]
    assert [(e.team, e.share) for e in row] == [
        ("Mobile", Fraction(43, 100)),
        ("Support", Fraction(41, 100)),
    ]


def test_derive_table_single_team_full_share():
    evidence = votes_to_evidence({"Consequences": [("Mobile", 5)]})
    table = derive_table(evidence)
    assert [(e.team, e.share) for e in table.rows["Consequences"]] == [
        ("Mobile", Fraction(1))
    ]


def test_derive_table_business_three_way_tie():
    evidence = votes_to_evidence(
        {"Business": [("Business", 7), ("Support", 7), ("Mobile", 7), ("Routing", 4)]}
    )
    table = derive_table(
        evidence, tie_order={"Business": ["Business", "Support", "Mobile"]}
    )
    row = table.rows["Business"]
    assert [e.team for e in row] == ["Business", "Support", "Mobile"]
    assert all(e.share == Fraction(7, 25) for e in row)
    assert all(e.percent == 28 for e in row)


def test_derive_table_share_exactly_at_threshold_is_included():
    evidence = votes_to_evidence({"Privacy": [("Mobile", 3), ("Meta", 1)]})
    table = derive_table(evidence, threshold=Fraction(1, 4))
    assert [(e.team, e.share) for e in table.rows["Privacy"]] == [
        ("Mobile", Fraction(3, 4)),
        ("Meta", Fraction(1, 4)),
    ]


def test_derive_table_rejects_bad_threshold():
    evidence = votes_to_evidence({"Privacy": [("Mobile", 1)]})
    with pytest.raises(DataError):
        derive_table(evidence, threshold=0)
    with pytest.raises(DataError):
        derive_table(evidence, threshold="5/4")


def test_derive_table_rejects_unknown_team():
    from reviewtriage.assignment import Team

    evidence = votes_to_evidence({"Privacy": [("Ghost", 1)]})
    with pytest.raises(DataError, match="Ghost"):
        derive_table(evidence, teams=[Team("Mobile"), Team(META_TEAM)])


def test_shares_sum_to_one_before_thresholding():
    per_category = {
        "Operation": [("Mobile", 43), ("Support", 41), ("Routing", 16)],
        "Navigation": [("Support", 7), ("Mobile", 7), ("Routing", 3), ("Business", 3)],
    }
    for team_counts in per_category.values():
        total = sum(count for _, count in team_counts)
        assert sum(Fraction(count, total) for _, count in team_counts) == 1


def test_raising_threshold_never_lengthens_rows():
    evidence = votes_to_evidence(
        {
            "Operation": [("Mobile", 43), ("Support", 41), ("Routing", 16)],
            "Tutorial": [("Support", 54), ("Mobile", 30), ("Routing", 16)],
        }
    )
    thresholds = [Fraction(1, 10), Fraction(1, 4), Fraction(2, 5), Fraction(3, 5), Fraction(1)]
    previous = None
    for threshold in thresholds:
        table = derive_table(evidence, threshold=threshold)
        lengths = {c: len(rows) for c, rows in table.rows.items()}
        if previous is not None:
            assert all(lengths[c] <= previous[c] for c in lengths)
        previous = lengths


def test_assign_never_returns_below_threshold_team():
    evidence = votes_to_evidence(
        {"Algorithms": [("Routing", 21), ("Support", 14), ("Mobile", 8), ("UI/UX", 7)]}
    )
    table = derive_table(evidence, threshold="1/4")
    for team in assign("Algorithms", table):
        entry = next(e for e in table.rows["Algorithms"] if e.team == team)
        assert entry.share >= table.threshold


def test_assign_fallback_totality():
    table = derive_table(
        votes_to_evidence({}), categories=["Security", "Terminology"]
    )
    assert assign("Security", table) == [META_TEAM]
    assert assign("Terminology", table) == [META_TEAM]


def test_assign_rejects_undeclared_category():
    table = derive_table(votes_to_evidence({"Privacy": [("Mobile", 4)]}))
    with pytest.raises(DataError, match="Tutorial"):
        assign("Tutorial", table)


@pytest.fixture(scope="module")
def shipped_table():
    with _packaged("team_assignment_table.json") as fp:
        return load_table(fp)


def test_shipped_table_documented_rows(shipped_table):
    assert assign("Privacy", shipped_table) == ["Mobile", META_TEAM]
    assert assign("Security", shipped_table) == [META_TEAM]
    assert assign("Consequences", shipped_table) == ["Mobile"]
    assert assign("Operation", shipped_table) == ["Mobile", "Support"]
    assert assign("Business", shipped_table) == ["Business", "Support", "Mobile"]
    assert assign("Navigation", shipped_table) == ["Support", "Mobile"]


def test_shipped_table_rederives_from_evidence(shipped_table):
    with _packaged("team_assignment_evidence.csv") as fp:
        evidence = load_evidence(fp)
    with _packaged("team_assignment_tie_order.json") as fp:
        tie_order = json.load(fp)
    derived = derive_table(
        evidence,
        threshold=shipped_table.threshold,
        categories=sorted(shipped_table.rows),
        tie_order=tie_order,
    )
    assert derived.rows == shipped_table.rows


def test_table_record_roundtrip(shipped_table):
    buf = io.StringIO()
    save_table(buf, shipped_table)
    buf.seek(0)
    loaded = load_table(buf)
    assert loaded.rows == shipped_table.rows
    assert loaded.threshold == shipped_table.threshold


def test_table_rejects_below_threshold_row():
    record = table_to_record(
        derive_table(votes_to_evidence({"Privacy": [("Mobile", 4)]}))
    )
    record["rows"]["Privacy"][0]["share"] = "1/10"
    with pytest.raises(DataError, match="below threshold"):
        record_to_table(record)


def test_evidence_one_vote_per_unit_and_rater():
    with pytest.raises(DataError, match="voted twice"):
        AssignmentEvidence(
            records=[
                EvidenceRecord("u1", "Privacy", "Mobile", "r1"),
                EvidenceRecord("u1", "Security", "Support", "r1"),
            ]
        )


def test_consensus_pre_aggregation():
    evidence = AssignmentEvidence(
        records=[
            EvidenceRecord("u1", "Privacy", "Mobile", "r1"),
            EvidenceRecord("u1", "Privacy", "Mobile", "r2"),
            EvidenceRecord("u1", "Privacy", "Support", "r3"),
            EvidenceRecord("u2", "Privacy", "Support", "r1"),
            EvidenceRecord("u2", "Privacy", "Support", "r2"),
            EvidenceRecord("u2", "Privacy", "Mobile", "r3"),
        ]
    )
    collapsed = consensus_votes(evidence)
    assert [(r.unit_id, r.team) for r in collapsed.records] == [
        ("u1", "Mobile"),
        ("u2", "Support"),
    ]
    table = derive_table(evidence, consensus=True)
    assert [(e.team, e.share) for e in table.rows["Privacy"]] == [
        ("Mobile", Fraction(1, 2)),
        ("Support", Fraction(1, 2)),
    ]


def test_load_evidence_file():
    text = (
        "unit_id,category,team,rater\n"
        "u1,Privacy,Mobile,r1\n"
        "u2,Privacy,Meta,r1\n"
    )
    evidence = load_evidence(io.BytesIO(text.encode("utf-8")))
    assert len(evidence.records) == 2


def test_hit_rate_all_rank_one():
    report = hierarchy_hit_rate([(["Mobile"], "Mobile")] * 4)
    assert report.overall == 1.0
    assert report.per_rank[1] == 1.0


def test_hit_rate_hand_counted_fixture():
    cases = []
    for _ in range(6):
        cases.append((["Mobile", "Support"], "Mobile"))  # rank-1 hits
    for _ in range(2):
        cases.append((["Mobile", "Support"], "Support"))  # rank-2 hits
    for _ in range(2):
        cases.append((["Mobile", "Support"], "Routing"))  # misses
    report = hierarchy_hit_rate(cases)
    assert report.overall == 0.8
    assert report.per_rank[1] == 0.6
    assert report.per_rank[2] == 0.2
    assert report.per_rank[3] == 0.0


def test_hit_rate_single_miss():
    report = hierarchy_hit_rate([(["Mobile"], "Support")])
    assert report.overall == 0.0


def test_hit_rate_rejects_empty():
    with pytest.raises(DataError):
        hierarchy_hit_rate([])
