"""Capture real service responses as JSON fixtures for the frontend test
suite, so the UI tests assert against genuinely served shapes and values.

    python tools/gen_ui_fixtures.py
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))

from fastapi.testclient import TestClient

from reviewtriage.assignment import hierarchy_hit_rate, load_evidence
from reviewtriage.cli import _packaged
from reviewtriage.service import ServiceConfig, create_app
from reviewtriage.taxonomy import load_taxonomy, rollup
from reviewtriage.workflow import ActionType, addressability_report, agreement_report

OUT = ROOT / "frontend" / "test" / "fixtures"


def write(name: str, payload) -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / name).write_text(
        json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote {name}")


def main() -> None:
    fixtures = ROOT / "tests" / "fixtures"
    with tempfile.TemporaryDirectory() as tmp:
        tmp_path = Path(tmp)
        corpus = tmp_path / "corpus.jsonl"
        # reuse the golden corpus (already ingested + normalized)
        corpus.write_bytes((ROOT / "tests" / "golden" / "corpus.jsonl").read_bytes())
        config = ServiceConfig(
            store_dir=str(tmp_path / "store"),
            corpus=str(corpus),
            articles=str(fixtures / "articles.jsonl"),
        )
        client = TestClient(create_app(config))
        client.post("/admin/ingest", json={})

        write("meta.json", client.get("/meta").json())
        write(
            "queue.json",
            client.get("/cases", params={"state": "auto-detected", "page_size": 5}).json(),
        )

        case_id = "google-play:demo-nav:r000:1"
        write("case_auto_detected.json", client.get(f"/cases/{case_id}").json())

        headers = {"X-Actor": "alice"}
        steps = [
            (1, "confirm-need", {"kind": "explicit"}),
            (3, "confirm-category", {"category": "Operation"}),
            (4, "confirm-team", {"team": "Mobile"}),
        ]
        for version, action, payload in steps:
            response = client.post(
                f"/cases/{case_id}/decision",
                json={"version": version, "action": action, "payload": payload},
                headers=headers,
            )
            assert response.status_code == 200, response.text
        write("case_source_proposed.json", client.get(f"/cases/{case_id}").json())

        response = client.post(
            f"/cases/{case_id}/decision",
            json={"version": 6, "action": "resolve-case",
                  "payload": {"resolution": "answered"}},
            headers=headers,
        )
        assert response.status_code == 200
        write("case_answered.json", client.get(f"/cases/{case_id}").json())
        write("stats.json", client.get("/reports/stats").json())

    # an addressability report with the documented 139-of-158 split plus
    # hand-counted hit rates, produced by the real report functions
    from test_workflow import HAPPY_PATH, fresh_case, run_path

    cases = []
    for i in range(139):
        case, _ = run_path(fresh_case(f"res-{i}"), HAPPY_PATH)
        cases.append(case)
    for i in range(19):
        case, _ = run_path(
            fresh_case(f"unr-{i}"), HAPPY_PATH[:6] + [ActionType.MARK_UNRESOLVABLE]
        )
        cases.append(case)
    record = addressability_report(cases).as_record()
    ranked = (
        [(["Mobile", "Support"], "Mobile")] * 6
        + [(["Mobile", "Support"], "Support")] * 2
        + [(["Mobile", "Support"], "Routing")] * 2
    )
    record["team_hit_rate"] = hierarchy_hit_rate(ranked).as_record()
    write("addressability.json", record)

    with _packaged("taxonomy_default.csv") as fp:
        taxonomy = load_taxonomy(fp)
    with _packaged("team_assignment_evidence.csv") as fp:
        evidence = load_evidence(fp)
    groups = agreement_report(evidence, rollup_fn=lambda c: rollup(c, taxonomy))
    write(
        "agreement.json",
        {"groups": [g.as_record() for g in groups], "no_data": not groups},
    )


if __name__ == "__main__":
    main()
