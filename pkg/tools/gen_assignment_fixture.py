"""Generate the shipped team-assignment fixture: an engineered evidence
file whose vote counts produce the documented per-category team shares,
plus the pre-derived table and the tie-order overrides.

Run from the repository root:

    python tools/gen_assignment_fixture.py
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from reviewtriage.assignment import derive_table, load_evidence, save_table, table_to_record

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "reviewtriage" / "data"

# category -> ordered (team, votes); vote counts are engineered so the
# derived shares round to the documented percentages, with sub-threshold
# remainders spread over real teams.
VOTES: dict[str, list[tuple[str, int]]] = {
    "Business": [("Business", 7), ("Support", 7), ("Mobile", 7), ("Routing", 4)],
    "Operation": [("Mobile", 43), ("Support", 41), ("Routing", 16)],
    "Tutorial": [("Support", 54), ("Mobile", 30), ("Routing", 16)],
    "Navigation": [("Support", 7), ("Mobile", 7), ("Routing", 3), ("Business", 3)],
    "Algorithms": [("Routing", 21), ("Support", 14), ("Mobile", 8), ("UI/UX", 7)],
    "Consequences": [("Mobile", 22), ("Support", 3)],
    "Unexpected system behavior": [
        ("Mobile", 42), ("Routing", 33), ("Support", 13), ("UI/UX", 12),
    ],
    "Bugs & Crashes": [("Mobile", 8), ("Support", 3), ("Routing", 3)],
    "User Interface": [("UI/UX", 55), ("Mobile", 36), ("Support", 9)],
    "Privacy": [("Mobile", 3), ("Meta", 1)],
    "Security": [
        ("Mobile", 1), ("Support", 1), ("Routing", 1), ("Business", 1), ("UI/UX", 1),
    ],
    "Meta information": [("Mobile", 9), ("Support", 9), ("Routing", 4), ("Business", 3)],
    "Terminology": [
        ("Mobile", 1), ("Support", 1), ("Routing", 1), ("Business", 1), ("UI/UX", 1),
    ],
    "System-specific elements": [("Support", 3), ("Mobile", 1)],
}

# Exact share ties whose documented order differs from the lexicographic
# default.
TIE_ORDER = {
    "Business": ["Business", "Support", "Mobile"],
    "Navigation": ["Support", "Mobile"],
}

CATEGORIES = sorted(VOTES) + ["Feature Questions"]

RATERS = ["r1", "r2", "r3", "r4"]


def slugify(name: str) -> str:
    return "".join(ch if ch.isalnum() else "-" for ch in name.lower()).strip("-")


def main() -> None:
    rows = []
    for category in sorted(VOTES):
        slug = slugify(category)
        index = 0
        for team, count in VOTES[category]:
            for _ in range(count):
                unit = f"{slug}-{index // len(RATERS):03d}"
                rater = RATERS[index % len(RATERS)]
                rows.append((unit, category, team, rater))
                index += 1

    evidence_path = DATA_DIR / "team_assignment_evidence.csv"
    with evidence_path.open("w", encoding="utf-8", newline="") as fp:
        fp.write("# version: 1\n")
        fp.write("# Engineered multi-rater votes reproducing the documented shares.\n")
        writer = csv.writer(fp)
        writer.writerow(["unit_id", "category", "team", "rater"])
        writer.writerows(rows)

    tie_path = DATA_DIR / "team_assignment_tie_order.json"
    with tie_path.open("w", encoding="utf-8") as fp:
        json.dump(TIE_ORDER, fp, indent=2)
        fp.write("\n")

    with evidence_path.open(encoding="utf-8") as fp:
        evidence = load_evidence(fp)
    table = derive_table(
        evidence, threshold="1/4", categories=CATEGORIES, tie_order=TIE_ORDER
    )
    table.version = "1"
    table_path = DATA_DIR / "team_assignment_table.json"
    with table_path.open("w", encoding="utf-8") as fp:
        save_table(fp, table)

    for category, entries in table_to_record(table)["rows"].items():
        listing = ", ".join(f"{e['team']} {e['percent']}%" for e in entries) or "n.a."
        print(f"{category}: {listing}")


if __name__ == "__main__":
    main()
