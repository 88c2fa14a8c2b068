"""Generate the bundled synthetic test corpus: a 50-review store-export
file (plus malformed and duplicate lines exercising the importer), a
ground-truth label file derived from the seeding, and a small support
article store.

Deterministic by construction (no randomness). Run from the repo root:

    python tools/gen_demo_corpus.py
"""

from __future__ import annotations

import json
from pathlib import Path

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

# (body, language, seeded kind). Bodies deliberately hit the starter
# lexicon and the fine demonstration rules.
TEMPLATES = [
    ("I want to understand why the route changes so often.", "en", "explicit"),
    ("Please explain what the toll icon on the map means.", "en", "explicit"),
    ("Can you explain why the app needs my location data for tracking?", "en", "explicit"),
    ("Ich möchte verstehen, warum die Route anders berechnet wird.", "de", "explicit"),
    ("Bitte erklären Sie die neuen Einstellungen.", "de", "explicit"),
    ("The new layout makes no sense to me.", "en", "implicit"),
    ("I don't understand the rerouting after the last update.", "en", "implicit"),
    ("The voice settings are confusing.", "en", "implicit"),
    ("Ich verstehe nicht, wofür die App so viel Akku braucht.", "de", "implicit"),
    ("Das neue Menü ist wirklich verwirrend.", "de", "implicit"),
    ("How do I mute the voice during navigation?", "en", "potential"),
    ("Why does the app vibrate at every turn?", "en", "potential"),
    ("What happened to the dark mode button?", "en", "potential"),
    ("Wie kann ich offline fahren?", "de", "potential"),
    ("Warum ist die App nach dem Update so langsam?", "de", "potential"),
    ("Great app, works fine on my phone.", "en", "none"),
    ("Five stars, best navigation ever.", "en", "none"),
    ("Solid and reliable, no complaints.", "en", "none"),
    ("Sehr gute App, klare Empfehlung.", "de", "none"),
    ("Funktioniert einwandfrei, danke.", "de", "none"),
    ("The app crashed again at the last crossing.", "en", "none"),
    ("Suddenly the subscription price doubled.", "en", "none"),
    ("Login fails every morning.", "en", "none"),
    ("Nice tutorial for getting started.", "en", "none"),
    ("Die Sprachausgabe ist angenehm.", "de", "none"),
]

APPS = [
    ("demo-nav", "google-play"),
    ("demo-nav", "apple-app-store"),
    ("demo-courier", "google-play"),
]

# Developer responses for a few Google Play reviews (feeds the
# past-response source tier).
RESPONSES = {
    5: "Thanks! The layout groups stops by region now; see the in-app guide.",
    10: "You can mute the voice under Settings > Audio > Voice output.",
    11: "The vibration signals an upcoming maneuver; disable it under Settings.",
    20: "Sorry about the crash. Version 5.2 fixes it, please update.",
}

RATINGS = [1, 2, 3, 4, 5, 2, 3, 1, 4, 2, 3, 2, 4, 3, 2, 5, 5, 4, 5, 5, 1, 2, 2, 4, 4]

ARTICLES = [
    {
        "id": "a-mute-voice",
        "title": "How do I mute the voice during navigation?",
        "body": "Open Settings, choose Audio, then Voice output, and select mute. "
                "The map keeps showing every maneuver.",
        "url": "https://support.example/a-mute-voice",
        "apps": [],
    },
    {
        "id": "a-route-changes",
        "title": "Why does my route change during the trip?",
        "body": "Routes are recalculated continuously from live traffic, so the "
                "guidance can change while driving to keep the arrival time low.",
        "url": "https://support.example/a-route-changes",
        "apps": [],
    },
    {
        "id": "a-dark-mode",
        "title": "What happened to the dark mode button?",
        "body": "Dark mode now follows the system theme automatically; the manual "
                "button moved into the display settings.",
        "url": "https://support.example/a-dark-mode",
        "apps": ["demo-nav"],
    },
    {
        "id": "a-offline",
        "title": "Can I use the app offline?",
        "body": "Offline driving works after downloading a region; live traffic "
                "requires a connection.",
        "url": "https://support.example/a-offline",
        "apps": [],
    },
    {
        "id": "a-courier-stops",
        "title": "How are courier stops ordered?",
        "body": "Stops are ordered by the tour optimizer; manual reordering is "
                "available from the stop list.",
        "url": "https://support.example/a-courier-stops",
        "apps": ["demo-courier"],
    },
    {
        "id": "a-battery",
        "title": "Why does navigation use so much battery?",
        "body": "Continuous GPS and the screen are the main drains; a car charger "
                "is recommended for long trips.",
        "url": "https://support.example/a-battery",
        "apps": [],
    },
]


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    export_lines: list[str] = []
    truth_rows = ["unit_id,label"]
    n = 0
    while n < 50:
        body, language, kind = TEMPLATES[n % len(TEMPLATES)]
        app_id, store = APPS[n % len(APPS)]
        review_id = f"r{n:03d}"
        record = {
            "id": review_id,
            "app_id": app_id,
            "title": None,
            "body": body,
            "rating": RATINGS[n % len(RATINGS)],
            "language": language,
            "created_at": f"2024-06-01T10:{n:02d}:00Z",
        }
        if store == "google-play" and n in RESPONSES:
            record["developer_responses"] = [
                {
                    "text": RESPONSES[n],
                    "responded_at": f"2024-06-02T09:{n:02d}:00Z",
                }
            ]
        # the export is grouped by store for the importer, see below
        export_lines.append((store, json.dumps(record, ensure_ascii=False)))
        truth_rows.append(f"{store}:{app_id}:{review_id}:1,{kind}")
        n += 1

    # One export file per store (real dumps are per store); google gets two
    # broken lines and one duplicate to exercise the import report.
    for store in ("google-play", "apple-app-store"):
        lines = [line for s, line in export_lines if s == store]
        if store == "google-play":
            lines.insert(3, "{not valid json")
            bad = json.loads(lines[0])
            bad["rating"] = 6
            bad["id"] = "r900"
            lines.insert(7, json.dumps(bad, ensure_ascii=False))
            lines.append(lines[0])  # duplicate of the first review
        path = FIXTURES / f"export_{store}.jsonl"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"wrote {path.name}: {len(lines)} lines")

    truth_path = FIXTURES / "truth_labels.csv"
    truth_path.write_text("\n".join(truth_rows) + "\n", encoding="utf-8")
    print(f"wrote {truth_path.name}: {len(truth_rows) - 1} rows")

    articles_path = FIXTURES / "articles.jsonl"
    with articles_path.open("w", encoding="utf-8") as fp:
        for article in ARTICLES:
            fp.write(json.dumps({"schema": "support-article/1", **article}, ensure_ascii=False))
            fp.write("\n")
    print(f"wrote {articles_path.name}: {len(ARTICLES)} articles")


if __name__ == "__main__":
    main()
