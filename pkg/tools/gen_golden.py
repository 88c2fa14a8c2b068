"""Produce the golden outputs for the end-to-end pipeline test by running
the CLI over the bundled synthetic corpus. Run once, eyeball the summary,
and check the results in; the pipeline test fails on any byte drift.

    python tools/gen_golden.py
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from reviewtriage.cli import main

FIXTURES = ROOT / "tests" / "fixtures"
GOLDEN = ROOT / "tests" / "golden"


def run(*args: str) -> None:
    code = main(list(args))
    if code != 0:
        raise SystemExit(f"command failed ({code}): {' '.join(args)}")


def pipeline(out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    run(
        "ingest", "--in", str(FIXTURES / "export_google-play.jsonl"),
        "--format", "json-lines", "--store", "google-play",
        "--out", str(out_dir / "corpus_google.jsonl"),
        "--report-out", str(out_dir / "report_google.json"),
    )
    run(
        "ingest", "--in", str(FIXTURES / "export_apple-app-store.jsonl"),
        "--format", "json-lines", "--store", "apple-app-store",
        "--out", str(out_dir / "corpus_apple.jsonl"),
        "--report-out", str(out_dir / "report_apple.json"),
    )
    corpus = out_dir / "corpus.jsonl"
    corpus.write_bytes(
        (out_dir / "corpus_google.jsonl").read_bytes()
        + (out_dir / "corpus_apple.jsonl").read_bytes()
    )
    run(
        "detect", "--corpus", str(corpus),
        "--out", str(out_dir / "labels.jsonl"),
        "--stats-out", str(out_dir / "stats.json"),
    )
    run(
        "classify", "--corpus", str(corpus),
        "--labels", str(out_dir / "labels.jsonl"),
        "--out", str(out_dir / "suggestions.jsonl"),
    )
    run(
        "assign", "--suggestions", str(out_dir / "suggestions.jsonl"),
        "--out", str(out_dir / "assigned.jsonl"),
    )
    run(
        "resolve", "--corpus", str(corpus),
        "--labels", str(out_dir / "labels.jsonl"),
        "--articles", str(FIXTURES / "articles.jsonl"),
        "--out", str(out_dir / "candidates.jsonl"),
    )
    run(
        "evaluate", "labels",
        "--pred", str(out_dir / "labels.jsonl"), "--pred-format", "need-labels",
        "--truth", str(FIXTURES / "truth_labels.csv"),
        "--out", str(out_dir / "evaluation.json"),
    )


GOLDEN_FILES = [
    "report_google.json",
    "report_apple.json",
    "corpus.jsonl",
    "labels.jsonl",
    "stats.json",
    "suggestions.jsonl",
    "assigned.jsonl",
    "candidates.jsonl",
    "evaluation.json",
]


if __name__ == "__main__":
    pipeline(GOLDEN)
    for name in ("corpus_google.jsonl", "corpus_apple.jsonl"):
        (GOLDEN / name).unlink()
    for name in GOLDEN_FILES:
        size = (GOLDEN / name).stat().st_size
        print(f"{name}: {size} bytes")
