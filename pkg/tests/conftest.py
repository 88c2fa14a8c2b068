from __future__ import annotations

import sys
from datetime import datetime, timezone
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from reviewtriage.corpus import Review, StoreKind

FIXTURES = Path(__file__).resolve().parent / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"


def make_review(
    review_id: str = "r1",
    body: str = "Works fine.",
    store: StoreKind = StoreKind.GOOGLE_PLAY,
    app_id: str = "demo-nav",
    title: str | None = None,
    rating: int = 4,
    language: str = "en",
    minute: int = 0,
    responses: tuple = (),
) -> Review:
    return Review(
        id=review_id,
        store=store,
        app_id=app_id,
        title=title,
        body=body,
        rating=rating,
        language=language,
        created_at=datetime(2024, 6, 1, 10, minute, tzinfo=timezone.utc),
        developer_responses=responses,
    )


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
