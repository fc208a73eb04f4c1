from __future__ import annotations

import warnings
from pathlib import Path

import pytest

from graphtrail import ingest

warnings.filterwarnings("ignore", message="Using `httpx` with `starlette.testclient`")

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def g0():
    """The hand-enumerable five-person fixture, loaded from its shipped files."""
    return ingest.load_manifest(FIXTURES / "g0" / "manifest.json")


@pytest.fixture
def make_client(tmp_path):
    """Factory for an in-process HTTP client over given datasets."""
    from fastapi.testclient import TestClient

    from graphtrail.bookmarks import BookmarkRepository
    from graphtrail.service import AppState, create_app

    clients = []

    def factory(datasets: dict, clock=None, repo_dir=None):
        repo = BookmarkRepository(repo_dir or tmp_path / "bookmarks", clock=clock)
        state = AppState(datasets=datasets, repo=repo)
        client = TestClient(create_app(state))
        clients.append(client)
        return client

    yield factory
    for client in clients:
        client.close()
