"""Persistent graph bookmarks: fully materialized exploration excerpts.

A bookmark is one JSON document holding the explored topology plus every
attribute value fetched for it, so restoring never re-queries the graph.
Documents live in a repository directory, one file per bookmark plus an
``index.json`` carrying listing metadata (including the originating session,
which deliberately stays out of the document itself). Serialization is
canonical — fixed key order, compact separators — so store → restore →
re-serialize is byte-identical.

Restoring checks each payload element against the live dataset's tombstones
and flags deleted ones instead of dropping them; ids that no longer exist at
all count as deleted too.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import store
from .errors import DanglingEdgeError, InvalidSpecError, StorageError, UnknownBookmarkError
from .store import Dataset, check_tagged_value, VALUE_TAGS

INDEX_FILE = "index.json"

DOC_KEYS = ("id", "created_at", "description", "dataset", "dataset_version", "vertices", "edges")


@dataclass
class Bookmark:
    id: str
    created_at: int
    description: str | None
    dataset: str
    dataset_version: int
    payload: dict  # {"vertices": [...], "edges": [...]}
    session_id: str | None = None

    def metadata(self) -> dict:
        return {
            "id": self.id,
            "created_at": self.created_at,
            "description": self.description,
            "dataset": self.dataset,
            "session": self.session_id,
            "vertex_count": len(self.payload["vertices"]),
            "edge_count": len(self.payload["edges"]),
        }


def _check_attrs(attrs: object, where: str) -> None:
    if not isinstance(attrs, dict):
        raise InvalidSpecError(f"{where}: attrs must be an object")
    for name, tv in attrs.items():
        if tv is None:
            continue  # fetched and absent
        if not isinstance(tv, dict) or set(tv.keys()) != {"t", "v"}:
            raise InvalidSpecError(f"{where}: attribute {name!r} must be a tagged value or null")
        if tv["t"] not in VALUE_TAGS:
            raise InvalidSpecError(f"{where}: attribute {name!r} has unknown tag {tv['t']!r}")
        try:
            check_tagged_value(tv["t"], tv["v"])
        except ValueError as exc:
            raise InvalidSpecError(f"{where}: attribute {name!r}: {exc}") from exc


def validate_payload(payload: dict) -> None:
    """Shape-check a subgraph payload and enforce self-containment.

    Every edge endpoint must be among the payload's vertices; the first
    violation is reported by edge id.
    """
    if not isinstance(payload, dict) or set(payload.keys()) != {"vertices", "edges"}:
        raise InvalidSpecError("payload must be an object with 'vertices' and 'edges'")
    vertex_ids: set[int] = set()
    for entry in payload["vertices"]:
        if not isinstance(entry, dict) or not {"id", "type", "attrs"} <= set(entry.keys()):
            raise InvalidSpecError("payload vertex entries need id, type and attrs")
        if not isinstance(entry["id"], int) or isinstance(entry["id"], bool):
            raise InvalidSpecError("payload vertex id must be an integer")
        if entry["id"] in vertex_ids:
            raise InvalidSpecError(f"duplicate vertex {entry['id']} in payload")
        vertex_ids.add(entry["id"])
        _check_attrs(entry["attrs"], f"vertex {entry['id']}")
    edge_ids: set[int] = set()
    for entry in payload["edges"]:
        if not isinstance(entry, dict) or not {"id", "type", "source", "target", "attrs"} <= set(entry.keys()):
            raise InvalidSpecError("payload edge entries need id, type, source, target and attrs")
        eid = entry["id"]
        if not isinstance(eid, int) or isinstance(eid, bool):
            raise InvalidSpecError("payload edge id must be an integer")
        if eid in edge_ids:
            raise InvalidSpecError(f"duplicate edge {eid} in payload")
        edge_ids.add(eid)
        for endpoint in ("source", "target"):
            if entry[endpoint] not in vertex_ids:
                raise DanglingEdgeError(
                    f"edge {eid}: {endpoint} vertex {entry[endpoint]} is not in the payload"
                )
        _check_attrs(entry["attrs"], f"edge {eid}")


def document_text(bm: Bookmark) -> str:
    """Canonical serialization; keys in fixed order, one trailing newline."""
    doc = {
        "id": bm.id,
        "created_at": bm.created_at,
        "description": bm.description,
        "dataset": bm.dataset,
        "dataset_version": bm.dataset_version,
        "vertices": bm.payload["vertices"],
        "edges": bm.payload["edges"],
    }
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":")) + "\n"


def parse_document(text: str) -> Bookmark:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StorageError(f"corrupt bookmark document: {exc}") from exc
    missing = [k for k in DOC_KEYS if k not in doc]
    if missing:
        raise StorageError(f"bookmark document missing keys: {missing}")
    return Bookmark(
        id=doc["id"],
        created_at=doc["created_at"],
        description=doc["description"],
        dataset=doc["dataset"],
        dataset_version=doc["dataset_version"],
        payload={"vertices": doc["vertices"], "edges": doc["edges"]},
    )


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


class BookmarkRepository:
    """Directory-backed bookmark store with a single serialized writer."""

    def __init__(self, directory: str | Path, clock: Callable[[], int] | None = None):
        self.directory = Path(directory)
        self._clock = clock if clock is not None else lambda: int(time.time())
        self._write_lock = threading.Lock()
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            self._index = self._load_index()
        except OSError as exc:
            raise StorageError(f"cannot open bookmark repository: {exc}") from exc

    def _load_index(self) -> dict:
        index_path = self.directory / INDEX_FILE
        if index_path.exists():
            try:
                return json.loads(index_path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise StorageError(f"cannot read bookmark index: {exc}") from exc
        # Rebuild from the documents so a lost index never orphans bookmarks.
        entries = []
        for path in sorted(self.directory.glob("b*.json")):
            bm = parse_document(path.read_text(encoding="utf-8"))
            meta = bm.metadata()
            entries.append(meta)
        entries.sort(key=lambda m: (m["created_at"], m["id"]))
        index = {"next_counter": len(entries) + 1, "bookmarks": entries}
        if entries:
            self._write_index(index)
        return index

    def _write_index(self, index: dict | None = None) -> None:
        index = self._index if index is None else index
        _atomic_write(self.directory / INDEX_FILE, json.dumps(index, ensure_ascii=False, indent=1) + "\n")

    def _path(self, bookmark_id: str) -> Path:
        return self.directory / f"{bookmark_id}.json"

    def store(
        self,
        *,
        payload: dict,
        description: str | None,
        dataset: str,
        dataset_version: int,
        session_id: str | None,
    ) -> Bookmark:
        """Persist one bookmark document and append it to the listing."""
        validate_payload(payload)
        with self._write_lock:
            entries = self._index["bookmarks"]
            previous = entries[-1]["created_at"] if entries else 0
            created_at = max(int(self._clock()), previous)  # listing order stays monotonic
            counter = self._index["next_counter"]
            bm = Bookmark(
                id=f"b{created_at}-{counter:06d}",
                created_at=created_at,
                description=description,
                dataset=dataset,
                dataset_version=dataset_version,
                payload=payload,
                session_id=session_id,
            )
            try:
                _atomic_write(self._path(bm.id), document_text(bm))
                self._index["next_counter"] = counter + 1
                entries.append(bm.metadata())
                self._write_index()
            except OSError as exc:
                raise StorageError(f"cannot persist bookmark: {exc}") from exc
            return bm

    def list(self, session_id: str | None = None) -> list[dict]:
        """Listing metadata ascending by creation time (ties by id)."""
        entries = self._index["bookmarks"]
        if session_id is not None:
            entries = [m for m in entries if m["session"] == session_id]
        return [dict(m) for m in entries]

    def load(self, bookmark_id: str) -> Bookmark:
        path = self._path(bookmark_id)
        if not path.exists():
            raise UnknownBookmarkError(f"no bookmark {bookmark_id!r}")
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise StorageError(f"cannot read bookmark {bookmark_id!r}: {exc}") from exc
        bm = parse_document(text)
        for meta in self._index["bookmarks"]:
            if meta["id"] == bookmark_id:
                bm.session_id = meta["session"]
                break
        return bm


def staleness(payload: dict, dataset: Dataset) -> list[tuple[str, int, str]]:
    """Payload elements that are tombstoned (or gone) in the live dataset."""
    stale: list[tuple[str, int, str]] = []
    for entry in payload["vertices"]:
        row = entry["id"]
        if row >= dataset.vertex_rows or dataset.vertex_deleted[row]:
            stale.append((store.VERTEX, row, "deleted"))
    for entry in payload["edges"]:
        row = entry["id"]
        if row >= dataset.edge_rows or dataset.edge_deleted[row]:
            stale.append((store.EDGE, row, "deleted"))
    return stale


def restore_bookmark(repo: BookmarkRepository, bookmark_id: str, dataset: Dataset) -> tuple[Bookmark, list]:
    """Load a bookmark verbatim and compute staleness against the dataset."""
    bm = repo.load(bookmark_id)
    if bm.dataset != dataset.name:
        raise InvalidSpecError(
            f"bookmark {bookmark_id!r} was taken on dataset {bm.dataset!r}, session is on {dataset.name!r}"
        )
    with dataset.lock.read_lock():
        return bm, staleness(bm.payload, dataset)
