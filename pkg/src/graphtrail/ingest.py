"""Dataset ingestion: CSV manifests, a seeded synthetic generator, export.

The on-disk image of a dataset is a manifest JSON naming a schema file and
one CSV per vertex/edge type. CSV dialect: comma-separated, first row is the
header, UTF-8, minimal quoting with double-quote escaping. Element ids are
explicit ``id`` columns and must be dense (0..n-1) across all files of one
element class; the per-type file supplies the reserved ``type`` attribute, so
a ``type`` column is rejected. Empty fields read as absent.

The generator emits a social-network-shaped graph — eight vertex types,
thirteen edge types, persons with the attributes the demo walkthrough
filters on — deterministically: the same seed yields byte-identical files.
"""

from __future__ import annotations

import csv
import json
import random
import time
from dataclasses import dataclass
from datetime import date
from pathlib import Path

from . import store
from .errors import InvalidSpecError, StorageError
from .store import Dataset, Schema

MANIFEST_FILE = "manifest.json"
SCHEMA_FILE = "schema.json"

_EPOCH_ORDINAL = date(1970, 1, 1).toordinal()


def _day_ts(d: date) -> int:
    return (d.toordinal() - _EPOCH_ORDINAL) * 86400


# -- schema / manifest files ----------------------------------------------


def load_schema_file(path: Path) -> Schema:
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise StorageError(f"cannot read schema file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidSpecError(f"schema file {path} is not valid JSON: {exc}") from exc
    for key in ("vertex_types", "edge_types", "vertex_attrs", "edge_attrs"):
        if key not in raw:
            raise InvalidSpecError(f"schema file {path} missing {key!r}")
    return Schema(
        vertex_types=list(raw["vertex_types"]),
        edge_types=list(raw["edge_types"]),
        vertex_attrs=dict(raw["vertex_attrs"]),
        edge_attrs=dict(raw["edge_attrs"]),
    )


def _parse_cell(tag: str, text: str, *, where: str):
    if text == "":
        return None
    try:
        if tag in (store.TAG_INT, store.TAG_TS):
            return int(text)
        if tag == store.TAG_FLOAT:
            return float(text)
        if tag == store.TAG_BOOL:
            if text not in ("true", "false"):
                raise ValueError(f"expected true/false, got {text!r}")
            return text == "true"
        return text
    except ValueError as exc:
        raise InvalidSpecError(f"{where}: {exc}") from exc


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _read_typed_csv(
    path: Path,
    type_name: str,
    schema_attrs: dict[str, str],
    *,
    reserved: tuple[str, ...],
) -> list[tuple[int, dict]]:
    if not path.exists():
        raise StorageError(f"data file not found: {path}")
    rows: list[tuple[int, dict]] = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return rows
        for col in reserved:
            if col not in header:
                raise InvalidSpecError(f"{path.name}: header mismatch: missing reserved column {col!r}")
        seen: set[str] = set()
        for col in header:
            if col in seen:
                raise InvalidSpecError(f"{path.name}: header mismatch: duplicate column {col!r}")
            seen.add(col)
            if col in reserved:
                continue
            if col == store.TYPE_ATTR:
                raise InvalidSpecError(
                    f"{path.name}: header mismatch: column 'type' is reserved (set by the manifest)"
                )
            if col not in schema_attrs:
                raise InvalidSpecError(f"{path.name}: header mismatch: unknown attribute column {col!r}")
        for line_no, record in enumerate(reader, start=2):
            if len(record) != len(header):
                raise InvalidSpecError(f"{path.name}:{line_no}: expected {len(header)} fields, got {len(record)}")
            row: dict = {store.TYPE_ATTR: type_name}
            row_id = None
            for col, cell in zip(header, record):
                where = f"{path.name}:{line_no}: column {col!r}"
                if col in ("id", "source", "target"):
                    parsed = _parse_cell(store.TAG_INT, cell, where=where)
                    if parsed is None:
                        raise InvalidSpecError(f"{where}: must not be empty")
                    if col == "id":
                        row_id = parsed
                    else:
                        row[col] = parsed
                else:
                    row[col] = _parse_cell(schema_attrs[col], cell, where=where)
            rows.append((row_id, row))
    return rows


def _dense_rows(collected: list[tuple[int, dict]], what: str) -> list[dict]:
    table: list[dict | None] = [None] * len(collected)
    for row_id, row in collected:
        if row_id < 0 or row_id >= len(collected):
            raise InvalidSpecError(f"{what} id {row_id} outside dense range 0..{len(collected) - 1}")
        if table[row_id] is not None:
            raise InvalidSpecError(f"duplicate {what} id {row_id}")
        table[row_id] = row
    return table  # type: ignore[return-value]


def load_manifest(manifest_path: str | Path) -> Dataset:
    """Load a manifest and materialize the dataset it describes."""
    manifest_path = Path(manifest_path)
    if not manifest_path.exists():
        raise StorageError(f"manifest not found: {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidSpecError(f"manifest {manifest_path} is not valid JSON: {exc}") from exc
    for key in ("name", "schema", "vertices", "edges"):
        if key not in manifest:
            raise InvalidSpecError(f"manifest {manifest_path} missing {key!r}")
    base = manifest_path.parent
    schema = load_schema_file(base / manifest["schema"])
    vertex_rows: list[tuple[int, dict]] = []
    for type_name, file_name in manifest["vertices"].items():
        if type_name not in schema.vertex_types:
            raise InvalidSpecError(f"manifest vertex type {type_name!r} not in schema")
        vertex_rows.extend(
            _read_typed_csv(base / file_name, type_name, schema.vertex_attrs, reserved=("id",))
        )
    edge_rows: list[tuple[int, dict]] = []
    for type_name, file_name in manifest["edges"].items():
        if type_name not in schema.edge_types:
            raise InvalidSpecError(f"manifest edge type {type_name!r} not in schema")
        edge_rows.extend(
            _read_typed_csv(base / file_name, type_name, schema.edge_attrs, reserved=("id", "source", "target"))
        )
    return store.load_dataset(
        manifest["name"],
        schema,
        _dense_rows(vertex_rows, "vertex"),
        _dense_rows(edge_rows, "edge"),
    )


def export_dataset(dataset: Dataset, out_dir: str | Path) -> Path:
    """Write a dataset back out in the manifest layout; returns the manifest path.

    Live and tombstoned rows are both exported (tombstones are a runtime
    notion); rows are grouped per type ascending by id with every declared
    attribute as a column, so a reload reproduces the logical content.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    schema = dataset.schema
    schema_doc = {
        "vertex_types": schema.vertex_types,
        "edge_types": schema.edge_types,
        "vertex_attrs": schema.vertex_attrs,
        "edge_attrs": schema.edge_attrs,
    }
    (out / SCHEMA_FILE).write_text(json.dumps(schema_doc, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
    manifest = {"name": dataset.name, "schema": SCHEMA_FILE, "vertices": {}, "edges": {}}

    vertex_attrs = [a for a in schema.vertex_attrs if a != store.TYPE_ATTR]
    for type_name in schema.vertex_types:
        file_name = f"{type_name}.csv"
        manifest["vertices"][type_name] = file_name
        with (out / file_name).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["id"] + vertex_attrs)
            type_col = dataset.vertex_columns[store.TYPE_ATTR]
            for row in range(dataset.vertex_rows):
                if type_col[row] != type_name:
                    continue
                writer.writerow([row] + [_format_cell(dataset.vertex_columns[a][row]) for a in vertex_attrs])

    edge_attrs = [a for a in schema.edge_attrs if a != store.TYPE_ATTR]
    for type_name in schema.edge_types:
        file_name = f"{type_name}.csv"
        manifest["edges"][type_name] = file_name
        with (out / file_name).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["id", "source", "target"] + edge_attrs)
            type_col = dataset.edge_columns[store.TYPE_ATTR]
            for row in range(dataset.edge_rows):
                if type_col[row] != type_name:
                    continue
                writer.writerow(
                    [row, dataset.edge_source[row], dataset.edge_target[row]]
                    + [_format_cell(dataset.edge_columns[a][row]) for a in edge_attrs]
                )

    manifest_path = out / MANIFEST_FILE
    manifest_path.write_text(json.dumps(manifest, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
    return manifest_path


# -- synthetic generator ---------------------------------------------------

GENERATED_NAME = "social"

VERTEX_TYPES = ("person", "forum", "post", "comment", "place", "organisation", "tag", "tagclass")
VERTEX_WEIGHTS = (0.36, 0.08, 0.20, 0.20, 0.06, 0.04, 0.04, 0.02)

# (name, source type, target type)
EDGE_TYPES = (
    ("friendOf", "person", "person"),
    ("hasCreator", "post", "person"),
    ("replyOf", "comment", "post"),
    ("containerOf", "forum", "post"),
    ("hasMember", "forum", "person"),
    ("hasModerator", "forum", "person"),
    ("hasTag", "post", "tag"),
    ("hasInterest", "person", "tag"),
    ("isLocatedIn", "person", "place"),
    ("studyAt", "person", "organisation"),
    ("workAt", "person", "organisation"),
    ("isPartOf", "place", "place"),
    ("isSubclassOf", "tagclass", "tagclass"),
)
EDGE_WEIGHTS = (0.30, 0.13, 0.10, 0.07, 0.10, 0.03, 0.07, 0.07, 0.06, 0.02, 0.02, 0.02, 0.01)
EDGES_PER_VERTEX = 5

VERTEX_COLUMNS = {
    "person": ["firstname", "lastname", "gender", "birthday", "age", "joinDate", "location"],
    "forum": ["title", "creationDate"],
    "post": ["content", "creationDate"],
    "comment": ["content", "creationDate"],
    "place": ["name"],
    "organisation": ["name"],
    "tag": ["name"],
    "tagclass": ["name"],
}
EDGE_COLUMNS = {"friendOf": ["since"], "hasMember": ["since"], "hasInterest": ["weight"]}

FIRST_NAMES = (
    "Ada", "Alan", "Barbara", "Carlos", "Chen", "Dana", "Edsger", "Elena", "Grace", "Hana",
    "Igor", "Jun", "Katherine", "Liam", "Mary", "Niklaus", "Olga", "Priya", "Quentin", "Rosa",
    "Sven", "Tariq", "Uma", "Yuki",
)
LAST_NAMES = (
    "Lovelace", "Turing", "Liskov", "Moreno", "Wei", "Scott", "Dijkstra", "Petrova", "Hopper", "Sato",
    "Ivanov", "Tanaka", "Johnson", "Byrne", "Jackson", "Wirth", "Orlova", "Sharma", "Roux", "Diaz",
    "Larsson", "Hassan", "Nair", "Mori",
)
COUNTRIES = (
    "United States", "Germany", "Japan", "Brazil", "India", "France", "Kenya", "Canada",
    "Australia", "Poland",
)
PLACE_NAMES = (
    "Springfield", "Dresden", "Kyoto", "Recife", "Pune", "Lyon", "Nairobi", "Halifax",
    "Perth", "Gdansk", "Austin", "Leipzig",
)
ORG_NAMES = (
    "Acme Labs", "Globex", "Initech", "Umbrella Works", "Hooli", "Vandelay Industries",
    "Stark Metals", "Wayne Logistics",
)
TAG_TOPICS = (
    "databases", "graphs", "hiking", "jazz", "chess", "astronomy", "cooking", "cycling",
    "photography", "poetry", "robotics", "sailing",
)
TAGCLASS_NAMES = ("Topic", "Hobby", "Science", "Art")
WORDS = (
    "the", "quick", "graph", "walks", "over", "many", "edges", "toward", "distant", "vertices",
    "while", "queries", "pause", "and", "resume",
)

# Ages are pinned to a reference year so integer age and birthday agree.
AGE_REFERENCE_YEAR = 2015

_BIRTH_LO = date(1950, 1, 1).toordinal()
_BIRTH_HI = date(1999, 12, 31).toordinal()
_JOIN_LO = date(2005, 1, 1).toordinal()
_JOIN_HI = date(2014, 12, 31).toordinal()

# Epoch seconds for 2010-01-01; "joined after 2009" in demo predicates.
JOIN_CUTOFF_2010 = _day_ts(date(2010, 1, 1))


def generated_schema() -> Schema:
    return Schema(
        vertex_types=list(VERTEX_TYPES),
        edge_types=[name for name, _, _ in EDGE_TYPES],
        vertex_attrs={
            "firstname": store.TAG_STR,
            "lastname": store.TAG_STR,
            "gender": store.TAG_STR,
            "birthday": store.TAG_TS,
            "age": store.TAG_INT,
            "joinDate": store.TAG_TS,
            "location": store.TAG_STR,
            "title": store.TAG_STR,
            "content": store.TAG_STR,
            "creationDate": store.TAG_TS,
            "name": store.TAG_STR,
        },
        edge_attrs={"since": store.TAG_TS, "weight": store.TAG_FLOAT},
    )


def _allocate(total: int, weights: tuple[float, ...], minimum_each: int = 1) -> list[int]:
    counts = [minimum_each] * len(weights)
    extra = total - minimum_each * len(weights)
    for i, w in enumerate(weights):
        counts[i] += int(w * extra)
    counts[0] += total - sum(counts)  # rounding remainder goes to the heaviest class
    return counts


@dataclass
class GenerateSummary:
    manifest_path: Path
    vertex_count: int
    edge_count: int
    vertex_type_counts: dict[str, int]
    edge_type_counts: dict[str, int]
    elapsed: float


def generate(seed: int, scale: int, out_dir: str | Path) -> GenerateSummary:
    """Write a deterministic synthetic dataset of ``scale`` vertices.

    Needs at least one vertex of each of the eight types, hence scale >= 8.
    Edge count is ``EDGES_PER_VERTEX * scale`` spread over all thirteen edge
    types. Same seed, same files, byte for byte.
    """
    if scale < len(VERTEX_TYPES):
        raise InvalidSpecError(f"scale must be at least {len(VERTEX_TYPES)} to populate every vertex type")
    started = time.monotonic()
    rng = random.Random(seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    vertex_counts = _allocate(scale, VERTEX_WEIGHTS)
    ranges: dict[str, range] = {}
    next_id = 0
    for type_name, count in zip(VERTEX_TYPES, vertex_counts):
        ranges[type_name] = range(next_id, next_id + count)
        next_id += count

    for type_name, count in zip(VERTEX_TYPES, vertex_counts):
        with (out / f"{type_name}.csv").open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["id"] + VERTEX_COLUMNS[type_name])
            for vid in ranges[type_name]:
                writer.writerow([vid] + [_format_cell(v) for v in _vertex_attrs(rng, type_name, vid)])

    edge_total = EDGES_PER_VERTEX * scale
    edge_counts = _allocate(edge_total, EDGE_WEIGHTS)
    eid = 0
    for (type_name, src_type, dst_type), count in zip(EDGE_TYPES, edge_counts):
        src_range, dst_range = ranges[src_type], ranges[dst_type]
        with (out / f"{type_name}.csv").open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            extra_cols = EDGE_COLUMNS.get(type_name, [])
            writer.writerow(["id", "source", "target"] + extra_cols)
            for _ in range(count):
                src = rng.randrange(src_range.start, src_range.stop)
                dst = rng.randrange(dst_range.start, dst_range.stop)
                if src_type == dst_type and src == dst and len(dst_range) > 1:
                    dst = dst_range.start + (dst - dst_range.start + 1) % len(dst_range)
                extras = []
                for col in extra_cols:
                    if col == "since":
                        extras.append(_day_ts(date.fromordinal(rng.randrange(_JOIN_LO, _JOIN_HI + 1))))
                    else:
                        extras.append(round(rng.random(), 4))
                writer.writerow([eid, src, dst] + [_format_cell(v) for v in extras])
                eid += 1

    schema = generated_schema()
    schema_doc = {
        "vertex_types": schema.vertex_types,
        "edge_types": schema.edge_types,
        "vertex_attrs": schema.vertex_attrs,
        "edge_attrs": schema.edge_attrs,
    }
    (out / SCHEMA_FILE).write_text(json.dumps(schema_doc, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
    manifest = {
        "name": GENERATED_NAME,
        "schema": SCHEMA_FILE,
        "vertices": {t: f"{t}.csv" for t in VERTEX_TYPES},
        "edges": {name: f"{name}.csv" for name, _, _ in EDGE_TYPES},
    }
    (out / MANIFEST_FILE).write_text(json.dumps(manifest, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
    return GenerateSummary(
        manifest_path=out / MANIFEST_FILE,
        vertex_count=scale,
        edge_count=edge_total,
        vertex_type_counts=dict(zip(VERTEX_TYPES, vertex_counts)),
        edge_type_counts={name: c for (name, _, _), c in zip(EDGE_TYPES, edge_counts)},
        elapsed=time.monotonic() - started,
    )


def _vertex_attrs(rng: random.Random, type_name: str, vid: int) -> list:
    if type_name == "person":
        birth = date.fromordinal(rng.randrange(_BIRTH_LO, _BIRTH_HI + 1))
        join = date.fromordinal(rng.randrange(_JOIN_LO, _JOIN_HI + 1))
        return [
            rng.choice(FIRST_NAMES),
            rng.choice(LAST_NAMES),
            rng.choice(("female", "male")),
            _day_ts(birth),
            AGE_REFERENCE_YEAR - birth.year,
            _day_ts(join),
            rng.choice(COUNTRIES),
        ]
    if type_name == "forum":
        return [f"Forum {vid}", _day_ts(date.fromordinal(rng.randrange(_JOIN_LO, _JOIN_HI + 1)))]
    if type_name in ("post", "comment"):
        text = " ".join(rng.choice(WORDS) for _ in range(5))
        return [text, _day_ts(date.fromordinal(rng.randrange(_JOIN_LO, _JOIN_HI + 1)))]
    if type_name == "place":
        return [rng.choice(PLACE_NAMES)]
    if type_name == "organisation":
        return [rng.choice(ORG_NAMES)]
    if type_name == "tag":
        return [rng.choice(TAG_TOPICS)]
    return [rng.choice(TAGCLASS_NAMES)]
