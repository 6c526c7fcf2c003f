"""Fingerprint dataset loading, validation, indexing, and canonical serialization.

The canonical on-disk format is UTF-8 CSV with header
``browser_id,timestamp,<attr1>,...,<attrN>``, RFC-4180 quoting, ``\\n`` line
endings. Timestamps are integer epoch milliseconds. Every attribute value is
opaque text compared byte-for-byte; the empty string is a legal value.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator

from .errors import (
    DuplicateAttributeName,
    EmptyDataset,
    InvalidMetadata,
    MalformedHeader,
    RowArityMismatch,
    UnknownSourceColumn,
    UnparseableTimestamp,
)

RESERVED_COLUMNS = ("browser_id", "timestamp")


@dataclass(frozen=True)
class Attribute:
    """One collectible browser property (a column of the dataset)."""

    index: int
    name: str
    avg_collection_time_ms: float | None = None


@dataclass(frozen=True)
class FingerprintRecord:
    browser_id: str
    timestamp: int
    values: tuple[str, ...]


@dataclass(frozen=True)
class DatasetStats:
    n_attributes: int
    n_browsers: int
    n_records: int
    distinct_full_fingerprints: int
    unicity_rate: float


class Dataset:
    """Immutable fingerprint table indexed per browser.

    Records are reordered at construction into canonical order (browser_id
    ascending, then timestamp with input order breaking ties), so the
    serialization and the dataset digest are functions of content alone.
    Instances hash by identity; measure results are memoized per instance.
    """

    def __init__(
        self,
        attributes: tuple[Attribute, ...],
        records: tuple[FingerprintRecord, ...],
    ):
        if not attributes:
            raise MalformedHeader("a dataset needs at least one attribute column")
        names = [a.name for a in attributes]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise DuplicateAttributeName(f"duplicate attribute name(s): {dupes}")
        if not records:
            raise EmptyDataset("no fingerprint records")
        n = len(attributes)
        for rec in records:
            if len(rec.values) != n:
                raise RowArityMismatch(0, n + 2, len(rec.values) + 2)

        order = sorted(range(len(records)), key=lambda i: (records[i].browser_id, records[i].timestamp, i))
        self.attributes = attributes
        self.records = tuple(records[i] for i in order)

        index: dict[str, list[int]] = {}
        for pos, rec in enumerate(self.records):
            index.setdefault(rec.browser_id, []).append(pos)
        self.browser_index: dict[str, tuple[int, ...]] = {b: tuple(p) for b, p in index.items()}

        self._digest: str | None = None
        self._measure_cache: dict = {}

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @property
    def n_browsers(self) -> int:
        return len(self.browser_index)

    def attribute_names(self) -> list[str]:
        return [a.name for a in self.attributes]

    def attribute_by_name(self, name: str) -> Attribute:
        for a in self.attributes:
            if a.name == name:
                return a
        raise KeyError(name)

    def with_metadata(self, times: dict[str, float]) -> "Dataset":
        """Return a copy with avg_collection_time_ms attached from `times`."""
        attrs = tuple(
            Attribute(a.index, a.name, float(times[a.name])) if a.name in times else a
            for a in self.attributes
        )
        return Dataset(attrs, self.records)

    def canonical_bytes(self) -> bytes:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([*RESERVED_COLUMNS, *self.attribute_names()])
        for rec in self.records:
            writer.writerow([rec.browser_id, str(rec.timestamp), *rec.values])
        return buf.getvalue().encode("utf-8")

    @property
    def digest(self) -> str:
        """sha256 of the canonical CSV serialization; pins traces to datasets."""
        if self._digest is None:
            self._digest = hashlib.sha256(self.canonical_bytes()).hexdigest()
        return self._digest


def load_csv(path: str | Path, metadata_path: str | Path | None = None) -> Dataset:
    """Load a canonical CSV file, optionally attaching collection-time metadata."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedHeader(f"{path}: empty file") from None
        if len(header) < 2 or tuple(header[:2]) != RESERVED_COLUMNS:
            raise MalformedHeader(
                f"{path}: header must start with 'browser_id,timestamp', got {header[:2]}"
            )
        attr_names = header[2:]
        if not attr_names:
            raise MalformedHeader(f"{path}: no attribute columns")
        if any(not n for n in attr_names):
            raise MalformedHeader(f"{path}: empty attribute name in header")
        if len(set(attr_names)) != len(attr_names):
            dupes = sorted({n for n in attr_names if attr_names.count(n) > 1})
            raise DuplicateAttributeName(f"{path}: duplicate attribute name(s): {dupes}")

        n = len(attr_names)
        records = []
        for row_no, row in enumerate(reader, start=1):
            if len(row) != n + 2:
                raise RowArityMismatch(row_no, n + 2, len(row))
            try:
                ts = int(row[1])
            except ValueError:
                raise UnparseableTimestamp(row_no, row[1]) from None
            records.append(FingerprintRecord(row[0], ts, tuple(row[2:])))

    if not records:
        raise EmptyDataset(f"{path}: header only, no records")

    attributes = tuple(Attribute(i, name) for i, name in enumerate(attr_names))
    ds = Dataset(attributes, tuple(records))
    if metadata_path is not None:
        ds = ds.with_metadata(load_metadata(metadata_path))
    return ds


def load_metadata(path: str | Path) -> dict[str, float]:
    """Sidecar metadata: JSON object mapping attribute name -> avg collection ms."""
    with Path(path).open(encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise InvalidMetadata(f"{path}: expected a JSON object")
    out = {}
    for name, value in raw.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool) or value < 0:
            raise InvalidMetadata(f"{path}: {name}: collection time must be a non-negative number")
        out[str(name)] = float(value)
    return out


def write_csv(dataset: Dataset, path: str | Path) -> Path:
    path = Path(path)
    path.write_bytes(dataset.canonical_bytes())
    return path


# --- external imports --------------------------------------------------------

@dataclass(frozen=True)
class MappingConfig:
    """Column mapping used to convert a foreign export into canonical CSV."""

    browser_id_column: str
    timestamp_column: str
    timestamp_format: str  # "epoch_ms" | "epoch_s" | "iso8601" | strptime pattern
    attributes: dict[str, str]  # source column -> canonical attribute name


def load_mapping(path: str | Path) -> MappingConfig:
    with Path(path).open(encoding="utf-8") as fh:
        raw = json.load(fh)
    try:
        return MappingConfig(
            browser_id_column=raw["browser_id_column"],
            timestamp_column=raw["timestamp_column"],
            timestamp_format=raw.get("timestamp_format", "epoch_ms"),
            attributes=dict(raw["attributes"]),
        )
    except KeyError as exc:
        raise InvalidMetadata(f"{path}: mapping config missing key {exc}") from None


def _parse_timestamp(value: str, fmt: str, row: int) -> int:
    try:
        if fmt == "epoch_ms":
            return int(value)
        if fmt == "epoch_s":
            return int(float(value) * 1000)
        if fmt == "iso8601":
            dt = datetime.fromisoformat(value)
        else:
            dt = datetime.strptime(value, fmt)
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        return int(dt.timestamp() * 1000)
    except (ValueError, OverflowError):
        raise UnparseableTimestamp(row, value) from None


def import_external(
    source_path: str | Path,
    mapping: MappingConfig,
    out_path: str | Path,
) -> Path:
    """Convert a foreign CSV export into the canonical format.

    Drops unmapped source columns, normalizes missing values to the empty
    string, and emits attributes in the mapping's declaration order.
    """
    source_path = Path(source_path)
    out_path = Path(out_path)
    with source_path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDataset(f"{source_path}: empty file") from None

        positions = {name: i for i, name in enumerate(header)}
        for needed in (mapping.browser_id_column, mapping.timestamp_column, *mapping.attributes):
            if needed not in positions:
                raise UnknownSourceColumn(
                    f"{source_path}: mapping references column {needed!r} "
                    f"absent from source header"
                )
        id_pos = positions[mapping.browser_id_column]
        ts_pos = positions[mapping.timestamp_column]
        attr_pos = [positions[src] for src in mapping.attributes]
        canonical_names = list(mapping.attributes.values())

        def cell(row: list[str], pos: int) -> str:
            return row[pos] if pos < len(row) else ""

        with out_path.open("w", newline="", encoding="utf-8") as out:
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow([*RESERVED_COLUMNS, *canonical_names])
            for row_no, row in enumerate(reader, start=1):
                ts = _parse_timestamp(cell(row, ts_pos), mapping.timestamp_format, row_no)
                writer.writerow(
                    [cell(row, id_pos), str(ts), *(cell(row, p) for p in attr_pos)]
                )
    return out_path


# --- derived views -----------------------------------------------------------

def latest_fingerprints(dataset: Dataset) -> dict[str, tuple[str, ...]]:
    """One fingerprint per browser: the values of its maximum-timestamp record."""
    return {
        browser: dataset.records[positions[-1]].values
        for browser, positions in dataset.browser_index.items()
    }


def consecutive_pairs(dataset: Dataset) -> Iterator[tuple[str, tuple[str, ...], tuple[str, ...]]]:
    """Adjacent-in-time record pairs per browser; single-record browsers yield nothing."""
    for browser, positions in dataset.browser_index.items():
        for earlier, later in zip(positions, positions[1:]):
            yield browser, dataset.records[earlier].values, dataset.records[later].values


def stats(dataset: Dataset) -> DatasetStats:
    latest = latest_fingerprints(dataset)
    counts: dict[tuple[str, ...], int] = {}
    for values in latest.values():
        counts[values] = counts.get(values, 0) + 1
    n_browsers = len(latest)
    unique = sum(1 for c in counts.values() if c == 1)
    return DatasetStats(
        n_attributes=dataset.n_attributes,
        n_browsers=n_browsers,
        n_records=len(dataset.records),
        distinct_full_fingerprints=len(counts),
        unicity_rate=unique / n_browsers,
    )
