"""
ingest/records.py — Parse, validate and filter line-delimited measurement records.

Input formats:
    delimited    header row + one record per line
                 timestamp,metro,server_id,server_asn,client_asn,download_mbps,min_rtt_ms[,upload_mbps,loss_rate]
                 2025-11-24T03:00:00Z,gru,gru02,1234,28573,87.5,12.3
    json-lines   one flat JSON object per line with the same keys

Units are fixed: Mbit/s for throughput, milliseconds for minRTT, a plain
fraction for loss_rate.  Nothing is converted or clamped: a row either passes
validation unchanged or becomes a ``Rejection`` with a machine-readable reason.

``ingest_stream`` is a single lazy pass: the returned ``IngestStats`` fills in
as the record iterator is consumed and is complete once it is exhausted.
"""
from __future__ import annotations

import csv
import gzip
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

from config import MAX_ASN, MAX_LOGGED_REJECTIONS, METRICS_BY_ID, METRIC_IDS, RECORD_COLUMNS

DELIMITED = "delimited"
JSON_LINES = "json-lines"
FORMATS = (DELIMITED, JSON_LINES)
_FORMAT_ALIASES = {"csv": DELIMITED, "delimited": DELIMITED,
                   "jsonl": JSON_LINES, "json-lines": JSON_LINES, "json": JSON_LINES}

REQUIRED_COLUMNS = ("timestamp", "metro", "server_id", "server_asn", "client_asn")


class SourceError(OSError):
    """An input source could not be read at all."""

    def __init__(self, source: str | Path, message: str):
        super().__init__(f"{source}: {message}")
        self.source = str(source)


class RejectReason(str, Enum):
    MISSING_FIELD  = "missing_field"
    NON_NUMERIC    = "non_numeric"
    OUT_OF_RANGE   = "out_of_range"
    BAD_TIMESTAMP  = "bad_timestamp"
    INCONSISTENT   = "inconsistent"
    MALFORMED      = "malformed"
    OUTSIDE_BOUNDS = "outside_bounds"


# ── Domain types ──────────────────────────────────────────────────────────────

@dataclass(frozen=True, slots=True)
class MeasurementRecord:
    """One test result.  ``metrics`` holds only the metrics present in the row."""
    timestamp: datetime
    metro: str
    server_id: str
    server_asn: int
    client_asn: int
    metrics: dict[str, float]


@dataclass(frozen=True, slots=True)
class Rejection:
    reason: RejectReason
    detail: str
    line_no: int = 0


@dataclass(slots=True)
class IngestFilter:
    """Time window, metro allow-set and per-metric sanity bounds.

    Records outside the window or metro set are *filtered*; records whose
    values fall outside ``bounds`` are *rejected* (reason ``outside_bounds``).
    """
    time_from: datetime | None = None
    time_to: datetime | None = None
    metros: frozenset[str] | None = None
    bounds: dict[str, tuple[float | None, float | None]] = field(default_factory=dict)

    def __post_init__(self):
        if self.time_from and self.time_to and not self.time_from < self.time_to:
            raise ValueError(f"time window start {self.time_from} must precede end {self.time_to}")
        for metric, (lo, hi) in self.bounds.items():
            if metric not in METRICS_BY_ID:
                raise ValueError(f"unknown metric in bounds: {metric!r}")
            if lo is not None and hi is not None and lo > hi:
                raise ValueError(f"bounds for {metric}: min {lo} > max {hi}")

    def is_filtered(self, record: MeasurementRecord) -> bool:
        if self.metros is not None and record.metro not in self.metros:
            return True
        if self.time_from is not None and record.timestamp < self.time_from:
            return True
        if self.time_to is not None and record.timestamp >= self.time_to:
            return True
        return False

    def bounds_violation(self, record: MeasurementRecord) -> str | None:
        for metric, (lo, hi) in self.bounds.items():
            v = record.metrics.get(metric)
            if v is None:
                continue
            if (lo is not None and v < lo) or (hi is not None and v > hi):
                return f"{metric}={v} outside [{lo}, {hi}]"
        return None


@dataclass(slots=True)
class IngestStats:
    """Per-run counters.  Mergeable by addition across partitions."""
    total: int = 0
    accepted: int = 0
    filtered: int = 0
    rejected: Counter = field(default_factory=Counter)

    @property
    def rejected_total(self) -> int:
        return sum(self.rejected.values())

    def __add__(self, other: IngestStats) -> IngestStats:
        return IngestStats(
            total=self.total + other.total,
            accepted=self.accepted + other.accepted,
            filtered=self.filtered + other.filtered,
            rejected=self.rejected + other.rejected,
        )

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "accepted": self.accepted,
            "filtered": self.filtered,
            "rejected": self.rejected_total,
            "rejected_by_reason": {k: self.rejected[k] for k in sorted(self.rejected)},
        }


# ── Field parsing ─────────────────────────────────────────────────────────────

def normalize_format(fmt: str) -> str:
    try:
        return _FORMAT_ALIASES[fmt.lower()]
    except KeyError:
        raise ValueError(f"unknown input format {fmt!r} (expected one of {', '.join(FORMATS)})") from None


def detect_format(path: str | Path) -> str:
    """Infer the record format from a file extension (``.gz`` is looked through)."""
    suffixes = [s.lower() for s in Path(path).suffixes if s.lower() != ".gz"]
    ext = suffixes[-1] if suffixes else ""
    if ext in (".csv", ".txt"):
        return DELIMITED
    if ext in (".jsonl", ".ndjson", ".json"):
        return JSON_LINES
    raise ValueError(f"cannot infer format of {path}; pass --format")


def parse_timestamp(raw) -> datetime:
    """ISO-8601 (``Z`` or offset; naive means UTC) or epoch seconds → aware UTC datetime."""
    if isinstance(raw, bool):
        raise ValueError("boolean timestamp")
    if isinstance(raw, (int, float)):
        return datetime.fromtimestamp(raw, tz=timezone.utc)
    text = str(raw).strip()
    if not text:
        raise ValueError("empty timestamp")
    try:
        return datetime.fromtimestamp(float(text), tz=timezone.utc)
    except ValueError:
        pass
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        return dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _is_blank(v) -> bool:
    return v is None or (isinstance(v, str) and not v.strip())


def _parse_asn(name: str, raw, line_no: int) -> int | Rejection:
    if isinstance(raw, bool):
        return Rejection(RejectReason.NON_NUMERIC, f"{name}={raw!r}", line_no)
    try:
        asn = int(str(raw).strip()) if not isinstance(raw, int) else raw
    except ValueError:
        return Rejection(RejectReason.NON_NUMERIC, f"{name}={raw!r}", line_no)
    if not 1 <= asn <= MAX_ASN:
        return Rejection(RejectReason.OUT_OF_RANGE, f"{name}={asn}", line_no)
    return asn


def _parse_metric(metric: str, raw, line_no: int) -> float | Rejection:
    if isinstance(raw, bool):
        return Rejection(RejectReason.NON_NUMERIC, f"{metric}={raw!r}", line_no)
    try:
        value = float(raw) if isinstance(raw, (int, float)) else float(str(raw).strip())
    except ValueError:
        return Rejection(RejectReason.NON_NUMERIC, f"{metric}={raw!r}", line_no)
    if not math.isfinite(value):
        return Rejection(RejectReason.OUT_OF_RANGE, f"{metric}={raw!r} is not finite", line_no)
    if METRICS_BY_ID[metric]["kind"] == "fraction":
        if not 0.0 <= value <= 1.0:
            return Rejection(RejectReason.OUT_OF_RANGE, f"{metric}={value} not in [0, 1]", line_no)
    elif value <= 0:
        return Rejection(RejectReason.OUT_OF_RANGE, f"{metric}={value} must be > 0", line_no)
    return value


def record_from_fields(fields: dict, line_no: int = 0) -> MeasurementRecord | Rejection:
    """Validate a mapping of raw field values.  Unknown keys are ignored."""
    for name in REQUIRED_COLUMNS:
        if _is_blank(fields.get(name)):
            return Rejection(RejectReason.MISSING_FIELD, name, line_no)

    try:
        timestamp = parse_timestamp(fields["timestamp"])
    except (ValueError, OverflowError, OSError) as e:
        return Rejection(RejectReason.BAD_TIMESTAMP, f"{fields['timestamp']!r}: {e}", line_no)

    metro = str(fields["metro"]).strip()
    server_id = str(fields["server_id"]).strip()
    if not server_id.startswith(metro):
        return Rejection(RejectReason.INCONSISTENT,
                         f"server_id {server_id!r} does not begin with metro {metro!r}", line_no)

    server_asn = _parse_asn("server_asn", fields["server_asn"], line_no)
    if isinstance(server_asn, Rejection):
        return server_asn
    client_asn = _parse_asn("client_asn", fields["client_asn"], line_no)
    if isinstance(client_asn, Rejection):
        return client_asn

    metrics: dict[str, float] = {}
    for metric in METRIC_IDS:
        raw = fields.get(metric)
        if _is_blank(raw):
            continue
        value = _parse_metric(metric, raw, line_no)
        if isinstance(value, Rejection):
            return value
        metrics[metric] = value
    if not metrics:
        return Rejection(RejectReason.MISSING_FIELD, "no metric values", line_no)

    return MeasurementRecord(
        timestamp=timestamp, metro=metro, server_id=server_id,
        server_asn=server_asn, client_asn=client_asn, metrics=metrics,
    )


def parse_record(line: str, fmt: str = DELIMITED, columns: list[str] | None = None,
                 line_no: int = 0) -> MeasurementRecord | Rejection:
    """Parse one complete input row.

    ``columns`` is the header of a delimited source (defaults to
    ``RECORD_COLUMNS``); it is ignored for json-lines.
    """
    fmt = normalize_format(fmt)
    if fmt == JSON_LINES:
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            return Rejection(RejectReason.MALFORMED, f"invalid JSON: {e.msg}", line_no)
        if not isinstance(obj, dict):
            return Rejection(RejectReason.MALFORMED, "JSON row is not an object", line_no)
        return record_from_fields(obj, line_no)

    columns = columns or RECORD_COLUMNS
    try:
        values = next(csv.reader([line]))
    except (csv.Error, StopIteration) as e:
        return Rejection(RejectReason.MALFORMED, f"unparseable row: {e}", line_no)
    if len(values) > len(columns):
        return Rejection(RejectReason.MALFORMED,
                         f"{len(values)} values for {len(columns)} columns", line_no)
    return record_from_fields(dict(zip(columns, values)), line_no)


def parse_header(line: str) -> list[str]:
    columns = [c.strip() for c in next(csv.reader([line]))]
    missing = [c for c in REQUIRED_COLUMNS if c not in columns]
    if missing:
        raise ValueError(f"header lacks required columns: {', '.join(missing)}")
    return columns


# ── Streams ───────────────────────────────────────────────────────────────────

def open_source(path: str | Path) -> Iterator[str]:
    """Yield the lines of a (possibly gzipped) text file."""
    path = Path(path)
    if not path.is_file():
        raise SourceError(path, "input file not found")
    try:
        opener = gzip.open if path.suffix == ".gz" else open
        with opener(path, "rt", encoding="utf-8", newline="") as f:
            yield from f
    except (OSError, UnicodeDecodeError) as e:
        raise SourceError(path, f"cannot read input: {e}") from e


def _log_rejection(stats: IngestStats, source_name: str, rej: Rejection, verbose: bool) -> None:
    if verbose and stats.rejected_total <= MAX_LOGGED_REJECTIONS:
        print(f"⚠️ {source_name}:{rej.line_no} rejected ({rej.reason.value}): {rej.detail}", flush=True)


def _stream(lines: Iterable[str], flt: IngestFilter, fmt: str, stats: IngestStats,
            source_name: str, verbose: bool) -> Iterator[MeasurementRecord]:
    columns: list[str] | None = None
    for line_no, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        if fmt == DELIMITED and columns is None:
            try:
                columns = parse_header(line)
            except (ValueError, csv.Error) as e:
                raise SourceError(source_name, str(e)) from e
            continue

        stats.total += 1
        result = parse_record(line, fmt, columns, line_no)
        if isinstance(result, Rejection):
            stats.rejected[result.reason.value] += 1
            _log_rejection(stats, source_name, result, verbose)
            continue
        if flt.is_filtered(result):
            stats.filtered += 1
            continue
        violation = flt.bounds_violation(result)
        if violation:
            rej = Rejection(RejectReason.OUTSIDE_BOUNDS, violation, line_no)
            stats.rejected[rej.reason.value] += 1
            _log_rejection(stats, source_name, rej, verbose)
            continue
        stats.accepted += 1
        yield result


def ingest_stream(source: Iterable[str], flt: IngestFilter | None = None, fmt: str = DELIMITED,
                  *, source_name: str = "<stream>", stats: IngestStats | None = None,
                  verbose: bool = False) -> tuple[Iterator[MeasurementRecord], IngestStats]:
    """Single pass over ``source`` lines.

    Returns the lazy accepted-record iterator and the stats object it updates.
    Delimited sources start with a header row, which is not counted.
    """
    fmt = normalize_format(fmt)
    stats = stats if stats is not None else IngestStats()
    return _stream(source, flt or IngestFilter(), fmt, stats, source_name, verbose), stats


def _hashing(lines: Iterable[str], digest) -> Iterator[str]:
    for line in lines:
        digest.update(line.encode("utf-8"))
        yield line


def ingest_files(paths: list[str | Path], flt: IngestFilter | None = None, fmt: str | None = None,
                 *, digest=None, verbose: bool = False) -> tuple[Iterator[MeasurementRecord], IngestStats]:
    """Chain ``ingest_stream`` over several files, sharing one stats object.

    ``digest`` (a hashlib object) is fed every line as it is read.
    """
    stats = IngestStats()
    for p in paths:
        if not Path(p).is_file():
            raise SourceError(p, "input file not found")

    def _chain() -> Iterator[MeasurementRecord]:
        for p in paths:
            file_fmt = normalize_format(fmt) if fmt else detect_format(p)
            lines = open_source(p)
            if digest is not None:
                lines = _hashing(lines, digest)
            records, _ = ingest_stream(lines, flt, file_fmt,
                                       source_name=str(p), stats=stats, verbose=verbose)
            yield from records
            if verbose:
                print(f"📦 {p}: {stats.accepted:,} accepted so far, "
                      f"{stats.rejected_total:,} rejected, {stats.filtered:,} filtered", flush=True)

    return _chain(), stats


def log_summary(stats: IngestStats) -> None:
    print(f"📊 Ingest: {stats.total:,} rows → {stats.accepted:,} accepted, "
          f"{stats.rejected_total:,} rejected, {stats.filtered:,} filtered", flush=True)
    for reason, n in sorted(stats.rejected.items()):
        print(f"   {reason}: {n:,}", flush=True)


# ── Writing ───────────────────────────────────────────────────────────────────

def _format_value(v: float) -> str:
    return format(v, ".6g")


def record_to_fields(record: MeasurementRecord) -> dict:
    row: dict = {
        "timestamp": format_timestamp(record.timestamp),
        "metro": record.metro,
        "server_id": record.server_id,
        "server_asn": record.server_asn,
        "client_asn": record.client_asn,
    }
    for metric in METRIC_IDS:
        if metric in record.metrics:
            row[metric] = _format_value(record.metrics[metric])
    return row


def write_records(records: Iterable[MeasurementRecord], path: str | Path, fmt: str = DELIMITED,
                  columns: list[str] | None = None) -> int:
    """Write records in an ingest-compatible format.  Returns the row count.

    Delimited output always carries the header, even with zero rows.
    """
    fmt = normalize_format(fmt)
    columns = columns or RECORD_COLUMNS
    n = 0
    opener = gzip.open if Path(path).suffix == ".gz" else open
    with opener(path, "wt", encoding="utf-8", newline="") as f:
        if fmt == DELIMITED:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            for r in records:
                fields = record_to_fields(r)
                writer.writerow([fields.get(c, "") for c in columns])
                n += 1
        else:
            for r in records:
                fields = record_to_fields(r)
                for metric in METRIC_IDS:
                    if metric in fields:
                        fields[metric] = float(fields[metric])
                f.write(json.dumps(fields, sort_keys=False, ensure_ascii=False) + "\n")
                n += 1
    return n
