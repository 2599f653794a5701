"""
histogram/snapshot.py — Flat-table histogram snapshots.

Layout (delimited, same conventions as the ingest format):

    # midpath-snapshot v1
    # window from=2025-11-24T00:00:00Z to=2025-12-01T00:00:00Z
    # scheme metric=download_mbps bins_per_decade=30 reference=1.0 underflow_below=0.01 overflow_above=100000.0
    # scheme metric=min_rtt_ms ...
    metro,server_id,client_asn,metric,bin_index,count
    gru,gru02,28573,download_mbps,58,12

Floats are written with ``repr`` so loading reproduces the exact schemes and
therefore the exact histogram map.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from config import SNAPSHOT_SCHEMA_VERSION
from histogram.binning import BinningScheme
from histogram.sparse import CellKey, SparseHistogram
from ingest.records import SourceError

SNAPSHOT_COLUMNS = ["metro", "server_id", "client_asn", "metric", "bin_index", "count"]
_MAGIC = "# midpath-snapshot"


@dataclass(frozen=True, slots=True)
class Snapshot:
    hist: SparseHistogram
    window_from: str | None = None
    window_to: str | None = None


def _kv(tokens: list[str]) -> dict[str, str]:
    out = {}
    for tok in tokens:
        k, sep, v = tok.partition("=")
        if not sep:
            raise ValueError(f"bad header token {tok!r}")
        out[k] = v
    return out


def save_snapshot(hist: SparseHistogram, path: str | Path,
                  window_from: str | None = None, window_to: str | None = None) -> int:
    """Write ``hist`` to ``path``.  Returns the number of stored bins."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"{_MAGIC} v{SNAPSHOT_SCHEMA_VERSION}\n")
        f.write(f"# window from={window_from or '-'} to={window_to or '-'}\n")
        for metric in sorted(hist.schemes):
            s = hist.schemes[metric]
            f.write(f"# scheme metric={metric} bins_per_decade={s.bins_per_decade} "
                    f"reference={s.reference!r} underflow_below={s.underflow_below!r} "
                    f"overflow_above={s.overflow_above!r}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(SNAPSHOT_COLUMNS)
        for (key, idx), count in hist.items():
            writer.writerow([key.metro, key.server_id, key.client_asn, key.metric, idx, count])
            n += 1
    return n


def load_snapshot(path: str | Path) -> Snapshot:
    path = Path(path)
    if not path.is_file():
        raise SourceError(path, "snapshot file not found")
    schemes: dict[str, BinningScheme] = {}
    window = {"from": "-", "to": "-"}
    try:
        with open(path, encoding="utf-8", newline="") as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise SourceError(path, f"cannot read snapshot: {e}") from e

    if not lines or not lines[0].startswith(_MAGIC):
        raise SourceError(path, "not a histogram snapshot")
    body_start = None
    for i, line in enumerate(lines[1:], start=1):
        if not line.startswith("#"):
            body_start = i
            break
        tokens = line[1:].split()
        if not tokens:
            continue
        try:
            if tokens[0] == "window":
                window.update(_kv(tokens[1:]))
            elif tokens[0] == "scheme":
                kv = _kv(tokens[1:])
                schemes[kv["metric"]] = BinningScheme(
                    bins_per_decade=int(kv["bins_per_decade"]),
                    reference=float(kv["reference"]),
                    underflow_below=float(kv["underflow_below"]),
                    overflow_above=float(kv["overflow_above"]),
                )
        except (KeyError, ValueError) as e:
            raise SourceError(path, f"bad snapshot header line {i + 1}: {e}") from e
    if not schemes:
        raise SourceError(path, "snapshot has no scheme block")

    hist = SparseHistogram(schemes)
    if body_start is not None:
        reader = csv.DictReader(lines[body_start:])
        if reader.fieldnames != SNAPSHOT_COLUMNS:
            raise SourceError(path, f"unexpected snapshot columns {reader.fieldnames}")
        for row_no, row in enumerate(reader, start=body_start + 2):
            try:
                key = CellKey(row["metro"], row["server_id"], int(row["client_asn"]), row["metric"])
                if key.metric not in schemes:
                    raise ValueError(f"metric {key.metric!r} has no scheme")
                hist.add(key, int(row["bin_index"]), int(row["count"]))
            except (TypeError, ValueError) as e:
                raise SourceError(path, f"bad snapshot row {row_no}: {e}") from e

    return Snapshot(
        hist=hist,
        window_from=None if window["from"] == "-" else window["from"],
        window_to=None if window["to"] == "-" else window["to"],
    )
