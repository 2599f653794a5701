"""ingest package — measurement record parsing, validation and filtering."""
from ingest.records import (
    DELIMITED,
    JSON_LINES,
    IngestFilter,
    IngestStats,
    MeasurementRecord,
    RejectReason,
    Rejection,
    SourceError,
    detect_format,
    ingest_files,
    ingest_stream,
    parse_record,
    write_records,
)

__all__ = [
    "DELIMITED", "JSON_LINES", "IngestFilter", "IngestStats", "MeasurementRecord",
    "RejectReason", "Rejection", "SourceError", "detect_format", "ingest_files",
    "ingest_stream", "parse_record", "write_records",
]
