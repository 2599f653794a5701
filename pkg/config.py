"""
config.py — Central configuration and metric registry for midpath-ab.
"""
import os
from pathlib import Path

# ── Files ─────────────────────────────────────
SETTINGS_FILE  = Path(os.environ.get("MIDPATH_SETTINGS",  "settings.json"))
ASN_NAMES_FILE = Path(os.environ.get("MIDPATH_ASN_NAMES", "asn_names.json"))
DEFAULT_OUT    = Path("./report")

# ── Report format ─────────────────────────────
REPORT_SCHEMA_VERSION = "1"
SNAPSHOT_SCHEMA_VERSION = "1"

# ── Ingest ────────────────────────────────────
# Column order of the delimited format; JSON-lines uses the same keys.
RECORD_COLUMNS: list[str] = [
    "timestamp", "metro", "server_id", "server_asn", "client_asn",
    "download_mbps", "min_rtt_ms", "upload_mbps", "loss_rate",
]
MAX_ASN = 2**32 - 1
MAX_LOGGED_REJECTIONS = 20

# ── Known metrics ─────────────────────────────
# kind: throughput | latency | fraction
#   throughput/latency values must be > 0, fractions lie in [0, 1].
METRICS = [
    {
        "id":              "download_mbps",
        "label":           "Download throughput",
        "unit":            "Mbit/s",
        "kind":            "throughput",
        "underflow_below": 0.01,
        "overflow_above":  1e5,
    },
    {
        "id":              "min_rtt_ms",
        "label":           "Minimum RTT",
        "unit":            "ms",
        "kind":            "latency",
        "underflow_below": 0.01,
        "overflow_above":  1e5,
    },
    {
        "id":              "upload_mbps",
        "label":           "Upload throughput",
        "unit":            "Mbit/s",
        "kind":            "throughput",
        "underflow_below": 0.01,
        "overflow_above":  1e5,
    },
    {
        "id":              "loss_rate",
        "label":           "Loss rate",
        "unit":            "",
        "kind":            "fraction",
        "underflow_below": 1e-5,
        "overflow_above":  2.0,
    },
]
METRICS_BY_ID: dict[str, dict] = {m["id"]: m for m in METRICS}
METRIC_IDS: list[str] = [m["id"] for m in METRICS]

# ── Binning defaults ──────────────────────────
DEFAULT_BINS_PER_DECADE = 30
DEFAULT_REFERENCE       = 1.0
MIN_BINS_PER_DECADE     = 5

# ── Analysis defaults ─────────────────────────
DEFAULT_TOP_N_ISPS              = 5
DEFAULT_MIN_SAMPLES_PER_CELL    = 100
DEFAULT_ANALYSIS_METRICS        = ["download_mbps", "min_rtt_ms"]
DEFAULT_CALIBRATION_KS          = 0.05
DEFAULT_PAIN_MODE               = "ks"
DEFAULT_FLAG_KS                 = 0.10
DEFAULT_FLAG_SPREAD             = 1.25
CALIBRATION_METRIC              = "download_mbps"
PAIN_KS_SCALE                   = 10.0
SENTINEL_MASS_WARN              = 0.01

# Effective defaults, echoed into every report. settings.json and CLI flags
# override these keys and nothing else.
DEFAULT_SETTINGS: dict = {
    "inputs": [],
    "format": None,
    "time_from": None,
    "time_to": None,
    "metros": [],
    "bounds": {},
    "bins_per_decade": DEFAULT_BINS_PER_DECADE,
    "reference": DEFAULT_REFERENCE,
    "top_n_isps": DEFAULT_TOP_N_ISPS,
    "min_samples_per_cell": DEFAULT_MIN_SAMPLES_PER_CELL,
    "metrics": list(DEFAULT_ANALYSIS_METRICS),
    "calibration_ks_threshold": DEFAULT_CALIBRATION_KS,
    "pain_mode": {m: DEFAULT_PAIN_MODE for m in DEFAULT_ANALYSIS_METRICS},
    "flag_ks_threshold": DEFAULT_FLAG_KS,
    "flag_spread_threshold": DEFAULT_FLAG_SPREAD,
    "out": str(DEFAULT_OUT),
}

# ── ISP display names ─────────────────────────
# Overlaid by asn_names.json when present.
ASN_NAMES: dict[int, str] = {
    18881: "Telefônica Brasil",
    28573: "Claro S.A.",
    26599: "TIM S/A",
    8167:  "V tal",
    3320:  "Deutsche Telekom",
    3215:  "Orange",
    12322: "Free SAS",
    5089:  "Virgin Media",
}

# ── Series palette for plots ──────────────────
SERIES_COLORS: list[str] = [
    "#3b82f6", "#f97316", "#22c55e", "#ec4899",
    "#8b5cf6", "#14b8a6", "#f59e0b", "#64748b",
]
