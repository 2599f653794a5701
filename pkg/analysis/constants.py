"""
analysis/constants.py — Shared labels for pair interpretation and server calibration.

Every module that prints, serializes or colours a verdict reads it from here.
"""

# ── Pair interpretation labels ────────────────────────────────────────────────
CLEAN               = "clean"
PER_FLOW_POLICER    = "per_flow_policer"
CONGESTION          = "congestion"
SUBOPTIMAL_ROUTING  = "suboptimal_routing"
MID_PATH_DIFFERENCE = "mid_path_difference"

PAIR_LABELS: list[str] = [
    CLEAN, PER_FLOW_POLICER, CONGESTION, SUBOPTIMAL_ROUTING, MID_PATH_DIFFERENCE,
]

# ── Server calibration flags ──────────────────────────────────────────────────
CALIBRATED        = "CALIBRATED"
SUSPECT           = "SUSPECT"
INSUFFICIENT_DATA = "INSUFFICIENT_DATA"

CALIBRATION_FLAGS: list[str] = [CALIBRATED, SUSPECT, INSUFFICIENT_DATA]

# ── Skipped-cell reasons ──────────────────────────────────────────────────────
NO_SAMPLES        = "no_samples"
BELOW_MIN_SAMPLES = "below_min_samples"

# ── Colours (hex) used by the SVG renderers ──────────────────────────────────
LABEL_COLORS: dict[str, str] = {
    CLEAN:               "#22c55e",
    PER_FLOW_POLICER:    "#f43f5e",
    CONGESTION:          "#f97316",
    SUBOPTIMAL_ROUTING:  "#8b5cf6",
    MID_PATH_DIFFERENCE: "#f59e0b",
}

# ── Policer signature thresholds ──────────────────────────────────────────────
# The slower side's top edge is the highest regular bin holding at least
# EDGE_MIN_SHARE of its tests; a policer piles POLICER_MODE_SHARE of tests into
# the top two bins while the faster side still has FAST_ABOVE_SHARE beyond it.
EDGE_MIN_SHARE     = 0.01
POLICER_MODE_SHARE = 0.15
FAST_ABOVE_SHARE   = 0.10
