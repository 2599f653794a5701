"""analysis package — pair enumeration, worst cases per metro, calibration, interpretation."""
from analysis.pairs import (
    AnalysisConfig,
    Comparisons,
    MetroSummary,
    PairResult,
    ServerCalibration,
    SkippedCell,
    calibration_check,
    compare_cells,
    flagged_paths,
    interpret_pair,
    known_servers,
    metro_summaries,
    pairwise_diffs,
    top_isps,
)

__all__ = [
    "AnalysisConfig", "Comparisons", "MetroSummary", "PairResult", "ServerCalibration",
    "SkippedCell", "calibration_check", "compare_cells", "flagged_paths", "interpret_pair",
    "known_servers", "metro_summaries", "pairwise_diffs", "top_isps",
]
