"""simulator package — seeded synthetic measurements with known mid-path effects."""
from simulator.model import (
    GroundTruth,
    SampleBatch,
    SimulationResult,
    TruthEntry,
    ground_truth,
    run_scenario,
    run_scenarios,
    sample_batch,
    sample_measurement,
    simulate_isp,
)
from simulator.scenario import (
    ArrivalProcess,
    Hairpin,
    IspProfile,
    PathEffect,
    PathSpec,
    PerFlowPolicer,
    Scenario,
    ScenarioError,
    ServerSpec,
    SharedCongestion,
    isp_names,
    load_scenarios,
    parse_scenarios,
)

__all__ = [
    "GroundTruth", "SampleBatch", "SimulationResult", "TruthEntry", "ground_truth",
    "run_scenario", "run_scenarios", "sample_batch", "sample_measurement", "simulate_isp",
    "ArrivalProcess", "Hairpin", "IspProfile", "PathEffect", "PathSpec", "PerFlowPolicer",
    "Scenario", "ScenarioError", "ServerSpec", "SharedCongestion", "isp_names", "load_scenarios",
    "parse_scenarios",
]
