"""
simulator/scenario.py — Scenario schema for the synthetic measurement generator.

A scenario describes one metro: its servers, the access ISPs testing from it,
the mid-path effect on every (ISP, server) path and the arrival process.
Scenario files are JSON; a file may hold one scenario object or
``{"scenarios": [...]}`` for multi-metro fixtures.

    {
      "metro": "gru",
      "duration_hours": 168,
      "seed": 7,
      "servers": [{"server_id": "gru02", "server_asn": 16735, "propagation_delay_ms": 2.0}, ...],
      "isps": [{
        "client_asn": 28573, "name": "Claro S.A.",
        "tiers": [{"rate_mbps": 50, "weight": 0.4, "sigma_log10": 0.05}, ...],
        "local_bottleneck": {"median": 300, "sigma_log10": 0.3},
        "base_rtt_ms": {"median": 20, "sigma_log10": 0.1},
        "peak_degradation": 1.0
      }],
      "paths": [
        {"client_asn": 28573, "server_id": "gru03", "throughput": {"kind": "policer", "rate_mbps": 100}},
        {"client_asn": 28573, "server_id": "gru02",
         "throughput": {"kind": "congestion", "capacity_mbps": 200, "load_factor": 2.0}},
        {"client_asn": 18881, "server_id": "gru06", "hairpin": {"extra_rtt_ms": 30}}
      ],
      "arrival": {"mean_tests_per_hour": 300, "diurnal_amplitude": 0.5, "peak_hour": 21}
    }

Paths not listed are Clean.  SharedCongestion is a qualitative stand-in for
cross-traffic smearing, not a calibrated model of real interconnects.
"""
from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Annotated, Literal, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PositiveFloat,
    ValidationError,
    field_validator,
    model_validator,
)

from config import MAX_ASN

DEFAULT_START = datetime(2025, 11, 24, tzinfo=timezone.utc)


class ScenarioError(ValueError):
    """Scenario schema violation; ``keys`` names every offending field."""

    def __init__(self, source: str, keys: list[str], details: list[str]):
        super().__init__(f"{source}: invalid scenario ({'; '.join(details)})")
        self.source = source
        self.keys = keys


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


# ── ISP profile ───────────────────────────────────────────────────────────────

class Tier(_Model):
    rate_mbps: PositiveFloat
    weight: PositiveFloat
    sigma_log10: PositiveFloat


class LogNormal(_Model):
    """Log-normal given by its median and the standard deviation of log10."""
    median: PositiveFloat
    sigma_log10: PositiveFloat


class IspProfile(_Model):
    client_asn: int = Field(ge=1, le=MAX_ASN)
    name: str | None = None
    tiers: list[Tier] = Field(min_length=1)
    local_bottleneck: LogNormal
    base_rtt_ms: LogNormal
    peak_degradation: float = Field(1.0, gt=0.0, le=1.0)
    tests_per_hour: PositiveFloat | None = None

    @property
    def tier_weights(self) -> list[float]:
        total = sum(t.weight for t in self.tiers)
        return [t.weight / total for t in self.tiers]


# ── Servers and path effects ──────────────────────────────────────────────────

class ServerSpec(_Model):
    server_id: str = Field(min_length=1)
    server_asn: int = Field(ge=1, le=MAX_ASN)
    propagation_delay_ms: float = Field(0.0, ge=0.0)


class PerFlowPolicer(_Model):
    kind: Literal["policer"] = "policer"
    rate_mbps: PositiveFloat


class SharedCongestion(_Model):
    kind: Literal["congestion"] = "congestion"
    capacity_mbps: PositiveFloat
    load_factor: PositiveFloat


class Hairpin(_Model):
    extra_rtt_ms: PositiveFloat


ThroughputEffect = Annotated[Union[PerFlowPolicer, SharedCongestion], Field(discriminator="kind")]


class PathEffect(_Model):
    throughput: ThroughputEffect | None = None
    hairpin: Hairpin | None = None

    @property
    def is_clean(self) -> bool:
        return self.throughput is None and self.hairpin is None

    def describe(self) -> str:
        parts = []
        if isinstance(self.throughput, PerFlowPolicer):
            parts.append(f"PerFlowPolicer({self.throughput.rate_mbps:g})")
        elif isinstance(self.throughput, SharedCongestion):
            parts.append(f"SharedCongestion({self.throughput.capacity_mbps:g}, "
                         f"{self.throughput.load_factor:g})")
        if self.hairpin:
            parts.append(f"Hairpin(+{self.hairpin.extra_rtt_ms:g})")
        return " + ".join(parts) or "Clean"


CLEAN_PATH = PathEffect()


class PathSpec(PathEffect):
    client_asn: int = Field(ge=1, le=MAX_ASN)
    server_id: str = Field(min_length=1)

    @property
    def effect(self) -> PathEffect:
        return PathEffect(throughput=self.throughput, hairpin=self.hairpin)


# ── Arrivals ──────────────────────────────────────────────────────────────────

class ArrivalProcess(_Model):
    """Poisson arrivals with rate mean × (1 + amplitude × cos(2π(h − peak)/24))."""
    mean_tests_per_hour: PositiveFloat = 100.0
    diurnal_amplitude: float = Field(0.0, ge=0.0, lt=1.0)
    peak_hour: float = Field(20.0, ge=0.0, lt=24.0)
    peak_window_hours: float = Field(4.0, ge=0.0, le=24.0)


# ── Scenario ──────────────────────────────────────────────────────────────────

class Scenario(_Model):
    metro: str = Field(min_length=1)
    servers: list[ServerSpec] = Field(min_length=1)
    isps: list[IspProfile] = Field(min_length=1)
    paths: list[PathSpec] = Field(default_factory=list)
    arrival: ArrivalProcess = Field(default_factory=ArrivalProcess)
    duration_hours: float = Field(168.0, ge=0.0)
    seed: int = Field(0, ge=0)
    start: datetime = DEFAULT_START

    @field_validator("start")
    @classmethod
    def _utc(cls, v: datetime) -> datetime:
        return v.replace(tzinfo=timezone.utc) if v.tzinfo is None else v.astimezone(timezone.utc)

    @model_validator(mode="after")
    def _consistent(self) -> Scenario:
        ids = [s.server_id for s in self.servers]
        if len(set(ids)) != len(ids):
            raise ValueError("server_id values must be unique")
        bad = [s for s in ids if not s.startswith(self.metro)]
        if bad:
            raise ValueError(f"server ids must begin with metro {self.metro!r}: {', '.join(bad)}")
        asns = [i.client_asn for i in self.isps]
        if len(set(asns)) != len(asns):
            raise ValueError("client_asn values must be unique")
        seen = set()
        for p in self.paths:
            if p.client_asn not in asns:
                raise ValueError(f"path refers to unknown client_asn {p.client_asn}")
            if p.server_id not in ids:
                raise ValueError(f"path refers to unknown server_id {p.server_id!r}")
            if (p.client_asn, p.server_id) in seen:
                raise ValueError(f"path ({p.client_asn}, {p.server_id}) listed twice")
            seen.add((p.client_asn, p.server_id))
        return self

    def path_effect(self, client_asn: int, server_id: str) -> PathEffect:
        for p in self.paths:
            if p.client_asn == client_asn and p.server_id == server_id:
                return p.effect
        return CLEAN_PATH

    def tests_per_hour(self, isp: IspProfile) -> float:
        return isp.tests_per_hour or self.arrival.mean_tests_per_hour

    def with_seed(self, seed: int) -> Scenario:
        return self.model_copy(update={"seed": seed})


# ── Loading ───────────────────────────────────────────────────────────────────

def _error_keys(err: ValidationError) -> tuple[list[str], list[str]]:
    keys, details = [], []
    for e in err.errors():
        loc = ".".join(str(p) for p in e["loc"]) or "<root>"
        keys.append(loc)
        details.append(f"{loc}: {e['msg']}")
    return keys, details


def parse_scenarios(data, source: str = "<scenario>") -> list[Scenario]:
    items = data.get("scenarios") if isinstance(data, dict) and "scenarios" in data else [data]
    if not isinstance(items, list) or not items:
        raise ScenarioError(source, ["scenarios"], ["scenarios: expected a non-empty list"])
    out = []
    for i, item in enumerate(items):
        try:
            out.append(Scenario.model_validate(item))
        except ValidationError as e:
            keys, details = _error_keys(e)
            if len(items) > 1:
                keys = [f"scenarios.{i}.{k}" for k in keys]
                details = [f"scenarios.{i}.{d}" for d in details]
            raise ScenarioError(source, keys, details) from e
    metros = [s.metro for s in out]
    if len(set(metros)) != len(metros):
        raise ScenarioError(source, ["scenarios"], ["scenarios: each metro may appear once"])
    return out


def load_scenarios(path: str | Path) -> list[Scenario]:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ScenarioError(str(path), ["<root>"], [f"invalid JSON: {e.msg} (line {e.lineno})"]) from e
    return parse_scenarios(data, str(path))


def isp_names(scenarios: list[Scenario]) -> dict[int, str]:
    """Display names the scenarios give their ISPs."""
    return {isp.client_asn: isp.name for s in scenarios for isp in s.isps if isp.name}
