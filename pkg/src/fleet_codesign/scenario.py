"""Scenario files: maps, hidden target sets, and task profiles."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Dict, Tuple

from .planners import RectMap

METRIC_COVERAGE = "coverage"
METRIC_DETECTIONS = "detections"
METRICS = (METRIC_COVERAGE, METRIC_DETECTIONS)


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class TaskRequirement:
    metric: str
    map_id: str
    threshold: float

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ScenarioError(f"unknown metric {self.metric!r}")
        if self.metric == METRIC_COVERAGE and not 0.0 <= self.threshold <= 1.0:
            raise ScenarioError("coverage threshold must lie in [0, 1]")
        if self.metric == METRIC_DETECTIONS and (
            self.threshold < 0 or self.threshold != int(self.threshold)
        ):
            raise ScenarioError("detections threshold must be a natural number")


@dataclass(frozen=True)
class TaskProfile:
    """Conjunction of per-metric thresholds, with a detection confidence."""

    name: str
    requirements: Tuple[TaskRequirement, ...]
    delta: float = 0.95

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ScenarioError("delta must lie in (0, 1)")
        if not self.requirements:
            raise ScenarioError(f"task {self.name!r} has no requirements")

    @property
    def map_ids(self) -> Tuple[str, ...]:
        return tuple(sorted({r.map_id for r in self.requirements}))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "delta": self.delta,
            "requirements": [
                {"metric": r.metric, "map": r.map_id, "threshold": r.threshold}
                for r in self.requirements
            ],
        }


@dataclass(frozen=True)
class Scenario:
    id: str
    maps: Tuple[RectMap, ...]
    targets: Dict[str, Tuple[Tuple[float, float], ...]] = field(hash=False)
    tasks: Tuple[TaskProfile, ...] = ()

    def __post_init__(self):
        ids = [m.id for m in self.maps]
        if len(set(ids)) != len(ids):
            raise ScenarioError("duplicate map ids")
        for mid, pts in self.targets.items():
            m = self.map(mid)
            for p in pts:
                if not m.contains(p):
                    raise ScenarioError(f"target {p} outside map {mid}")
        for t in self.tasks:
            for r in t.requirements:
                self.map(r.map_id)
                if r.metric == METRIC_DETECTIONS and r.threshold > len(
                    self.targets.get(r.map_id, ())
                ):
                    raise ScenarioError(
                        f"task {t.name!r} demands more detections than "
                        f"targets on {r.map_id}"
                    )

    def map(self, map_id: str) -> RectMap:
        for m in self.maps:
            if m.id == map_id:
                return m
        raise ScenarioError(f"unknown map {map_id!r}")

    def task(self, name: str) -> TaskProfile:
        for t in self.tasks:
            if t.name == name:
                return t
        raise ScenarioError(f"unknown task {name!r}")

    def targets_for(self, map_id: str) -> Tuple[Tuple[float, float], ...]:
        return self.targets.get(map_id, ())

    def to_dict(self) -> dict:
        maps = []
        for m in self.maps:
            d = m.to_dict()
            d["targets"] = [list(p) for p in self.targets.get(m.id, ())]
            maps.append(d)
        return {"id": self.id, "maps": maps, "tasks": [t.to_dict() for t in self.tasks]}

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        maps, targets = [], {}
        for md in data["maps"]:
            maps.append(RectMap(md["id"], float(md["width"]), float(md["height"]),
                                tuple(md.get("origin", (0.0, 0.0)))))
            targets[md["id"]] = tuple(
                (float(p[0]), float(p[1])) for p in md.get("targets", ())
            )
        tasks = tuple(
            TaskProfile(
                td["name"],
                tuple(
                    TaskRequirement(rd["metric"], rd["map"], rd["threshold"])
                    for rd in td["requirements"]
                ),
                td.get("delta", 0.95),
            )
            for td in data.get("tasks", ())
        )
        return cls(data.get("id", "scenario"), tuple(maps), targets, tasks)

    @property
    def content_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return Scenario.from_dict(json.load(fh))


def save_scenario(scenario: Scenario, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scenario.to_dict(), fh, indent=2)
