"""Global co-design pipeline: enumerate, simulate, query.

Candidates (fleet composition x planner) are simulated through
plan -> execute -> evaluate once per map and memoized; battery capacities
are derived afterwards from the required energies.  Pareto queries view the
evaluated candidate pool as a single design problem (metric thresholds as
demanded functionality, cost/energy/makespan as resources) and answer it
through the MDPI kernel, so the front is the minimal antichain with
deterministic witnesses.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .catalog import Catalog, RobotDesign, default_catalog
from .evaluator import MapEvaluation, evaluate_map, task_metrics, task_satisfied
from .executor import DEFAULT_DT, execute
from .fleet import CapacityGrid, Fleet, capacity_feedback, enumerate_fleets, fleet_totals
from .mdpi import DesignProblem, fix_fun_min_res
from .order import ASC, ProductOrder
from .planners import PLANNERS, plan
from .scenario import Scenario, TaskProfile

PLANNER_NAMES = tuple(sorted(PLANNERS))

RESOURCE_ORDER = ProductOrder((ASC, ASC, ASC))  # cost, energy, makespan


@dataclass(frozen=True)
class PipelineConfig:
    dt: float = DEFAULT_DT
    grid_res: float = 2.0
    capacity_step: float = 2.0
    capacity_max: float = 400.0


@dataclass(frozen=True)
class SearchConstraints:
    """What part of the design space a query may roam."""

    planners: Tuple[str, ...] = PLANNER_NAMES
    robot_types: Optional[Tuple[str, ...]] = None
    max_per_type: int = 3
    battery_techs: Optional[Tuple[str, ...]] = None
    actuation_variants: Optional[Tuple[str, ...]] = None
    pinned_designs: Optional[Mapping[str, Tuple[str, str, str]]] = None
    allow_mixed_designs: bool = False
    prune_dominated: bool = True

    def __post_init__(self):
        if not self.planners:
            raise ValueError("at least one planner required")
        for p in self.planners:
            if p not in PLANNERS:
                raise ValueError(f"unknown planner {p!r}")
        if self.max_per_type < 1:
            raise ValueError("max_per_type must be >= 1")


@dataclass(frozen=True)
class CandidateSystem:
    fleet: Fleet          # capacities unsized (0); derived per query
    planner: str

    @property
    def key(self) -> str:
        return f"{self.planner}::{self.fleet.core_signature}"


@dataclass(frozen=True)
class RobotRun:
    duration_s: float
    energy_wh: float


@dataclass(frozen=True)
class MapOutcome:
    per_robot: Tuple[RobotRun, ...]
    coverage: float
    target_exposures: Tuple[float, ...]
    planner_meta: dict = field(default_factory=dict, hash=False)

    @property
    def makespan(self) -> float:
        return max((r.duration_s for r in self.per_robot), default=0.0)

    @property
    def total_energy(self) -> float:
        return sum(r.energy_wh for r in self.per_robot)

    def evaluation(self) -> MapEvaluation:
        return MapEvaluation(self.coverage, self.target_exposures)


@dataclass(frozen=True)
class EvaluationRecord:
    planner: str
    fleet_core_signature: str
    outcomes: Dict[str, MapOutcome] = field(hash=False)

    def to_dict(self) -> dict:
        return {
            "planner": self.planner,
            "fleet": self.fleet_core_signature,
            "outcomes": {
                mid: {
                    "per_robot": [[r.duration_s, r.energy_wh] for r in o.per_robot],
                    "coverage": o.coverage,
                    "target_exposures": list(o.target_exposures),
                    "planner_meta": o.planner_meta,
                }
                for mid, o in self.outcomes.items()
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvaluationRecord":
        outcomes = {
            mid: MapOutcome(
                tuple(RobotRun(t, e) for t, e in od["per_robot"]),
                od["coverage"],
                tuple(od["target_exposures"]),
                od.get("planner_meta", {}),
            )
            for mid, od in d["outcomes"].items()
        }
        return cls(d["planner"], d["fleet"], outcomes)


class RecordStore:
    """Candidate records keyed by signature + scenario hash.

    In-memory always; mirrored to a directory of JSON files when given a
    path.  Writing an existing key is a no-op at equal content
    (deterministic evaluation makes records for a key identical).
    """

    def __init__(self, directory: Optional[os.PathLike] = None):
        self.directory = Path(directory) if directory else None
        self._memory: Dict[str, EvaluationRecord] = {}

    def _path(self, scenario_hash: str, key: str) -> Path:
        safe = key.replace("|", "+").replace("::", "__")
        return self.directory / scenario_hash / f"{safe}.json"

    def get(self, scenario_hash: str, key: str) -> Optional[EvaluationRecord]:
        mk = f"{scenario_hash}/{key}"
        if mk in self._memory:
            return self._memory[mk]
        if self.directory is not None:
            p = self._path(scenario_hash, key)
            if p.exists():
                rec = EvaluationRecord.from_dict(json.loads(p.read_text()))
                self._memory[mk] = rec
                return rec
        return None

    def put(self, scenario_hash: str, key: str, record: EvaluationRecord):
        self._memory[f"{scenario_hash}/{key}"] = record
        if self.directory is not None:
            p = self._path(scenario_hash, key)
            p.parent.mkdir(parents=True, exist_ok=True)
            p.write_text(json.dumps(record.to_dict(), sort_keys=True))

    def __len__(self):
        return len(self._memory)


@dataclass(frozen=True)
class Assessment:
    """A candidate judged against one or more task profiles."""

    candidate: CandidateSystem
    cost: float
    energy_wh: float
    makespan_s: float
    metrics: Tuple[Tuple[float, ...], ...]   # per profile
    satisfied: Tuple[bool, ...]              # per profile
    capacity_ok: bool
    sized_signature: str
    infeasible_reason: Optional[str] = None

    @property
    def point(self) -> Tuple[float, float, float]:
        return (self.cost, self.energy_wh, self.makespan_s)

    @property
    def feasible(self) -> bool:
        return self.capacity_ok and all(self.satisfied)


@dataclass(frozen=True)
class FrontPoint:
    cost: float
    energy_wh: float
    makespan_s: float
    planner: str
    fleet_signature: str
    metrics: dict = field(default_factory=dict, hash=False)


@dataclass(frozen=True)
class ParetoFront:
    name: str
    points: Tuple[FrontPoint, ...]
    total_candidates: int = 0
    feasible_candidates: int = 0
    infeasibility: dict = field(default_factory=dict, hash=False)

    @property
    def feasible(self) -> bool:
        return len(self.points) > 0

    def objective_rows(self) -> List[Tuple[float, float, float]]:
        return [(p.cost, p.energy_wh, p.makespan_s) for p in self.points]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "total_candidates": self.total_candidates,
            "feasible_candidates": self.feasible_candidates,
            "infeasibility": dict(self.infeasibility),
            "points": [
                {
                    "cost_usd": p.cost,
                    "energy_wh": p.energy_wh,
                    "makespan_s": p.makespan_s,
                    "planner": p.planner,
                    "fleet_signature": p.fleet_signature,
                    "metrics": dict(p.metrics),
                }
                for p in self.points
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ParetoFront":
        pts = tuple(
            FrontPoint(p["cost_usd"], p["energy_wh"], p["makespan_s"],
                       p.get("planner", "?"), p.get("fleet_signature", "?"),
                       p.get("metrics", {}))
            for p in d["points"]
        )
        return cls(d.get("name", "front"), pts, d.get("total_candidates", 0),
                   d.get("feasible_candidates", 0), d.get("infeasibility", {}))

    def csv_rows(self) -> List[str]:
        rows = ["cost_usd,energy_wh,makespan_s,planner,fleet_signature"]
        for p in self.points:
            rows.append(
                f"{p.cost:.6f},{p.energy_wh:.6f},{p.makespan_s:.6f},"
                f"{p.planner},{p.fleet_signature}"
            )
        return rows


def dominates_or_equal(a: Tuple[float, float, float],
                       b: Tuple[float, float, float]) -> bool:
    return a[0] <= b[0] and a[1] <= b[1] and a[2] <= b[2]


class Pipeline:
    """Evaluation engine for one scenario."""

    def __init__(self, scenario: Scenario, catalog: Optional[Catalog] = None,
                 config: PipelineConfig = PipelineConfig(),
                 store: Optional[RecordStore] = None):
        self.scenario = scenario
        self.catalog = catalog or default_catalog()
        self.config = config
        self.store = store
        self._sim_memo: Dict[Tuple[str, str, str], MapOutcome] = {}

    # -- search space --------------------------------------------------

    def predesigns(self, robot_type: str, constraints: SearchConstraints) -> list:
        """Unsized designs for one type, with sound dominance pruning.

        A pre-design is pruned only when another one exposes identical
        capability tuples and is never worse in base cost, battery cost
        rate, payload headroom, or idle power (ties broken toward the
        lexicographically smaller key, so witnesses are preserved).
        """
        cat = self.catalog
        acts = cat.actuation_for(robot_type)
        if constraints.actuation_variants is not None:
            acts = tuple(a for a in acts if a.variant in constraints.actuation_variants)
        techs = cat.batteries
        if constraints.battery_techs is not None:
            techs = tuple(b for b in techs if b.name in constraints.battery_techs)
        if constraints.pinned_designs and robot_type in constraints.pinned_designs:
            variant, sensor, tech = constraints.pinned_designs[robot_type]
            return [RobotDesign(cat.actuation(robot_type, variant),
                                cat.sensing(robot_type, sensor),
                                cat.battery(tech), 0.0)]
        designs = [
            RobotDesign(a, s, b, 0.0)
            for a in acts for s in cat.sensing_for(robot_type) for b in techs
        ]
        if not constraints.prune_dominated:
            return designs

        def caps(d):
            return (d.actuation.v_max, d.actuation.a_lat_max, d.actuation.a_lon_max,
                    d.actuation.theta_dot_max, d.actuation.r_turn,
                    d.actuation.c_vel, d.actuation.c_acc, d.actuation.path_type,
                    d.sensing.r_sensing, d.sensing.lambda_base,
                    d.sensing.sigma_d, d.sensing.beta_v)

        def pruned_by(b, a):
            if caps(a) != caps(b):
                return False
            base_a = a.actuation.cost + a.sensing.cost
            base_b = b.actuation.cost + b.sensing.cost
            idle_a = a.actuation.p_idle + a.sensing.p_req
            idle_b = b.actuation.p_idle + b.sensing.p_req
            head_a = (a.actuation.m_max - a.sensing.mass) * a.battery.rho
            head_b = (b.actuation.m_max - b.sensing.mass) * b.battery.rho
            if (base_a > base_b or a.battery.alpha < b.battery.alpha
                    or idle_a > idle_b or head_a < head_b):
                return False
            strict = (base_a < base_b or a.battery.alpha > b.battery.alpha
                      or idle_a < idle_b)
            return strict or a.core_key < b.core_key

        return [
            d for d in designs
            if not any(pruned_by(d, other) for other in designs if other is not d)
        ]

    def candidates(self, constraints: SearchConstraints) -> List[CandidateSystem]:
        """Planner-major, fleet-signature-lexicographic candidate order."""
        types = constraints.robot_types or self.catalog.robot_types
        designs_by_type = {
            t: self.predesigns(t, constraints) for t in sorted(types)
        }
        fleets = sorted(
            enumerate_fleets(designs_by_type, constraints.max_per_type,
                             constraints.allow_mixed_designs),
            key=lambda f: f.core_signature,
        )
        return [
            CandidateSystem(f, p)
            for p in sorted(constraints.planners)
            for f in fleets
        ]

    # -- simulation ----------------------------------------------------

    def simulate(self, fleet: Fleet, planner: str, map_id: str) -> MapOutcome:
        key = (fleet.core_signature, planner, map_id)
        if key in self._sim_memo:
            return self._sim_memo[key]
        m = self.scenario.map(map_id)
        wc = plan(planner, fleet, m)
        runs = execute(fleet, wc, self.config.dt)
        trajectories = [t for t, _ in runs]
        sensings = [d.sensing for d in fleet.expanded()]
        ev = evaluate_map(trajectories, sensings, m,
                          self.scenario.targets_for(map_id), self.config.grid_res)
        outcome = MapOutcome(
            tuple(RobotRun(rep.duration, rep.energy_wh) for _, rep in runs),
            ev.coverage, ev.target_exposures, dict(wc.meta),
        )
        self._sim_memo[key] = outcome
        return outcome

    def evaluate(self, candidate: CandidateSystem) -> EvaluationRecord:
        """Simulate the candidate on every scenario map (store-backed)."""
        if candidate.fleet.size == 0:
            raise ValueError("cannot evaluate an empty fleet")
        if candidate.planner not in PLANNERS:
            raise ValueError(f"unknown planner {candidate.planner!r}")
        shash = self.scenario.content_hash
        if self.store is not None:
            hit = self.store.get(shash, candidate.key)
            if hit is not None:
                return hit
        outcomes = {
            m.id: self.simulate(candidate.fleet, candidate.planner, m.id)
            for m in self.scenario.maps
        }
        record = EvaluationRecord(candidate.planner,
                                  candidate.fleet.core_signature, outcomes)
        if self.store is not None:
            self.store.put(shash, candidate.key, record)
        return record

    # -- assessment ------------------------------------------------------

    def assess(self, candidate: CandidateSystem, record: EvaluationRecord,
               profiles: Sequence[TaskProfile]) -> Assessment:
        """Judge a record against task profiles with max-energy coupling."""
        map_ids = sorted({mid for p in profiles for mid in p.map_ids})
        outcomes = {mid: record.outcomes[mid] for mid in map_ids}
        evaluations = {mid: o.evaluation() for mid, o in outcomes.items()}

        metrics, satisfied = [], []
        for p in profiles:
            values = task_metrics(evaluations, p)
            metrics.append(values)
            satisfied.append(task_satisfied(values, p))

        energy = max(o.total_energy for o in outcomes.values())
        makespan = max(o.makespan for o in outcomes.values())

        n = candidate.fleet.size
        per_robot_req = [
            max(outcomes[mid].per_robot[i].energy_wh for mid in map_ids)
            for i in range(n)
        ]
        grid = CapacityGrid(self.config.capacity_max, self.config.capacity_step)
        assignment = capacity_feedback(candidate.fleet, per_robot_req, grid)
        reason = None
        if not assignment.feasible:
            reason = "; ".join(d for d in assignment.diagnostics if d)
        # robots sharing a slot share one design: size to the worst robot
        slot_caps, pos = [], 0
        for slot in candidate.fleet.slots:
            slot_caps.append(max(assignment.capacities[pos:pos + slot.count]))
            pos += slot.count
        sized = candidate.fleet.with_capacities(slot_caps)
        cost = fleet_totals(sized, [0.0] * n).total_cost if assignment.feasible else math.inf

        return Assessment(
            candidate=candidate,
            cost=cost,
            energy_wh=energy,
            makespan_s=makespan,
            metrics=tuple(tuple(v) for v in metrics),
            satisfied=tuple(satisfied),
            capacity_ok=assignment.feasible,
            sized_signature=sized.signature() if assignment.feasible else "",
            infeasible_reason=reason,
        )

    def candidate_report(self, candidate: CandidateSystem,
                         profiles: Optional[Sequence[TaskProfile]] = None) -> Assessment:
        profiles = list(profiles) if profiles else list(self.scenario.tasks)
        return self.assess(candidate, self.evaluate(candidate), profiles)

    # -- queries ---------------------------------------------------------

    def solve(self, profiles: Sequence[TaskProfile],
              constraints: SearchConstraints, name: str = "codesign") -> ParetoFront:
        cands = self.candidates(constraints)
        assessments = [
            self.assess(c, self.evaluate(c), profiles) for c in cands
        ]
        return front_from_assessments(name, assessments, profiles)


def front_from_assessments(name: str, assessments: Sequence[Assessment],
                           profiles: Sequence[TaskProfile]) -> ParetoFront:
    """Minimal (cost, energy, makespan) antichain via an MDPI query."""
    usable = [a for a in assessments if a.capacity_ok]
    infeasibility: Dict[str, int] = {}
    for a in assessments:
        if not a.capacity_ok:
            infeasibility["capacity"] = infeasibility.get("capacity", 0) + 1
        elif not all(a.satisfied):
            infeasibility["task"] = infeasibility.get("task", 0) + 1

    thresholds = tuple(r.threshold for p in profiles for r in p.requirements)
    dims = len(thresholds)
    dp = DesignProblem(
        name="candidate-pool",
        implementations=tuple(range(len(usable))),
        provides={i: tuple(v for vs in a.metrics for v in vs)
                  for i, a in enumerate(usable)},
        requires={i: a.point for i, a in enumerate(usable)},
        fun_order=ProductOrder((ASC,) * dims),
        res_order=RESOURCE_ORDER,
    )
    qr = fix_fun_min_res(dp, thresholds)
    points = []
    for pt in qr.frontier.elements:
        a = usable[qr.witness(pt)[0]]
        labels = {}
        for p, values in zip(profiles, a.metrics):
            for r, v in zip(p.requirements, values):
                labels[f"{p.name}:{r.metric}:{r.map_id}"] = v
        points.append(FrontPoint(a.cost, a.energy_wh, a.makespan_s,
                                 a.candidate.planner, a.sized_signature, labels))
    points.sort(key=lambda p: (p.cost, p.energy_wh, p.makespan_s))
    n_feasible = sum(1 for a in assessments if a.feasible)
    return ParetoFront(name, tuple(points), len(assessments), n_feasible,
                       infeasibility)


def solve_query(scenario: Scenario, task, constraints: SearchConstraints,
                catalog: Optional[Catalog] = None,
                config: PipelineConfig = PipelineConfig(),
                store: Optional[RecordStore] = None,
                name: str = "codesign") -> ParetoFront:
    """Pareto-optimal systems satisfying one task profile."""
    profile = scenario.task(task) if isinstance(task, str) else task
    pipe = Pipeline(scenario, catalog, config, store)
    return pipe.solve([profile], constraints, name)


def multi_task_solve(scenario: Scenario, tasks: Sequence,
                     constraints: SearchConstraints,
                     catalog: Optional[Catalog] = None,
                     config: PipelineConfig = PipelineConfig(),
                     store: Optional[RecordStore] = None,
                     name: str = "multi-task") -> ParetoFront:
    """Candidates must satisfy every task; energy and makespan couple by max."""
    profiles = [scenario.task(t) if isinstance(t, str) else t for t in tasks]
    if not profiles:
        raise ValueError("multi_task_solve needs at least one task")
    pipe = Pipeline(scenario, catalog, config, store)
    return pipe.solve(profiles, constraints, name)


DEFAULT_PINNED = {
    "AerialL": ("V1", "imp1", "NiMH"),
    "AerialM": ("V1", "imp1", "NiMH"),
    "Ground": ("V2", "imp1", "NiMH"),
}


@dataclass(frozen=True)
class BaselineComparison:
    codesign: ParetoFront
    fixed_planner: ParetoFront
    fixed_robots: ParetoFront

    def fronts(self):
        return {
            "codesign": self.codesign,
            "fixed_planner": self.fixed_planner,
            "fixed_robots": self.fixed_robots,
        }


def sequential_baselines(scenario: Scenario, task,
                         constraints: SearchConstraints,
                         catalog: Optional[Catalog] = None,
                         config: PipelineConfig = PipelineConfig(),
                         store: Optional[RecordStore] = None,
                         pinned: Optional[Mapping[str, Tuple[str, str, str]]] = None,
                         fixed_planner: str = "agd") -> BaselineComparison:
    """Full co-design front versus two one-subsystem-at-a-time baselines."""
    profile = scenario.task(task) if isinstance(task, str) else task
    pipe = Pipeline(scenario, catalog, config, store)
    codesign = pipe.solve([profile], constraints, "codesign")

    fp_constraints = SearchConstraints(
        planners=(fixed_planner,),
        robot_types=constraints.robot_types,
        max_per_type=constraints.max_per_type,
        battery_techs=constraints.battery_techs,
        actuation_variants=constraints.actuation_variants,
        allow_mixed_designs=constraints.allow_mixed_designs,
        prune_dominated=constraints.prune_dominated,
    )
    front_fp = pipe.solve([profile], fp_constraints, "fixed_planner")

    types = constraints.robot_types or pipe.catalog.robot_types
    pinned = dict(pinned or {t: DEFAULT_PINNED[t] for t in types if t in DEFAULT_PINNED})
    fr_constraints = SearchConstraints(
        planners=constraints.planners,
        robot_types=tuple(sorted(pinned)),
        max_per_type=constraints.max_per_type,
        pinned_designs=pinned,
        allow_mixed_designs=constraints.allow_mixed_designs,
        prune_dominated=constraints.prune_dominated,
    )
    front_fr = pipe.solve([profile], fr_constraints, "fixed_robots")
    return BaselineComparison(codesign, front_fp, front_fr)


def design_space_count(designs_per_type: Sequence[int], max_per_type: int,
                       planners: int, executors: int = 1) -> int:
    """Exact count of system-level candidates (big-integer product)."""
    if max_per_type < 0 or planners < 0 or executors < 0:
        raise ValueError("counts must be non-negative")
    total = planners * executors
    for c in designs_per_type:
        total *= 1 + max_per_type * int(c)
    return total


def approx_sci(n: int, digits: int = 2) -> str:
    """Scientific-notation rendering of a big integer, e.g. 2.66e+12."""
    if n == 0:
        return "0"
    exp = len(str(abs(n))) - 1
    mant = n / 10 ** exp
    return f"{mant:.{digits}f}e+{exp:02d}"
