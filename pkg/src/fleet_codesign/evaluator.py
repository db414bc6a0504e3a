"""Scoring of executed trajectories: coverage, detection, task satisfaction.

Coverage rasterizes the map and counts cells whose center falls inside some
robot's swept sensing disk.  Detection integrates the instantaneous rate
``lambda_base * exp(-d^2 / (2 sigma_d^2)) * 1{d <= r_sensing} * exp(-beta_v |v|)``
per target into exposures; a target counts detected when the fleet-level
hit probability ``1 - exp(-sum of exposures)`` reaches the confidence
threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence, Tuple

import numpy as np

from . import kernels
from .catalog import SensingModule
from .executor import Trajectory
from .planners import RectMap
from .scenario import METRIC_COVERAGE, METRIC_DETECTIONS, TaskProfile

DEFAULT_GRID_RES = 2.0


def _sensing_params(sensing) -> Tuple[float, float, float, float]:
    """Accept a SensingModule or a (lambda_base, sigma_d, beta_v, r_sensing) tuple."""
    if isinstance(sensing, SensingModule):
        return sensing.lambda_base, sensing.sigma_d, sensing.beta_v, sensing.r_sensing
    lam, sigma, beta, r = sensing
    return float(lam), float(sigma), float(beta), float(r)


def coverage_fraction(trajectories: Sequence[Trajectory],
                      sensing_radii: Sequence[float],
                      m: RectMap,
                      grid_res: float = DEFAULT_GRID_RES) -> float:
    """Fraction of map cells within sensing range of some sampled position."""
    if grid_res <= 0:
        raise ValueError("grid_res must be positive")
    nx = max(1, int(math.ceil(m.width / grid_res - 1e-9)))
    ny = max(1, int(math.ceil(m.height / grid_res - 1e-9)))
    cw, ch = m.width / nx, m.height / ny
    covered = np.zeros((ny, nx), dtype=bool)
    for traj, radius in zip(trajectories, sensing_radii):
        if traj.times.size == 0 or radius <= 0:
            continue
        kernels.mark_covered(traj.x, traj.y, radius, m.origin[0], m.origin[1],
                             cw, ch, nx, ny, covered)
    return float(covered.sum()) / float(nx * ny)


def exposure(target: Tuple[float, float], traj: Trajectory, sensing) -> float:
    """Cumulative detection-rate integral of one robot over one target."""
    lam, sigma, beta, r = _sensing_params(sensing)
    return kernels.exposure_sum(traj.x, traj.y, traj.v, traj.times,
                                target[0], target[1], lam, sigma, beta, r)


def hit_probability(exposures: Sequence[float]) -> float:
    """Fleet-level detection probability from per-robot exposures."""
    total = float(sum(exposures))
    if total < 0:
        raise ValueError("exposures must be non-negative")
    return 1.0 - math.exp(-total)


def target_exposures(targets: Sequence[Tuple[float, float]],
                     trajectories: Sequence[Trajectory],
                     sensings: Sequence) -> Tuple[float, ...]:
    """Per-target exposure summed across the fleet."""
    totals = []
    for t in targets:
        totals.append(sum(exposure(t, traj, s)
                          for traj, s in zip(trajectories, sensings)))
    return tuple(totals)


def detection_count(targets: Sequence[Tuple[float, float]],
                    trajectories: Sequence[Trajectory],
                    sensings: Sequence, delta: float) -> int:
    """Number of targets detected with probability at least ``delta``."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    count = 0
    for total in target_exposures(targets, trajectories, sensings):
        if 1.0 - math.exp(-total) >= delta:
            count += 1
    return count


def detections_from_exposures(exposures: Sequence[float], delta: float) -> int:
    return sum(1 for e in exposures if 1.0 - math.exp(-e) >= delta)


@dataclass(frozen=True)
class MapEvaluation:
    """Raw per-map scores: coverage plus per-target total exposures."""

    coverage: float
    target_exposures: Tuple[float, ...]

    def metric(self, name: str, delta: float):
        if name == METRIC_COVERAGE:
            return self.coverage
        if name == METRIC_DETECTIONS:
            return detections_from_exposures(self.target_exposures, delta)
        raise ValueError(f"unknown metric {name!r}")


def evaluate_map(trajectories: Sequence[Trajectory], sensings: Sequence,
                 m: RectMap, targets: Sequence[Tuple[float, float]],
                 grid_res: float = DEFAULT_GRID_RES) -> MapEvaluation:
    radii = [_sensing_params(s)[3] for s in sensings]
    cov = coverage_fraction(trajectories, radii, m, grid_res)
    return MapEvaluation(cov, target_exposures(targets, trajectories, sensings))


def multi_map_evaluate(evaluations: Mapping[str, MapEvaluation],
                       index: Sequence[Tuple[str, str]],
                       delta: float = 0.95) -> tuple:
    """Metric values for an index set of (metric, map id) pairs."""
    out = []
    for metric, map_id in index:
        if map_id not in evaluations:
            raise KeyError(f"no trajectory collection evaluated for map {map_id!r}")
        out.append(evaluations[map_id].metric(metric, delta))
    return tuple(out)


def task_metrics(evaluations: Mapping[str, MapEvaluation],
                 profile: TaskProfile) -> tuple:
    return multi_map_evaluate(
        evaluations,
        [(r.metric, r.map_id) for r in profile.requirements],
        profile.delta,
    )


def task_satisfied(metric_values: Sequence[float], profile: TaskProfile) -> bool:
    """Conjunction of thresholds; a bottom threshold ignores its metric."""
    if len(metric_values) != len(profile.requirements):
        raise ValueError("one metric value per requirement expected")
    return all(v >= r.threshold for v, r in zip(metric_values, profile.requirements))
