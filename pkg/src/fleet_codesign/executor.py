"""Trajectory generation and energy accounting.

Waypoint sequences become bounded-curvature paths (one leg per consecutive
waypoint pair), each leg gets a per-segment trapezoidal speed profile with
stops at waypoints and cusps, and instantaneous power
``P = P_idle + c_vel * v^2 + c_acc * |a|`` is integrated with a left-Riemann
sum to yield per-robot energy and duration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from . import kernels
from .catalog import PATH_RS, ActuationModule
from .order import ASC, DESC, ProductOrder
from .reeds_shepp import LEFT, RIGHT, STRAIGHT, RSPath, reeds_shepp_path

DEFAULT_DT = 0.1

SENSING_ORDER = ProductOrder((ASC, ASC, ASC, DESC))

_KIND_CODE = {STRAIGHT: 0, LEFT: 1, RIGHT: 2}


class ConfigurationError(ValueError):
    """Executor asked for an unsupported platform configuration."""


@dataclass(frozen=True)
class MotionLimits:
    v_max: float
    a_lat_max: float
    a_lon_max: float
    r_turn: float
    theta_dot_max: float
    path_type: str = PATH_RS

    @classmethod
    def from_actuation(cls, act: ActuationModule) -> "MotionLimits":
        return cls(act.v_max, act.a_lat_max, act.a_lon_max, act.r_turn,
                   act.theta_dot_max, act.path_type)

    def arc_speed_cap(self, radius: float) -> float:
        return min(self.v_max,
                   math.sqrt(self.a_lat_max * radius),
                   self.theta_dot_max * radius)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    x: np.ndarray
    y: np.ndarray
    heading: np.ndarray
    v: np.ndarray        # signed: negative while reversing
    a: np.ndarray        # signed longitudinal acceleration
    duration: float
    dt: float

    def positions(self) -> np.ndarray:
        return np.stack([self.x, self.y], axis=1)


@dataclass(frozen=True)
class LegReport:
    duration: float
    energy_wh: float


@dataclass(frozen=True)
class EnergyReport:
    energy_wh: float
    duration: float
    per_leg: Tuple[LegReport, ...]


def power_at(v: float, a: float, p_idle_total: float,
             c_vel: float, c_acc: float) -> float:
    """Instantaneous power draw in watts."""
    return p_idle_total + c_vel * v * v + c_acc * abs(a)


def _advance_pose(pose, kind, direction, length, radius):
    x, y, th = pose
    if kind == STRAIGHT:
        return (x + direction * length * math.cos(th),
                y + direction * length * math.sin(th), th)
    if kind == LEFT:
        cx = x - radius * math.sin(th)
        cy = y + radius * math.cos(th)
        th2 = th + direction * length / radius
        return (cx + radius * math.sin(th2), cy - radius * math.cos(th2), th2)
    cx = x + radius * math.sin(th)
    cy = y - radius * math.cos(th)
    th2 = th - direction * length / radius
    return (cx - radius * math.sin(th2), cy + radius * math.cos(th2), th2)


def _speed_plan(segs, limits: MotionLimits):
    """Per-segment trapezoid phases for one leg.

    Speed is zero at leg ends and at cusps; same-direction junctions roll
    through at the lower of the adjacent segment caps.  Returns a list of
    (v0, accel, duration, distance) phases and the leg duration.
    """
    if not segs:
        return [], 0.0
    a_lon = limits.a_lon_max
    if a_lon <= 0:
        raise ConfigurationError("a_lon_max must be positive to move")
    caps = [
        limits.v_max if s.kind == STRAIGHT else limits.arc_speed_cap(limits.r_turn)
        for s in segs
    ]
    n = len(segs)
    bounds = [0.0] * (n + 1)
    for i in range(1, n):
        if segs[i - 1].direction != segs[i].direction:
            bounds[i] = 0.0
        else:
            bounds[i] = min(caps[i - 1], caps[i])
    for i in range(n):  # forward reachability
        bounds[i + 1] = min(bounds[i + 1],
                            math.sqrt(bounds[i] ** 2 + 2 * a_lon * segs[i].length))
    for i in range(n - 1, -1, -1):  # backward reachability
        bounds[i] = min(bounds[i],
                        math.sqrt(bounds[i + 1] ** 2 + 2 * a_lon * segs[i].length))

    phases = []
    duration = 0.0
    for i, seg in enumerate(segs):
        u, w, cap, L = bounds[i], bounds[i + 1], caps[i], seg.length
        peak = min(cap, math.sqrt(max(0.0, (2 * a_lon * L + u * u + w * w) / 2)))
        peak = max(peak, u, w)
        d1 = (peak * peak - u * u) / (2 * a_lon)
        d3 = (peak * peak - w * w) / (2 * a_lon)
        d2 = max(0.0, L - d1 - d3)
        t1 = (peak - u) / a_lon
        t2 = d2 / peak if peak > 0 else 0.0
        t3 = (peak - w) / a_lon
        for v0, acc, dur, ds in ((u, a_lon, t1, d1), (peak, 0.0, t2, d2),
                                 (peak, -a_lon, t3, d3)):
            if dur > 1e-12:
                phases.append((v0, acc, dur, ds))
                duration += dur
    return phases, duration


class Motion:
    """Compiled multi-leg motion: flat geometry + speed-plan arrays."""

    def __init__(self, start_pose, legs, limits: MotionLimits):
        """``legs``: list of (start_pose, [RSSegment, ...]) in travel order."""
        self.limits = limits
        self.start_pose = start_pose
        ph, sg = [], []
        t_off = 0.0
        s_off = 0.0
        self.leg_spans: List[Tuple[float, float]] = []
        for pose, segs in legs:
            segs = [s for s in segs if s.length > 1e-12]
            phases, dur = _speed_plan(segs, limits)
            if dur <= 0:
                continue
            cur = pose
            leg_s0 = s_off
            for s in segs:
                sg.append((s_off, _KIND_CODE[s.kind], float(s.direction),
                           s.length, limits.r_turn, cur[0], cur[1], cur[2]))
                s_off += s.length
                cur = _advance_pose(cur, s.kind, s.direction, s.length,
                                    limits.r_turn)
            leg_t0 = t_off
            s_phase = leg_s0
            for v0, acc, dur_p, ds in phases:
                ph.append((t_off, v0, acc, s_phase))
                t_off += dur_p
                s_phase += ds
            self.leg_spans.append((leg_t0, t_off))
        self.duration = t_off
        if not ph:
            x0, y0, th0 = start_pose
            ph = [(0.0, 0.0, 0.0, 0.0)]
            sg = [(0.0, 0, 1.0, 0.0, max(limits.r_turn, 1e-9), x0, y0, th0)]
            self.leg_spans = []
        self._phases = tuple(
            np.ascontiguousarray(col, dtype=np.float64) for col in zip(*ph)
        )
        self._segments = tuple(
            np.ascontiguousarray(col, dtype=np.float64) for col in zip(*sg)
        )

    def sample(self, ts: np.ndarray):
        return kernels.sample_states(ts, self._phases, self._segments)

    def time_grid(self, dt: float, t0: float = 0.0, t1=None) -> np.ndarray:
        if t1 is None:
            t1 = self.duration
        span = t1 - t0
        n = int(math.floor(span / dt + 1e-9))
        ts = t0 + dt * np.arange(n + 1)
        if t1 - ts[-1] > 1e-9:
            ts = np.append(ts, t1)
        return ts

    def trajectory(self, dt: float) -> Trajectory:
        ts = self.time_grid(dt)
        x, y, th, v, a = self.sample(ts)
        return Trajectory(ts, x, y, th, v, a, self.duration, dt)

    def energy_report(self, p_idle_total: float, c_vel: float, c_acc: float,
                      dt: float) -> EnergyReport:
        legs = []
        total_j = 0.0
        for t0, t1 in self.leg_spans:
            ts = self.time_grid(dt, t0, t1)
            _, _, _, v, a = self.sample(ts)
            p = p_idle_total + c_vel * v * v + c_acc * np.abs(a)
            e_j = float(np.sum(p[:-1] * np.diff(ts))) if ts.size > 1 else 0.0
            legs.append(LegReport(t1 - t0, e_j / 3600.0))
            total_j += e_j
        # a motionless robot still idles for its (zero) duration
        return EnergyReport(total_j / 3600.0, self.duration, tuple(legs))


def _headings(points):
    poses = []
    for k, p in enumerate(points):
        if k + 1 < len(points):
            nxt = points[k + 1]
            th = math.atan2(nxt[1] - p[1], nxt[0] - p[0])
        else:
            prv = points[k - 1]
            th = math.atan2(p[1] - prv[1], p[0] - prv[0])
        poses.append((p[0], p[1], th))
    return poses


def plan_motion(waypoints: Sequence[Tuple[float, float]],
                limits: MotionLimits) -> Motion:
    """Chain shortest paths through the waypoint sequence.

    Initial heading points toward the second waypoint; single-waypoint (or
    empty) missions are zero-duration.  Consecutive duplicate waypoints are
    collapsed.
    """
    if limits.path_type != PATH_RS:
        raise ConfigurationError(
            f"executor supports RS platforms only, got {limits.path_type!r}"
        )
    pts = []
    for p in waypoints:
        q = (float(p[0]), float(p[1]))
        if not pts or abs(q[0] - pts[-1][0]) > 1e-12 or abs(q[1] - pts[-1][1]) > 1e-12:
            pts.append(q)
    if not pts:
        return Motion((0.0, 0.0, 0.0), [], limits)
    if len(pts) == 1:
        return Motion((pts[0][0], pts[0][1], 0.0), [], limits)
    poses = _headings(pts)
    legs = []
    for k in range(len(poses) - 1):
        path = reeds_shepp_path(poses[k], poses[k + 1], limits.r_turn)
        legs.append((poses[k], list(path.segments)))
    return Motion(poses[0], legs, limits)


def velocity_profile(path: RSPath, limits: MotionLimits,
                     q0=(0.0, 0.0, 0.0), dt: float = DEFAULT_DT) -> Trajectory:
    """Time-parameterize a single geometric path from pose ``q0``."""
    motion = Motion(q0, [(tuple(q0), list(path.segments))], limits)
    return motion.trajectory(dt)


def execute(fleet, collection, dt: float = DEFAULT_DT):
    """Run every robot through its waypoint sequence.

    ``collection`` indexes waypoint sequences like the expanded fleet.
    Returns a list of (Trajectory, EnergyReport) per expanded robot.
    """
    designs = fleet.expanded()
    if len(collection) != len(designs):
        raise ValueError(
            f"waypoint collection size {len(collection)} != fleet size {len(designs)}"
        )
    out = []
    for design, waypoints in zip(designs, collection):
        act = design.actuation
        sens = design.sensing
        motion = plan_motion(waypoints, MotionLimits.from_actuation(act))
        traj = motion.trajectory(dt)
        report = motion.energy_report(act.p_idle + sens.p_req,
                                      act.c_vel, act.c_acc, dt)
        out.append((traj, report))
    return out


def trajectory_leq(a: Trajectory, b: Trajectory,
                   sensing_a: tuple, sensing_b: tuple,
                   tol: float = 1e-9) -> bool:
    """Prefix dominance in time and space plus sensing dominance.

    ``a`` precedes ``b`` iff it is a spatial prefix of ``b`` (every sample of
    ``a`` matches ``b`` at the same instant) and its sensing tuple
    (r_sensing, lambda_base, sigma_d, beta_v) is dominated by ``b``'s.
    """
    if abs(a.dt - b.dt) > 1e-12:
        raise ValueError("trajectories sampled with different steps")
    if a.duration > b.duration + tol:
        return False
    if not SENSING_ORDER.leq(sensing_a, sensing_b):
        return False
    bt = b.times
    for k in range(a.times.size):
        t = a.times[k]
        j = int(np.searchsorted(bt, t - 1e-12))
        if j >= bt.size or abs(bt[j] - t) > 1e-9:
            return False
        if (abs(a.x[k] - b.x[j]) > tol or abs(a.y[k] - b.y[j]) > tol
                or abs(a.v[k] - b.v[j]) > tol):
            return False
    return True
