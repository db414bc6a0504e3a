"""Multi-objective quality indicators over normalized fronts.

Fronts are normalized to the unit box using per-dimension bounds taken over
the union of all compared fronts.  Hypervolume uses recursive dimension
sweeps against a dominated reference point; the distance indicators use the
clamped difference ``d+(a, z) = ||max(a - z, 0)||`` aggregated by maximum
(mean available as an option).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .order import ASC, Antichain, ProductOrder


@dataclass(frozen=True)
class NormalizedFront:
    """Points scaled into [0, 1]^k (all-minimize) with recorded bounds."""

    points: Tuple[Tuple[float, ...], ...]
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.lower)


def normalize_fronts(fronts: Sequence[Sequence[Sequence[float]]]):
    """Normalize several fronts with shared union bounds.

    Degenerate dimensions (equal min and max) map to 0.
    """
    all_points = [tuple(p) for f in fronts for p in f]
    if not all_points:
        raise ValueError("cannot normalize empty fronts")
    dim = len(all_points[0])
    for p in all_points:
        if len(p) != dim:
            raise ValueError("fronts have mixed dimensionality")
    arr = np.asarray(all_points, dtype=float)
    lower = arr.min(axis=0)
    upper = arr.max(axis=0)
    span = np.where(upper > lower, upper - lower, 1.0)
    out = []
    for f in fronts:
        pts = tuple(
            tuple(((np.asarray(p, dtype=float) - lower) / span).tolist())
            for p in f
        )
        out.append(NormalizedFront(pts, tuple(lower.tolist()), tuple(upper.tolist())))
    return out


def _hv(points: List[Tuple[float, ...]], ref: Tuple[float, ...]) -> float:
    """Recursive dimension-sweep hypervolume (minimization, small fronts)."""
    k = len(ref)
    pts = [p for p in points if all(pi <= ri for pi, ri in zip(p, ref))]
    if not pts:
        return 0.0
    if k == 1:
        return ref[0] - min(p[0] for p in pts)
    order = ProductOrder((ASC,) * (k - 1))
    pts.sort(key=lambda p: p[-1])
    total = 0.0
    frontier = Antichain(order)
    levels = sorted({p[-1] for p in pts}) + [ref[-1]]
    idx = 0
    for li, level in enumerate(levels[:-1]):
        while idx < len(pts) and pts[idx][-1] <= level:
            frontier = frontier.insert(pts[idx][:-1])
            idx += 1
        thickness = levels[li + 1] - level
        if thickness > 0:
            total += _hv(list(frontier.elements), ref[:-1]) * thickness
    return total


def hypervolume(front: NormalizedFront,
                ref_point: Sequence[float] = None) -> float:
    """Measure dominated by the front up to ``ref_point`` (default all-ones)."""
    if ref_point is None:
        ref_point = (1.0,) * front.dim
    ref = tuple(float(r) for r in ref_point)
    for p in front.points:
        if any(pi > ri for pi, ri in zip(p, ref)):
            raise ValueError(f"point {p} lies beyond the reference {ref}")
    return _hv(list(front.points), ref)


def _d_plus(a: Sequence[float], z: Sequence[float]) -> float:
    return math.sqrt(sum(max(ai - zi, 0.0) ** 2 for ai, zi in zip(a, z)))


def _aggregate(values: List[float], aggregate: str) -> float:
    if not values:
        raise ValueError("empty front")
    if aggregate == "max":
        return max(values)
    if aggregate == "mean":
        return sum(values) / len(values)
    raise ValueError(f"unknown aggregate {aggregate!r}")


def gd_plus(front: NormalizedFront, reference: NormalizedFront,
            aggregate: str = "max") -> float:
    """Worst (or mean) clamped distance from the front to the reference."""
    if not front.points or not reference.points:
        raise ValueError("empty front")
    if (front.lower, front.upper) != (reference.lower, reference.upper):
        raise ValueError("fronts must share normalization bounds")
    values = [
        min(_d_plus(a, z) for z in reference.points) for a in front.points
    ]
    return _aggregate(values, aggregate)


def igd_plus(front: NormalizedFront, reference: NormalizedFront,
             aggregate: str = "max") -> float:
    """``gd_plus`` with the roles of the two fronts swapped."""
    return gd_plus(reference, front, aggregate)


@dataclass(frozen=True)
class IndicatorReport:
    reference: str
    bounds_lower: Tuple[float, ...]
    bounds_upper: Tuple[float, ...]
    ref_point: Tuple[float, ...]
    aggregate: str
    rows: Dict[str, dict] = field(hash=False)

    def to_dict(self) -> dict:
        return {
            "reference": self.reference,
            "normalization": {
                "lower": list(self.bounds_lower),
                "upper": list(self.bounds_upper),
            },
            "ref_point": list(self.ref_point),
            "aggregate": self.aggregate,
            "fronts": self.rows,
        }


def indicator_report(fronts: Dict[str, Sequence[Sequence[float]]],
                     reference: str, aggregate: str = "max",
                     ref_point: Sequence[float] = None) -> IndicatorReport:
    """HV / GD+ / IGD+ of named fronts against one reference front."""
    if reference not in fronts:
        raise ValueError(f"reference front {reference!r} not among fronts")
    names = list(fronts)
    normalized = normalize_fronts([fronts[n] for n in names])
    byname = dict(zip(names, normalized))
    ref = byname[reference]
    if ref_point is None:
        ref_point = (1.0,) * ref.dim
    rows = {}
    for n in names:
        f = byname[n]
        rows[n] = {
            "hv": hypervolume(f, ref_point),
            "gd_plus": gd_plus(f, ref, aggregate),
            "igd_plus": igd_plus(f, ref, aggregate),
            "points": len(f.points),
        }
    return IndicatorReport(reference, ref.lower, ref.upper,
                           tuple(float(x) for x in ref_point), aggregate, rows)
