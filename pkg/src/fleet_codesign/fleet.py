"""Fleet composition: canonical multisets of robot designs.

A fleet holds (design, count) slots in canonical order, exposes resource
totals, resolves the battery-capacity-vs-required-energy feedback, and
carries the injective-matching partial order used for dominance reasoning.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .catalog import (
    Catalog,
    OrderOutcome,
    RobotDesign,
    max_feasible_capacity,
    robot_cost,
    robot_dominates,
    robot_interface,
)


@dataclass(frozen=True)
class FleetSlot:
    design: RobotDesign
    count: int


@dataclass(frozen=True)
class FleetResources:
    total_cost: float    # USD
    total_energy: float  # Wh


@dataclass(frozen=True)
class Fleet:
    """Canonical form: slots sorted by (robot type, design key), counts >= 1."""

    slots: tuple

    @classmethod
    def build(cls, pairs: Iterable) -> "Fleet":
        merged: dict = {}
        for design, count in pairs:
            if count < 0:
                raise ValueError("negative robot count")
            if count == 0:
                continue
            k = (design.robot_type, design.key)
            if k in merged:
                merged[k] = FleetSlot(merged[k].design, merged[k].count + count)
            else:
                merged[k] = FleetSlot(design, count)
        slots = tuple(merged[k] for k in sorted(merged))
        return cls(slots)

    @property
    def size(self) -> int:
        return sum(s.count for s in self.slots)

    def expanded(self) -> list:
        out = []
        for s in self.slots:
            out.extend([s.design] * s.count)
        return out

    def interfaces(self) -> list:
        out = []
        for s in self.slots:
            iface = robot_interface(s.design)
            out.extend([iface] * s.count)
        return out

    def signature(self, with_capacity: bool = True) -> str:
        parts = []
        for s in self.slots:
            key = s.design.key if with_capacity else s.design.core_key
            parts.append(f"{key}x{s.count}")
        return "|".join(parts)

    @property
    def core_signature(self) -> str:
        return self.signature(with_capacity=False)

    def with_capacities(self, capacities: Sequence[float]) -> "Fleet":
        """Rebuild with per-slot capacities (one value per slot)."""
        if len(capacities) != len(self.slots):
            raise ValueError("one capacity per slot required")
        pairs = []
        for s, cap in zip(self.slots, capacities):
            d = s.design
            pairs.append((RobotDesign(d.actuation, d.sensing, d.battery, cap), s.count))
        return Fleet.build(pairs)

    def __iter__(self):
        return iter(self.slots)


def parse_signature(catalog: Catalog, signature: str) -> Fleet:
    """Parse ``Type.Variant.Sensor.Tech[@cap]xN|...`` into a fleet."""
    pairs = []
    for part in signature.split("|"):
        part = part.strip()
        if not part:
            continue
        try:
            key, count_s = part.rsplit("x", 1)
            count = int(count_s)
            if "@" in key:
                core, cap_s = key.split("@")
                capacity = float(cap_s)
            else:
                core, capacity = key, 0.0
            rtype, variant, sensor, tech = core.split(".")
        except ValueError:
            raise ValueError(f"malformed fleet signature part {part!r}") from None
        design = RobotDesign(
            catalog.actuation(rtype, variant),
            catalog.sensing(rtype, sensor),
            catalog.battery(tech),
            capacity,
        )
        pairs.append((design, count))
    if not pairs:
        raise ValueError("empty fleet signature")
    return Fleet.build(pairs)


def max_bipartite_matching(adjacency: Sequence[Sequence[int]], n_right: int) -> int:
    """Size of a maximum matching (augmenting paths; inputs are tiny)."""
    match_right = [-1] * n_right

    def try_assign(i: int, seen: list) -> bool:
        for j in adjacency[i]:
            if not seen[j]:
                seen[j] = True
                if match_right[j] == -1 or try_assign(match_right[j], seen):
                    match_right[j] = i
                    return True
        return False

    size = 0
    for i in range(len(adjacency)):
        if try_assign(i, [False] * n_right):
            size += 1
    return size


def fleet_leq(a: Fleet, b: Fleet) -> bool:
    """True iff an injective map sends every robot of ``a`` to a distinct
    robot of ``b`` that dominates it in capabilities."""
    ia = a.interfaces()
    ib = b.interfaces()
    if len(ia) > len(ib):
        return False
    adjacency = []
    for ra in ia:
        adjacency.append([
            j for j, rb in enumerate(ib)
            if robot_dominates(rb, ra) in (OrderOutcome.GREATER_EQ, OrderOutcome.EQUAL)
        ])
    return max_bipartite_matching(adjacency, len(ib)) == len(ia)


def fleet_totals(f: Fleet, energy_per_robot: Sequence[float]) -> FleetResources:
    """Total acquisition cost and total operating energy."""
    if len(energy_per_robot) != f.size:
        raise ValueError(
            f"energy vector length {len(energy_per_robot)} != fleet size {f.size}"
        )
    cost = sum(s.count * robot_cost(s.design) for s in f.slots)
    return FleetResources(cost, float(sum(energy_per_robot)))


@dataclass(frozen=True)
class CapacityGrid:
    max_wh: float
    step_wh: float

    def ceil(self, energy_wh: float) -> float:
        """Smallest positive grid capacity >= energy."""
        steps = max(1, int(math.ceil(energy_wh / self.step_wh - 1e-9)))
        return steps * self.step_wh


@dataclass(frozen=True)
class CapacityAssignment:
    feasible: bool
    capacities: tuple          # per expanded robot, Wh
    diagnostics: tuple         # per expanded robot, str or None


def capacity_feedback(f: Fleet, required_energy: Sequence[float],
                      grid: Optional[CapacityGrid] = None,
                      continuous: bool = False) -> CapacityAssignment:
    """Minimal battery capacity per expanded robot covering its energy demand.

    Grid mode rounds up to the capacity grid; continuous mode returns the
    demand exactly.  A robot is infeasible when the selected capacity exceeds
    what its payload budget (or the grid ceiling) admits.
    """
    designs = f.expanded()
    if len(required_energy) != len(designs):
        raise ValueError("one required energy per expanded robot")
    if not continuous and grid is None:
        raise ValueError("grid mode needs a CapacityGrid")
    caps, diags, ok = [], [], True
    for d, e in zip(designs, required_energy):
        if e < 0:
            raise ValueError("required energy must be >= 0")
        cap = float(e) if continuous else grid.ceil(e)
        limit = max_feasible_capacity(d.actuation, d.sensing, d.battery)
        if not continuous:
            limit = min(limit, grid.max_wh)
        if cap > limit + 1e-9:
            ok = False
            diags.append(
                f"{d.core_key}: needs {cap:.2f} Wh, ceiling {limit:.2f} Wh"
            )
        else:
            diags.append(None)
        caps.append(cap)
    return CapacityAssignment(ok, tuple(caps), tuple(diags))


def enumerate_fleets(designs_by_type: Mapping[str, Sequence[RobotDesign]],
                     max_per_type: int,
                     allow_mixed_designs: bool = False) -> Iterator[Fleet]:
    """All canonical nonempty fleets with at most ``max_per_type`` robots per type.

    Default mode deploys one design per type (absence, or one of the type's
    designs at count 1..max).  ``allow_mixed_designs`` relaxes this to
    arbitrary multisets of at most ``max_per_type`` designs per type; only
    sensible for tiny catalogs.
    """
    if max_per_type < 1:
        raise ValueError("max_per_type must be >= 1")
    types = sorted(designs_by_type)

    def options(t: str):
        designs = designs_by_type[t]
        yield ()
        if not allow_mixed_designs:
            for d in designs:
                for k in range(1, max_per_type + 1):
                    yield ((d, k),)
        else:
            for n in range(1, max_per_type + 1):
                for combo in itertools.combinations_with_replacement(designs, n):
                    counts: dict = {}
                    for d in combo:
                        counts[d.key] = (d, counts.get(d.key, (d, 0))[1] + 1)
                    yield tuple(counts.values())

    for combo in itertools.product(*(options(t) for t in types)):
        pairs = [p for group in combo for p in group]
        if not pairs:
            continue
        yield Fleet.build(pairs)


def fleet_design_space_size(counts_per_type: Sequence[int], max_per_type: int) -> int:
    """Number of per-type-single-design fleets, including the empty fleet."""
    total = 1
    for c in counts_per_type:
        total *= 1 + max_per_type * c
    return total
