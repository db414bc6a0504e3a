"""Coverage planners for rectangular maps.

Three strategies produce per-robot waypoint sequences:

* ``agd``       -- proportional strip partition, square cells inscribed in
                   each robot's sensing disk, tour ordering by an MST-based
                   traveling-salesman heuristic;
* ``darp``      -- shared grid sized to the smallest sensing footprint,
                   iterative cell assignment into equitable connected
                   regions, spanning-tree coverage routes;
* ``mrta_lite`` -- proportional strips swept by boustrophedon rows.

All planners are deterministic functions of (fleet, map).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .fleet import Fleet, max_bipartite_matching

DARP_ITERATION_CAP = 1000


@dataclass(frozen=True)
class RectMap:
    id: str
    width: float
    height: float
    origin: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("map dimensions must be positive")

    @property
    def area(self) -> float:
        return self.width * self.height

    def contains(self, p, tol: float = 1e-9) -> bool:
        x0, y0 = self.origin
        return (x0 - tol <= p[0] <= x0 + self.width + tol
                and y0 - tol <= p[1] <= y0 + self.height + tol)

    def to_dict(self) -> dict:
        return {"id": self.id, "width": self.width, "height": self.height,
                "origin": list(self.origin)}


@dataclass(frozen=True)
class Strip:
    x0: float
    y0: float
    width: float
    height: float

    @property
    def center(self) -> Tuple[float, float]:
        return (self.x0 + self.width / 2.0, self.y0 + self.height / 2.0)

    @property
    def area(self) -> float:
        return self.width * self.height


@dataclass(frozen=True)
class WaypointCollection:
    sequences: tuple          # per expanded robot, tuple of (x, y)
    planner: str
    map_id: str
    meta: dict = field(default_factory=dict, hash=False)

    def __len__(self):
        return len(self.sequences)

    def __getitem__(self, i):
        return self.sequences[i]

    def to_dict(self) -> dict:
        return {
            "planner": self.planner,
            "map_id": self.map_id,
            "waypoints": {
                str(i): [[p[0], p[1]] for p in seq]
                for i, seq in enumerate(self.sequences)
            },
            "meta": dict(self.meta),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WaypointCollection":
        n = len(d["waypoints"])
        seqs = tuple(
            tuple((p[0], p[1]) for p in d["waypoints"][str(i)]) for i in range(n)
        )
        return cls(seqs, d["planner"], d["map_id"], d.get("meta", {}))


def strip_partition(m: RectMap, weights: Sequence[float]) -> List[Strip]:
    """Tile the map with strips along its longer dimension, proportionally."""
    total = float(sum(weights))
    if total <= 0:
        raise ValueError("strip weights must sum to a positive value")
    if any(w < 0 for w in weights):
        raise ValueError("strip weights must be non-negative")
    x0, y0 = m.origin
    along_height = m.height >= m.width
    span = m.height if along_height else m.width
    edges = [0.0]
    acc = 0.0
    for w in weights:
        acc += w / total
        edges.append(acc * span)
    edges[-1] = span  # exact tiling despite rounding
    strips = []
    for k in range(len(weights)):
        lo, hi = edges[k], edges[k + 1]
        if along_height:
            strips.append(Strip(x0, y0 + lo, m.width, hi - lo))
        else:
            strips.append(Strip(x0 + lo, y0, hi - lo, m.height))
    return strips


def _speed_weights(fleet: Fleet) -> List[float]:
    return [r.v_max * r.r_sensing for r in fleet.interfaces()]


def _grid_centers(strip: Strip, side: float):
    """Row-major centers of an exact-fit grid with cells no larger than side."""
    nx = max(1, int(math.ceil(strip.width / side - 1e-9))) if strip.width > 0 else 1
    ny = max(1, int(math.ceil(strip.height / side - 1e-9))) if strip.height > 0 else 1
    cw = strip.width / nx
    ch = strip.height / ny
    pts = []
    for j in range(ny):
        for i in range(nx):
            pts.append((strip.x0 + (i + 0.5) * cw, strip.y0 + (j + 0.5) * ch))
    return pts, nx, ny


# ---------------------------------------------------------------------------
# tour ordering
# ---------------------------------------------------------------------------

def tsp_order(points: Sequence[Tuple[float, float]]) -> List[Tuple[float, float]]:
    """Tour over the points: MST, greedy odd-vertex matching, Euler shortcut.

    Greedy (not minimum-weight) matching trades the 3/2 guarantee for a
    simple deterministic 2x bound.
    """
    n = len(points)
    if n == 0:
        raise ValueError("tsp_order needs at least one point")
    if n <= 2:
        return list(points)
    pts = np.asarray(points, dtype=float)
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=2))

    # Prim's MST, ties by lowest vertex index
    in_tree = [0]
    best_src = [0] * n
    best_d = dist[0].copy()
    best_d[0] = np.inf
    mst_edges = []
    for _ in range(n - 1):
        j = int(np.argmin(best_d))
        mst_edges.append((best_src[j], j))
        in_tree.append(j)
        best_d[j] = np.inf
        improve = dist[j] < best_d
        for k in np.nonzero(improve)[0]:
            best_d[k] = dist[j][k]
            best_src[k] = j

    degree = [0] * n
    adj: Dict[int, List[int]] = {i: [] for i in range(n)}
    for u, v in mst_edges:
        degree[u] += 1
        degree[v] += 1
        adj[u].append(v)
        adj[v].append(u)

    odd = [i for i in range(n) if degree[i] % 2 == 1]
    pairs = sorted(
        ((dist[u][v], u, v) for a, u in enumerate(odd) for v in odd[a + 1:]),
        key=lambda t: (t[0], t[1], t[2]),
    )
    used = set()
    for _, u, v in pairs:
        if u not in used and v not in used:
            used.update((u, v))
            adj[u].append(v)
            adj[v].append(u)

    # Hierholzer Euler tour on the multigraph
    remaining = {i: sorted(adj[i], reverse=True) for i in range(n)}
    stack, tour = [0], []
    while stack:
        u = stack[-1]
        if remaining[u]:
            v = remaining[u].pop()
            remaining[v].remove(u)
            stack.append(v)
        else:
            tour.append(stack.pop())
    tour.reverse()

    seen, order = set(), []
    for u in tour:
        if u not in seen:
            seen.add(u)
            order.append(u)
    return [points[i] for i in order]


def tour_length(points: Sequence[Tuple[float, float]], closed: bool = True) -> float:
    total = 0.0
    for k in range(1, len(points)):
        total += math.dist(points[k - 1], points[k])
    if closed and len(points) > 1:
        total += math.dist(points[-1], points[0])
    return total


# ---------------------------------------------------------------------------
# AGD: adaptive grid fitted to each robot's sensing disk
# ---------------------------------------------------------------------------

def agd_plan(fleet: Fleet, m: RectMap) -> WaypointCollection:
    interfaces = fleet.interfaces()
    if any(r.r_sensing <= 0 for r in interfaces):
        raise ValueError("agd needs positive sensing radii")
    strips = strip_partition(m, _speed_weights(fleet))
    seqs = []
    for iface, strip in zip(interfaces, strips):
        side = math.sqrt(2.0) * iface.r_sensing
        centers, _, _ = _grid_centers(strip, side)
        seqs.append(tuple(tsp_order(centers)))
    return WaypointCollection(tuple(seqs), "agd", m.id)


# ---------------------------------------------------------------------------
# MRTA-lite: proportional strips with boustrophedon rows
# ---------------------------------------------------------------------------

def mrta_lite_plan(fleet: Fleet, m: RectMap,
                   row_overlap: float = math.sqrt(2.0) / 2.0) -> WaypointCollection:
    interfaces = fleet.interfaces()
    strips = strip_partition(m, _speed_weights(fleet))
    seqs = []
    for iface, strip in zip(interfaces, strips):
        pitch = 2.0 * iface.r_sensing * math.cos(math.asin(min(1.0, row_overlap)))
        if pitch <= 0:
            pitch = iface.r_sensing
        along_width = strip.width >= strip.height  # rows parallel to longer side
        cross = strip.height if along_width else strip.width
        span_lo = strip.x0 if along_width else strip.y0
        span_hi = span_lo + (strip.width if along_width else strip.height)
        n_rows = max(1, int(math.ceil(cross / pitch - 1e-9))) if cross > 0 else 1
        step = cross / n_rows
        pts = []
        for k in range(n_rows):
            line = (strip.y0 if along_width else strip.x0) + (k + 0.5) * step
            ends = (span_lo, span_hi) if k % 2 == 0 else (span_hi, span_lo)
            for e in ends:
                pts.append((e, line) if along_width else (line, e))
        seqs.append(tuple(pts))
    return WaypointCollection(tuple(seqs), "mrta_lite", m.id)


# ---------------------------------------------------------------------------
# DARP: equitable connected grid partition + spanning-tree coverage routes
# ---------------------------------------------------------------------------

def _neighbors(cell, nx, ny):
    i, j = cell
    if i > 0:
        yield (i - 1, j)
    if i < nx - 1:
        yield (i + 1, j)
    if j > 0:
        yield (i, j - 1)
    if j < ny - 1:
        yield (i, j + 1)


def _connected(cells: set) -> bool:
    if not cells:
        return True
    seen = set()
    stack = [next(iter(sorted(cells)))]
    while stack:
        c = stack.pop()
        if c in seen:
            continue
        seen.add(c)
        i, j = c
        for nb in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)):
            if nb in cells and nb not in seen:
                stack.append(nb)
    return len(seen) == len(cells)


def _striping_assignment(nx, ny, n_robots):
    """Row-major contiguous blocks; balanced within one and connected."""
    cells = [(i, j) for j in range(ny) for i in range(nx)]
    total = len(cells)
    base, rem = divmod(total, n_robots)
    assignment = {}
    pos = 0
    for r in range(n_robots):
        take = base + (1 if r < rem else 0)
        for c in cells[pos:pos + take]:
            assignment[c] = r
        pos += take
    return assignment


def _darp_assignment(nx, ny, n_robots, seeds):
    """Weighted-distance assignment iterated toward balanced counts."""
    cells = [(i, j) for j in range(ny) for i in range(nx)]
    total = len(cells)
    target = total / n_robots
    mult = [1.0] * n_robots
    assignment = {}
    for _ in range(DARP_ITERATION_CAP):
        for c in cells:
            costs = [
                (mult[r] * math.dist((c[0] + 0.5, c[1] + 0.5), seeds[r]), r)
                for r in range(n_robots)
            ]
            assignment[c] = min(costs)[1]
        counts = [0] * n_robots
        for r in assignment.values():
            counts[r] += 1
        if max(counts) - min(counts) <= 1:
            break
        for r in range(n_robots):
            mult[r] *= 1.0 + 0.05 * (counts[r] - target) / max(target, 1.0)
    return assignment


def _repair_partition(assignment, nx, ny, n_robots):
    """Reconnect regions and rebalance counts to within one cell.

    Returns the repaired assignment or None when repair stalls.
    """
    regions = [set() for _ in range(n_robots)]
    for c, r in assignment.items():
        regions[r].add(c)

    # keep each region's largest component (ties: the one with the smallest
    # cell), orphan the rest
    orphans = set()
    for r in range(n_robots):
        cells = regions[r]
        comps = []
        left = set(cells)
        while left:
            start = min(left)
            comp, stack = set(), [start]
            while stack:
                c = stack.pop()
                if c in comp or c not in left:
                    continue
                comp.add(c)
                i, j = c
                for nb in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)):
                    if nb in left and nb not in comp:
                        stack.append(nb)
            comps.append(comp)
            left -= comp
        comps.sort(key=lambda s: (-len(s), min(s)))
        regions[r] = comps[0] if comps else set()
        for comp in comps[1:]:
            orphans |= comp

    # grow regions over orphans, preferring the least-loaded adjacent region
    guard = nx * ny * 4 + 16
    while orphans and guard > 0:
        guard -= 1
        progressed = False
        for c in sorted(orphans):
            candidates = [
                r for r in range(n_robots)
                if any(nb in regions[r] for nb in _neighbors(c, nx, ny))
            ]
            if candidates:
                r = min(candidates, key=lambda r: (len(regions[r]), r))
                regions[r].add(c)
                orphans.discard(c)
                progressed = True
        if not progressed:
            return None

    # rebalance: move boundary cells from crowded to adjacent starved regions
    guard = nx * ny * 8 + 16
    while guard > 0:
        guard -= 1
        counts = [len(regions[r]) for r in range(n_robots)]
        hi = max(range(n_robots), key=lambda r: (counts[r], r))
        lo = min(range(n_robots), key=lambda r: (counts[r], r))
        if counts[hi] - counts[lo] <= 1:
            break
        moved = False
        for c in sorted(regions[hi]):
            receivers = [
                r for r in range(n_robots)
                if r != hi and counts[r] < counts[hi] - 1
                and any(nb in regions[r] for nb in _neighbors(c, nx, ny))
            ]
            if not receivers:
                continue
            rest = regions[hi] - {c}
            if rest and not _connected(rest):
                continue
            r = min(receivers, key=lambda r: (counts[r], r))
            regions[hi] = rest
            regions[r].add(c)
            moved = True
            break
        if not moved:
            return None
    else:
        return None

    out = {}
    for r in range(n_robots):
        if not _connected(regions[r]):
            return None
        for c in regions[r]:
            out[c] = r
    if len(out) != nx * ny:
        return None
    return out


def _stc_route(cells: List[Tuple[int, int]]):
    """Hamiltonian subcell cycle circumnavigating the region's spanning tree.

    Each grid cell splits into four subcells; the returned order visits every
    subcell of the region exactly once, consecutive subcells adjacent.
    """
    cellset = set(cells)

    # deterministic spanning tree (Kruskal over index-sorted edges)
    parent = {c: c for c in cellset}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    tree_edges = []
    for c in sorted(cellset):
        i, j = c
        for nb in (((i + 1, j)), ((i, j + 1))):
            if nb in cellset:
                ra, rb = find(c), find(nb)
                if ra != rb:
                    parent[ra] = rb
                    tree_edges.append((c, nb))

    def sub(cell, dx, dy):
        return (2 * cell[0] + dx, 2 * cell[1] + dy)

    nxt = {}
    for c in cellset:  # per-cell counterclockwise 4-cycle
        sw, se = sub(c, 0, 0), sub(c, 1, 0)
        ne, nw = sub(c, 1, 1), sub(c, 0, 1)
        nxt[sw] = se
        nxt[se] = ne
        nxt[ne] = nw
        nxt[nw] = sw
    for a, b in tree_edges:  # splice cycles across each tree edge
        if b == (a[0] + 1, a[1]):  # b east of a
            nxt[sub(a, 1, 0)] = sub(b, 0, 0)
            nxt[sub(b, 0, 1)] = sub(a, 1, 1)
        else:  # b north of a
            nxt[sub(a, 1, 1)] = sub(b, 1, 0)
            nxt[sub(b, 0, 0)] = sub(a, 0, 1)

    start = min(nxt)
    route = [start]
    cur = nxt[start]
    while cur != start:
        route.append(cur)
        cur = nxt[cur]
    return route


def darp_plan(fleet: Fleet, m: RectMap) -> WaypointCollection:
    interfaces = fleet.interfaces()
    n = len(interfaces)
    if n == 0:
        raise ValueError("darp needs a nonempty fleet")
    side = math.sqrt(2.0) * min(r.r_sensing for r in interfaces)
    full = Strip(m.origin[0], m.origin[1], m.width, m.height)
    _, nx, ny = _grid_centers(full, side)
    cw, ch = m.width / nx, m.height / ny

    meta = {"fallback": False, "grid": [nx, ny]}
    if n == 1:
        assignment = {(i, j): 0 for j in range(ny) for i in range(nx)}
    else:
        strips = strip_partition(m, [1.0] * n)
        seeds = []
        for s in strips:
            cx, cy = s.center
            seeds.append(((cx - m.origin[0]) / cw, (cy - m.origin[1]) / ch))
        assignment = _darp_assignment(nx, ny, n, seeds)
        assignment = _repair_partition(assignment, nx, ny, n)
        if assignment is None:
            assignment = _striping_assignment(nx, ny, n)
            meta["fallback"] = True

    regions = [[] for _ in range(n)]
    for c, r in sorted(assignment.items()):
        regions[r].append(c)

    seqs = []
    for r in range(n):
        if not regions[r]:
            seqs.append(())
            continue
        route = _stc_route(regions[r])
        pts = tuple(
            (m.origin[0] + (si + 0.5) * cw / 2.0, m.origin[1] + (sj + 0.5) * ch / 2.0)
            for si, sj in route
        )
        seqs.append(pts)
    return WaypointCollection(tuple(seqs), "darp", m.id, meta)


PLANNERS = {
    "agd": agd_plan,
    "darp": darp_plan,
    "mrta_lite": mrta_lite_plan,
}


def plan(planner: str, fleet: Fleet, m: RectMap) -> WaypointCollection:
    try:
        fn = PLANNERS[planner]
    except KeyError:
        raise ValueError(f"unknown planner {planner!r}; choose from {sorted(PLANNERS)}")
    return fn(fleet, m)


# ---------------------------------------------------------------------------
# waypoint collection order
# ---------------------------------------------------------------------------

def _is_subsequence(short: Sequence, long: Sequence, tol: float = 1e-12) -> bool:
    k = 0
    for p in long:
        if k == len(short):
            break
        q = short[k]
        if abs(p[0] - q[0]) <= tol and abs(p[1] - q[1]) <= tol:
            k += 1
    return k == len(short)


def waypoint_leq(a: WaypointCollection, b: WaypointCollection) -> bool:
    """Injective robot matching with order-preserving subsequence inclusion."""
    if len(a) > len(b):
        return False
    adjacency = [
        [j for j in range(len(b)) if _is_subsequence(a[i], b[j])]
        for i in range(len(a))
    ]
    return max_bipartite_matching(adjacency, len(b)) == len(a)
