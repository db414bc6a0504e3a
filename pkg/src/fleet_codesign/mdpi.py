"""Monotone design problems with implementations and their queries.

A :class:`DesignProblem` maps a finite implementation set to provided
functionality and required resource tuples over :class:`ProductOrder`s.
Problems compose into a :class:`CompositeGraph` by wiring functionality
coordinates to resource coordinates (series/parallel; wires marked
``feedback`` close loops).  Queries:

* ``fix_fun_min_res`` -- minimal antichain of resources providing a demanded
  functionality,
* ``fix_res_max_fun`` -- maximal antichain of functionality achievable under
  a resource budget,
* ``solve_loop``      -- query of a graph with feedback wires, resolved by
  Kleene iteration from the bottom of each loop coordinate.

Composite queries propagate states along a topological order of the acyclic
part, pruning strictly dominated partial states; loops defer their
feasibility check until the providing node has been processed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .order import ASC, Antichain, ProductOrder


class LoopDivergenceError(RuntimeError):
    """Kleene iteration failed to stabilize within the iteration cap."""


@dataclass(frozen=True)
class DesignProblem:
    name: str
    implementations: tuple
    provides: Mapping
    requires: Mapping
    fun_order: ProductOrder
    res_order: ProductOrder

    def __post_init__(self):
        for i in self.implementations:
            f = self.provides[i]
            r = self.requires[i]
            if len(f) != self.fun_order.arity:
                raise ValueError(f"{self.name}: provides({i!r}) arity mismatch")
            if len(r) != self.res_order.arity:
                raise ValueError(f"{self.name}: requires({i!r}) arity mismatch")


@dataclass(frozen=True)
class Wire:
    src: tuple  # (node name, functionality coordinate index)
    dst: tuple  # (node name, resource coordinate index)
    feedback: bool = False

    @property
    def label(self) -> str:
        return f"{self.src[0]}.fun[{self.src[1]}]->{self.dst[0]}.res[{self.dst[1]}]"


class CompositeGraph:
    """Design problems wired functionality-to-resource."""

    def __init__(self, nodes: Sequence[DesignProblem], wires: Sequence[Wire]):
        self.nodes = {d.name: d for d in nodes}
        if len(self.nodes) != len(nodes):
            raise ValueError("duplicate node names")
        self.wires = tuple(wires)
        self.node_order = tuple(self.nodes)

        seen_src, seen_dst = set(), set()
        for w in self.wires:
            sn, si = w.src
            dn, di = w.dst
            if sn not in self.nodes or dn not in self.nodes:
                raise ValueError(f"wire {w.label} references unknown node")
            src_dir = self.nodes[sn].fun_order.directions[si]
            dst_dir = self.nodes[dn].res_order.directions[di]
            if src_dir != dst_dir:
                raise ValueError(f"wire {w.label} connects differently ordered ports")
            if w.src in seen_src or w.dst in seen_dst:
                raise ValueError(f"wire {w.label} reuses a port")
            seen_src.add(w.src)
            seen_dst.add(w.dst)

        self.exposed_fun = [
            (n, i)
            for n in self.node_order
            for i in range(self.nodes[n].fun_order.arity)
            if (n, i) not in seen_src
        ]
        self.exposed_res = [
            (n, i)
            for n in self.node_order
            for i in range(self.nodes[n].res_order.arity)
            if (n, i) not in seen_dst
        ]
        self.fun_order = ProductOrder(
            tuple(self.nodes[n].fun_order.directions[i] for n, i in self.exposed_fun)
        )
        self.res_order = ProductOrder(
            tuple(self.nodes[n].res_order.directions[i] for n, i in self.exposed_res)
        )
        self._topo = self._topological_order()

    def _topological_order(self):
        forward = [w for w in self.wires if not w.feedback]
        deps = {n: set() for n in self.node_order}
        for w in forward:
            deps[w.dst[0]].add(w.src[0])
        order, done = [], set()
        pending = list(self.node_order)
        while pending:
            progressed = False
            for n in list(pending):
                if deps[n] <= done:
                    order.append(n)
                    done.add(n)
                    pending.remove(n)
                    progressed = True
            if not progressed:
                raise ValueError("non-feedback wires form a cycle; mark loops as feedback")
        return tuple(order)


@dataclass(frozen=True)
class QueryResult:
    frontier: Antichain
    witnesses: dict = field(hash=False)
    feasible: bool = True

    def witness(self, point):
        return self.witnesses[tuple(point)]


def feasible_set(d: DesignProblem, f_demanded, r_budget) -> set:
    """Implementations providing at least ``f_demanded`` within ``r_budget``."""
    return {
        i
        for i in d.implementations
        if d.fun_order.geq(d.provides[i], f_demanded)
        and d.res_order.leq(d.requires[i], r_budget)
    }


def _coord_bottom(direction: str) -> float:
    return -math.inf if direction == ASC else math.inf


def _scalar_leq(direction: str, a, b) -> bool:
    return a <= b if direction == ASC else a >= b


@dataclass
class _State:
    key: tuple          # witness tuple restricted to processed nodes, node order
    impls: dict         # node name -> implementation index
    res: dict           # (node, coord) -> required value, exposed coords only
    fun: dict           # (node, coord) -> provided value, exposed coords only
    wire_vals: dict     # wire -> provided value (provider already processed)
    obligations: dict   # feedback wire -> required value (consumer processed)


def _better_or_equal(g: CompositeGraph, a: _State, b: _State):
    """Return (weakly_better, equal) for two states at the same stage."""
    equal = True
    for coord, vb in b.res.items():
        va = a.res[coord]
        d = g.nodes[coord[0]].res_order.directions[coord[1]]
        if va != vb:
            equal = False
            if not _scalar_leq(d, va, vb):
                return False, False
    for coord, vb in b.fun.items():
        va = a.fun[coord]
        d = g.nodes[coord[0]].fun_order.directions[coord[1]]
        if va != vb:
            equal = False
            if not _scalar_leq(d, vb, va):
                return False, False
    for w, vb in b.wire_vals.items():
        va = a.wire_vals[w]
        d = g.nodes[w.src[0]].fun_order.directions[w.src[1]]
        if va != vb:
            equal = False
            if not _scalar_leq(d, vb, va):
                return False, False
    for w, vb in b.obligations.items():
        va = a.obligations[w]
        d = g.nodes[w.dst[0]].res_order.directions[w.dst[1]]
        if va != vb:
            equal = False
            if not _scalar_leq(d, va, vb):
                return False, False
    return True, equal


def _propagate(g: CompositeGraph, max_iterations: int):
    """Enumerate feasible joint implementations with antichain-style pruning."""
    in_wires = {n: [] for n in g.node_order}
    out_wires = {n: [] for n in g.node_order}
    for w in g.wires:
        out_wires[w.src[0]].append(w)
        in_wires[w.dst[0]].append(w)
    exposed_res = set(g.exposed_res)
    exposed_fun = set(g.exposed_fun)

    states = [_State((), {}, {}, {}, {}, {})]
    processed = []
    for name in g._topo:
        d = g.nodes[name]
        processed.append(name)
        key_nodes = [n for n in g.node_order if n in processed]
        nxt = []
        for st in states:
            for idx, impl in enumerate(d.implementations):
                prov = tuple(d.provides[impl])
                req = tuple(d.requires[impl])
                ok = True
                obligations = dict(st.obligations)
                for w in in_wires[name]:
                    need = req[w.dst[1]]
                    if w.feedback:
                        obligations[w] = need
                        continue
                    dir_ = d.res_order.directions[w.dst[1]]
                    if not _scalar_leq(dir_, need, st.wire_vals[w]):
                        ok = False
                        break
                if not ok:
                    continue
                wire_vals = dict(st.wire_vals)
                for w in out_wires[name]:
                    wire_vals[w] = prov[w.src[1]]
                res = dict(st.res)
                fun = dict(st.fun)
                for i in range(d.res_order.arity):
                    if (name, i) in exposed_res:
                        res[(name, i)] = req[i]
                for i in range(d.fun_order.arity):
                    if (name, i) in exposed_fun:
                        fun[(name, i)] = prov[i]
                impls = dict(st.impls)
                impls[name] = idx
                key = tuple(impls[n] for n in key_nodes)
                nxt.append(_State(key, impls, res, fun, wire_vals, obligations))
        # prune strictly dominated partial states; exact ties keep the
        # lexicographically smallest witness tuple (node order)
        nxt.sort(key=lambda s: s.key)
        kept = []
        for s in nxt:
            drop = False
            for t in kept:
                better, equal = _better_or_equal(g, t, s)
                if better:  # covers strict dominance and exact duplicates
                    drop = True
                    break
            if not drop:
                kept.append(s)
        states = kept

    # resolve feedback wires per state: Kleene iteration from the loop
    # coordinate's bottom, raising the assumption toward the provided value
    feedback = [w for w in g.wires if w.feedback]
    resolved = []
    for st in states:
        ok = True
        for w in feedback:
            direction = g.nodes[w.src[0]].fun_order.directions[w.src[1]]
            assumed = _coord_bottom(direction)
            provided = st.wire_vals[w]
            for _ in range(max_iterations):
                nxt_assumed = provided
                if nxt_assumed == assumed:
                    break
                assumed = nxt_assumed
            else:
                raise LoopDivergenceError(
                    f"feedback wire {w.label} did not stabilize within "
                    f"{max_iterations} iterations"
                )
            need = st.obligations.get(w)
            if need is not None and not _scalar_leq(
                g.nodes[w.dst[0]].res_order.directions[w.dst[1]], need, assumed
            ):
                ok = False
                break
        if ok:
            resolved.append(st)
    return resolved


def _frontier_from_pairs(pairs, order: ProductOrder) -> QueryResult:
    """Build a frontier + witnesses from (point, witness) pairs.

    Witnesses are implementation-index tuples; ties on a frontier point keep
    the lexicographically smallest tuple.
    """
    frontier = Antichain(order)
    for point, _ in pairs:
        frontier = frontier.insert(point)
    witnesses = {}
    for point, wit in pairs:
        if tuple(point) in frontier.elements:
            cur = witnesses.get(tuple(point))
            if cur is None or wit < cur:
                witnesses[tuple(point)] = wit
    return QueryResult(frontier, witnesses, feasible=len(frontier) > 0)


def _graph_pairs(g: CompositeGraph, states):
    pairs = []
    for st in states:
        res = tuple(st.res[c] for c in g.exposed_res)
        fun = tuple(st.fun[c] for c in g.exposed_fun)
        wit = tuple(st.impls[n] for n in g.node_order)
        pairs.append((res, fun, wit))
    return pairs


def fix_fun_min_res(problem, f_demanded, max_iterations: int = 10_000) -> QueryResult:
    """Minimal resource antichain providing at least ``f_demanded``."""
    if isinstance(problem, DesignProblem):
        pairs = [
            (tuple(problem.requires[i]), (idx,))
            for idx, i in enumerate(problem.implementations)
            if problem.fun_order.geq(problem.provides[i], f_demanded)
        ]
        return _frontier_from_pairs(pairs, problem.res_order)
    g: CompositeGraph = problem
    pairs = [
        (res, wit)
        for res, fun, wit in _graph_pairs(g, _propagate(g, max_iterations))
        if g.fun_order.geq(fun, f_demanded)
    ]
    return _frontier_from_pairs(pairs, g.res_order)


def fix_res_max_fun(problem, r_budget, max_iterations: int = 10_000) -> QueryResult:
    """Maximal functionality antichain achievable within ``r_budget``."""
    if isinstance(problem, DesignProblem):
        pairs = [
            (tuple(problem.provides[i]), (idx,))
            for idx, i in enumerate(problem.implementations)
            if problem.res_order.leq(problem.requires[i], r_budget)
        ]
        return _frontier_from_pairs(pairs, problem.fun_order.opposite())
    g: CompositeGraph = problem
    pairs = [
        (fun, wit)
        for res, fun, wit in _graph_pairs(g, _propagate(g, max_iterations))
        if g.res_order.leq(res, r_budget)
    ]
    return _frontier_from_pairs(pairs, g.fun_order.opposite())


def solve_loop(g: CompositeGraph, f_demanded: Optional[tuple] = None,
               max_iterations: int = 10_000) -> QueryResult:
    """``fix_fun_min_res`` over a graph with feedback wires.

    ``f_demanded`` defaults to demanding nothing (bottom on every exposed
    functionality coordinate).
    """
    if f_demanded is None:
        f_demanded = tuple(_coord_bottom(d) for d in g.fun_order.directions)
    return fix_fun_min_res(g, f_demanded, max_iterations=max_iterations)
