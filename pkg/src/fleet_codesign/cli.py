"""Command-line surface.

Subcommands: ``count`` (design-space size), ``populate`` (simulate
candidates into the record store), ``solve`` (Pareto query), ``baselines``
(sequential-optimization comparison with quality indicators),
``indicators`` (compare stored fronts), ``plan`` and ``simulate``
(single-candidate debugging).

Exit codes: 0 success, 2 infeasible query, 3 configuration error,
4 internal guard tripped.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .catalog import CatalogError, default_catalog, load_catalog
from .fleet import parse_signature
from .executor import ConfigurationError, execute
from .indicators import indicator_report
from .mdpi import LoopDivergenceError
from .pipeline import (
    PLANNER_NAMES,
    Pipeline,
    PipelineConfig,
    RecordStore,
    SearchConstraints,
    approx_sci,
    design_space_count,
    multi_task_solve,
    sequential_baselines,
    solve_query,
)
from .planners import plan
from .scenario import ScenarioError, load_scenario

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_CONFIG = 3
EXIT_GUARD = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)


def _csv(value: str):
    return tuple(v.strip() for v in value.split(",") if v.strip())


def _build_parser() -> _Parser:
    p = _Parser(prog="fleet-codesign",
                description="Task-driven co-design of multi-robot systems")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", parents=[], help="design-space size")
    c.add_argument("--types", type=int, required=True)
    c.add_argument("--max-per-type", type=int, required=True)
    c.add_argument("--designs", type=_csv, required=True,
                   help="designs per type, e.g. 3200,3200,3200")
    c.add_argument("--planners", type=int, required=True)
    c.add_argument("--executors", type=int, default=1)

    def add_common(sp, with_task=True):
        sp.add_argument("--scenario", required=True)
        if with_task:
            sp.add_argument("--task", action="append", required=True,
                            help="task profile name (repeatable)")
        sp.add_argument("--catalog")
        sp.add_argument("--planners", type=_csv, default=PLANNER_NAMES)
        sp.add_argument("--types", type=_csv, default=None)
        sp.add_argument("--max-per-type", type=int, default=3)
        sp.add_argument("--battery-techs", type=_csv, default=None)
        sp.add_argument("--actuation-variants", type=_csv, default=None)
        sp.add_argument("--no-prune", action="store_true")
        sp.add_argument("--dt", type=float, default=0.1)
        sp.add_argument("--grid-res", type=float, default=2.0)
        sp.add_argument("--capacity-step", type=float, default=2.0)
        sp.add_argument("--capacity-max", type=float, default=400.0)
        sp.add_argument("--out", default="out")
        sp.add_argument("--store", default=None,
                        help="record store directory (env CODESIGN_CACHE_DIR overrides)")

    s = sub.add_parser("populate", help="simulate all candidates into the store")
    add_common(s, with_task=False)

    s = sub.add_parser("solve", help="Pareto query for a task profile")
    add_common(s)

    s = sub.add_parser("baselines", help="co-design vs sequential baselines")
    add_common(s)
    s.add_argument("--aggregate", choices=("max", "mean"), default="max")

    s = sub.add_parser("indicators", help="compare stored front files")
    s.add_argument("--front", action="append", required=True)
    s.add_argument("--reference", required=True)
    s.add_argument("--aggregate", choices=("max", "mean"), default="max")
    s.add_argument("--out", default=None)

    s = sub.add_parser("plan", help="waypoints for one candidate")
    s.add_argument("--scenario", required=True)
    s.add_argument("--map", required=True)
    s.add_argument("--planner", required=True, choices=PLANNER_NAMES)
    s.add_argument("--fleet", required=True, help="fleet signature")
    s.add_argument("--catalog")
    s.add_argument("--out", default="out")

    s = sub.add_parser("simulate", help="trajectories/energy for one candidate")
    s.add_argument("--scenario", required=True)
    s.add_argument("--map", required=True)
    s.add_argument("--planner", required=True, choices=PLANNER_NAMES)
    s.add_argument("--fleet", required=True)
    s.add_argument("--catalog")
    s.add_argument("--dt", type=float, default=0.1)
    s.add_argument("--out", default="out")
    return p


def _load_catalog(args):
    return load_catalog(args.catalog) if args.catalog else default_catalog()


def _constraints(args) -> SearchConstraints:
    return SearchConstraints(
        planners=tuple(args.planners),
        robot_types=tuple(args.types) if args.types else None,
        max_per_type=args.max_per_type,
        battery_techs=tuple(args.battery_techs) if args.battery_techs else None,
        actuation_variants=(tuple(args.actuation_variants)
                            if args.actuation_variants else None),
        prune_dominated=not args.no_prune,
    )


def _config(args) -> PipelineConfig:
    return PipelineConfig(dt=args.dt, grid_res=args.grid_res,
                          capacity_step=args.capacity_step,
                          capacity_max=args.capacity_max)


def _store(args, out: Path):
    path = os.environ.get("CODESIGN_CACHE_DIR") or args.store or (out / "store")
    return RecordStore(path)


def _write_front(front, out: Path, stem: str):
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{stem}.json").write_text(json.dumps(front.to_dict(), indent=2))
    (out / f"{stem}.csv").write_text("\n".join(front.csv_rows()) + "\n")


def _cmd_count(args) -> int:
    designs = tuple(int(d) for d in args.designs)
    if len(designs) == 1:
        designs = designs * args.types
    if len(designs) != args.types:
        print("count: --designs must list one count per type", file=sys.stderr)
        return EXIT_CONFIG
    n = design_space_count(designs, args.max_per_type, args.planners,
                           args.executors)
    print(n)
    print(f"≈ {approx_sci(n)}")
    return EXIT_OK


def _cmd_populate(args) -> int:
    scenario = load_scenario(args.scenario)
    out = Path(args.out)
    pipe = Pipeline(scenario, _load_catalog(args), _config(args),
                    _store(args, out))
    cands = pipe.candidates(_constraints(args))
    for k, c in enumerate(cands):
        pipe.evaluate(c)
        if (k + 1) % 50 == 0 or k + 1 == len(cands):
            print(f"populated {k + 1}/{len(cands)} candidates")
    print(f"record store: {pipe.store.directory}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    scenario = load_scenario(args.scenario)
    out = Path(args.out)
    store = _store(args, out)
    if len(args.task) == 1:
        front = solve_query(scenario, args.task[0], _constraints(args),
                            _load_catalog(args), _config(args), store)
    else:
        front = multi_task_solve(scenario, args.task, _constraints(args),
                                 _load_catalog(args), _config(args), store)
    _write_front(front, out, "front_" + "_".join(args.task))
    for p in front.points:
        print(f"{p.cost:.2f} USD  {p.energy_wh:.2f} Wh  {p.makespan_s:.1f} s  "
              f"{p.planner}  {p.fleet_signature}")
    if not front.feasible:
        print("query infeasible: no candidate satisfies the task profile",
              file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def _cmd_baselines(args) -> int:
    scenario = load_scenario(args.scenario)
    out = Path(args.out)
    store = _store(args, out)
    if len(args.task) != 1:
        print("baselines: exactly one --task expected", file=sys.stderr)
        return EXIT_CONFIG
    cmp = sequential_baselines(scenario, args.task[0], _constraints(args),
                               _load_catalog(args), _config(args), store)
    fronts = cmp.fronts()
    for name, front in fronts.items():
        _write_front(front, out, name)
    if not cmp.codesign.feasible:
        print("query infeasible for the co-design search", file=sys.stderr)
        return EXIT_INFEASIBLE
    report = indicator_report(
        {n: f.objective_rows() for n, f in fronts.items() if f.points},
        reference="codesign", aggregate=args.aggregate,
    )
    (out / "indicators.json").write_text(json.dumps(report.to_dict(), indent=2))
    for name, row in report.rows.items():
        print(f"{name}: HV={row['hv']:.4f} GD+={row['gd_plus']:.4f} "
              f"IGD+={row['igd_plus']:.4f} ({row['points']} points)")
    return EXIT_OK


def _cmd_indicators(args) -> int:
    from .pipeline import ParetoFront

    fronts = {}
    for path in args.front:
        d = json.loads(Path(path).read_text())
        fronts[Path(path).stem] = ParetoFront.from_dict(d).objective_rows()
    ref = Path(args.reference).stem
    if ref not in fronts:
        d = json.loads(Path(args.reference).read_text())
        fronts[ref] = ParetoFront.from_dict(d).objective_rows()
    report = indicator_report(fronts, reference=ref, aggregate=args.aggregate)
    text = json.dumps(report.to_dict(), indent=2)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text)
    print(text)
    return EXIT_OK


def _cmd_plan(args) -> int:
    scenario = load_scenario(args.scenario)
    catalog = _load_catalog(args)
    fleet = parse_signature(catalog, args.fleet)
    wc = plan(args.planner, fleet, scenario.map(args.map))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"waypoints_{args.planner}_{args.map}.json"
    path.write_text(json.dumps(wc.to_dict(), indent=2))
    print(f"{sum(len(s) for s in wc.sequences)} waypoints -> {path}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    catalog = _load_catalog(args)
    fleet = parse_signature(catalog, args.fleet)
    m = scenario.map(args.map)
    wc = plan(args.planner, fleet, m)
    runs = execute(fleet, wc, args.dt)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    for i, (traj, rep) in enumerate(runs):
        csv = out / f"trajectory_{args.map}_{i}.csv"
        lines = ["t,x,y,theta,v,a"]
        for k in range(traj.times.size):
            lines.append(
                f"{traj.times[k]!r},{traj.x[k]!r},{traj.y[k]!r},"
                f"{traj.heading[k]!r},{traj.v[k]!r},{traj.a[k]!r}"
            )
        csv.write_text("\n".join(lines) + "\n")
        manifest.append({
            "robot_index": i,
            "duration_s": rep.duration,
            "energy_wh": rep.energy_wh,
            "csv": csv.name,
        })
    (out / f"waypoints_{args.planner}_{args.map}.json").write_text(
        json.dumps(wc.to_dict(), indent=2)
    )
    (out / f"manifest_{args.map}.json").write_text(json.dumps(manifest, indent=2))
    makespan = max((r["duration_s"] for r in manifest), default=0.0)
    energy = sum(r["energy_wh"] for r in manifest)
    print(f"{len(manifest)} robots, makespan {makespan:.1f} s, "
          f"total energy {energy:.3f} Wh -> {out}")
    return EXIT_OK


_COMMANDS = {
    "count": _cmd_count,
    "populate": _cmd_populate,
    "solve": _cmd_solve,
    "baselines": _cmd_baselines,
    "indicators": _cmd_indicators,
    "plan": _cmd_plan,
    "simulate": _cmd_simulate,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (CatalogError, ScenarioError, ConfigurationError, FileNotFoundError,
            json.JSONDecodeError, ValueError) as exc:
        print(f"fleet-codesign: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LoopDivergenceError as exc:
        print(f"fleet-codesign: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
