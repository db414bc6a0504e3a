"""Compositional monotone co-design of heterogeneous multi-robot systems."""

from .catalog import (
    BatteryTechnology,
    ActuationModule,
    SensingModule,
    RobotDesign,
    RobotInterface,
    Catalog,
    default_catalog,
    load_catalog,
    robot_cost,
    robot_interface,
    robot_dominates,
    enumerate_robot_designs,
)
from .fleet import (
    Fleet,
    FleetResources,
    CapacityGrid,
    fleet_leq,
    fleet_totals,
    capacity_feedback,
    enumerate_fleets,
    parse_signature,
)
from .order import (
    Antichain,
    OrderOutcome,
    ProductOrder,
    UpperSet,
    compare_product,
    antichain_insert,
    antichain_merge,
    upper_membership,
)
from .mdpi import (
    DesignProblem,
    CompositeGraph,
    Wire,
    QueryResult,
    feasible_set,
    fix_fun_min_res,
    fix_res_max_fun,
    solve_loop,
)
from .planners import (
    RectMap,
    WaypointCollection,
    strip_partition,
    agd_plan,
    darp_plan,
    mrta_lite_plan,
    tsp_order,
    waypoint_leq,
)
from .executor import (
    MotionLimits,
    Trajectory,
    EnergyReport,
    power_at,
    velocity_profile,
    execute,
    trajectory_leq,
)
from .reeds_shepp import RSPath, RSSegment, reeds_shepp_path
from .evaluator import (
    coverage_fraction,
    exposure,
    hit_probability,
    detection_count,
    task_satisfied,
    multi_map_evaluate,
)
from .scenario import Scenario, TaskProfile, TaskRequirement, load_scenario, save_scenario
from .pipeline import (
    CandidateSystem,
    EvaluationRecord,
    ParetoFront,
    Pipeline,
    PipelineConfig,
    RecordStore,
    SearchConstraints,
    design_space_count,
    multi_task_solve,
    sequential_baselines,
    solve_query,
)
from .indicators import (
    NormalizedFront,
    normalize_fronts,
    hypervolume,
    gd_plus,
    igd_plus,
    indicator_report,
)

__version__ = "0.1.0"
