"""Robot component catalogs and the robot interface.

Houses the battery/actuation/sensing module tables, robot design
enumeration over a battery-capacity grid, and the interface each design
exposes: capability tuples (dynamical + sensing + capacity) versus required
resources (acquisition cost, idle power).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from typing import Optional, Sequence

from .order import ASC, CAT, DESC, OrderOutcome, ProductOrder

PATH_RS = "RS"
PATH_DD = "DD"

ROBOT_TYPES = ("AerialL", "AerialM", "Ground")


class CatalogError(ValueError):
    """Malformed catalog data."""


class InfeasibleDesignError(ValueError):
    """Design violates a physical constraint (payload mass, module types)."""


@dataclass(frozen=True)
class BatteryTechnology:
    name: str
    rho: float    # specific energy, Wh/kg
    alpha: float  # energy-to-cost, Wh/USD

    def __post_init__(self):
        if self.rho <= 0 or self.alpha <= 0:
            raise CatalogError(f"battery {self.name}: rho and alpha must be positive")


@dataclass(frozen=True)
class ActuationModule:
    robot_type: str
    variant: str
    v_max: float          # m/s
    a_lat_max: float      # m/s^2
    a_lon_max: float      # m/s^2
    r_turn: float         # m
    theta_dot_max: float  # rad/s
    c_vel: float          # W s^2/m^2
    c_acc: float          # W s^2/m
    m_max: float          # kg, payload ceiling
    p_idle: float         # W
    cost: float           # USD
    mass: float           # kg
    path_type: str = PATH_RS

    def __post_init__(self):
        if self.path_type not in (PATH_RS, PATH_DD):
            raise CatalogError(f"unknown path type {self.path_type!r}")
        if self.path_type == PATH_RS and self.r_turn <= 0:
            raise CatalogError("RS platforms need r_turn > 0")
        for f in ("v_max", "a_lat_max", "a_lon_max", "theta_dot_max",
                  "c_vel", "c_acc", "m_max", "p_idle", "cost", "mass"):
            if getattr(self, f) < 0:
                raise CatalogError(f"actuation {self.variant}: {f} must be >= 0")


@dataclass(frozen=True)
class SensingModule:
    robot_type: str
    variant: str
    r_sensing: float    # m
    lambda_base: float  # 1/s
    sigma_d: float      # m
    beta_v: float       # s/m
    p_req: float        # W
    cost: float         # USD
    mass: float         # kg

    def __post_init__(self):
        if self.r_sensing <= 0 or self.lambda_base <= 0 or self.sigma_d <= 0:
            raise CatalogError(f"sensing {self.variant}: positive r/lambda/sigma required")
        if self.beta_v < 0:
            raise CatalogError(f"sensing {self.variant}: beta_v must be >= 0")


@dataclass(frozen=True)
class RobotDesign:
    """(actuation, sensing, battery technology, capacity) tuple.

    The null robot (absent slot) is represented with all modules ``None``
    and zero capacity.
    """

    actuation: Optional[ActuationModule]
    sensing: Optional[SensingModule]
    battery: Optional[BatteryTechnology]
    capacity: float  # Wh

    @classmethod
    def null(cls) -> "RobotDesign":
        return cls(None, None, None, 0.0)

    @property
    def is_null(self) -> bool:
        return self.actuation is None

    @property
    def robot_type(self) -> str:
        return "null" if self.is_null else self.actuation.robot_type

    @property
    def key(self) -> str:
        if self.is_null:
            return "null"
        return (
            f"{self.actuation.robot_type}.{self.actuation.variant}."
            f"{self.sensing.variant}.{self.battery.name}@{self.capacity:.2f}"
        )

    @property
    def core_key(self) -> str:
        """Design key without the (derived) capacity."""
        if self.is_null:
            return "null"
        return (
            f"{self.actuation.robot_type}.{self.actuation.variant}."
            f"{self.sensing.variant}.{self.battery.name}"
        )

    def validate(self):
        if self.is_null:
            if self.capacity != 0.0:
                raise InfeasibleDesignError("null robot must have zero capacity")
            return
        if self.actuation.robot_type != self.sensing.robot_type:
            raise InfeasibleDesignError(
                f"actuation type {self.actuation.robot_type} != "
                f"sensing type {self.sensing.robot_type}"
            )
        # capacity 0 marks a not-yet-sized design (the null-robot limit)
        if self.capacity < 0:
            raise InfeasibleDesignError("capacity must be non-negative")
        if not mass_feasible(self.actuation, self.sensing, self.battery, self.capacity):
            raise InfeasibleDesignError(
                f"battery {self.capacity:.2f} Wh at {self.battery.rho} Wh/kg plus "
                f"sensor mass exceeds payload ceiling {self.actuation.m_max} kg"
            )

    def to_dict(self) -> dict:
        if self.is_null:
            return {"null": True}
        return {
            "actuation": asdict(self.actuation),
            "sensing": asdict(self.sensing),
            "battery": asdict(self.battery),
            "capacity": self.capacity,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RobotDesign":
        if d.get("null"):
            return cls.null()
        return cls(
            ActuationModule(**d["actuation"]),
            SensingModule(**d["sensing"]),
            BatteryTechnology(**d["battery"]),
            d["capacity"],
        )


@dataclass(frozen=True)
class RobotInterface:
    """What a design exposes: capabilities provided, resources required."""

    # dynamical properties
    v_max: float
    a_lat_max: float
    a_lon_max: float
    theta_dot_max: float
    r_turn: float
    c_vel: float
    c_acc: float
    path_type: str
    # sensing capabilities
    r_sensing: float
    lambda_base: float
    sigma_d: float
    beta_v: float
    # energy functionality
    capacity: float
    # resources
    cost: float
    power_idle_total: float
    is_null: bool = False

    def capability_tuple(self) -> tuple:
        return (
            self.v_max, self.a_lat_max, self.a_lon_max, self.theta_dot_max,
            self.r_turn, self.c_vel, self.c_acc, self.path_type,
            self.r_sensing, self.lambda_base, self.sigma_d, self.beta_v,
            self.capacity,
        )

    def dynamical_tuple(self) -> tuple:
        return (
            self.v_max, self.a_lat_max, self.a_lon_max, self.theta_dot_max,
            self.r_turn, self.c_vel, self.c_acc, self.path_type,
        )

    def sensing_tuple(self) -> tuple:
        return (self.r_sensing, self.lambda_base, self.sigma_d, self.beta_v)


# componentwise directions: bounds/ranges/rates maximize-preferred (ASC),
# turning radius / power coefficients / speed degradation minimize-preferred
# (DESC), path type categorical
CAPABILITY_ORDER = ProductOrder(
    (ASC, ASC, ASC, ASC, DESC, DESC, DESC, CAT, ASC, ASC, ASC, DESC, ASC)
)
DS_ORDER = ProductOrder((ASC, ASC, ASC, ASC, DESC, DESC, DESC, CAT, ASC, ASC, ASC, DESC))

NULL_INTERFACE = RobotInterface(
    v_max=0.0, a_lat_max=0.0, a_lon_max=0.0, theta_dot_max=0.0,
    r_turn=math.inf, c_vel=math.inf, c_acc=math.inf, path_type="none",
    r_sensing=0.0, lambda_base=0.0, sigma_d=0.0, beta_v=math.inf,
    capacity=0.0, cost=0.0, power_idle_total=0.0, is_null=True,
)


def mass_feasible(actuation: ActuationModule, sensing: SensingModule,
                  battery: BatteryTechnology, capacity: float) -> bool:
    """Battery mass plus sensor mass must fit the actuation payload ceiling."""
    return capacity / battery.rho + sensing.mass <= actuation.m_max + 1e-9


def max_feasible_capacity(actuation: ActuationModule, sensing: SensingModule,
                          battery: BatteryTechnology) -> float:
    return max(0.0, (actuation.m_max - sensing.mass) * battery.rho)


def robot_cost(d: RobotDesign) -> float:
    """Acquisition cost in USD: modules plus capacity / alpha."""
    if d.is_null:
        return 0.0
    d.validate()
    return d.actuation.cost + d.sensing.cost + d.capacity / d.battery.alpha


def robot_interface(d: RobotDesign) -> RobotInterface:
    if d.is_null:
        return NULL_INTERFACE
    d.validate()
    a, s = d.actuation, d.sensing
    return RobotInterface(
        v_max=a.v_max, a_lat_max=a.a_lat_max, a_lon_max=a.a_lon_max,
        theta_dot_max=a.theta_dot_max, r_turn=a.r_turn,
        c_vel=a.c_vel, c_acc=a.c_acc, path_type=a.path_type,
        r_sensing=s.r_sensing, lambda_base=s.lambda_base,
        sigma_d=s.sigma_d, beta_v=s.beta_v,
        capacity=d.capacity,
        cost=robot_cost(d),
        power_idle_total=a.p_idle + s.p_req,
    )


def robot_dominates(a: RobotInterface, b: RobotInterface) -> OrderOutcome:
    """Capability comparison; the null robot is the distinguished bottom."""
    if a.is_null and b.is_null:
        return OrderOutcome.EQUAL
    if a.is_null:
        return OrderOutcome.LESS_EQ
    if b.is_null:
        return OrderOutcome.GREATER_EQ
    return CAPABILITY_ORDER.compare(a.capability_tuple(), b.capability_tuple())


@dataclass(frozen=True)
class Catalog:
    batteries: tuple
    actuation_modules: tuple
    sensing_modules: tuple

    def battery(self, name: str) -> BatteryTechnology:
        for b in self.batteries:
            if b.name == name:
                return b
        raise CatalogError(f"unknown battery technology {name!r}")

    def actuation(self, robot_type: str, variant: str) -> ActuationModule:
        for a in self.actuation_modules:
            if a.robot_type == robot_type and a.variant == variant:
                return a
        raise CatalogError(f"unknown actuation {robot_type}/{variant}")

    def sensing(self, robot_type: str, variant: str) -> SensingModule:
        for s in self.sensing_modules:
            if s.robot_type == robot_type and s.variant == variant:
                return s
        raise CatalogError(f"unknown sensing {robot_type}/{variant}")

    def actuation_for(self, robot_type: str) -> tuple:
        return tuple(a for a in self.actuation_modules if a.robot_type == robot_type)

    def sensing_for(self, robot_type: str) -> tuple:
        return tuple(s for s in self.sensing_modules if s.robot_type == robot_type)

    @property
    def robot_types(self) -> tuple:
        return tuple(sorted({a.robot_type for a in self.actuation_modules}))

    def to_dict(self) -> dict:
        return {
            "batteries": [asdict(b) for b in self.batteries],
            "actuation_modules": [asdict(a) for a in self.actuation_modules],
            "sensing_modules": [asdict(s) for s in self.sensing_modules],
        }


def default_catalog() -> Catalog:
    """The stock component tables used throughout the case studies."""
    batteries = (
        BatteryTechnology("LiPo", 250.0, 2.50),
        BatteryTechnology("LCO", 195.0, 2.84),
        BatteryTechnology("LMO", 150.0, 2.84),
        BatteryTechnology("NiH2", 45.0, 10.5),
        BatteryTechnology("NiMH", 100.0, 3.41),
        BatteryTechnology("LFP", 90.0, 1.50),
        BatteryTechnology("NiCad", 30.0, 0.50),
        BatteryTechnology("SLA", 30.0, 7.0),
    )
    actuation = (
        ActuationModule("AerialM", "V1", 10.0, 1.5, 2.0, 1.0, 1.0, 4.0, 7.0, 5.0, 50.0, 500.0, 1.0),
        ActuationModule("AerialM", "V2", 13.0, 1.5, 2.0, 1.0, 1.0, 5.0, 9.0, 7.0, 70.0, 600.0, 1.5),
        ActuationModule("AerialL", "V1", 20.0, 2.0, 4.0, 3.0, 1.5, 10.0, 20.0, 15.0, 250.0, 4000.0, 4.0),
        ActuationModule("AerialL", "V2", 16.0, 1.5, 3.0, 3.0, 1.5, 8.0, 14.0, 10.0, 200.0, 3500.0, 3.5),
        ActuationModule("Ground", "V1", 5.0, 1.5, 1.0, 1.0, 1.0, 1.0, 3.0, 100.0, 150.0, 1500.0, 10.0),
        ActuationModule("Ground", "V2", 7.0, 1.5, 1.0, 1.0, 1.0, 3.0, 5.0, 100.0, 200.0, 1750.0, 12.0),
    )
    sensing = (
        SensingModule("AerialM", "imp1", 12.0, 0.95, 8.0, 0.004, 20.0, 100.0, 0.4),
        SensingModule("AerialL", "imp1", 40.0, 0.98, 30.0, 0.02, 68.0, 200.0, 1.0),
        SensingModule("Ground", "imp1", 30.0, 0.99, 26.0, 0.02, 35.0, 150.0, 2.5),
    )
    return Catalog(batteries, actuation, sensing)


def _build_checked(cls, entry: dict, what: str):
    unknown = set(entry) - {f.name for f in fields(cls)}
    if unknown:
        raise CatalogError(f"{what}: unknown fields {sorted(unknown)}")
    try:
        return cls(**entry)
    except TypeError as exc:
        raise CatalogError(f"{what}: {exc}") from None


def catalog_from_dict(data: dict) -> Catalog:
    expected_top = {"batteries", "actuation_modules", "sensing_modules"}
    unknown = set(data) - expected_top
    if unknown:
        raise CatalogError(f"catalog: unknown sections {sorted(unknown)}")
    missing = expected_top - set(data)
    if missing:
        raise CatalogError(f"catalog: missing sections {sorted(missing)}")
    return Catalog(
        tuple(_build_checked(BatteryTechnology, e, "battery") for e in data["batteries"]),
        tuple(_build_checked(ActuationModule, e, "actuation module") for e in data["actuation_modules"]),
        tuple(_build_checked(SensingModule, e, "sensing module") for e in data["sensing_modules"]),
    )


def load_catalog(path) -> Catalog:
    with open(path, "r", encoding="utf-8") as fh:
        return catalog_from_dict(json.load(fh))


def save_catalog(catalog: Catalog, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(catalog.to_dict(), fh, indent=2)


def capacity_grid_points(capacity_max: float, capacity_step: float) -> list:
    """Grid step, 2*step, ... up to capacity_max (``floor(max/step)`` points)."""
    if capacity_step <= 0:
        raise ValueError("capacity step must be positive")
    n = int(math.floor(capacity_max / capacity_step + 1e-9))
    if n < 1:
        raise ValueError("empty capacity grid")
    return [capacity_step * (k + 1) for k in range(n)]


def enumerate_robot_designs(catalog: Catalog, robot_type: str,
                            capacity_max: float, capacity_step: float) -> list:
    """All (actuation, sensing, battery, grid capacity) designs, mass-filtered."""
    grid = capacity_grid_points(capacity_max, capacity_step)
    out = []
    for act in catalog.actuation_for(robot_type):
        for sens in catalog.sensing_for(robot_type):
            for batt in catalog.batteries:
                for cap in grid:
                    if mass_feasible(act, sens, batt, cap):
                        out.append(RobotDesign(act, sens, batt, cap))
    return out


def design_count_before_mass_filter(catalog: Catalog, robot_type: str,
                                    capacity_max: float, capacity_step: float) -> int:
    n_bat = int(math.floor(capacity_max / capacity_step + 1e-9))
    return (
        len(catalog.actuation_for(robot_type))
        * len(catalog.sensing_for(robot_type))
        * len(catalog.batteries)
        * n_bat
    )
