"""
Pydantic models for the replenishment problem input and instance file I/O.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

SCHEMA_VERSION = 1


# ========== ERRORS ==========

class Defect(BaseModel):
    """One broken instance invariant, addressed by a dotted field path"""
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


class InstanceError(ValueError):
    """Raised when a document cannot be turned into a valid Instance"""

    def __init__(self, problems: List[Defect]):
        self.problems = problems
        super().__init__("; ".join(str(p) for p in problems))

    @classmethod
    def from_validation_error(cls, exc: ValidationError) -> "InstanceError":
        problems = [
            Defect(path=".".join(str(part) for part in err["loc"]) or "<root>", message=err["msg"])
            for err in exc.errors()
        ]
        return cls(problems)


# ========== NODES AND VEHICLES ==========

class Depot(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    coordinates: Optional[Tuple[float, float]] = None


class Atm(BaseModel):
    """An ATM with its window, service time and withdrawal forecast (money in VND, time in minutes)"""
    model_config = ConfigDict(frozen=True)

    id: str
    initial_balance: int
    service_window: Tuple[int, int]
    service_time: int
    forecast_withdrawals: List[int]
    total_demand: int = 0
    coordinates: Optional[Tuple[float, float]] = None


class Vehicle(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    home_depot: str
    capacity: int
    cost_per_km: float
    fixed_cost: int = Field(0, description="Per-trip fixed cost, added once per non-empty route")
    speed_kmh: float = Field(30.0, description="Only used when the instance has no travel-time tensor")


# ========== INSTANCE ==========

class Instance(BaseModel):
    """
    Complete problem input: graph, depots, ATMs, vehicles, horizon and cost parameters.

    Node order everywhere is depots first, then ATMs, as listed. The model only
    checks shapes of individual values; cross-field invariants are reported by
    validate_instance so that broken instances can still be inspected.
    """
    model_config = ConfigDict(frozen=True)

    schema_version: int = SCHEMA_VERSION
    name: str = "instance"
    notes: Optional[str] = None
    depots: List[Depot]
    atms: List[Atm]
    vehicles: List[Vehicle]
    periods: int
    distance_km: List[List[float]]
    travel_time_min: Optional[List[List[List[int]]]] = None
    interest_rate_annual: float = 0.05
    depot_window: Tuple[int, int] = (420, 1080)
    max_route_time_min: int = 480
    max_total_distance_km: float = 1000.0

    @property
    def n_nodes(self) -> int:
        return len(self.depots) + len(self.atms)

    @property
    def node_ids(self) -> List[str]:
        return [d.id for d in self.depots] + [a.id for a in self.atms]

    def atm(self, atm_id: str) -> Atm:
        for atm in self.atms:
            if atm.id == atm_id:
                return atm
        raise KeyError(f"Unknown ATM {atm_id}")

    def vehicle(self, vehicle_id: str) -> Vehicle:
        for vehicle in self.vehicles:
            if vehicle.id == vehicle_id:
                return vehicle
        raise KeyError(f"Unknown vehicle {vehicle_id}")


def parse_instance(text: str) -> Instance:
    """
    Parse an instance document (JSON) and check every invariant.

    Raises:
        InstanceError: schema violations, dimension mismatches or invariant breaches,
            each carrying the path of the offending field
    """
    try:
        inst = Instance.model_validate_json(text)
    except ValidationError as exc:
        raise InstanceError.from_validation_error(exc) from exc

    defects = validate_instance(inst)
    if defects:
        raise InstanceError(defects)
    return inst


def serialize_instance(inst: Instance) -> str:
    return inst.model_dump_json(indent=2, exclude_none=True)


def _finite_nonnegative(value: float) -> bool:
    return math.isfinite(value) and value >= 0


def validate_instance(inst: Instance) -> List[Defect]:
    """Return every broken Instance/Atm/Vehicle invariant; empty means the instance is usable"""
    defects: List[Defect] = []

    def add(path: str, message: str):
        defects.append(Defect(path=path, message=message))

    if inst.periods < 1:
        add("periods", "must be at least 1")
    if not inst.depots:
        add("depots", "at least one depot is required")
    if not inst.atms:
        add("atms", "at least one ATM is required")
    if not inst.vehicles:
        add("vehicles", "at least one vehicle is required")

    e0, l0 = inst.depot_window
    if e0 >= l0:
        add("depot_window", "depot_window degenerate" if e0 == l0 else "depot_window inverted")
    if not _finite_nonnegative(inst.interest_rate_annual):
        add("interest_rate_annual", "must be finite and >= 0")
    if inst.max_route_time_min <= 0:
        add("max_route_time_min", "must be positive")
    if not _finite_nonnegative(inst.max_total_distance_km):
        add("max_total_distance_km", "must be finite and >= 0")

    # Node naming: depots "01".."0D", ATMs positive integers
    seen = set()
    for i, depot in enumerate(inst.depots):
        if not (depot.id.startswith("0") and depot.id[1:].isdigit() and len(depot.id) > 1):
            add(f"depots.{i}.id", f"depot id {depot.id!r} must look like '01'")
        if depot.id in seen:
            add(f"depots.{i}.id", f"duplicate node id {depot.id!r}")
        seen.add(depot.id)

    for i, atm in enumerate(inst.atms):
        path = f"atms.{i}"
        if not (atm.id.isdigit() and int(atm.id) > 0 and not atm.id.startswith("0")):
            add(f"{path}.id", f"ATM id {atm.id!r} must be a positive integer")
        if atm.id in seen:
            add(f"{path}.id", f"duplicate node id {atm.id!r}")
        seen.add(atm.id)

        e, l = atm.service_window
        if e == l:
            add(f"{path}.service_window", "service_window degenerate")
        elif e > l:
            add(f"{path}.service_window", "service_window inverted")
        if atm.service_time < 0:
            add(f"{path}.service_time", "must be >= 0")
        if atm.initial_balance < 0:
            add(f"{path}.initial_balance", "must be >= 0")
        if atm.total_demand < 0:
            add(f"{path}.total_demand", "must be >= 0")
        if len(atm.forecast_withdrawals) != inst.periods:
            add(f"{path}.forecast_withdrawals",
                f"expected {inst.periods} values, got {len(atm.forecast_withdrawals)}")
        for t, amount in enumerate(atm.forecast_withdrawals):
            if amount < 0:
                add(f"{path}.forecast_withdrawals.{t}", "withdrawal negative")

    depot_ids = {d.id for d in inst.depots}
    vehicle_ids = set()
    for i, vehicle in enumerate(inst.vehicles):
        path = f"vehicles.{i}"
        if vehicle.id in vehicle_ids:
            add(f"{path}.id", f"duplicate vehicle id {vehicle.id!r}")
        vehicle_ids.add(vehicle.id)
        if vehicle.home_depot not in depot_ids:
            add(f"{path}.home_depot", f"unknown depot {vehicle.home_depot!r}")
        if vehicle.capacity <= 0:
            add(f"{path}.capacity", "must be positive")
        if not _finite_nonnegative(vehicle.cost_per_km):
            add(f"{path}.cost_per_km", "must be finite and >= 0")
        if vehicle.fixed_cost < 0:
            add(f"{path}.fixed_cost", "must be >= 0")
        if not (math.isfinite(vehicle.speed_kmh) and vehicle.speed_kmh > 0):
            add(f"{path}.speed_kmh", "must be positive")

    n = inst.n_nodes
    rows = inst.distance_km
    if len(rows) != n or any(len(row) != n for row in rows):
        widths = sorted({len(row) for row in rows})
        add("distance_km", f"expected {n}x{n} matrix, got {len(rows)} rows of width {widths}")
    else:
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                if not math.isfinite(value):
                    add(f"distance_km.{i}.{j}", f"distance not finite at ({i},{j})")
                elif value < 0:
                    add(f"distance_km.{i}.{j}", f"distance negative at ({i},{j})")
                elif i == j and value != 0:
                    add(f"distance_km.{i}.{j}", f"distance diagonal nonzero at ({i},{j})")

    if inst.travel_time_min is not None:
        tensor = inst.travel_time_min
        h = len(inst.vehicles)
        if len(tensor) != h or any(len(m) != n or any(len(r) != n for r in m) for m in tensor):
            add("travel_time_min", f"expected {h}x{n}x{n} tensor")
        else:
            for v, matrix in enumerate(tensor):
                for i, row in enumerate(matrix):
                    for j, value in enumerate(row):
                        if value < 0:
                            add(f"travel_time_min.{v}.{i}.{j}", f"travel time negative at ({v},{i},{j})")
                        elif i == j and value != 0:
                            add(f"travel_time_min.{v}.{i}.{j}", f"travel time diagonal nonzero at ({v},{i},{j})")

    return defects


# ========== NUMERIC VIEW ==========

@dataclass(frozen=True)
class Network:
    """
    Dense numeric view of an Instance (depots at indices 0..D-1, ATMs after them).

    Build it once per evaluation or search run; it is never stored on the
    Instance itself.
    """
    node_ids: Tuple[str, ...]
    index: Dict[str, int]
    n_depots: int
    distance: np.ndarray          # (V, V) km
    travel: np.ndarray            # (H, V, V) minutes
    vehicle_index: Dict[str, int]
    home: Tuple[int, ...]         # node index of each vehicle's depot
    window_open: Tuple[int, ...]  # per node; depots use the depot window
    window_close: Tuple[int, ...]
    service: Tuple[int, ...]

    @classmethod
    def of(cls, inst: Instance) -> "Network":
        node_ids = tuple(inst.node_ids)
        index = {node: i for i, node in enumerate(node_ids)}
        distance = np.asarray(inst.distance_km, dtype=float)

        if inst.travel_time_min is not None:
            travel = np.asarray(inst.travel_time_min, dtype=np.int64)
        else:
            travel = np.stack([
                np.ceil(np.round(distance * 60.0 / vehicle.speed_kmh, 6)).astype(np.int64)
                for vehicle in inst.vehicles
            ]) if inst.vehicles else np.zeros((0, len(node_ids), len(node_ids)), dtype=np.int64)

        e0, l0 = inst.depot_window
        return cls(
            node_ids=node_ids,
            index=index,
            n_depots=len(inst.depots),
            distance=distance,
            travel=travel,
            vehicle_index={v.id: h for h, v in enumerate(inst.vehicles)},
            home=tuple(index[v.home_depot] for v in inst.vehicles),
            window_open=tuple([e0] * len(inst.depots) + [a.service_window[0] for a in inst.atms]),
            window_close=tuple([l0] * len(inst.depots) + [a.service_window[1] for a in inst.atms]),
            service=tuple([0] * len(inst.depots) + [a.service_time for a in inst.atms]),
        )

    def is_depot(self, node: int) -> bool:
        return node < self.n_depots

    def atm_node(self, atm_position: int) -> int:
        return self.n_depots + atm_position
