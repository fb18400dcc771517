"""
Pydantic model for a multi-period replenishment plan and plan file I/O.

The route of vehicle h in period t is the full node sequence, depot endpoints
included, so the arc set x_ijht can be read off directly. Keys that are periods
are integers 1..p (JSON object keys round-trip through strings).
"""

from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError

from src.models.instance import SCHEMA_VERSION, Instance


class PlanError(ValueError):
    """Raised when a plan references unknown ids or has malformed vectors"""
    pass


class RouteTiming(BaseModel):
    """Timing variables of one (vehicle, period) route: u_ht, r_jht and w_jht"""
    departure: int
    arrival: Dict[str, int] = Field(default_factory=dict)
    service_start: Dict[str, int] = Field(default_factory=dict)


class Plan(BaseModel):
    schema_version: int = SCHEMA_VERSION
    routes: Dict[str, Dict[int, List[str]]] = Field(default_factory=dict)
    assignment: Dict[str, Dict[int, List[str]]] = Field(
        default_factory=dict, description="ATM -> period -> depots with y_ijt = 1"
    )
    deposits: Dict[str, List[int]] = Field(default_factory=dict)
    usage: Dict[str, Dict[int, int]] = Field(
        default_factory=dict, description="z_ht; derived from the route when absent"
    )
    timing: Dict[str, Dict[int, RouteTiming]] = Field(default_factory=dict)

    def route(self, vehicle_id: str, period: int) -> List[str]:
        return self.routes.get(vehicle_id, {}).get(period, [])

    def stops(self, vehicle_id: str, period: int) -> List[str]:
        """Interior nodes of a route (the visited ATMs, in order)"""
        seq = self.route(vehicle_id, period)
        return seq[1:-1]

    def used(self, vehicle_id: str, period: int) -> int:
        explicit = self.usage.get(vehicle_id, {}).get(period)
        if explicit is not None:
            return explicit
        return 1 if self.stops(vehicle_id, period) else 0

    def deposit(self, atm_id: str, period: int) -> int:
        vector = self.deposits.get(atm_id)
        return vector[period - 1] if vector else 0

    def deposit_vector(self, atm_id: str, periods: int) -> List[int]:
        return list(self.deposits.get(atm_id, [0] * periods))

    def timing_of(self, vehicle_id: str, period: int) -> Optional[RouteTiming]:
        return self.timing.get(vehicle_id, {}).get(period)

    def clone(self) -> "Plan":
        return self.model_copy(deep=True)


def arcs_of(route: List[str]) -> List[Tuple[str, str]]:
    """The x_ijht = 1 arcs of a route sequence, in travel order"""
    return list(zip(route[:-1], route[1:]))


def route_from_arcs(arcs: List[Tuple[str, str]], depot: str) -> List[str]:
    """Rebuild the node sequence of a depot-anchored route from its arc set"""
    if not arcs:
        return []
    successors: Dict[str, List[str]] = {}
    for i, j in arcs:
        successors.setdefault(i, []).append(j)

    route = [depot]
    remaining = len(arcs)
    while remaining:
        nxt = successors.get(route[-1])
        if not nxt:
            raise PlanError(f"Arc set is not a single path from depot {depot}")
        route.append(nxt.pop(0))
        remaining -= 1
    return route


def check_references(inst: Instance, plan: Plan) -> None:
    """
    Reject plans that name unknown vehicles, nodes, ATMs, depots or periods.

    Constraint breaches are not errors; this only guards the lookups every
    evaluator performs.
    """
    nodes = set(inst.node_ids)
    atm_ids = {a.id for a in inst.atms}
    depot_ids = {d.id for d in inst.depots}
    vehicle_ids = {v.id for v in inst.vehicles}
    valid_periods = range(1, inst.periods + 1)

    def check_period(period: int, where: str):
        if period not in valid_periods:
            raise PlanError(f"{where}: period {period} outside 1..{inst.periods}")

    for vehicle_id, per_period in plan.routes.items():
        if vehicle_id not in vehicle_ids:
            raise PlanError(f"routes: unknown vehicle {vehicle_id!r}")
        for period, seq in per_period.items():
            check_period(period, f"routes.{vehicle_id}")
            for node in seq:
                if node not in nodes:
                    raise PlanError(f"routes.{vehicle_id}.{period}: unknown node {node!r}")

    for section in (plan.usage, plan.timing):
        for vehicle_id, per_period in section.items():
            if vehicle_id not in vehicle_ids:
                raise PlanError(f"unknown vehicle {vehicle_id!r}")
            for period in per_period:
                check_period(period, vehicle_id)

    for atm_id, vector in plan.deposits.items():
        if atm_id not in atm_ids:
            raise PlanError(f"deposits: unknown ATM {atm_id!r}")
        if len(vector) != inst.periods:
            raise PlanError(f"deposits.{atm_id}: expected {inst.periods} values, got {len(vector)}")

    for atm_id, per_period in plan.assignment.items():
        if atm_id not in atm_ids:
            raise PlanError(f"assignment: unknown ATM {atm_id!r}")
        for period, depots in per_period.items():
            check_period(period, f"assignment.{atm_id}")
            for depot in depots:
                if depot not in depot_ids:
                    raise PlanError(f"assignment.{atm_id}.{period}: unknown depot {depot!r}")


def parse_plan(text: str) -> Plan:
    try:
        return Plan.model_validate_json(text)
    except ValidationError as exc:
        raise PlanError(str(exc)) from exc


def serialize_plan(plan: Plan) -> str:
    return plan.model_dump_json(indent=2)
