"""
Plan feasibility: one named check per constraint family, plus the
arrival/service-time recurrence along a route.

Constraint outcomes are Violation values. Only references to unknown ids
raise (PlanError).

Implemented readings of the model:
    - C13 uses the forward recurrence r_j = w_i + s_i + t_ijh (depot: w = u, s = 0)
      with w_j = max(r_j, e_j), reported at the first node that departs from it.
      A service start before max(r_j, e_j) or after l_j is a C6 or C7 breach
      and is not reported again under C13.
    - C14 is the plain nonnegative-inventory condition, sum of m_jk <= I_0j +
      sum of d_jk for every prefix.
    - C15/C16 are e_0 <= u_ht and u_ht + T <= l_0, with T = return - u_ht taken
      from the stored timings (waiting included).
    - C9 bounds that same elapsed time T by t_max per period; C12 bounds the
      distance of a vehicle over the whole horizon.
"""

import itertools
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Set, Tuple

from src.core.costing import inventory_trajectory
from src.models.instance import Instance, Network, Vehicle
from src.models.plan import Plan, PlanError, arcs_of, check_references
from src.models.violation import ConstraintFamily as CF
from src.models.violation import Location, Violation

BRUTEFORCE_MAX_NODES = 10


class NodeTime(NamedTuple):
    node: str
    arrival: int
    service_start: int


def propagate_times(
    inst: Instance,
    route: List[str],
    vehicle: Vehicle,
    departure: int,
    network: Optional[Network] = None,
) -> List[NodeTime]:
    """
    Arrival and service start at every node after the departure depot.

    Service starts at max(arrival, e_j): a vehicle may wait for an ATM to open.
    The closing depot is the last entry (its service start equals its arrival).

    Raises:
        PlanError: the route does not start and end at the vehicle's home depot
    """
    if len(route) <= 2 and all(node == vehicle.home_depot for node in route):
        return []
    if route[0] != vehicle.home_depot or route[-1] != vehicle.home_depot:
        raise PlanError(f"Route {route} must start and end at depot {vehicle.home_depot}")

    net = network or Network.of(inst)
    h = net.vehicle_index[vehicle.id]
    times: List[NodeTime] = []
    prev = net.index[route[0]]
    ready = departure  # w_i + s_i of the previous node
    for node_id in route[1:]:
        node = net.index[node_id]
        arrival = ready + int(net.travel[h, prev, node])
        if net.is_depot(node):
            start = arrival
        else:
            start = max(arrival, net.window_open[node])
        times.append(NodeTime(node_id, arrival, start))
        ready = start + net.service[node]
        prev = node
    return times


@dataclass
class _RouteView:
    vehicle: Vehicle
    period: int
    seq: List[str]
    stops: List[str]
    sound: bool


def _violation(family: CF, kind: str, ident: str, period: Optional[int], magnitude: float, message: str) -> Violation:
    return Violation(
        constraint=family,
        location=Location(kind=kind, id=ident, period=period),
        magnitude=magnitude,
        message=message,
    )


def _repeats_in_segments(seq: List[str], depot_ids: Set[str]) -> int:
    """Number of repeated ATM occurrences inside depot-free stretches of a sequence"""
    repeats = 0
    seen: Set[str] = set()
    for node in seq:
        if node in depot_ids:
            seen = set()
            continue
        if node in seen:
            repeats += 1
        seen.add(node)
    return repeats


def _check_structure(plan: Plan, view: _RouteView, depot_ids: Set[str]) -> List[Violation]:
    """C5, C8 and C17 for one (vehicle, period); sets view.sound when timing can be checked"""
    out: List[Violation] = []
    v, t, seq = view.vehicle, view.period, view.seq
    z = plan.used(v.id, t)

    if z not in (0, 1):
        out.append(_violation(CF.C17, "vehicle", v.id, t, min(abs(z), abs(z - 1)),
                              f"z_ht = {z} is not binary"))

    if not view.stops:
        if len(seq) not in (0, 2) or any(node != v.home_depot for node in seq):
            out.append(_violation(CF.C5, "vehicle", v.id, t, 1, f"route {seq} is not anchored at depot {v.home_depot}"))
        elif z != 0:
            out.append(_violation(CF.C5, "vehicle", v.id, t, 1, "vehicle marked used without a route"))
        return out

    if seq[0] != v.home_depot or seq[-1] != v.home_depot:
        out.append(_violation(CF.C5, "vehicle", v.id, t, 1,
                              f"route must start and end at home depot {v.home_depot}"))
    inner_depots = sum(1 for node in view.stops if node in depot_ids)
    if inner_depots:
        out.append(_violation(CF.C5, "vehicle", v.id, t, inner_depots, "route passes through a depot mid-sequence"))
    view.sound = seq[0] == v.home_depot and seq[-1] == v.home_depot and not inner_depots
    if z == 0:
        out.append(_violation(CF.C5, "vehicle", v.id, t, 1, "route present but z_ht = 0"))

    repeats = _repeats_in_segments(view.stops, depot_ids)
    if repeats:
        out.append(_violation(CF.C8, "vehicle", v.id, t, repeats, "route revisits an ATM (subtour)"))
        view.sound = False
    return out


def _check_timing(inst: Instance, plan: Plan, view: _RouteView, net: Network) -> List[Violation]:
    """C6, C7, C9, C13, C15 and C16 for a structurally sound, non-empty route"""
    out: List[Violation] = []
    v, t = view.vehicle, view.period
    timing = plan.timing_of(v.id, t)
    if timing is None or any(j not in timing.arrival or j not in timing.service_start for j in view.stops):
        return [_violation(CF.C13, "vehicle", v.id, t, 1, "timing missing for a used route")]

    e0, l0 = inst.depot_window
    u = timing.departure
    if u < e0:
        out.append(_violation(CF.C15, "vehicle", v.id, t, e0 - u, f"departs at {u} before depot opens at {e0}"))

    h = net.vehicle_index[v.id]
    prev = net.index[v.home_depot]
    ready = u
    drifted = False
    for atm_id in view.stops:
        j = net.index[atm_id]
        r = timing.arrival[atm_id]
        w = timing.service_start[atm_id]
        e, l = net.window_open[j], net.window_close[j]
        expected = ready + int(net.travel[h, prev, j])
        if not drifted and r != expected:
            drifted = True
            out.append(_violation(CF.C13, "atm", atm_id, t, abs(r - expected),
                                  f"arrival {r} differs from recurrence value {expected}"))
        elif not drifted and max(r, e) < w <= l:
            drifted = True
            out.append(_violation(CF.C13, "atm", atm_id, t, w - max(r, e),
                                  f"service starts at {w}, recurrence gives {max(r, e)}"))
        if r < 0:
            out.append(_violation(CF.C6, "atm", atm_id, t, -r, f"negative arrival time {r}"))
        elif r > w:
            out.append(_violation(CF.C6, "atm", atm_id, t, r - w, f"service starts at {w} before arrival at {r}"))
        if w < e:
            out.append(_violation(CF.C7, "atm", atm_id, t, e - w, f"service starts at {w} before window opens at {e}"))
        elif w > l:
            out.append(_violation(CF.C7, "atm", atm_id, t, w - l, f"service starts at {w} after window closes at {l}"))
        ready = w + net.service[j]
        prev = j

    back = ready + int(net.travel[h, prev, net.index[v.home_depot]])
    elapsed = back - u
    if elapsed > inst.max_route_time_min:
        out.append(_violation(CF.C9, "vehicle", v.id, t, elapsed - inst.max_route_time_min,
                              f"route takes {elapsed} min, limit {inst.max_route_time_min}"))
    if back > l0:
        out.append(_violation(CF.C16, "vehicle", v.id, t, back - l0, f"returns at {back} after depot closes at {l0}"))
    return out


def check_plan(inst: Instance, plan: Plan) -> List[Violation]:
    """
    Every constraint breach of a plan, ordered by family, then location.

    Raises:
        PlanError: the plan references unknown vehicles, nodes, depots or periods
    """
    check_references(inst, plan)
    net = Network.of(inst)
    depot_ids = {d.id for d in inst.depots}
    violations: List[Violation] = []

    views: List[_RouteView] = []
    for vehicle in inst.vehicles:
        for period in range(1, inst.periods + 1):
            seq = plan.route(vehicle.id, period)
            view = _RouteView(vehicle, period, seq, seq[1:-1], sound=False)
            violations.extend(_check_structure(plan, view, depot_ids))
            views.append(view)

    # C3 / C10 / C11: visits and depot assignment per (ATM, period)
    visits: Dict[Tuple[str, int], int] = {}
    for view in views:
        for atm_id in set(view.stops) - depot_ids:
            visits[(atm_id, view.period)] = visits.get((atm_id, view.period), 0) + 1
            assigned = plan.assignment.get(atm_id, {}).get(view.period, [])
            if view.vehicle.home_depot not in assigned:
                violations.append(_violation(
                    CF.C10, "atm", atm_id, view.period, 1,
                    f"served from depot {view.vehicle.home_depot} without y = 1 for that depot"))

    for atm in inst.atms:
        for period in range(1, inst.periods + 1):
            count = visits.get((atm.id, period), 0)
            if count > 1:
                violations.append(_violation(CF.C3, "atm", atm.id, period, count - 1,
                                             f"visited by {count} vehicles"))
            elif count == 0 and plan.deposit(atm.id, period) > 0:
                violations.append(_violation(CF.C3, "atm", atm.id, period, 1, "deposit without a visit"))
            depots = set(plan.assignment.get(atm.id, {}).get(period, []))
            if len(depots) > 1:
                violations.append(_violation(CF.C11, "atm", atm.id, period, len(depots) - 1,
                                             f"assigned to depots {sorted(depots)}"))

    # C4 capacity and C12 horizon distance
    km_by_vehicle: Dict[str, float] = {}
    for view in views:
        load = sum(plan.deposit(atm_id, view.period) for atm_id in set(view.stops) - depot_ids)
        if load > view.vehicle.capacity:
            violations.append(_violation(CF.C4, "vehicle", view.vehicle.id, view.period,
                                         load - view.vehicle.capacity,
                                         f"load {load} exceeds capacity {view.vehicle.capacity}"))
        km = sum(float(net.distance[net.index[i], net.index[j]]) for i, j in arcs_of(view.seq))
        km_by_vehicle[view.vehicle.id] = km_by_vehicle.get(view.vehicle.id, 0.0) + km

    for vehicle in inst.vehicles:
        km = round(km_by_vehicle.get(vehicle.id, 0.0), 6)
        if km > inst.max_total_distance_km:
            violations.append(_violation(CF.C12, "vehicle", vehicle.id, None,
                                         round(km - inst.max_total_distance_km, 6),
                                         f"travels {km} km over the horizon, limit {inst.max_total_distance_km}"))

    for view in views:
        if view.sound and view.stops:
            violations.extend(_check_timing(inst, plan, view, net))

    # C14 inventory and C18 deposit domain
    trajectory = inventory_trajectory(inst, plan)
    for atm in inst.atms:
        period, lowest = trajectory.lowest(atm.id)
        if lowest < 0:
            first = next(t for t, b in enumerate(trajectory.balances[atm.id], start=1) if b < 0)
            violations.append(_violation(CF.C14, "atm", atm.id, first, -lowest,
                                         f"withdrawals exceed available cash by {-lowest} (worst in period {period})"))
        for t, amount in enumerate(plan.deposit_vector(atm.id, inst.periods), start=1):
            if amount < 0:
                violations.append(_violation(CF.C18, "atm", atm.id, t, -amount, f"negative deposit {amount}"))

    order = {family: k for k, family in enumerate(CF)}
    violations.sort(key=lambda x: (order[x.constraint], x.location.kind, x.location.id, x.location.period or 0))
    return violations


def is_feasible(inst: Instance, plan: Plan) -> bool:
    return not check_plan(inst, plan)


def subtour_violations_bruteforce(inst: Instance, plan: Plan) -> Set[Tuple[str, int]]:
    """
    Routes whose arc set breaks a subset inequality: some ATM subset S with
    2 <= |S| holds more than |S| - 1 arcs. Only for instances with V <= 10.
    """
    if inst.n_nodes > BRUTEFORCE_MAX_NODES:
        raise ValueError(f"Subset enumeration is limited to {BRUTEFORCE_MAX_NODES} nodes")
    check_references(inst, plan)
    atm_ids = [a.id for a in inst.atms]
    broken: Set[Tuple[str, int]] = set()
    for vehicle in inst.vehicles:
        for period in range(1, inst.periods + 1):
            arcs = [(i, j) for i, j in arcs_of(plan.route(vehicle.id, period)) if i != j]
            if not arcs:
                continue
            for size in range(2, len(atm_ids) + 1):
                if (vehicle.id, period) in broken:
                    break
                for subset in itertools.combinations(atm_ids, size):
                    members = set(subset)
                    inside = sum(1 for i, j in arcs if i in members and j in members)
                    if inside > size - 1:
                        broken.add((vehicle.id, period))
                        break
    return broken


def subtour_violations_encoding(inst: Instance, plan: Plan) -> Set[Tuple[str, int]]:
    """The same routes, found from the sequence encoding alone"""
    depot_ids = {d.id for d in inst.depots}
    return {
        (vehicle.id, period)
        for vehicle in inst.vehicles
        for period in range(1, inst.periods + 1)
        if _repeats_in_segments(plan.stops(vehicle.id, period), depot_ids)
    }
